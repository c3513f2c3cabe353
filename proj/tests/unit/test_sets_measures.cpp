#include "doctest.h"

#include "ptmu/circle_sets.hpp"
#include "ptmu/error.hpp"
#include "ptmu/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace ptmu;

namespace {

constexpr double kPi = std::numbers::pi;

// Brute-force modulus: every window of normalized length < delta that starts at an atom.
double brute_modulus(const std::vector<Atom>& atoms, double delta) {
  double best = 0.0;
  for (const Atom& a : atoms) {
    double s = 0.0;
    for (const Atom& b : atoms) {
      const double gap = to_unit(b.angle - a.angle);
      if (gap < delta) s += b.mass;
    }
    best = std::max(best, s);
  }
  return best;
}

double mass_of(const std::vector<Atom>& atoms) {
  double s = 0.0;
  for (const Atom& a : atoms) s += a.mass;
  return s;
}

} // namespace

TEST_CASE("complement arcs determine measure and entropy") {
  const CircleSet E = CircleSet::from_complement({{0.5, 0.1}, {3.0, 0.25}});
  CHECK(E.measure() == doctest::Approx(0.65).epsilon(1e-15));
  const double oracle = 0.1 * std::log(10.0) + 0.25 * std::log(4.0);
  CHECK(entropy(E) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(E.contains(0.0));
  CHECK_FALSE(E.contains(0.5 + 0.05 * 2 * kPi));
  CHECK(E.contains(0.5)); // endpoints belong to the closed set
}

TEST_CASE("arcs across angle zero are split") {
  const CircleSet E = CircleSet::from_complement({{1.5 * kPi, 0.5}});
  CHECK(E.measure() == doctest::Approx(0.5));
  CHECK_FALSE(E.contains(0.0));
  CHECK(E.contains(kPi));
  const auto comps = E.components();
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].start == doctest::Approx(0.5 * kPi));
  CHECK(comps[0].length == doctest::Approx(0.5));
}

TEST_CASE("invalid complement arcs are rejected") {
  CHECK_THROWS_AS(CircleSet::from_complement({{0.0, -0.1}}), Error);
  CHECK_THROWS_AS(CircleSet::from_complement({{0.0, 0.6}, {1.0, 0.6}}), Error);
}

TEST_CASE("distance to a point set is the chord length") {
  const CircleSet p = CircleSet::point(kPi);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const cplx z = std::polar(u(rng), kTwoPi * u(rng));
    CHECK(distance_to(p, z) == doctest::Approx(std::abs(z + 1.0)).epsilon(1e-14));
  }
}

TEST_CASE("Cantor levels double and lose exactly the gaps") {
  const Arc base{0.3, 0.4};
  const CantorGenerator g{base, CantorRule::middle_thirds()};
  const auto lv = g.levels(6);
  REQUIRE(lv.size() == 7);
  for (int k = 0; k <= 6; ++k) {
    CHECK(lv[k].size() == (std::size_t{1} << k));
    double total = 0.0;
    for (const Interval& I : lv[k]) total += I.length();
    CHECK(total == doctest::Approx(0.4 * std::pow(2.0 / 3.0, k)).epsilon(1e-13));
  }
  const CircleSet C = make_cantor_set(base, CantorRule::middle_thirds(), 6);
  CHECK(C.truncated());
  CHECK(C.measure() == doctest::Approx(0.4 * std::pow(2.0 / 3.0, 6)).epsilon(1e-12));
}

TEST_CASE("gap overflow is reported") {
  CantorRule r;
  r.kind = CantorRule::Kind::table;
  r.gaps = {0.5};
  CHECK_THROWS_AS(CantorGenerator({0.0, 0.1}, r).levels(1), Error);
}

TEST_CASE("Beurling-Carleson classification of generator rules") {
  const Arc base{0.0, 0.5};
  CHECK(is_beurling_carleson(make_cantor_set(base, CantorRule::middle_thirds(), 8), 1e-3).status == BcStatus::yes);
  CHECK(is_beurling_carleson(make_cantor_set(base, CantorRule::variable_gap(), 8), 1e-3).status ==
        BcStatus::diverging);
  CHECK(is_beurling_carleson(CircleSet::from_complement({{1.0, 0.2}}), 1e-3).status == BcStatus::yes);
}

TEST_CASE("Cantor measure realization") {
  const auto nu = SingularMeasure::cantor_measure({0.1, 0.5}, CantorRule::variable_gap(), 2.0, 8);
  const auto atoms = nu.realized();
  CHECK(atoms.size() == 256);
  CHECK(mass_of(atoms) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(std::is_sorted(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.angle < b.angle; }));
  for (const Atom& a : atoms) CHECK(a.mass == doctest::Approx(2.0 / 256));
}

TEST_CASE("modulus of continuity matches a brute-force window sweep") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Atom> atoms;
  for (int i = 0; i < 60; ++i) atoms.push_back({kTwoPi * u(rng), u(rng)});
  const SingularMeasure nu(atoms);
  for (double delta : {0.001, 0.01, 0.05, 0.2, 0.7}) {
    CHECK(modulus_of_continuity(nu, delta) == doctest::Approx(brute_modulus(nu.realized(), delta)).epsilon(1e-14));
  }
}

TEST_CASE("restriction splits mass exactly") {
  const auto nu = SingularMeasure::cantor_measure({0.0, 0.8}, CantorRule::middle_thirds(), 1.0, 7) +
                  SingularMeasure::atom(kPi, 0.5);
  const CircleSet E = CircleSet::from_complement({{1.5 * kPi, 0.5}});
  const Restriction r = restrict(nu, inside(E));
  CHECK(r.kept.total_mass() + r.rest.total_mass() == doctest::Approx(nu.total_mass()).epsilon(1e-15));
  for (const Atom& a : r.kept.realized()) CHECK(E.contains(a.angle));
  for (const Atom& a : r.rest.realized()) CHECK_FALSE(E.contains(a.angle));
}

TEST_CASE("BC/KR split routes components by entropy") {
  const auto bc = SingularMeasure::cantor_measure({0.0, 0.3}, CantorRule::middle_thirds(), 0.4, 6);
  const auto kr = SingularMeasure::cantor_measure({2.0, 0.6}, CantorRule::variable_gap(), 0.6, 6);
  const BcKrSplit s = bc_kr_split(bc + kr + SingularMeasure::atom(1.0, 0.2));
  CHECK(s.bc.total_mass() == doctest::Approx(0.6));
  CHECK(s.kr.total_mass() == doctest::Approx(0.6));
  CHECK(s.certainty == SplitCertainty::heuristic);
}

TEST_CASE("Roberts pieces respect their caps and reconcile mass") {
  const auto nu = SingularMeasure::cantor_measure({0.0, 0.9}, CantorRule::variable_gap(), 1.0, 10);
  const RobertsDecomposition d = roberts_decompose(nu, 1.0, 2, 3);
  REQUIRE(!d.pieces.empty());
  CHECK(d.pieces.size() <= 3);
  double total = mass_of(d.remainder.realized());
  for (std::size_t k = 0; k < d.pieces.size(); ++k) {
    const RobertsPiece& p = d.pieces[k];
    const double n = roberts_scale(2, static_cast<int>(k));
    CHECK(p.scale == n);
    CHECK(p.cap == doctest::Approx(std::log(n) / n).epsilon(1e-15));
    CHECK(brute_modulus(p.measure.realized(), 1.0 / n) <= p.cap * (1.0 + 1e-12));
    total += mass_of(p.measure.realized());
  }
  CHECK(std::abs(total - 1.0) <= 1e-15);
  CHECK(d.mass_defect <= 1e-15);
}

TEST_CASE("boundary weight mass and log-integrability") {
  const CircleSet E = CircleSet::from_complement({{1.5 * kPi, 0.5}});
  SUBCASE("constant") {
    const auto w = BoundaryWeight::constant_on(E, 2.0);
    CHECK(w.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(w(kPi) == 2.0);
    CHECK(w(0.0) == 0.0);
    CHECK(log_integrability(w, 0, 64) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-14));
  }
  SUBCASE("cusp: closed form of the endpoint singularity") {
    WeightPiece cusp;
    cusp.kind = WeightPiece::Kind::cusp;
    cusp.value = 1.5;
    cusp.gamma = 0.5;
    const BoundaryWeight w(E, {cusp});
    const double L = 0.5, g = 0.5;
    const double oracle = L * std::log(1.5) - L * std::pow(L, -g) * 2.0 * std::pow(0.5, 1.0 - g) / (1.0 - g);
    CHECK(log_integrability(w, 0, 200) == doctest::Approx(oracle).epsilon(1e-8));
    cusp.gamma = 1.2;
    CHECK_THROWS_AS(log_integrability(BoundaryWeight(E, {cusp}), 0, 200), Error);
  }
}
