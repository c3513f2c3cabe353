#include "doctest.h"

#include "ptmu/analytic.hpp"
#include "ptmu/error.hpp"

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_clausen.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ptmu;

namespace {

constexpr double kPi = std::numbers::pi;

struct ArcIntegrand {
  double start, span;
  cplx z;
  bool imag;
};

double arc_integrand(double t, void* p) {
  const auto* a = static_cast<const ArcIntegrand*>(p);
  const cplx zeta = std::polar(1.0, a->start + t);
  const cplx v = (zeta + a->z) / (zeta - a->z) / kTwoPi;
  return a->imag ? v.imag() : v.real();
}

cplx gsl_herglotz(const Arc& arc, cplx z) {
  gsl_integration_workspace* w = gsl_integration_workspace_alloc(1000);
  ArcIntegrand data{arc.start, kTwoPi * arc.length, z, false};
  gsl_function F{arc_integrand, &data};
  double re = 0.0, im = 0.0, err = 0.0;
  gsl_integration_qag(&F, 0.0, data.span, 1e-14, 1e-12, 1000, GSL_INTEG_GAUSS61, w, &re, &err);
  data.imag = true;
  gsl_integration_qag(&F, 0.0, data.span, 1e-14, 1e-12, 1000, GSL_INTEG_GAUSS61, w, &im, &err);
  gsl_integration_workspace_free(w);
  return {re, im};
}

// Taylor coefficients by sampling f on |z| = r and a plain DFT.
std::vector<cplx> dft_coefficients(const std::function<cplx(cplx)>& f, double r, int count, int samples) {
  std::vector<cplx> vals(samples);
  for (int j = 0; j < samples; ++j) vals[j] = f(std::polar(r, kTwoPi * j / samples));
  std::vector<cplx> out(count);
  for (int k = 0; k < count; ++k) {
    cplx s = 0.0;
    for (int j = 0; j < samples; ++j) s += vals[j] * std::polar(1.0, -kTwoPi * k * j / samples);
    out[k] = s / static_cast<double>(samples) / std::pow(r, k);
  }
  return out;
}

} // namespace

TEST_CASE("Herglotz arc closed form agrees with quadrature") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const Arc arc{kTwoPi * u(rng), 0.05 + 0.9 * u(rng)};
    const cplx z = std::polar(0.9 * u(rng), kTwoPi * u(rng));
    CHECK(std::abs(herglotz_arc(arc, z) - gsl_herglotz(arc, z)) < 1e-11);
  }
}

TEST_CASE("singular inner function: mean value and unimodularity") {
  SUBCASE("atoms") {
    const SingularMeasure nu({{0.3, 0.7}, {2.0, 1.1}});
    CHECK(std::abs(eval_singular_inner(nu, 0.0).value - std::exp(-1.8)) < 1e-14);
    for (double t : {1.0, 3.0, 5.0}) CHECK(std::abs(eval_singular_inner(nu, unit(t)).value) == doctest::Approx(1.0));
  }
  SUBCASE("closed form for a single atom") {
    const double m = 1.3, a = 2.2;
    const SingularMeasure nu = SingularMeasure::atom(a, m);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
      const cplx z = std::polar(0.99 * u(rng), kTwoPi * u(rng));
      const cplx zeta = unit(a);
      const cplx oracle = std::exp(-m * (zeta + z) / (zeta - z));
      CHECK(std::abs(eval_singular_inner(nu, z).value - oracle) < 1e-12);
    }
  }
  SUBCASE("modulus never exceeds one inside the disk") {
    const auto nu = SingularMeasure::cantor_measure({0.0, 0.6}, CantorRule::variable_gap(), 1.0, 8);
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const cplx z = std::polar(std::sqrt(u(rng)), kTwoPi * u(rng));
      CHECK(std::abs(eval_singular_inner(nu, z).value) <= 1.0 + 1e-14);
    }
  }
}

TEST_CASE("Blaschke product vanishes at its zeros and is unimodular on the circle") {
  const std::vector<cplx> zeros{{0.5, 0.1}, {-0.3, -0.4}, {0.0, 0.9}};
  for (const cplx& a : zeros) CHECK(std::abs(eval_blaschke(zeros, a)) < 1e-14);
  for (double t = 0.0; t < kTwoPi; t += 0.37) CHECK(std::abs(eval_blaschke(zeros, unit(t))) == doctest::Approx(1.0));
}

TEST_CASE("outer function from a constant log on an arc") {
  OuterRule rule;
  LogPiece p;
  p.kind = LogPiece::Kind::constant;
  p.arc = {1.0, 0.3};
  p.value = -2.0;
  rule.pieces.push_back(p);
  // log|O(0)| is the mean of log|O| on the circle.
  CHECK(std::log(std::abs(eval_outer(rule, 0.0).value)) == doctest::Approx(-0.6).epsilon(1e-14));
  // Radial limits recover the boundary modulus away from the arc ends.
  CHECK(std::abs(eval_outer(rule, std::polar(1.0 - 1e-9, 1.0 + 0.3 * kPi)).value) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-6));
  CHECK(std::abs(eval_outer(rule, std::polar(1.0 - 1e-9, 4.0)).value) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("cutoff outer: boundary modulus and mean of log against Clausen") {
  const CircleSet E = CircleSet::from_complement({{0.4, 0.2}, {3.5, 0.1}});
  for (int N : {1, 4}) {
    const BoundedFunctionSpec s = cutoff_outer(E, N);
    const Evaluator ev(s);
    // int over an arc of length L (radians) of log|(zeta-a)(zeta-b)| dm = -Cl2(L)/pi.
    const double oracle = -N * (gsl_sf_clausen(kTwoPi * 0.2) + gsl_sf_clausen(kTwoPi * 0.1)) / kPi;
    CHECK(std::log(std::abs(ev(0.0).value)) == doctest::Approx(oracle).epsilon(1e-10));
    for (const Arc& arc : {Arc{0.4, 0.2}, Arc{3.5, 0.1}}) {
      const cplx a = unit(arc.start), b = unit(arc.end_angle());
      for (double u : {0.1, 0.5, 0.77}) {
        const cplx zeta = unit(arc.start + kTwoPi * arc.length * u);
        CHECK(std::abs(ev(zeta).value) == doctest::Approx(std::pow(std::abs((zeta - a) * (zeta - b)), N)).epsilon(1e-8));
      }
    }
    CHECK(std::abs(ev(unit(5.5)).value) == doctest::Approx(1.0).epsilon(1e-8));
  }
  CHECK(cutoff_outer(E, 0).outer.trivial());
}

TEST_CASE("companion function levels") {
  const CircleSet F = CircleSet::from_complement({{1.5 * kPi, 0.5}});
  const int n = 16;
  const double sigma = 0.01;
  const Evaluator ev(companion_function(n, F, sigma));
  CHECK(std::abs(ev(0.0).value) == 0.0);
  CHECK(std::abs(ev(unit(kPi)).value) == doctest::Approx(std::pow(n, -sigma * n)).epsilon(1e-8));
  CHECK(std::abs(ev(unit(0.0)).value) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(companion_function(1, F, sigma), Error);
}

TEST_CASE("Taylor coefficients against a sampled DFT") {
  BoundedFunctionSpec spec;
  spec.singular = SingularMeasure({{0.0, 1.0}, {2.5, 0.4}});
  spec.zeros = {{0.2, 0.3}};
  spec.monomial_power = 1;
  const Evaluator ev(spec);
  const auto oracle = dft_coefficients([&](cplx z) { return ev(z).value; }, 0.9, 30, 2048);
  const auto c = taylor_coefficients(spec, 30);
  for (int k = 0; k < 30; ++k) CHECK(std::abs(c[k] - oracle[k]) < 1e-10);
}

TEST_CASE("series_exp of z gives inverse factorials") {
  const std::vector<cplx> g{0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  const auto f = series_exp(g);
  double fact = 1.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    CHECK(std::abs(f[k] - 1.0 / fact) < 1e-15);
  }
}

TEST_CASE("sobolev norm weights") {
  const std::vector<cplx> c{1.0, {0.0, 2.0}, 0.0, 3.0};
  CHECK(sobolev_norm(c, 2.0) == doctest::Approx(std::sqrt(1.0 + 4.0 * 4.0 + 9.0 * 16.0)));
}

TEST_CASE("region grids and minimum modulus") {
  const SingularMeasure nu = SingularMeasure::atom(kPi, 1.0);
  BoundedFunctionSpec theta;
  theta.singular = nu;
  const Region disk{Region::Kind::disk, 8, support_set(nu), 0.0};
  const GridSpec grid{4, 64};
  const auto nodes = region_nodes(disk, grid);
  CHECK(nodes.size() == 1 + 4 * 64);
  for (const cplx& z : nodes) CHECK(std::abs(z) <= 1.0 - 1.0 / 8 + 1e-15);
  double brute = 1.0;
  for (const cplx& z : nodes) brute = std::min(brute, std::abs(eval_singular_inner(nu, z).value));
  CHECK(min_modulus(theta, disk, grid).value == doctest::Approx(brute).epsilon(1e-14));
  // The worst node sits on the outer ring toward the atom.
  CHECK(std::abs(min_modulus(theta, disk, grid).argmin - std::polar(0.875, kPi)) < 1e-12);

  const Region comp{Region::Kind::complement, 8, support_set(nu), 0.5};
  for (const cplx& z : region_nodes(comp, grid)) {
    CHECK(std::abs(z) > 1.0 - 1.0 / 8);
    CHECK(std::abs(z + 1.0) < 0.25);
  }
}
