#include "ptmu/measures.hpp"

#include "ptmu/error.hpp"

#include <algorithm>
#include <cmath>

namespace ptmu {

SingularMeasure::SingularMeasure(std::vector<Atom> atoms, std::vector<CantorComponent> cantor)
    : atoms_(std::move(atoms)), cantor_(std::move(cantor)) {
  for (Atom& a : atoms_) {
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) throw Error("invalid-measure", "atom masses must be positive");
    a.angle = wrap_angle(a.angle);
  }
  for (const CantorComponent& c : cantor_) {
    if (!(c.mass > 0.0) || c.depth < 0) throw Error("invalid-measure", "cantor component needs mass > 0, depth >= 0");
  }
  std::vector<double> pos;
  for (const Atom& a : atoms_) pos.push_back(a.angle);
  std::sort(pos.begin(), pos.end());
  if (std::adjacent_find(pos.begin(), pos.end()) != pos.end()) {
    throw Error("invalid-measure", "atom positions must be distinct");
  }
}

SingularMeasure SingularMeasure::cantor_measure(const Arc& base, const CantorRule& rule, double mass,
                                                int depth) {
  return SingularMeasure({}, {CantorComponent{CantorGenerator{base, rule}, mass, depth}});
}

double SingularMeasure::total_mass() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.mass;
  for (const CantorComponent& c : cantor_) s += c.mass;
  return s;
}

std::vector<Atom> SingularMeasure::realized() const {
  std::vector<Atom> out = atoms_;
  for (const CantorComponent& c : cantor_) {
    const auto levels = c.generator.levels(c.depth);
    const auto& leaves = levels.back();
    const double m = c.mass / static_cast<double>(leaves.size());
    for (const Interval& iv : leaves) out.push_back({wrap_angle(kTwoPi * iv.mid()), m, iv.length()});
  }
  std::sort(out.begin(), out.end(), [](const Atom& a, const Atom& b) { return a.angle < b.angle; });
  std::vector<Atom> merged;
  for (const Atom& a : out) {
    if (!merged.empty() && a.angle == merged.back().angle) {
      merged.back().mass += a.mass;
      merged.back().spread = std::max(merged.back().spread, a.spread);
    } else {
      merged.push_back(a);
    }
  }
  return merged;
}

SingularMeasure SingularMeasure::realize() const {
  SingularMeasure s;
  s.atoms_ = realized();
  return s;
}

std::vector<double> SingularMeasure::support_angles() const {
  std::vector<double> out;
  for (const Atom& a : realized()) out.push_back(a.angle);
  return out;
}

SingularMeasure operator+(const SingularMeasure& a, const SingularMeasure& b) {
  SingularMeasure s;
  s.atoms_ = a.atoms_;
  for (const Atom& x : b.atoms_) {
    auto it = std::find_if(s.atoms_.begin(), s.atoms_.end(),
                           [&](const Atom& y) { return y.angle == x.angle; });
    if (it != s.atoms_.end()) {
      it->mass += x.mass;
      it->spread = std::max(it->spread, x.spread);
    } else {
      s.atoms_.push_back(x);
    }
  }
  s.cantor_ = a.cantor_;
  s.cantor_.insert(s.cantor_.end(), b.cantor_.begin(), b.cantor_.end());
  return s;
}

double modulus_of_continuity(const SingularMeasure& nu, double delta) {
  const auto atoms = nu.realized();
  const std::size_t n = atoms.size();
  if (n == 0) return 0.0;
  if (delta >= 1.0) return nu.total_mass();
  std::vector<double> x(2 * n);
  std::vector<long double> prefix(2 * n + 1, 0.0L);
  for (std::size_t i = 0; i < 2 * n; ++i) {
    x[i] = to_unit(atoms[i % n].angle) + (i >= n ? 1.0 : 0.0);
    prefix[i + 1] = prefix[i] + atoms[i % n].mass;
  }
  long double best = 0.0L;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j < i) j = i;
    while (j + 1 < i + n && x[j + 1] - x[i] < delta) ++j;
    best = std::max(best, prefix[j + 1] - prefix[i]);
  }
  return static_cast<double>(best);
}

AnglePredicate farther_than(const CircleSet& set, double threshold) {
  return [set, threshold](double theta) { return distance_to(set, unit(theta)) > threshold; };
}

AnglePredicate inside(const CircleSet& set) {
  return [set](double theta) { return set.contains(theta); };
}

Restriction restrict(const SingularMeasure& nu, const AnglePredicate& keep) {
  std::vector<Atom> kept, rest;
  for (const Atom& a : nu.realized()) (keep(a.angle) ? kept : rest).push_back(a);
  return {SingularMeasure(std::move(kept)), SingularMeasure(std::move(rest))};
}

std::string to_string(SplitCertainty c) {
  switch (c) {
  case SplitCertainty::certain:
    return "certain";
  case SplitCertainty::heuristic:
    return "heuristic";
  case SplitCertainty::unknown:
    return "unknown";
  }
  return "?";
}

BcKrSplit bc_kr_split(const SingularMeasure& nu) {
  BcKrSplit out;
  std::vector<CantorComponent> bc_comp, kr_comp;
  auto worsen = [&](SplitCertainty c) {
    if (static_cast<int>(c) > static_cast<int>(out.certainty)) out.certainty = c;
  };
  if (!nu.atoms().empty()) out.notes.push_back("atoms: single points are Beurling-Carleson sets");
  for (const CantorComponent& c : nu.cantor()) {
    const CircleSet support = make_cantor_set(c.generator.base, c.generator.rule, c.depth);
    const BcVerdict v = is_beurling_carleson(support, 1e-3);
    switch (v.status) {
    case BcStatus::yes:
      bc_comp.push_back(c);
      out.notes.push_back("cantor component -> BC (" + v.reason + ")");
      break;
    case BcStatus::diverging:
      kr_comp.push_back(c);
      worsen(SplitCertainty::heuristic);
      out.notes.push_back("cantor component -> KR, heuristic (" + v.reason + ")");
      break;
    case BcStatus::truncated_unknown:
      kr_comp.push_back(c);
      worsen(SplitCertainty::unknown);
      out.notes.push_back("cantor component -> KR, unknown tail (" + v.reason + ")");
      break;
    }
  }
  out.bc = SingularMeasure(nu.atoms(), std::move(bc_comp));
  out.kr = SingularMeasure({}, std::move(kr_comp));
  return out;
}

double roberts_scale(int N, int k) {
  const int e = N + k;
  if (e < 0 || e > 9) throw Error("scale-overflow", "2^(2^(N+k)) is not representable for N+k = " + std::to_string(e));
  return std::ldexp(1.0, 1 << e);
}

RobertsDecomposition roberts_decompose(const SingularMeasure& nu, double c, int N, int M,
                                       bool require_exhaustion) {
  if (!(c > 0.0) || N <= 1 || M < 1) throw Error("invalid-parameters", "need c > 0, N > 1, M >= 1");
  RobertsDecomposition out;
  out.c = c;
  out.N = N;
  out.input_mass = nu.total_mass();

  std::vector<Atom> remaining = nu.realized();
  auto left = [&] {
    double s = 0.0;
    for (const Atom& a : remaining) s += a.mass;
    return s;
  };

  for (int k = 0; k < M && left() > 0.0; ++k) {
    const double n = roberts_scale(N, k);
    const double cap = c * std::log(n) / n;
    const double grid = 2.0 * n;
    // A window shorter than 1/n meets at most three grid arcs of length 1/(2n),
    // so fraction 1/3 always certifies; larger fractions are tried first.
    const double fractions[] = {1.0, 0.5, 1.0 / 3.0};
    for (int attempt = 0; attempt < 3; ++attempt) {
      const double arc_cap = fractions[attempt] * cap;
      std::vector<Atom> taken;
      std::vector<double> take(remaining.size(), 0.0);
      long long current = -1;
      double used = 0.0;
      for (std::size_t i = 0; i < remaining.size(); ++i) {
        const Atom& a = remaining[i];
        if (a.mass <= 0.0) continue;
        const long long g = std::min(static_cast<long long>(to_unit(a.angle) * grid),
                                     static_cast<long long>(grid) - 1);
        if (g != current) {
          current = g;
          used = 0.0;
        }
        const double t = std::min(a.mass, arc_cap - used);
        if (t <= 0.0) continue;
        take[i] = t;
        used += t;
        taken.push_back({a.angle, t, a.spread});
      }
      SingularMeasure piece(std::move(taken));
      const double mod = modulus_of_continuity(piece, 1.0 / n);
      if (mod <= cap * (1.0 + 1e-12)) {
        for (std::size_t i = 0; i < remaining.size(); ++i) {
          if (take[i] == remaining[i].mass) {
            remaining[i].mass = 0.0;
          } else {
            remaining[i].mass -= take[i];
          }
        }
        out.pieces.push_back({std::move(piece), n, cap, mod, fractions[attempt], attempt});
        break;
      }
      if (attempt == 2) throw Error("cap-violation", "grid fraction 1/3 failed the modulus check");
    }
  }

  std::vector<Atom> rest;
  for (const Atom& a : remaining) {
    if (a.mass > 0.0) rest.push_back(a);
  }
  out.remainder = SingularMeasure(std::move(rest));
  long double total = 0.0L;
  for (const auto& p : out.pieces) {
    for (const Atom& a : p.measure.atoms()) total += a.mass;
  }
  for (const Atom& a : out.remainder.atoms()) total += a.mass;
  out.mass_defect = std::abs(static_cast<double>(total - static_cast<long double>(out.input_mass)));
  if (require_exhaustion && !out.remainder.is_zero()) {
    throw Error("insufficient-pieces", "mass " + std::to_string(out.remainder.total_mass()) +
                                           " left after " + std::to_string(M) + " pieces");
  }
  return out;
}

double WeightPiece::operator()(double u, double component_length, bool from_right) const {
  switch (kind) {
  case Kind::constant:
    return value;
  case Kind::polynomial: {
    const double x = from_right ? 1.0 - u : u;
    double s = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * x + *it;
    return s;
  }
  case Kind::cusp: {
    const double d = component_length * std::min(u, 1.0 - u);
    return d > 0.0 ? value * std::exp(-std::pow(d, -gamma)) : 0.0;
  }
  }
  return 0.0;
}

double WeightPiece::log_at(double u, double component_length, bool from_right) const {
  switch (kind) {
  case Kind::constant:
    return std::log(value);
  case Kind::polynomial:
    return std::log((*this)(u, component_length, from_right));
  case Kind::cusp: {
    const double d = component_length * std::min(u, 1.0 - u);
    return std::log(value) - std::pow(d, -gamma);
  }
  }
  return 0.0;
}

BoundaryWeight::BoundaryWeight(CircleSet carrier_, std::vector<WeightPiece> pieces_)
    : carrier(std::move(carrier_)), pieces(std::move(pieces_)) {
  components = carrier.components();
  if (pieces.size() == 1 && components.size() > 1) pieces.assign(components.size(), pieces.front());
  if (!pieces.empty() && pieces.size() != components.size()) {
    throw Error("invalid-weight", "need one weight piece per carrier component");
  }
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const WeightPiece& p = pieces[k];
    if (p.kind != WeightPiece::Kind::polynomial && !(p.value > 0.0)) {
      throw Error("invalid-weight", "weight values must be positive");
    }
    if (p.kind == WeightPiece::Kind::polynomial) {
      for (int i = 0; i <= 64; ++i) {
        if (!(p(i / 64.0, components[k].length) > 0.0)) throw Error("invalid-weight", "polynomial weight must be positive");
      }
    }
  }
}

BoundaryWeight BoundaryWeight::constant_on(const CircleSet& carrier, double value) {
  return BoundaryWeight(carrier, {WeightPiece{WeightPiece::Kind::constant, value, {}, 0.5}});
}

double BoundaryWeight::operator()(double theta) const {
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const Arc& c = components[k];
    if (c.length > 0.0 && c.contains(theta)) {
      const double u = std::clamp(wrap_angle(theta - c.start) / (kTwoPi * c.length), 0.0, 1.0);
      return pieces[k](u, c.length);
    }
  }
  return 0.0;
}

namespace {

// Integral over u in [0, 1] of f(u), with u = s^q substitutions at both ends.
// f(u, from_right): the right half is sampled by distance from the right end.
double endpoint_graded_integral(const std::function<double(double, bool)>& f, int q, int nodes) {
  const double smax = std::pow(0.5, 1.0 / q);
  const Rule r = gauss_legendre(nodes, 0.0, smax);
  std::vector<double> terms;
  terms.reserve(2 * nodes);
  for (int i = 0; i < nodes; ++i) {
    const double s = r.nodes[i];
    const double u = std::pow(s, q);
    const double jac = q * std::pow(s, q - 1);
    terms.push_back(r.weights[i] * jac * f(u, false));
    terms.push_back(r.weights[i] * jac * f(u, true));
  }
  return pairwise_sum(terms);
}

int grading_power(const WeightPiece& p) {
  if (p.kind != WeightPiece::Kind::cusp) return 1;
  return static_cast<int>(std::ceil(3.0 / (1.0 - p.gamma)));
}

} // namespace

double BoundaryWeight::total_mass() const {
  double s = 0.0;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const double len = components[k].length;
    const WeightPiece& p = pieces[k];
    switch (p.kind) {
    case WeightPiece::Kind::constant:
      s += p.value * len;
      break;
    case WeightPiece::Kind::polynomial:
      for (std::size_t i = 0; i < p.coeffs.size(); ++i) s += len * p.coeffs[i] / (i + 1.0);
      break;
    case WeightPiece::Kind::cusp:
      s += len * endpoint_graded_integral([&](double u, bool right) { return p(u, len, right); }, grading_power(p), 128);
      break;
    }
  }
  return s;
}

double log_integrability(const BoundaryWeight& w, int k, int nodes) {
  if (k < 0 || k >= static_cast<int>(w.pieces.size())) throw Error("invalid-component", "no carrier component " + std::to_string(k));
  const WeightPiece& p = w.pieces[k];
  if (p.kind == WeightPiece::Kind::cusp && !(p.gamma > 0.0 && p.gamma < 1.0)) {
    throw Error("non-integrable-log", "cusp exponent must lie in (0, 1)");
  }
  const double len = w.components[k].length;
  return len * endpoint_graded_integral([&](double u, bool right) { return p.log_at(u, len, right); }, grading_power(p), nodes);
}

void SpaceMeasure::validate() const {
  if (!(disk_alpha > -1.0)) throw Error("ALPHA_RANGE", "disk weight exponent must exceed -1");
  if (!(t > 0.0)) throw Error("T_RANGE", "t must be positive");
  if (!(disk_mass_scale >= 0.0) || !std::isfinite(total_mass()) || !(total_mass() > 0.0)) {
    throw Error("MASS_RANGE", "total mass must be finite and positive");
  }
}

} // namespace ptmu
