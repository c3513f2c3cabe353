#include "ptmu/analytic.hpp"

#include "ptmu/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ptmu {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBoundary = 1.0 - 1e-14;

double arc_position(const Arc& arc, double theta) {
  return std::clamp(wrap_angle(theta - arc.start) / (kTwoPi * arc.length), 0.0, 1.0);
}

int grading_power(const LogPiece& p) {
  switch (p.kind) {
  case LogPiece::Kind::constant:
    return 1;
  case LogPiece::Kind::cutoff:
    return 2;
  case LogPiece::Kind::weight:
    if (p.weight.kind == WeightPiece::Kind::cusp) return static_cast<int>(std::ceil(3.0 / (1.0 - p.weight.gamma)));
    return 1;
  }
  return 1;
}

} // namespace

double LogPiece::at(double u, bool from_right) const {
  switch (kind) {
  case Kind::constant:
    return value;
  case Kind::weight:
    return std::min(0.0, weight.log_at(u, arc.length, from_right));
  case Kind::cutoff: {
    const double near = 2.0 * std::sin(kPi * arc.length * u);
    const double far = 2.0 * std::sin(kPi * arc.length * (1.0 - u));
    const double sa = from_right ? far : near;
    const double sb = from_right ? near : far;
    return power * (std::log(sa) + std::log(sb));
  }
  }
  return 0.0;
}

double OuterRule::log_modulus(double theta) const {
  double s = 0.0;
  for (const LogPiece& p : pieces) {
    if (p.arc.length >= 1.0) {
      s += p.at(to_unit(theta - p.arc.start));
    } else if (p.arc.contains(theta)) {
      s += p.at(arc_position(p.arc, theta));
    }
  }
  return s;
}

std::vector<double> OuterRule::breakpoints() const {
  std::vector<double> out;
  for (const LogPiece& p : pieces) {
    if (p.arc.length >= 1.0) continue;
    out.push_back(wrap_angle(p.arc.start));
    out.push_back(wrap_angle(p.arc.end_angle()));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

OuterRule OuterRule::operator+(const OuterRule& other) const {
  OuterRule r;
  r.label = trivial() ? other.label : (other.trivial() ? label : "piecewise");
  r.pieces = pieces;
  r.pieces.insert(r.pieces.end(), other.pieces.begin(), other.pieces.end());
  return r;
}

cplx herglotz_arc(const Arc& arc, cplx z) {
  if (arc.length >= 1.0) return 1.0;
  const cplx z1 = unit(arc.start);
  const cplx z2 = unit(arc.end_angle());
  const double im = -std::log(std::abs(z2 - z) / std::abs(z1 - z)) / kPi;
  if (std::abs(z) >= kBoundary) {
    const double theta = std::arg(z);
    const double re = arc.contains_open(theta) ? 1.0 : (arc.contains(theta) ? 0.5 : 0.0);
    return {re, im};
  }
  // The sweep of arg(zeta - z) along the arc equals pi (length + harmonic
  // measure), so it lies in (pi length, pi (length + 1)).
  double delta = std::arg((z2 - z) / (z1 - z));
  const double target = kPi * (arc.length + 0.5);
  while (delta < target - kPi) delta += kTwoPi;
  while (delta > target + kPi) delta -= kTwoPi;
  return {-arc.length + delta / kPi, im};
}

Value eval_singular_inner(std::span<const Atom> atoms, cplx z) {
  const double r = std::abs(z);
  if (r > 1.0 + 1e-14) throw Error("outside-disk", "|z| > 1");
  std::vector<cplx> terms;
  terms.reserve(atoms.size());
  double err_exp = 0.0;
  for (const Atom& a : atoms) {
    const cplx zeta = unit(a.angle);
    const double d = std::abs(zeta - z);
    if (r >= kBoundary && d < 1e-12) {
      throw Error("on-singular-support", "evaluation point coincides with an atom at angle " + std::to_string(a.angle));
    }
    terms.push_back(a.mass * (zeta + z) / (zeta - z));
    if (a.spread > 0.0 && r > 0.0) {
      const double transport = kPi * a.spread;
      const double gap = d - transport;
      err_exp += gap > 0.0 ? a.mass * transport * 2.0 * r / (gap * gap) : std::numeric_limits<double>::infinity();
    }
  }
  const cplx v = std::exp(-pairwise_sum(terms));
  return {v, std::abs(v) * std::expm1(err_exp)};
}

Value eval_singular_inner(const SingularMeasure& nu, cplx z) {
  const auto atoms = nu.realized();
  return eval_singular_inner(atoms, z);
}

cplx eval_blaschke(std::span<const cplx> zeros, cplx z) {
  cplx v = 1.0;
  for (const cplx& a : zeros) {
    if (a == 0.0) {
      v *= z;
    } else {
      v *= (std::abs(a) / a) * (a - z) / (1.0 - std::conj(a) * z);
    }
  }
  return v;
}

namespace {

cplx piece_integral(const LogPiece& p, cplx z, double tol, double& err) {
  const Arc& arc = p.arc;
  const double len = std::min(arc.length, 1.0);
  const double r = std::abs(z);
  double uhat = -1.0;
  double fhat = 0.0;
  if (r > 0.9 && (len >= 1.0 || arc.contains_open(std::arg(z)))) {
    const double u = len >= 1.0 ? to_unit(std::arg(z) - arc.start) : arc_position(arc, std::arg(z));
    const double f = p.at(u);
    if (std::isfinite(f) && u > 0.0 && u < 1.0) {
      uhat = u;
      fhat = f;
    }
  }
  // v is the distance from the left end, or from the right end when mirrored.
  auto integrand = [&](double v, bool mirrored) -> cplx {
    const cplx zeta = mirrored ? unit(arc.start + kTwoPi * len * (1.0 - v)) : unit(arc.start + kTwoPi * len * v);
    const cplx diff = zeta - z;
    if (std::abs(diff) < 1e-300) return 0.0;
    const double f = p.at(v, mirrored);
    if (!std::isfinite(f)) return 0.0;
    return (zeta + z) / diff * ((f - fhat) * len);
  };
  const int q = grading_power(p);
  const double smax = std::pow(0.5, 1.0 / q);
  // Tolerance relative to the exponent's size; near a cusp end |fhat| is huge and |O| negligible.
  const double tol_eff = tol * std::max(1.0, std::abs(fhat));
  auto half = [&](bool mirrored) {
    std::vector<double> cuts{0.0};
    if (uhat > 0.0) {
      const double uu = mirrored ? 1.0 - uhat : uhat;
      if (uu < 0.5) cuts.push_back(std::pow(uu, 1.0 / q));
    }
    cuts.push_back(smax);
    cplx total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double e = 0.0;
      total += integrate_adaptive(
          [&](double s) -> cplx {
            const double u = std::pow(s, q);
            const double jac = q * std::pow(s, q - 1);
            return jac * integrand(u, mirrored);
          },
          cuts[i], cuts[i + 1], tol_eff, 50, &e);
      err += e;
    }
    return total;
  };
  cplx v = half(false) + half(true);
  if (fhat != 0.0) {
    Arc a = arc;
    v += fhat * herglotz_arc(a, z);
  }
  return v;
}

} // namespace

Value eval_outer(const OuterRule& rule, cplx z, double tol) {
  if (rule.trivial()) return {1.0, 0.0};
  const double r = std::abs(z);
  if (r > 1.0 + 1e-14) throw Error("outside-disk", "|z| > 1");
  // On the circle |O| = exp(log_modulus); below -745 that underflows to zero.
  if (r >= kBoundary && rule.log_modulus(std::arg(z)) < -745.0) return {0.0, 0.0};
  cplx exponent = 0.0;
  double err = 0.0;
  for (const LogPiece& p : rule.pieces) {
    if (p.kind == LogPiece::Kind::weight && p.weight.kind == WeightPiece::Kind::cusp &&
        !(p.weight.gamma > 0.0 && p.weight.gamma < 1.0)) {
      throw Error("non-integrable-log", "cusp exponent must lie in (0, 1)");
    }
    if (p.piecewise_constant()) {
      exponent += p.value * herglotz_arc(p.arc, z);
    } else {
      exponent += piece_integral(p, z, tol, err);
    }
  }
  const cplx v = std::exp(exponent);
  return {v, std::abs(v) * std::expm1(err)};
}

BoundedFunctionSpec cutoff_outer(const CircleSet& E, int N) {
  if (N < 0) throw Error("invalid-parameters", "cutoff exponent must be nonnegative");
  BoundedFunctionSpec spec;
  spec.outer.label = "cutoff";
  if (N == 0) return spec;
  // Complementary arcs run between consecutive components of E.
  const auto comps = E.components();
  if (comps.size() == 1 && comps.front().length >= 1.0) return spec;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const double end = comps[i].end_angle();
    const double next = (i + 1 < comps.size()) ? comps[i + 1].start : comps[0].start + kTwoPi;
    const double len = (next - end) / kTwoPi;
    if (len <= 0.0) continue;
    LogPiece p;
    p.kind = LogPiece::Kind::cutoff;
    p.arc = {wrap_angle(end), len};
    p.power = N;
    spec.outer.pieces.push_back(p);
  }
  return spec;
}

OuterRule weight_outer(const BoundaryWeight& w) {
  OuterRule rule;
  rule.label = "weight";
  for (std::size_t k = 0; k < w.pieces.size(); ++k) {
    const WeightPiece& wp = w.pieces[k];
    const Arc& arc = w.components[k];
    if (arc.length <= 0.0) continue;
    LogPiece p;
    p.arc = arc;
    if (wp.kind == WeightPiece::Kind::constant) {
      if (wp.value >= 1.0) continue;
      p.kind = LogPiece::Kind::constant;
      p.value = std::log(wp.value);
    } else {
      p.kind = LogPiece::Kind::weight;
      p.weight = wp;
    }
    rule.pieces.push_back(p);
  }
  return rule;
}

BoundedFunctionSpec companion_function(int n, const CircleSet& F, double sigma) {
  if (n < 2 || !(sigma > 0.0)) throw Error("invalid-parameters", "companion needs n >= 2, sigma > 0");
  BoundedFunctionSpec spec;
  spec.monomial_power = n;
  spec.outer.label = "companion";
  const double level = -sigma * n * std::log(static_cast<double>(n));
  for (const Arc& c : F.components()) {
    if (c.length <= 0.0) continue;
    LogPiece p;
    p.kind = LogPiece::Kind::constant;
    p.arc = c;
    p.value = level;
    spec.outer.pieces.push_back(p);
  }
  return spec;
}

Evaluator::Evaluator(const BoundedFunctionSpec& spec) : spec_(spec), atoms_(spec.singular.realized()) {
  for (const cplx& a : spec_.zeros) {
    if (!(std::abs(a) < 1.0)) throw Error("invalid-zero", "Blaschke zeros must lie in the open disk");
  }
}

Value Evaluator::operator()(cplx z) const {
  const Value s = atoms_.empty() ? Value{1.0, 0.0} : eval_singular_inner(atoms_, z);
  const Value o = eval_outer(spec_.outer, z);
  cplx pre = std::polar(1.0, spec_.phase) * eval_blaschke(spec_.zeros, z);
  if (spec_.monomial_power > 0) pre *= std::pow(z, spec_.monomial_power);
  const double a = std::abs(pre);
  return {pre * s.value * o.value, a * (std::abs(o.value) * s.err + std::abs(s.value) * o.err + s.err * o.err)};
}

Value evaluate(const BoundedFunctionSpec& spec, cplx z) { return Evaluator(spec)(z); }

CircleSet support_set(const SingularMeasure& nu) {
  std::vector<Arc> arcs;
  std::vector<Arc> leaves;
  for (const CantorComponent& c : nu.cantor()) {
    const auto levels = c.generator.levels(c.depth);
    for (const Interval& iv : levels.back()) leaves.push_back({wrap_angle(kTwoPi * iv.lo), iv.length()});
  }
  arcs = leaves;
  for (const Atom& a : nu.atoms()) {
    const bool covered = std::any_of(leaves.begin(), leaves.end(), [&](const Arc& l) { return l.contains(a.angle); });
    if (!covered) arcs.push_back({a.angle, 0.0});
  }
  if (arcs.empty()) throw Error("empty-support", "zero measure has empty support");
  return CircleSet::from_components(std::move(arcs));
}

std::vector<cplx> region_nodes(const Region& region, const GridSpec& grid) {
  if (region.n < 2 || region.rho < 0.0) throw Error("invalid-region", "need n >= 2 and rho >= 0");
  const double R = 1.0 - 1.0 / region.n;
  std::vector<cplx> out;
  auto ring = [&](double r, bool filter, bool keep_far) {
    for (int m = 0; m < grid.angular; ++m) {
      const cplx z = std::polar(r, kTwoPi * m / grid.angular);
      if (filter) {
        const bool far = distance_to(region.support, z) >= 0.5 * region.rho;
        if (far != keep_far) continue;
      }
      out.push_back(z);
    }
  };
  if (region.kind != Region::Kind::complement) {
    out.push_back(0.0);
    for (int i = 1; i <= grid.radial; ++i) ring(R * i / grid.radial, false, true);
  }
  if (region.kind == Region::Kind::omega) {
    for (int i = 1; i <= grid.radial; ++i) ring(R + (1.0 - R) * i / grid.radial, true, true);
  } else if (region.kind == Region::Kind::complement) {
    for (int i = 1; i <= grid.radial; ++i) ring(R + (1.0 - R) * i / (grid.radial + 1.0), true, false);
  }
  return out;
}

MinModulus min_modulus(const BoundedFunctionSpec& theta, const Region& region, const GridSpec& grid,
                       double margin) {
  const Evaluator ev(theta);
  const auto nodes = region_nodes(region, grid);
  for (const cplx& z : nodes) {
    if (1.0 - std::abs(z) >= margin) continue;
    for (const Atom& a : ev.atoms()) {
      if (std::abs(z - unit(a.angle)) < margin) {
        throw Error("support-collision", "grid node within margin of a realized atom");
      }
    }
  }
  std::vector<double> mod(nodes.size());
  parallel_for(static_cast<int>(nodes.size()), [&](int i) { mod[i] = std::abs(ev(nodes[i]).value); });
  MinModulus out;
  out.grid = grid;
  out.nodes = nodes.size();
  out.value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (mod[i] < out.value) {
      out.value = mod[i];
      out.argmin = nodes[i];
    }
  }
  return out;
}

double sobolev_norm(std::span<const cplx> coeffs, double tau) {
  std::vector<double> terms;
  terms.reserve(coeffs.size());
  for (std::size_t n = 0; n < coeffs.size(); ++n) terms.push_back(std::pow(n + 1.0, tau) * std::norm(coeffs[n]));
  return std::sqrt(pairwise_sum(terms));
}

std::vector<cplx> series_exp(std::span<const cplx> g) {
  const std::size_t n = g.size();
  std::vector<cplx> f(n);
  if (n == 0) return f;
  f[0] = std::exp(g[0]);
  for (std::size_t m = 1; m < n; ++m) {
    cplx s = 0.0;
    for (std::size_t k = 1; k <= m; ++k) s += static_cast<double>(k) * g[k] * f[m - k];
    f[m] = s / static_cast<double>(m);
  }
  return f;
}

namespace {

// Adds sum_j w_j conj(zeta_j)^k * scale to g[k] for k < g.size().
void add_power_sums(std::vector<cplx>& g, double angle, double weight) {
  const cplx step = std::polar(1.0, -angle);
  cplx w = 1.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (k % 64 == 0) w = std::polar(1.0, -angle * static_cast<double>(k));
    g[k] += weight * w;
    w *= step;
  }
}

} // namespace

std::vector<cplx> taylor_coefficients(const BoundedFunctionSpec& spec, int count) {
  if (count < 1) throw Error("invalid-parameters", "count must be positive");
  const std::size_t n = static_cast<std::size_t>(count);
  std::vector<cplx> g(n, 0.0);
  for (const Atom& a : spec.singular.realized()) add_power_sums(g, a.angle, -2.0 * a.mass);
  g[0] = 0.0;
  g[0] -= spec.singular.total_mass();
  for (const LogPiece& p : spec.outer.pieces) {
    const double len = std::min(p.arc.length, 1.0);
    if (p.piecewise_constant()) {
      g[0] += p.value * len;
      if (len >= 1.0) continue;
      const double t1 = p.arc.start, t2 = p.arc.end_angle();
      for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const cplx v = (std::polar(1.0, -kk * t2) - std::polar(1.0, -kk * t1)) * cplx(0.0, 1.0) / (kTwoPi * kk);
        g[k] += 2.0 * p.value * v;
      }
    } else {
      const int q = grading_power(p);
      const int panels = std::max(64, static_cast<int>(2.0 * count * len));
      const Rule rule = gauss_legendre(16);
      const double smax = std::pow(0.5, 1.0 / q);
      for (int half = 0; half < 2; ++half) {
        for (int j = 0; j < panels; ++j) {
          const double a = smax * j / panels, b = smax * (j + 1) / panels;
          for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double s = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i];
            const double w = 0.5 * (b - a) * rule.weights[i] * q * std::pow(s, q - 1);
            const double u0 = std::pow(s, q);
            const double u = half ? 1.0 - u0 : u0;
            const double f = p.at(u0, half == 1);
            if (!std::isfinite(f)) continue;
            const double theta = p.arc.start + kTwoPi * len * u;
            add_power_sums(g, theta, 2.0 * w * len * f);
            g[0] -= w * len * f;
          }
        }
      }
    }
  }
  std::vector<cplx> f = series_exp(g);
  for (const cplx& a : spec.zeros) {
    if (a == 0.0) {
      f.insert(f.begin(), 0.0);
      f.pop_back();
      continue;
    }
    const cplx u = std::abs(a) / a;
    const cplx ab = std::conj(a);
    std::vector<cplx> h(n);
    for (std::size_t k = 0; k < n; ++k) h[k] = u * (a * f[k] - (k > 0 ? f[k - 1] : 0.0));
    for (std::size_t k = 1; k < n; ++k) h[k] += ab * h[k - 1];
    f = std::move(h);
  }
  if (spec.monomial_power > 0) {
    const std::size_t s = std::min<std::size_t>(n, spec.monomial_power);
    f.insert(f.begin(), s, 0.0);
    f.resize(n);
  }
  if (spec.phase != 0.0) {
    for (cplx& c : f) c *= std::polar(1.0, spec.phase);
  }
  return f;
}

} // namespace ptmu
