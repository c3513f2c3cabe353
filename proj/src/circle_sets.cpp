#include "ptmu/circle_sets.hpp"

#include "ptmu/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ptmu {

namespace {

constexpr double kAngleEps = 1e-13;

double ccw_offset(double from, double to) { return wrap_angle(to - from); }

// Two stored arcs meeting at angle 0 are the halves of one arc split at
// construction; merge them back for entropy and topology.
std::vector<Arc> logical_arcs(const std::vector<Arc>& arcs) {
  std::vector<Arc> out = arcs;
  if (out.size() >= 2) {
    const Arc& first = out.front();
    const Arc& last = out.back();
    if (first.start <= kAngleEps && std::abs(last.end_angle() - kTwoPi) <= kAngleEps) {
      Arc merged{last.start, last.length + first.length};
      out.erase(out.begin());
      out.back() = merged;
    }
  }
  return out;
}

} // namespace

bool Arc::contains(double theta) const {
  const double d = ccw_offset(start, theta);
  const double span = kTwoPi * length;
  return d <= span + kAngleEps || d >= kTwoPi - kAngleEps;
}

bool Arc::contains_open(double theta) const {
  const double d = ccw_offset(start, theta);
  return d > kAngleEps && d < kTwoPi * length - kAngleEps;
}

double CantorRule::gap(int level, double parent_length) const {
  switch (kind) {
  case Kind::ratio:
    return ratio * parent_length;
  case Kind::scaled_gap:
    return std::ldexp(1.0, -level) / (scale * std::pow(static_cast<double>(level), power));
  case Kind::table:
    if (level < 1 || level > static_cast<int>(gaps.size())) {
      throw Error("gap-overflow", "table rule has no gap for level " + std::to_string(level));
    }
    return gaps[level - 1];
  }
  return 0.0;
}

std::optional<int> CantorRule::max_depth() const {
  if (kind == Kind::table) return static_cast<int>(gaps.size());
  return std::nullopt;
}

std::vector<std::vector<Interval>> CantorGenerator::levels(int depth) const {
  if (depth < 0) throw Error("invalid-depth", "depth must be nonnegative");
  if (!(base.length > 0.0 && base.length <= 1.0)) {
    throw Error("invalid-arc", "base arc length must lie in (0, 1]");
  }
  std::vector<std::vector<Interval>> out;
  const double u0 = base.start / kTwoPi;
  out.push_back({Interval{u0, u0 + base.length}});
  for (int k = 1; k <= depth; ++k) {
    const auto& parents = out.back();
    std::vector<Interval> next;
    next.reserve(parents.size() * 2);
    for (const Interval& p : parents) {
      const double len = p.length();
      const double g = rule.gap(k, len);
      if (!(g > 0.0) || g >= len) {
        throw Error("gap-overflow", "level " + std::to_string(k) + " gap " + std::to_string(g) +
                                        " does not fit parent of length " + std::to_string(len));
      }
      const double m = p.mid();
      next.push_back({p.lo, m - 0.5 * g});
      next.push_back({m + 0.5 * g, p.hi});
    }
    out.push_back(std::move(next));
  }
  return out;
}

CircleSet CircleSet::from_complement(std::vector<Arc> arcs, bool truncated) {
  std::vector<Arc> split;
  split.reserve(arcs.size() + 1);
  double total = 0.0;
  for (const Arc& a : arcs) {
    if (!(a.length > 0.0) || a.length > 1.0 || !std::isfinite(a.start)) {
      throw Error("invalid-arc", "arc length must lie in (0, 1]");
    }
    total += a.length;
    const double s = wrap_angle(a.start);
    const double end = s + kTwoPi * a.length;
    if (end > kTwoPi + kAngleEps) {
      const double head = (kTwoPi - s) / kTwoPi;
      split.push_back({s, head});
      split.push_back({0.0, a.length - head});
    } else {
      split.push_back({s, a.length});
    }
  }
  if (total > 1.0 + 1e-12) throw Error("invalid-arc", "arc lengths sum above one");
  std::sort(split.begin(), split.end(), [](const Arc& x, const Arc& y) { return x.start < y.start; });
  for (std::size_t i = 1; i < split.size(); ++i) {
    if (split[i].start < split[i - 1].end_angle() - 1e-12) {
      throw Error("invalid-arc", "complementary arcs overlap");
    }
  }
  CircleSet s;
  s.arcs_ = std::move(split);
  s.truncated_ = truncated;
  return s;
}

CircleSet CircleSet::from_components(std::vector<Arc> closed_arcs) {
  if (closed_arcs.empty()) throw Error("invalid-arc", "a set needs at least one component");
  std::vector<std::pair<double, double>> comps; // (start, end) unwrapped, start in [0, 2pi)
  for (const Arc& a : closed_arcs) {
    if (a.length < 0.0 || a.length > 1.0) throw Error("invalid-arc", "component length out of range");
    if (a.length >= 1.0) return full_circle();
    const double s = wrap_angle(a.start);
    comps.emplace_back(s, s + kTwoPi * a.length);
  }
  std::sort(comps.begin(), comps.end());
  std::vector<Arc> gaps;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const double end = comps[i].second;
    const double next = (i + 1 < comps.size()) ? comps[i + 1].first : comps[0].first + kTwoPi;
    if (next < end - 1e-12) throw Error("invalid-arc", "components overlap");
    if (next - end > kAngleEps) gaps.push_back({wrap_angle(end), (next - end) / kTwoPi});
  }
  return from_complement(std::move(gaps), false);
}

CircleSet CircleSet::point(double theta) {
  return from_complement({Arc{wrap_angle(theta), 1.0}}, false);
}

std::vector<Arc> CircleSet::components() const {
  const auto arcs = logical_arcs(arcs_);
  if (arcs.empty()) return {Arc{0.0, 1.0}};
  std::vector<Arc> out;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const double end = arcs[i].end_angle();
    const double next = (i + 1 < arcs.size()) ? arcs[i + 1].start : arcs[0].start + kTwoPi;
    out.push_back({wrap_angle(end), std::max(0.0, (next - end) / kTwoPi)});
  }
  std::sort(out.begin(), out.end(), [](const Arc& x, const Arc& y) { return x.start < y.start; });
  return out;
}

bool CircleSet::contains(double theta) const {
  for (const Arc& a : logical_arcs(arcs_)) {
    if (a.contains_open(theta)) return false;
  }
  return true;
}

double CircleSet::measure() const {
  double total = 0.0;
  for (const Arc& a : arcs_) total += a.length;
  return std::max(0.0, 1.0 - total);
}

double entropy(const CircleSet& set) {
  double s = 0.0;
  for (const Arc& a : logical_arcs(set.complementary_arcs())) {
    if (a.length < 1.0) s += a.length * std::log(1.0 / a.length);
  }
  return s;
}

std::string to_string(BcStatus s) {
  switch (s) {
  case BcStatus::yes:
    return "yes";
  case BcStatus::diverging:
    return "diverging";
  case BcStatus::truncated_unknown:
    return "truncated-unknown";
  }
  return "?";
}

namespace {

double xlog1x(double x) { return (x > 0.0 && x < 1.0) ? x * std::log(1.0 / x) : 0.0; }

// Per-level entropy increments of a generator, level 0 being the base's
// complementary arc. Uses the equal-length structure of symmetric rules.
std::vector<double> level_increments(const CantorGenerator& g, int depth) {
  std::vector<double> inc;
  inc.push_back(xlog1x(1.0 - g.base.length));
  double len = g.base.length;
  double count = 1.0;
  for (int k = 1; k <= depth; ++k) {
    const double gap = g.rule.gap(k, len);
    inc.push_back(count * xlog1x(gap));
    len = 0.5 * (len - gap);
    count *= 2.0;
  }
  return inc;
}

} // namespace

BcVerdict is_beurling_carleson(const CircleSet& set, double budget) {
  if (!(budget > 0.0)) throw Error("invalid-budget", "budget must be positive");
  BcVerdict v;
  if (!set.truncated()) {
    v.status = BcStatus::yes;
    v.partial_sums = {entropy(set)};
    v.reason = "finite arc system";
    return v;
  }
  if (!set.generator()) {
    double s = 0.0;
    for (const Arc& a : set.complementary_arcs()) {
      s += xlog1x(a.length);
      v.partial_sums.push_back(s);
    }
    v.status = BcStatus::truncated_unknown;
    v.reason = "truncated arc list without a generator";
    return v;
  }
  const CantorGenerator& g = *set.generator();
  const auto inc = level_increments(g, set.depth());
  double s = 0.0;
  for (double x : inc) {
    s += x;
    v.partial_sums.push_back(s);
  }
  switch (g.rule.kind) {
  case CantorRule::Kind::ratio:
    v.status = BcStatus::yes;
    v.reason = "ratio rule: per-level increments decay geometrically";
    break;
  case CantorRule::Kind::scaled_gap:
    if (g.rule.power > 2.0) {
      v.status = BcStatus::yes;
      v.reason = "scaled-gap rule: increments ~ k^(1-p), summable for p > 2";
    } else {
      v.status = BcStatus::diverging;
      v.reason = "scaled-gap rule: increments ~ ln2/(2a) k^(1-p), not summable for p <= 2";
    }
    break;
  case CantorRule::Kind::table: {
    const std::size_t n = inc.size();
    const std::size_t tail = std::max<std::size_t>(1, (n - 1) / 4);
    bool stuck = n > 4;
    for (std::size_t i = n - tail; i < n && stuck; ++i) stuck = inc[i] >= budget;
    v.status = stuck ? BcStatus::diverging : BcStatus::truncated_unknown;
    v.reason = stuck ? "trailing increments stay above budget" : "tail of table rule unknown";
    break;
  }
  }
  return v;
}

double distance_to(const CircleSet& set, cplx z) {
  const double r = std::abs(z);
  double best = std::numeric_limits<double>::infinity();
  if (r == 0.0) return 1.0;
  const double theta = std::arg(z);
  for (const Arc& c : set.components()) {
    if (c.contains(theta)) {
      best = std::min(best, std::abs(1.0 - r));
    } else {
      best = std::min(best, std::abs(z - unit(c.start)));
      best = std::min(best, std::abs(z - unit(c.end_angle())));
    }
  }
  return best;
}

CircleSet make_cantor_set(const Arc& base, const CantorRule& rule, int depth) {
  CantorGenerator g{base, rule};
  const auto levels = g.levels(depth);
  std::vector<Arc> arcs;
  if (base.length < 1.0) {
    arcs.push_back({wrap_angle(base.end_angle()), 1.0 - base.length});
  }
  for (int k = 1; k <= depth; ++k) {
    for (const Interval& p : levels[k - 1]) {
      const double gap = rule.gap(k, p.length());
      const double lo = p.mid() - 0.5 * gap;
      arcs.push_back({wrap_angle(kTwoPi * lo), gap});
    }
  }
  CircleSet s = CircleSet::from_complement(std::move(arcs), depth > 0);
  s.generator_ = g;
  s.depth_ = depth;
  return s;
}

double circular_gap(double theta1, double theta2) {
  const double d = to_unit(theta2 - theta1);
  return std::min(d, 1.0 - d);
}

} // namespace ptmu
