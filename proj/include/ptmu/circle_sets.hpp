#pragma once

#include "ptmu/numerics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ptmu {

/// Circular arc. `start` is an angle in [0, 2pi); `length` is normalized so
/// the full circle has length 1. The arc runs counterclockwise.
struct Arc {
  double start = 0.0;
  double length = 0.0;

  double end_angle() const { return start + kTwoPi * length; }
  /// True when `theta` lies in the closed arc.
  bool contains(double theta) const;
  /// True when `theta` lies in the open arc.
  bool contains_open(double theta) const;
};

/// Interval in the unwrapped normalized coordinate u = angle / 2pi.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

/// Gap rule of a symmetric Cantor-type construction: at level k >= 1 every
/// level-(k-1) interval has one centred open gap removed.
struct CantorRule {
  enum class Kind {
    ratio,      ///< gap = ratio * parent length
    scaled_gap, ///< gap = 2^-k / (scale * k^power), absolute normalized length
    table       ///< gap = gaps[k-1], absolute normalized length
  };
  Kind kind = Kind::ratio;
  double ratio = 1.0 / 3.0;
  double scale = 4.0;
  double power = 1.0;
  std::vector<double> gaps;

  static CantorRule middle_thirds() { return {}; }
  /// Level-k gaps of length 2^-k / (4k).
  static CantorRule variable_gap() { return {Kind::scaled_gap, 0.0, 4.0, 1.0, {}}; }

  double gap(int level, double parent_length) const;
  /// Number of levels the rule can describe (table rules are finite).
  std::optional<int> max_depth() const;
};

/// Generator form of an infinite Cantor-type arc system.
struct CantorGenerator {
  Arc base;
  CantorRule rule;

  /// Intervals of every level 0..depth in unwrapped coordinates starting at
  /// base.start / 2pi. Throws Error("gap-overflow") when a gap does not fit.
  std::vector<std::vector<Interval>> levels(int depth) const;
};

/// Closed subset of the circle described by its complementary open arcs.
class CircleSet {
public:
  CircleSet() = default;

  /// Arcs crossing angle 0 are split; arcs are sorted by start.
  /// Throws Error("invalid-arc") for non-positive lengths, overlap, or total
  /// length above one.
  static CircleSet from_complement(std::vector<Arc> arcs, bool truncated = false);
  /// Set given as a finite union of closed arcs (each of length > 0).
  static CircleSet from_components(std::vector<Arc> closed_arcs);
  static CircleSet full_circle() { return {}; }
  /// Single point {e^{i theta}}. Sets are never empty: complementary arcs
  /// are open, so at least one point remains.
  static CircleSet point(double theta);

  const std::vector<Arc>& complementary_arcs() const { return arcs_; }
  bool truncated() const { return truncated_; }
  const std::optional<CantorGenerator>& generator() const { return generator_; }
  int depth() const { return depth_; }

  /// Closed arcs making up the set (zero-length arcs for isolated points).
  std::vector<Arc> components() const;
  bool contains(double theta) const;
  /// Normalized Lebesgue measure of the set.
  double measure() const;

private:
  friend CircleSet make_cantor_set(const Arc&, const CantorRule&, int);
  std::vector<Arc> arcs_;
  bool truncated_ = false;
  std::optional<CantorGenerator> generator_;
  int depth_ = 0;
};

/// sum_k |A_k| log(1 / |A_k|) over the stored complementary arcs.
double entropy(const CircleSet& set);

enum class BcStatus { yes, diverging, truncated_unknown };

struct BcVerdict {
  BcStatus status = BcStatus::yes;
  std::vector<double> partial_sums;
  std::string reason;
};

std::string to_string(BcStatus s);

/// Beurling-Carleson classification. Exact arc systems are always "yes".
/// Generator-described sets use the rule's closed-form increment asymptotics;
/// for table rules `budget` flags divergence when the trailing per-level
/// increments all stay above it.
BcVerdict is_beurling_carleson(const CircleSet& set, double budget);

/// Euclidean distance from z to the set.
double distance_to(const CircleSet& set, cplx z);

/// Deterministic truncated Cantor-type set; marked truncated.
CircleSet make_cantor_set(const Arc& base, const CantorRule& rule, int depth);

/// Normalized circular distance between two angles, in [0, 1/2].
double circular_gap(double theta1, double theta2);

} // namespace ptmu
