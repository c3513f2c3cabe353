#pragma once

#include "ptmu/circle_sets.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ptmu {

/// Point mass at e^{i angle}. `spread` is the normalized width of the arc
/// whose mass the atom stands in for (zero for genuine atoms).
struct Atom {
  double angle = 0.0;
  double mass = 0.0;
  double spread = 0.0;
};

/// Cantor-type component: `mass` spread evenly over the level-`depth` arcs of
/// the generator, realized as one atom at each level arc midpoint.
struct CantorComponent {
  CantorGenerator generator;
  double mass = 0.0;
  int depth = 0;
};

/// Positive singular measure on the circle built from declared families.
class SingularMeasure {
public:
  SingularMeasure() = default;
  explicit SingularMeasure(std::vector<Atom> atoms, std::vector<CantorComponent> cantor = {});

  static SingularMeasure atom(double angle, double mass) { return SingularMeasure({{angle, mass}}); }
  static SingularMeasure cantor_measure(const Arc& base, const CantorRule& rule, double mass,
                                        int depth);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<CantorComponent>& cantor() const { return cantor_; }

  double total_mass() const;
  bool is_zero() const { return total_mass() == 0.0; }

  /// Finitely atomic realization sorted by angle. Atoms at identical angles
  /// are merged.
  std::vector<Atom> realized() const;
  /// Same measure with every component realized as atoms.
  SingularMeasure realize() const;

  /// Closed support of the realization as a circle set of points.
  std::vector<double> support_angles() const;

  friend SingularMeasure operator+(const SingularMeasure& a, const SingularMeasure& b);

private:
  std::vector<Atom> atoms_;
  std::vector<CantorComponent> cantor_;
};

/// sup over arcs I with |I| < delta (normalized) of nu(I), exact on the
/// realization by a sliding-window sweep.
double modulus_of_continuity(const SingularMeasure& nu, double delta);

using AnglePredicate = std::function<bool(double)>;

/// Predicate dist(e^{i theta}, set) > threshold.
AnglePredicate farther_than(const CircleSet& set, double threshold);
/// Predicate e^{i theta} in set.
AnglePredicate inside(const CircleSet& set);

struct Restriction {
  SingularMeasure kept;
  SingularMeasure rest;
};

/// Splits the realization atom by atom; kept + rest = nu.
Restriction restrict(const SingularMeasure& nu, const AnglePredicate& keep);

enum class SplitCertainty { certain, heuristic, unknown };
std::string to_string(SplitCertainty c);

struct BcKrSplit {
  SingularMeasure bc; ///< Beurling-Carleson part
  SingularMeasure kr; ///< Korenblum-Roberts part
  SplitCertainty certainty = SplitCertainty::certain;
  std::vector<std::string> notes;
};

/// Atoms and components with a proven Beurling-Carleson generator go to the
/// BC part; divergent-entropy components go to the KR part flagged
/// heuristic; unknown tails go to the KR part flagged unknown.
BcKrSplit bc_kr_split(const SingularMeasure& nu);

struct RobertsPiece {
  SingularMeasure measure;
  double scale = 0.0;         ///< n_k
  double cap = 0.0;           ///< c log(n_k) / n_k
  double modulus = 0.0;       ///< measured modulus at 1/n_k
  double grid_fraction = 0.0; ///< per-grid-arc cap as a fraction of `cap`
  int retries = 0;
};

struct RobertsDecomposition {
  std::vector<RobertsPiece> pieces;
  SingularMeasure remainder;
  double c = 0.0;
  int N = 0;
  double input_mass = 0.0;
  double mass_defect = 0.0; ///< |input - sum(pieces) - remainder|
};

/// n_k = 2^(2^(N+k)).
double roberts_scale(int N, int k);

/// Greedy grid decomposition: piece k (k = 0..M-1) lives at scale n_k with
/// modulus cap c log(n_k)/n_k, certified by modulus_of_continuity. With
/// `require_exhaustion` a nonzero remainder raises Error("insufficient-pieces").
RobertsDecomposition roberts_decompose(const SingularMeasure& nu, double c, int N, int M,
                                       bool require_exhaustion = false);

/// Weight profile on one closed carrier component, parametrized by the
/// position u in [0, 1] along the component.
struct WeightPiece {
  enum class Kind {
    constant,   ///< value
    polynomial, ///< sum coeffs[i] u^i, positive on [0, 1]
    cusp        ///< value * exp(-d^-gamma), d = normalized distance to the nearest endpoint
  };
  Kind kind = Kind::constant;
  double value = 1.0;
  std::vector<double> coeffs;
  double gamma = 0.5;

  /// With `from_right`, u is the distance from the right end (position 1 - u),
  /// which keeps tiny distances exact.
  double operator()(double u, double component_length, bool from_right = false) const;
  double log_at(double u, double component_length, bool from_right = false) const;
};

/// Boundary weight omega supported on the carrier E; pieces[k] lives on
/// carrier.components()[k].
struct BoundaryWeight {
  CircleSet carrier;
  std::vector<WeightPiece> pieces;
  std::vector<Arc> components; ///< cached carrier.components()

  BoundaryWeight() = default;
  BoundaryWeight(CircleSet carrier, std::vector<WeightPiece> pieces);
  static BoundaryWeight constant_on(const CircleSet& carrier, double value);

  bool is_zero() const { return pieces.empty(); }
  /// omega(e^{i theta}); zero off the carrier.
  double operator()(double theta) const;
  /// Mass of omega dm.
  double total_mass() const;
};

/// Quadrature estimate of the integral of log(omega) dm over component k.
/// Throws Error("non-integrable-log") for cusp exponents gamma >= 1.
double log_integrability(const BoundaryWeight& w, int k, int nodes);

/// mu = disk part + omega dm. The disk part is disk_mass_scale times the
/// probability measure proportional to (1-|z|)^alpha dA.
struct SpaceMeasure {
  double disk_alpha = 0.0;
  double disk_mass_scale = 1.0;
  BoundaryWeight boundary;
  double t = 2.0;
  std::optional<double> beta_hint;

  double total_mass() const { return disk_mass_scale + boundary.total_mass(); }
  /// Throws Error("ALPHA_RANGE"/"T_RANGE"/"MASS_RANGE") on invariant violations.
  void validate() const;
};

} // namespace ptmu
