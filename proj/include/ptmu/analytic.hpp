#pragma once

#include "ptmu/measures.hpp"

#include <span>
#include <string>
#include <vector>

namespace ptmu {

/// Value with an absolute error bound.
struct Value {
  cplx value;
  double err = 0.0;
};

/// One term of a boundary log-modulus, supported on a closed arc.
struct LogPiece {
  enum class Kind {
    constant, ///< log|F| = value on the arc
    weight,   ///< log|F| = min(0, log w) on the arc (w a weight profile)
    cutoff    ///< log|F| = power * log|(zeta - a)(zeta - b)|, a and b the arc endpoints
  };
  Kind kind = Kind::constant;
  Arc arc;
  double value = 0.0;
  WeightPiece weight;
  int power = 0;

  /// Contribution at position u in [0, 1] along the arc; with `from_right`,
  /// u is the distance from the right end.
  double at(double u, bool from_right = false) const;
  bool piecewise_constant() const { return kind == Kind::constant; }
};

/// Log-modulus rule of an outer factor: the sum of its pieces.
struct OuterRule {
  std::string label = "none"; ///< "none", "piecewise", "cutoff", "companion", "weight"
  std::vector<LogPiece> pieces;

  bool trivial() const { return pieces.empty(); }
  /// Boundary log-modulus at angle theta (-inf at cutoff endpoints).
  double log_modulus(double theta) const;
  /// Endpoints of all pieces (angles), where the log-modulus may jump.
  std::vector<double> breakpoints() const;
  OuterRule operator+(const OuterRule& other) const;
};

/// theta = e^{i phase} z^n B S_nu O.
struct BoundedFunctionSpec {
  std::vector<cplx> zeros;
  SingularMeasure singular;
  OuterRule outer;
  int monomial_power = 0;
  double phase = 0.0;

  /// Boundary log-modulus; inner factors are unimodular there.
  double boundary_log_modulus(double theta) const { return outer.log_modulus(theta); }
  bool is_inner() const { return outer.trivial(); }
};

/// Herglotz integral of the indicator of an arc: int_A (zeta+z)/(zeta-z) dm.
/// For |z| = 1 the real part is the boundary limit (1 inside, 0 outside).
cplx herglotz_arc(const Arc& arc, cplx z);

Value eval_singular_inner(const SingularMeasure& nu, cplx z);
/// Same on an already realized atom list.
Value eval_singular_inner(std::span<const Atom> atoms, cplx z);

cplx eval_blaschke(std::span<const cplx> zeros, cplx z);

/// exp of the Herglotz integral of the rule's log-modulus. Piecewise-constant
/// pieces use the closed form; other pieces use adaptive Gauss-Legendre
/// quadrature with endpoint grading and singularity subtraction near the arc.
Value eval_outer(const OuterRule& rule, cplx z, double tol = 1e-13);

/// Cutoff outer s with |s| = |(zeta-a_k)(zeta-b_k)|^N on the
/// complementary arcs of E and 1 on E.
BoundedFunctionSpec cutoff_outer(const CircleSet& E, int N);
/// Outer H with |H| = min(1, w) on the carrier and 1 elsewhere.
OuterRule weight_outer(const BoundaryWeight& w);
/// f_n = z^n h_n with log|h_n| = -sigma n log n on F and 0 elsewhere.
BoundedFunctionSpec companion_function(int n, const CircleSet& F, double sigma);

/// Evaluator with the singular part realized once.
class Evaluator {
public:
  explicit Evaluator(const BoundedFunctionSpec& spec);
  Value operator()(cplx z) const;
  const std::vector<Atom>& atoms() const { return atoms_; }
  const BoundedFunctionSpec& spec() const { return spec_; }

private:
  BoundedFunctionSpec spec_;
  std::vector<Atom> atoms_;
};

Value evaluate(const BoundedFunctionSpec& spec, cplx z);

struct Region {
  enum class Kind {
    disk,      ///< D_n, radius 1 - 1/n
    omega,     ///< D_n union {dist(z, support) >= rho/2}
    complement ///< closed disk minus omega
  };
  Kind kind = Kind::disk;
  int n = 2;
  CircleSet support;
  double rho = 0.0;
};

struct GridSpec {
  int radial = 8;   ///< rings
  int angular = 256; ///< nodes per ring
};

struct MinModulus {
  double value = 0.0;
  cplx argmin;
  std::size_t nodes = 0;
  GridSpec grid;
};

/// Closed support of the realized measure as a circle set (points for atoms,
/// leaf arcs for Cantor components).
CircleSet support_set(const SingularMeasure& nu);

/// Region nodes: rings r_i = R i / radial (i = 1..radial) plus the centre
/// for D_n; collar rings between 1 - 1/n and 1 (inclusive) for the rest.
std::vector<cplx> region_nodes(const Region& region, const GridSpec& grid);

/// Minimum of |theta| over the region grid. Throws Error("support-collision")
/// if a node lies within `margin` of a realized atom.
MinModulus min_modulus(const BoundedFunctionSpec& theta, const Region& region, const GridSpec& grid,
                       double margin = 1e-9);

double sobolev_norm(std::span<const cplx> coeffs, double tau);

/// First `count` Taylor coefficients of the function.
std::vector<cplx> taylor_coefficients(const BoundedFunctionSpec& spec, int count);

/// Exponential of a power series: f = exp(g), first g.size() coefficients.
std::vector<cplx> series_exp(std::span<const cplx> g);

} // namespace ptmu
