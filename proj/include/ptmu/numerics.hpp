#pragma once

#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace ptmu {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Nodes and weights of a quadrature rule on an interval.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n nodes on [a, b].
Rule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Gauss-Jacobi rule for the weight (1-x)^alpha (1+x)^beta on [-1, 1]
/// (Golub-Welsch). Weights sum to the weight's total integral.
Rule gauss_jacobi(int n, double alpha, double beta);

/// Radial rule on [0, 1] for the weight r (1-r)^alpha, weights normalized
/// to sum to one.
Rule radial_rule(int n, double alpha);

/// Globally adaptive Gauss-Legendre integration: 7 vs 15 point panels, the
/// worst panel is bisected until the summed discrepancy meets `tol` (or the
/// rounding floor) or 40 * max_depth panels are in use. `err` receives the
/// summed discrepancy. Throws Error("quadrature-nonconvergence") if the
/// budget runs out more than 1e3 times above tolerance.
cplx integrate_adaptive(const std::function<cplx(double)>& f, double a, double b,
                        double tol, int max_depth = 40, double* err = nullptr);

/// Sum in fixed pairwise order, independent of thread scheduling.
double pairwise_sum(std::span<const double> xs);
cplx pairwise_sum(std::span<const cplx> xs);

/// Map an angle in radians to [0, 2pi).
double wrap_angle(double theta);

/// Normalized circle coordinate in [0, 1) of an angle in radians.
inline double to_unit(double theta) { return wrap_angle(theta) / kTwoPi; }

inline cplx unit(double theta) { return std::polar(1.0, theta); }

/// Number of worker threads (PTMU_THREADS, default hardware concurrency).
int worker_count();

/// Runs body(i) for i in [0, n) on worker_count() threads with a static
/// partition. Results must be written to per-index slots.
void parallel_for(int n, const std::function<void(int)>& body);

} // namespace ptmu
