#include "ptmu/numerics.hpp"

#include "ptmu/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <cstdlib>
#include <exception>
#include <thread>

namespace ptmu {

Rule gauss_legendre(int n, double a, double b) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = mid - half * x;
    r.nodes[n - 1 - i] = mid + half * x;
    r.weights[i] = r.weights[n - 1 - i] = half * w;
  }
  return r;
}

Rule gauss_jacobi(int n, double alpha, double beta) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    if (k == 0) {
      J(0, 0) = (beta - alpha) / (ab + 2.0);
    } else {
      J(k, k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    if (k + 1 < n) {
      const double m = k + 1.0;
      const double t = 2.0 * m + ab;
      double b2;
      if (m == 1.0) {
        b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
      } else {
        b2 = 4.0 * m * (m + alpha) * (m + beta) * (m + ab) / (t * t * (t + 1.0) * (t - 1.0));
      }
      J(k, k + 1) = J(k + 1, k) = std::sqrt(b2);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                              std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    r.weights[i] = mu0 * v * v;
  }
  return r;
}

Rule radial_rule(int n, double alpha) {
  // x = 2r - 1 turns r (1-r)^alpha into a multiple of (1-x)^alpha (1+x).
  Rule gj = gauss_jacobi(n, alpha, 1.0);
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  double total = pairwise_sum(gj.weights);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = 0.5 * (gj.nodes[i] + 1.0);
    r.weights[i] = gj.weights[i] / total;
  }
  return r;
}

namespace {

struct PanelRules {
  Rule g7 = gauss_legendre(7);
  Rule g15 = gauss_legendre(15);
};

const PanelRules& panel_rules() {
  static const PanelRules rules;
  return rules;
}

cplx apply(const Rule& rule, const std::function<cplx(double)>& f, double a, double b, double* mass = nullptr) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  cplx s = 0.0;
  double m = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const cplx v = f(mid + half * rule.nodes[i]);
    s += rule.weights[i] * v;
    m += rule.weights[i] * std::abs(v);
  }
  if (mass) *mass = m * std::abs(half);
  return s * half;
}

struct Panel {
  double a, b;
  cplx value;
  double err, mass;
  bool operator<(const Panel& o) const { return err < o.err; }
};

Panel make_panel(const std::function<cplx(double)>& f, double a, double b) {
  const auto& rules = panel_rules();
  Panel p{a, b, 0.0, 0.0, 0.0};
  const cplx coarse = apply(rules.g7, f, a, b);
  p.value = apply(rules.g15, f, a, b, &p.mass);
  p.err = std::abs(p.value - coarse);
  return p;
}

} // namespace

cplx integrate_adaptive(const std::function<cplx(double)>& f, double a, double b, double tol,
                        int max_depth, double* err) {
  // Global bisection: always split the panel with the largest error estimate.
  std::priority_queue<Panel> heap;
  heap.push(make_panel(f, a, b));
  double total_err = heap.top().err, total_mass = heap.top().mass;
  const std::size_t budget = 40 * static_cast<std::size_t>(std::max(max_depth, 1));
  std::vector<Panel> done;
  while (!heap.empty() && total_err > std::max(tol, 1e-14 * total_mass) && heap.size() + done.size() < budget) {
    const Panel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {
      done.push_back(p);
      continue;
    }
    const Panel l = make_panel(f, p.a, m), r = make_panel(f, m, p.b);
    total_err += l.err + r.err - p.err;
    total_mass += l.mass + r.mass - p.mass;
    heap.push(l);
    heap.push(r);
  }
  std::vector<cplx> vals;
  double e = 0.0;
  for (; !heap.empty(); heap.pop()) {
    vals.push_back(heap.top().value);
    e += heap.top().err;
  }
  for (const Panel& p : done) {
    vals.push_back(p.value);
    e += p.err;
  }
  if (e > 1e3 * std::max(tol, 1e-14 * total_mass)) {
    throw Error("quadrature-nonconvergence", "adaptive quadrature error " + std::to_string(e) + " above tolerance");
  }
  if (err) *err = e;
  return pairwise_sum(vals);
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t h = xs.size() / 2;
  return pairwise_sum(xs.first(h)) + pairwise_sum(xs.subspan(h));
}

cplx pairwise_sum(std::span<const cplx> xs) {
  if (xs.size() <= 8) {
    cplx s = 0.0;
    for (const cplx& x : xs) s += x;
    return s;
  }
  const std::size_t h = xs.size() / 2;
  return pairwise_sum(xs.first(h)) + pairwise_sum(xs.subspan(h));
}

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

int worker_count() {
  if (const char* env = std::getenv("PTMU_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(int n, const std::function<void(int)>& body) {
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failure(workers);
  std::vector<int> failed_at(workers, n);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) {
        try {
          body(i);
        } catch (...) {
          failure[w] = std::current_exception();
          failed_at[w] = i;
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  // Rethrow the failure with the lowest index so errors do not depend on scheduling.
  int first = -1;
  for (int w = 0; w < workers; ++w) {
    if (failure[w] && (first < 0 || failed_at[w] < failed_at[first])) first = w;
  }
  if (first >= 0) std::rethrow_exception(failure[first]);
}

} // namespace ptmu
