#include "doctest.h"

#include "ptmu/error.hpp"
#include "ptmu/numerics.hpp"

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_gamma.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace ptmu;

TEST_CASE("Gauss-Legendre integrates polynomials up to degree 2n-1") {
  for (int n : {1, 3, 8, 20}) {
    const Rule r = gauss_legendre(n, 0.0, 2.0);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
      CHECK(s == doctest::Approx(std::pow(2.0, k + 1) / (k + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("Gauss-Jacobi weights sum to the Beta-function mass") {
  for (double a : {0.0, 0.5, 1.0, 3.0}) {
    for (double b : {0.0, 1.0}) {
      const Rule r = gauss_jacobi(12, a, b);
      const double total = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
      // int_{-1}^{1} (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)
      const double oracle = std::pow(2.0, a + b + 1.0) * gsl_sf_beta(a + 1.0, b + 1.0);
      CHECK(total == doctest::Approx(oracle).epsilon(1e-12));
    }
  }
}

TEST_CASE("radial rule reproduces moments of r(1-r)^alpha") {
  for (double alpha : {0.0, 1.0, 2.5}) {
    const Rule r = radial_rule(40, alpha);
    const double norm = gsl_sf_beta(2.0, alpha + 1.0);
    for (int k : {0, 1, 5, 30}) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
      CHECK(s == doctest::Approx(gsl_sf_beta(k + 2.0, alpha + 1.0) / norm).epsilon(1e-12));
    }
  }
}

namespace {

double gsl_oracle(double (*f)(double, void*), double a, double b) {
  gsl_integration_workspace* w = gsl_integration_workspace_alloc(2000);
  gsl_function F{f, nullptr};
  double result = 0.0, abserr = 0.0;
  gsl_integration_qags(&F, a, b, 0.0, 1e-13, 2000, w, &result, &abserr);
  gsl_integration_workspace_free(w);
  return result;
}

} // namespace

TEST_CASE("adaptive integration against GSL QAGS") {
  SUBCASE("log singularity at the endpoint") {
    const double oracle = gsl_oracle([](double x, void*) { return std::log(std::sin(x)); }, 0.0, 1.0);
    const cplx v = integrate_adaptive([](double x) { return cplx(std::log(std::sin(x))); }, 0.0, 1.0, 1e-13);
    CHECK(v.real() == doctest::Approx(oracle).epsilon(1e-11));
  }
  SUBCASE("oscillatory complex integrand") {
    const cplx v = integrate_adaptive([](double x) { return std::exp(cplx(0.0, 40.0 * x)); }, 0.0, 1.0, 1e-13);
    const cplx exact = (std::exp(cplx(0.0, 40.0)) - 1.0) / cplx(0.0, 40.0);
    CHECK(std::abs(v - exact) < 1e-12);
  }
  SUBCASE("a non-integrable blow-up exhausts the budget") {
    CHECK_THROWS_AS(integrate_adaptive([](double x) { return cplx(1.0 / x); }, 0.0, 1.0, 1e-12, 10), Error);
  }
}

TEST_CASE("pairwise sum is order-stable and accurate") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> xs(100000);
  for (double& x : xs) x = u(rng);
  long double ref = 0.0L;
  for (double x : xs) ref += x;
  CHECK(std::abs(pairwise_sum(xs) - static_cast<double>(ref)) < 1e-11);
  CHECK(pairwise_sum(xs) == pairwise_sum(xs));
}

TEST_CASE("wrap_angle maps into [0, 2pi)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = u(rng);
    const double w = wrap_angle(t);
    CHECK(w >= 0.0);
    CHECK(w < kTwoPi);
    CHECK(std::abs(std::remainder(w - t, kTwoPi)) < 1e-12);
  }
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> hits(257, 0);
  parallel_for(257, [&](int i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
}
