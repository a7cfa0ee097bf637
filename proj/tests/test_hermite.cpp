#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "grushin/hermite.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace grushin::hermite;
namespace {

constexpr double kPi = std::numbers::pi;

// Independent closed forms of the first normalized Hermite functions,
// expanded by hand from the Rodrigues definition.
double h_closed(int ell, double u) {
  const double g = std::exp(-0.5 * u * u) * std::pow(kPi, -0.25);
  switch (ell) {
    case 0: return g;
    case 1: return std::sqrt(2.0) * u * g;
    case 2: return (2.0 * u * u - 1.0) / std::sqrt(2.0) * g;
    case 3: return (2.0 * u * u * u - 3.0 * u) / std::sqrt(3.0) * g;
    case 4: return (4.0 * std::pow(u, 4) - 12.0 * u * u + 3.0) / (2.0 * std::sqrt(6.0)) * g;
    default: return 0.0;
  }
}

// Trapezoid quadrature oracle on [-X, X], independent of HermiteEvalPlan.
template <typename F>
double quad(F&& f, double X, int n) {
  const double h = 2.0 * X / n;
  double s = 0.5 * (f(-X) + f(X));
  for (int i = 1; i < n; ++i) s += f(-X + i * h);
  return s * h;
}

}  // namespace

TEST_CASE("hermite_1d closed forms") {
  CHECK(hermite_1d(0, 0.0) == doctest::Approx(std::pow(kPi, -0.25)).epsilon(1e-14));
  CHECK(hermite_1d(1, 1.0) ==
        doctest::Approx(std::sqrt(2.0) * std::pow(kPi, -0.25) * std::exp(-0.5))
            .epsilon(1e-14));
  for (int ell = 0; ell <= 4; ++ell)
    for (double u : {-3.1, -0.7, 0.0, 0.4, 1.9, 5.5})
      CHECK(hermite_1d(ell, u) == doctest::Approx(h_closed(ell, u)).epsilon(1e-12));
  CHECK_THROWS_AS(hermite_1d(-1, 0.0), std::invalid_argument);
}

TEST_CASE("hermite_1d quadrature orthonormality") {
  for (int l = 0; l <= 12; ++l)
    for (int m = l; m <= 12; ++m) {
      const double v = quad(
          [&](double u) { return hermite_1d(l, u) * hermite_1d(m, u); }, 12.0, 1200);
      CHECK(v == doctest::Approx(l == m ? 1.0 : 0.0).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("hermite_1d stays finite deep in the tail and at high order") {
  // Forbidden region: value decays far below double range without NaN.
  CHECK(std::isfinite(hermite_1d(100, 50.0)));
  CHECK(std::abs(hermite_1d(100, 50.0)) < 1e-10);
  // u = 100 is inside the oscillatory region for ell = 10^4 (turning point
  // ~ 141), so the value must be of order one despite h_0(100) underflowing.
  const double v = hermite_1d(10000, 100.0);
  CHECK(std::isfinite(v));
  CHECK(std::abs(v) > 1e-8);
  CHECK(std::abs(v) < 1.0);
  // Batch evaluation agrees with the single-order path.
  std::vector<double> vals(10001);
  hermite_values(10000, 100.0, vals);
  CHECK(vals[10000] == doctest::Approx(v).epsilon(1e-13));
}

TEST_CASE("eigenspace_dim") {
  CHECK(eigenspace_dim(0, 1) == 1);
  CHECK(eigenspace_dim(0, 3) == 1);
  CHECK(eigenspace_dim(7, 1) == 1);
  // Explicit enumeration oracle.
  int count = 0;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b)
      for (int c = 0; c <= 2; ++c)
        if (a + b + c == 2) ++count;
  CHECK(count == 6);
  CHECK(eigenspace_dim(2, 3) == count);
  CHECK(MultiIndex::with_length(2, 3).size() == 6);
  CHECK(MultiIndex::with_length(5, 2).size() == eigenspace_dim(5, 2));
  for (const auto& nu : MultiIndex::with_length(9, 3)) CHECK(nu.length_1() == 9);
}

TEST_CASE("scaled_hermite") {
  std::vector<double> zero(2, 0.0);
  MultiIndex nu0(std::vector<int>{0, 0});
  CHECK(scaled_hermite(nu0, 1.0, zero) ==
        doctest::Approx(std::pow(kPi, -0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(scaled_hermite(nu0, 0.0, zero), std::invalid_argument);
  CHECK_THROWS_AS(scaled_hermite(nu0, -1.0, zero), std::invalid_argument);

  // r = 4 covariance: Phi^4_nu(x) = 4^{d1/4} Phi_nu(2x), and 4^{2/4} = 2 here.
  MultiIndex nu(std::vector<int>{2, 1});
  for (double x0 : {-0.9, 0.3, 1.4}) {
    std::vector<double> x{x0, 0.5 * x0};
    std::vector<double> x2{2.0 * x0, x0};
    CHECK(scaled_hermite(nu, 4.0, x) ==
          doctest::Approx(2.0 * scaled_hermite(nu, 1.0, x2)).epsilon(1e-12));
  }

  // Normalization preserved under scaling (1-D quadrature oracle).
  MultiIndex m3(std::vector<int>{3});
  for (double r : {0.5, 2.0}) {
    const double v = quad(
        [&](double u) {
          std::vector<double> x{u};
          const double p = scaled_hermite(m3, r, x);
          return p * p;
        },
        14.0 / std::sqrt(r), 2400);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("projection_kernel basics") {
  const EigenIndex k0(0, 2);
  std::vector<double> x{0.3, -0.2}, a{-1.0, 0.4};
  const double k0v = projection_kernel(k0, 1.0, x, a);
  double nx = x[0] * x[0] + x[1] * x[1], na = a[0] * a[0] + a[1] * a[1];
  CHECK(k0v == doctest::Approx(std::pow(kPi, -1.0) * std::exp(-0.5 * (nx + na)))
                   .epsilon(1e-12));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> p{u(rng), u(rng)}, q{u(rng), u(rng)};
    const EigenIndex k(3, 2);
    CHECK(projection_kernel(k, 1.7, p, q) ==
          doctest::Approx(projection_kernel(k, 1.7, q, p)).epsilon(1e-12));
    // Scaling covariance: K_k^r(x,a) = r^{d1/2} K_k^1(sqrt r x, sqrt r a).
    const double r = 2.3;
    std::vector<double> ps{std::sqrt(r) * p[0], std::sqrt(r) * p[1]};
    std::vector<double> qs{std::sqrt(r) * q[0], std::sqrt(r) * q[1]};
    CHECK(projection_kernel(k, r, p, q) ==
          doctest::Approx(r * projection_kernel(k, 1.0, ps, qs)).epsilon(1e-11));
  }
}

TEST_CASE("projection kernels compose orthogonally (quadrature oracle, d1=1)") {
  const double X = 10.0;
  const int n = 1000;
  for (int k : {0, 2})
    for (int m : {0, 2, 3}) {
      // int K_k(x,a) K_m(a,b) da compared against delta_{km} K_k(x,b).
      const double x = 0.7, b = -0.4, r = 1.3;
      const EigenIndex ek(k, 1), em(m, 1);
      const double got = quad(
          [&](double a) {
            std::vector<double> xv{x}, av{a}, bv{b};
            return projection_kernel(ek, r, xv, av) * projection_kernel(em, r, av, bv);
          },
          X, n);
      std::vector<double> xv{x}, bv{b};
      const double want = (k == m) ? projection_kernel(ek, r, xv, bv) : 0.0;
      CHECK(got == doctest::Approx(want).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("diag_kernel trace and positivity") {
  auto plan = HermiteEvalPlan::uniform(2, 6, 12.0, 96);
  for (int k : {0, 3, 5}) {
    const EigenIndex ek(k, 2);
    CHECK(kernel_trace(ek, 1.0, plan) ==
          doctest::Approx(static_cast<double>(eigenspace_dim(k, 2))).epsilon(1e-8));
    std::vector<double> x{0.4, -1.1};
    CHECK(diag_kernel(ek, 1.0, x) >= 0.0);
    // |K(x,a)| <= H(x)^{1/2} H(a)^{1/2}
    std::vector<double> a{1.2, 0.1};
    CHECK(std::abs(projection_kernel(ek, 1.0, x, a)) <=
          std::sqrt(diag_kernel(ek, 1.0, x) * diag_kernel(ek, 1.0, a)) + 1e-12);
  }
  CHECK(diag_kernel(EigenIndex(0, 2), 1.0, std::vector<double>{0.0, 0.0}) ==
        doctest::Approx(1.0 / kPi).epsilon(1e-13));
}

TEST_CASE("project reproduces and annihilates eigenfunctions") {
  auto plan = HermiteEvalPlan::uniform(1, 8, 10.0, 160);
  const double r = 1.5;
  MultiIndex nu(std::vector<int>{3});
  std::vector<std::complex<double>> g(plan.grid_size());
  for (int i = 0; i < plan.n(); ++i) {
    std::vector<double> x{plan.axis[i]};
    g[i] = scaled_hermite(nu, r, x);
  }
  const auto same = project(EigenIndex(3, 1), r, plan, g);
  const auto other = project(EigenIndex(5, 1), r, plan, g);
  double err_same = 0.0, mass_other = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    err_same = std::max(err_same, std::abs(same[i] - g[i]));
    mass_other = std::max(mass_other, std::abs(other[i]));
  }
  CHECK(err_same < 1e-9);
  CHECK(mass_other < 1e-9);

  // Idempotence of the projection under quadrature.
  const auto twice = project(EigenIndex(3, 1), r, plan, same);
  double err_idem = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    err_idem = std::max(err_idem, std::abs(twice[i] - same[i]));
  CHECK(err_idem < 1e-9);

  CHECK_THROWS_AS(project(EigenIndex(1, 1), -1.0, plan, g), std::invalid_argument);
}

TEST_CASE("gram matrix residual at desk scale") {
  auto plan = HermiteEvalPlan::uniform(2, 8, 10.0, 120);
  CHECK(plan.extent_covers(1.0));
  CHECK(gram_max_residual(plan, 1.0) < 1e-10);
  CHECK(gram_max_residual(plan, 2.5) < 1e-10);
}

TEST_CASE("projection norm bound: fitted constant stable across (k, r)") {
  // ||P_k^eta g||_2 <= C r^{(d1/2)(1/p-1/2)} [k]^{(d1/2)(1/p-1/2)-1/2} ||g||_1
  // at p = 1, d1 = 2; delta probes are extremal, so the fitted constant is
  // sup_x sqrt(H_k^r(x)) over the bound, and it must not drift with (k, r).
  const int d1 = 2;
  double c_min = 1e300, c_max = 0.0;
  for (int k : {1, 3, 6, 10, 15})
    for (double r : {0.5, 1.0, 2.0}) {
      const EigenIndex ki(k, d1);
      const double bk = ki.bracket();
      double sup_h = 0.0;
      for (int i = 0; i <= 64; ++i) {
        std::vector<double> x{14.0 * i / 64.0 / std::sqrt(r), 0.0};
        sup_h = std::max(sup_h, diag_kernel(ki, r, x));
      }
      // Squared bound (r^{1/2} [k]^0)^2 at p = 1, d1 = 2.
      const double bound = r * std::pow(bk, 0.0);
      const double c = std::sqrt(sup_h / bound);
      c_min = std::min(c_min, c);
      c_max = std::max(c_max, c);
    }
  CHECK(c_max / c_min < 3.0);
  MESSAGE("projection bound constant range: [", c_min, ", ", c_max, "]");
}

TEST_CASE("eigen-residual decreases >= 4x per grid doubling") {
  MultiIndex nu(std::vector<int>{3});
  const double r = 1.0;
  double prev = -1.0;
  for (int n : {40, 80, 160}) {
    auto plan = HermiteEvalPlan::uniform(1, 6, 10.0, n);
    const double res = eigen_residual(plan, nu, r);
    if (prev > 0.0) CHECK(prev / res >= 4.0);
    prev = res;
  }
}
