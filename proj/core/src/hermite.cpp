#include "grushin/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace grushin::hermite {

namespace {

constexpr double kPi = std::numbers::pi;

// Rescale thresholds for the mantissa/exponent recurrence carry.
constexpr double kTiny = 0x1p-500;
constexpr double kHuge = 0x1p+500;
constexpr int kShift = 500;

struct ScaledPair {
  double prev = 0.0;  // h_{l-1} mantissa
  double cur = 0.0;   // h_l mantissa
  int exp2 = 0;       // shared binary exponent

  void renormalize() {
    const double m = std::max(std::abs(prev), std::abs(cur));
    if (m == 0.0) return;
    if (m < kTiny) {
      prev = std::ldexp(prev, kShift);
      cur = std::ldexp(cur, kShift);
      exp2 -= kShift;
    } else if (m > kHuge) {
      prev = std::ldexp(prev, -kShift);
      cur = std::ldexp(cur, -kShift);
      exp2 += kShift;
    }
  }

  double value() const { return std::ldexp(cur, exp2); }
};

// h_0(u) = pi^{-1/4} exp(-u^2/2), split into mantissa and binary exponent so
// arguments far in the Gaussian tail stay representable.
ScaledPair seed(double u) {
  const double lg = -0.25 * std::log(kPi) - 0.5 * u * u;
  const double e = lg / std::numbers::ln2;
  ScaledPair p;
  p.exp2 = static_cast<int>(std::floor(e));
  p.cur = std::exp2(e - p.exp2);
  p.prev = 0.0;
  return p;
}

void step_up(ScaledPair& p, int ell_from, double u) {
  const double l1 = static_cast<double>(ell_from + 1);
  const double next =
      u * std::sqrt(2.0 / l1) * p.cur - std::sqrt(ell_from / l1) * p.prev;
  p.prev = p.cur;
  p.cur = next;
  p.renormalize();
}

std::int64_t binomial(std::int64_t n, std::int64_t r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  std::int64_t v = 1;
  for (std::int64_t i = 1; i <= r; ++i) v = v * (n - r + i) / i;
  return v;
}

}  // namespace

MultiIndex::MultiIndex(std::vector<int> e) : entries(std::move(e)) {
  for (int v : entries)
    if (v < 0) throw std::invalid_argument("MultiIndex: negative entry");
}

int MultiIndex::length_1() const {
  int s = 0;
  for (int v : entries) s += v;
  return s;
}

std::vector<MultiIndex> MultiIndex::with_length(int k, int d1) {
  if (k < 0 || d1 < 1) throw std::invalid_argument("with_length: bad k or d1");
  std::vector<MultiIndex> out;
  std::vector<int> nu(d1, 0);
  nu[0] = k;
  for (;;) {
    out.emplace_back(nu);
    if (d1 == 1) break;
    const int tail = nu[d1 - 1];
    int i = d1 - 2;
    while (i >= 0 && nu[i] == 0) --i;
    if (i < 0) break;
    --nu[i];
    nu[i + 1] = tail + 1;
    if (i + 1 != d1 - 1) nu[d1 - 1] = 0;
    for (int j = i + 2; j < d1 - 1; ++j) nu[j] = 0;
  }
  return out;
}

EigenIndex::EigenIndex(int k_, int d1_) : k(k_), d1(d1_) {
  if (k < 0) throw std::invalid_argument("EigenIndex: k < 0");
  if (d1 < 1) throw std::invalid_argument("EigenIndex: d1 < 1");
}

double hermite_1d(int ell, double u) {
  if (ell < 0) throw std::invalid_argument("hermite_1d: ell < 0");
  ScaledPair p = seed(u);
  for (int l = 0; l < ell; ++l) step_up(p, l, u);
  return p.value();
}

void hermite_values(int ell_max, double u, std::span<double> out) {
  if (ell_max < 0) throw std::invalid_argument("hermite_values: ell_max < 0");
  if (out.size() < static_cast<std::size_t>(ell_max) + 1)
    throw std::invalid_argument("hermite_values: output too small");
  ScaledPair p = seed(u);
  out[0] = p.value();
  for (int l = 0; l < ell_max; ++l) {
    step_up(p, l, u);
    out[l + 1] = p.value();
  }
}

double scaled_hermite(const MultiIndex& nu, double r, std::span<const double> x) {
  if (r <= 0.0) throw std::invalid_argument("scaled_hermite: r <= 0");
  if (nu.dim() != static_cast<int>(x.size()))
    throw std::invalid_argument("scaled_hermite: dimension mismatch");
  const double sr = std::sqrt(r);
  double v = std::pow(r, 0.25 * nu.dim());
  for (int j = 0; j < nu.dim(); ++j) v *= hermite_1d(nu.entries[j], sr * x[j]);
  return v;
}

std::int64_t eigenspace_dim(int k, int d1) {
  if (k < 0 || d1 < 1) throw std::invalid_argument("eigenspace_dim: bad args");
  return binomial(k + d1 - 1, d1 - 1);
}

namespace {

// Per-axis tables h_ell(sqrt(r)*p) for ell <= k at each requested point.
std::vector<std::vector<double>> axis_tables(int k, double r,
                                             std::span<const double> pts) {
  const double sr = std::sqrt(r);
  std::vector<std::vector<double>> t(pts.size(), std::vector<double>(k + 1));
  for (std::size_t i = 0; i < pts.size(); ++i)
    hermite_values(k, sr * pts[i], t[i]);
  return t;
}

}  // namespace

double projection_kernel(const EigenIndex& ki, double r, std::span<const double> x,
                         std::span<const double> a) {
  if (r <= 0.0) throw std::invalid_argument("projection_kernel: r <= 0");
  const int d1 = ki.d1;
  if (static_cast<int>(x.size()) != d1 || static_cast<int>(a.size()) != d1)
    throw std::invalid_argument("projection_kernel: dimension mismatch");
  const auto tx = axis_tables(ki.k, r, x);
  const auto ta = axis_tables(ki.k, r, a);
  double sum = 0.0;
  for (const auto& nu : MultiIndex::with_length(ki.k, d1)) {
    double term = 1.0;
    for (int j = 0; j < d1; ++j)
      term *= tx[j][nu.entries[j]] * ta[j][nu.entries[j]];
    sum += term;
  }
  return std::pow(r, 0.5 * d1) * sum;
}

double diag_kernel(const EigenIndex& ki, double r, std::span<const double> x) {
  if (r <= 0.0) throw std::invalid_argument("diag_kernel: r <= 0");
  const int d1 = ki.d1;
  if (static_cast<int>(x.size()) != d1)
    throw std::invalid_argument("diag_kernel: dimension mismatch");
  const auto tx = axis_tables(ki.k, r, x);
  double sum = 0.0;
  for (const auto& nu : MultiIndex::with_length(ki.k, d1)) {
    double term = 1.0;
    for (int j = 0; j < d1; ++j) {
      const double h = tx[j][nu.entries[j]];
      term *= h * h;
    }
    sum += term;
  }
  return std::pow(r, 0.5 * d1) * sum;
}

HermiteEvalPlan HermiteEvalPlan::uniform(int d1, int k_max, double extent, int n) {
  if (d1 < 1 || d1 > 3) throw std::invalid_argument("HermiteEvalPlan: d1 not in 1..3");
  if (k_max < 0) throw std::invalid_argument("HermiteEvalPlan: k_max < 0");
  if (n < 2 || extent <= 0.0) throw std::invalid_argument("HermiteEvalPlan: empty grid");
  HermiteEvalPlan p;
  p.d1 = d1;
  p.k_max = k_max;
  p.extent = extent;
  const double h = 2.0 * extent / n;
  p.axis.resize(n);
  for (int i = 0; i < n; ++i) p.axis[i] = -extent + i * h;
  return p;
}

double HermiteEvalPlan::cell_weight() const {
  return std::pow(step(), d1);
}

std::size_t HermiteEvalPlan::grid_size() const {
  std::size_t s = 1;
  for (int j = 0; j < d1; ++j) s *= axis.size();
  return s;
}

bool HermiteEvalPlan::extent_covers(double r) const {
  const double turning = std::sqrt(2.0 * k_max + 1.0) / std::sqrt(r);
  return turning <= 0.5 * extent;
}

void HermiteEvalPlan::coords(std::size_t flat, std::span<double> out) const {
  const std::size_t n_ = axis.size();
  for (int j = d1 - 1; j >= 0; --j) {
    out[j] = axis[flat % n_];
    flat /= n_;
  }
}

namespace {

// Full per-axis value matrix H[ell][i] = h_ell(sqrt(r) axis_i).
std::vector<double> axis_matrix(const HermiteEvalPlan& plan, int ell_max, double r) {
  const int n = plan.n();
  std::vector<double> H(static_cast<std::size_t>(ell_max + 1) * n);
  const double sr = std::sqrt(r);
  std::vector<double> col(ell_max + 1);
  for (int i = 0; i < n; ++i) {
    hermite_values(ell_max, sr * plan.axis[i], col);
    for (int l = 0; l <= ell_max; ++l) H[static_cast<std::size_t>(l) * n + i] = col[l];
  }
  return H;
}

}  // namespace

std::vector<std::complex<double>> project(const EigenIndex& ki, double r,
                                          const HermiteEvalPlan& plan,
                                          std::span<const std::complex<double>> g) {
  if (r <= 0.0) throw std::invalid_argument("project: r <= 0");
  if (plan.axis.empty()) throw std::invalid_argument("project: empty grid");
  if (g.size() != plan.grid_size())
    throw std::invalid_argument("project: sample count mismatch");
  const int d1 = plan.d1;
  const int n = plan.n();
  const auto H = axis_matrix(plan, ki.k, r);
  const double w = plan.cell_weight();
  const double scale = std::pow(r, 0.25 * d1);

  const auto nus = MultiIndex::with_length(ki.k, d1);
  std::vector<std::complex<double>> out(g.size(), 0.0);
  std::vector<std::size_t> idx(d1);
  for (const auto& nu : nus) {
    // c_nu = w * sum_i g_i * Phi_nu(x_i)
    std::complex<double> c = 0.0;
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
      std::size_t rem = flat;
      double phi = scale;
      for (int j = d1 - 1; j >= 0; --j) {
        phi *= H[static_cast<std::size_t>(nu.entries[j]) * n + rem % n];
        rem /= n;
      }
      c += g[flat] * phi;
    }
    c *= w;
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
      std::size_t rem = flat;
      double phi = scale;
      for (int j = d1 - 1; j >= 0; --j) {
        phi *= H[static_cast<std::size_t>(nu.entries[j]) * n + rem % n];
        rem /= n;
      }
      out[flat] += c * phi;
    }
  }
  return out;
}

double gram_max_residual(const HermiteEvalPlan& plan, double r) {
  const int L = plan.k_max;
  const int n = plan.n();
  const auto H = axis_matrix(plan, L, r);
  const double h = plan.step();
  const double rq = std::sqrt(r);
  // 1-D Gram of the scaled functions: g1[l][m] = sqrt(r)*h * sum_i H[l][i] H[m][i].
  std::vector<double> g1(static_cast<std::size_t>(L + 1) * (L + 1));
  for (int l = 0; l <= L; ++l)
    for (int m = l; m <= L; ++m) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        s += H[static_cast<std::size_t>(l) * n + i] * H[static_cast<std::size_t>(m) * n + i];
      s *= rq * h;
      g1[static_cast<std::size_t>(l) * (L + 1) + m] = s;
      g1[static_cast<std::size_t>(m) * (L + 1) + l] = s;
    }
  // The full Gram is the d1-fold tensor product of g1 restricted to |nu|_1 <= k_max.
  std::vector<MultiIndex> all;
  for (int k = 0; k <= plan.k_max; ++k)
    for (auto& nu : MultiIndex::with_length(k, plan.d1)) all.push_back(std::move(nu));
  double worst = 0.0;
  for (std::size_t p = 0; p < all.size(); ++p)
    for (std::size_t q = p; q < all.size(); ++q) {
      double v = 1.0;
      for (int j = 0; j < plan.d1; ++j)
        v *= g1[static_cast<std::size_t>(all[p].entries[j]) * (L + 1) + all[q].entries[j]];
      const double target = (p == q) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(v - target));
    }
  return worst;
}

double eigen_residual(const HermiteEvalPlan& plan, const MultiIndex& nu, double r) {
  if (nu.dim() != plan.d1) throw std::invalid_argument("eigen_residual: dim mismatch");
  const int n = plan.n();
  const double h = plan.step();
  const std::size_t N = plan.grid_size();

  const int ell_max = *std::max_element(nu.entries.begin(), nu.entries.end());
  const auto H = axis_matrix(plan, ell_max, r);
  const double scale = std::pow(r, 0.25 * plan.d1);

  std::vector<double> u(N);
  std::vector<double> xs(plan.d1);
  for (std::size_t flat = 0; flat < N; ++flat) {
    std::size_t rem = flat;
    double phi = scale;
    for (int j = plan.d1 - 1; j >= 0; --j) {
      phi *= H[static_cast<std::size_t>(nu.entries[j]) * n + rem % n];
      rem /= n;
    }
    u[flat] = phi;
  }

  // L^r u = -Laplace u + r^2 |x|^2 u, 4th-order central stencil, wrap indexing
  // (the eigenfunction is negligible at the boundary when the extent covers r).
  const double lambda = (2.0 * nu.length_1() + plan.d1) * r;
  double num = 0.0, den = 0.0;
  std::vector<std::size_t> strides(plan.d1);
  {
    std::size_t s = 1;
    for (int j = plan.d1 - 1; j >= 0; --j) {
      strides[j] = s;
      s *= n;
    }
  }
  const double c0 = -5.0 / 2.0, c1 = 4.0 / 3.0, c2 = -1.0 / 12.0;
  for (std::size_t flat = 0; flat < N; ++flat) {
    plan.coords(flat, xs);
    double lap = 0.0;
    std::size_t rem = flat;
    for (int j = plan.d1 - 1; j >= 0; --j) {
      const int i = static_cast<int>(rem % n);
      rem /= n;
      const std::size_t base = flat - static_cast<std::size_t>(i) * strides[j];
      auto at = [&](int off) {
        const int q = ((i + off) % n + n) % n;
        return u[base + static_cast<std::size_t>(q) * strides[j]];
      };
      lap += (c2 * at(-2) + c1 * at(-1) + c0 * at(0) + c1 * at(1) + c2 * at(2)) / (h * h);
    }
    double x2 = 0.0;
    for (int j = 0; j < plan.d1; ++j) x2 += xs[j] * xs[j];
    const double Lu = -lap + r * r * x2 * u[flat];
    const double res = Lu - lambda * u[flat];
    num += res * res;
    den += u[flat] * u[flat];
  }
  return std::sqrt(num / den);
}

double kernel_trace(const EigenIndex& ki, double r, const HermiteEvalPlan& plan) {
  if (ki.d1 != plan.d1) throw std::invalid_argument("kernel_trace: dim mismatch");
  const int n = plan.n();
  const auto H = axis_matrix(plan, ki.k, r);
  const double h = plan.step();
  const double rq = std::sqrt(r);
  // Tensor-factored trace: 1-D moments m[l] = sqrt(r)*h*sum_i H[l][i]^2.
  std::vector<double> m(ki.k + 1);
  for (int l = 0; l <= ki.k; ++l) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = H[static_cast<std::size_t>(l) * n + i];
      s += v * v;
    }
    m[l] = rq * h * s;
  }
  double tr = 0.0;
  for (const auto& nu : MultiIndex::with_length(ki.k, plan.d1)) {
    double t = 1.0;
    for (int j = 0; j < plan.d1; ++j) t *= m[nu.entries[j]];
    tr += t;
  }
  return tr;
}

}  // namespace grushin::hermite
