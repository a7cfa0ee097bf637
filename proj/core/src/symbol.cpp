#include "grushin/symbol.hpp"

#include <cmath>
#include <stdexcept>

namespace grushin::calculus {

bool Symbol1D::compact_support() const {
  return std::isfinite(support_lo) && std::isfinite(support_hi);
}

double Symbol1D::support_violation(int samples, double tol) const {
  if (!compact_support()) return 0.0;
  const double W = std::max(std::abs(support_lo), std::abs(support_hi));
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    // Scan [W, 4W] and its mirror.
    const double u = W * (1.0 + 3.0 * (i + 1.0) / samples);
    for (double v : {u, -u}) {
      if (v >= support_lo && v <= support_hi) continue;
      if (std::abs(f(v)) > tol) worst = std::max(worst, std::abs(v));
    }
  }
  return worst;
}

Symbol1D even_bump(double lo, double hi) {
  if (!(0.0 < lo && lo < hi)) throw std::invalid_argument("even_bump: need 0 < lo < hi");
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  Symbol1D s;
  s.f = [mid, half](double lambda) -> cplx_t {
    const double t = (std::abs(lambda) - mid) / half;
    if (t <= -1.0 || t >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
  };
  s.support_lo = -hi;
  s.support_hi = hi;
  s.name = "bump[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
  return s;
}

Symbol1D positive_bump(double lo, double hi) {
  if (!(0.0 < lo && lo < hi))
    throw std::invalid_argument("positive_bump: need 0 < lo < hi");
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  Symbol1D s;
  s.f = [mid, half](double lambda) -> cplx_t {
    const double t = (lambda - mid) / half;
    if (t <= -1.0 || t >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
  };
  s.support_lo = lo;
  s.support_hi = hi;
  s.name = "pbump[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
  return s;
}

Symbol1D indicator(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("indicator: need lo < hi");
  Symbol1D s;
  s.f = [lo, hi](double lambda) -> cplx_t {
    const double a = std::abs(lambda);
    return (a >= lo && a < hi) ? 1.0 : 0.0;
  };
  s.support_lo = -hi;
  s.support_hi = hi;
  s.name = "indicator[" + std::to_string(lo) + "," + std::to_string(hi) + ")";
  return s;
}

Symbol1D constant(cplx_t c) {
  Symbol1D s;
  s.f = [c](double) { return c; };
  s.name = "constant";
  return s;
}

Symbol1D bochner_riesz(double delta, double t) {
  if (delta < 0.0) throw std::invalid_argument("bochner_riesz: delta < 0");
  if (t < 0.0) throw std::invalid_argument("bochner_riesz: t < 0");
  Symbol1D s;
  s.f = [delta, t](double lambda) -> cplx_t {
    const double v = 1.0 - t * lambda * lambda;
    if (v <= 0.0) return 0.0;
    return delta == 0.0 ? 1.0 : std::pow(v, delta);
  };
  if (t > 0.0) {
    s.support_lo = -1.0 / std::sqrt(t);
    s.support_hi = 1.0 / std::sqrt(t);
  }
  s.name = "bochner-riesz(delta=" + std::to_string(delta) + ",t=" + std::to_string(t) + ")";
  return s;
}

Symbol1D cosine(double t) {
  Symbol1D s;
  s.f = [t](double lambda) -> cplx_t { return std::cos(t * lambda); };
  s.name = "cosine(t=" + std::to_string(t) + ")";
  return s;
}

Symbol1D sampled_symbol(std::vector<cplx_t> samples, double extent,
                        const std::string& name) {
  if (samples.size() < 4 || extent <= 0.0)
    throw std::invalid_argument("sampled_symbol: bad table");
  auto tab = std::make_shared<std::vector<cplx_t>>(std::move(samples));
  const int n = static_cast<int>(tab->size());
  const double h = 2.0 * extent / n;
  Symbol1D s;
  s.f = [tab, n, h, extent](double lambda) -> cplx_t {
    const double pos = (lambda + extent) / h;
    if (pos < 1.0 || pos > n - 3.0) return 0.0;  // edges carry no support
    const int i = static_cast<int>(std::floor(pos));
    const double u = pos - i;
    auto at = [&](int q) { return (*tab)[static_cast<std::size_t>(q)]; };
    // Catmull-Rom through the four neighboring samples.
    const cplx_t p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
    return p1 + 0.5 * u * (p2 - p0 +
           u * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
           u * (3.0 * (p1 - p2) + p3 - p0)));
  };
  s.support_lo = -extent;
  s.support_hi = extent;
  s.name = name;
  return s;
}

double DyadicBump::theta(double u) {
  if (u <= 0.5) return 0.0;
  if (u >= 1.0) return 1.0;
  const double s = 2.0 * (u - 0.5);
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

double DyadicBump::chi(double u) const {
  const double a = std::abs(u);
  return theta(a) - theta(0.5 * a);
}

double DyadicBump::tail_above(int iota, double u) const {
  // sum_{l <= iota} chi_l telescopes to 1 - theta(u / 2^{iota+1}) for u > 0.
  if (u <= 0.0) return 0.0;
  return theta(std::ldexp(u, -(iota + 1)));
}

double DyadicBump::chi_cumulative(double u) const {
  if (u <= 0.5) return 0.0;
  const int n = static_cast<int>(cum_.size()) - 1;
  if (u >= 2.0) return cum_[n];
  const double pos = (u - 0.5) / 1.5 * n;
  const int i = std::min(static_cast<int>(pos), n - 1);
  const double frac = pos - i;
  return cum_[i] + frac * (cum_[i + 1] - cum_[i]);
}

DyadicBump::DyadicBump() {
  // Cumulative integral of chi over [1/2, 2], Simpson per knot interval.
  const int n = 16384;
  cum_.resize(n + 1);
  cum_[0] = 0.0;
  const double h = 1.5 / n;
  for (int i = 0; i < n; ++i) {
    const double a = 0.5 + i * h;
    cum_[i + 1] =
        cum_[i] + h / 6.0 * (chi(a) + 4.0 * chi(a + 0.5 * h) + chi(a + h));
  }
  for (int i = 0; i <= 200; ++i) {
    const double lambda = std::pow(10.0, -4.0 + 8.0 * i / 200.0);
    double s = 0.0;
    for (int j = -20; j <= 20; ++j) s += chi_j(j, lambda);
    if (std::abs(s - 1.0) > 1e-10)
      throw std::logic_error("DyadicBump: partition of unity check failed");
  }
}

JointSymbol JointSymbol::from_multiplier(const Symbol1D& F) {
  JointSymbol G;
  auto f = F.f;
  G.g = [f](double lambda, double) -> cplx_t {
    return lambda < 0.0 ? cplx_t{0.0} : f(std::sqrt(lambda));
  };
  if (F.compact_support()) {
    const double m = std::max(std::abs(F.support_lo), std::abs(F.support_hi));
    G.lambda_sup = m * m;
  }
  G.name = F.name + "(sqrt)";
  return G;
}

JointSymbol band_truncate(const Symbol1D& F, int ell,
                          std::shared_ptr<const DyadicBump> bump) {
  if (!bump) throw std::invalid_argument("band_truncate: null bump");
  JointSymbol G = JointSymbol::from_multiplier(F);
  auto base = G.g;
  G.g = [base, bump, ell](double lambda, double r) -> cplx_t {
    if (r == 0.0) return 0.0;
    return base(lambda, r) * bump->chi_j(ell, lambda / r);
  };
  G.bracket_sup = std::ldexp(1.0, ell + 1);
  G.name = F.name + "*chi_" + std::to_string(ell);
  return G;
}

JointSymbol band_tail(const Symbol1D& F, int iota,
                      std::shared_ptr<const DyadicBump> bump) {
  if (!bump) throw std::invalid_argument("band_tail: null bump");
  JointSymbol G = JointSymbol::from_multiplier(F);
  auto base = G.g;
  G.g = [base, bump, iota](double lambda, double r) -> cplx_t {
    if (r == 0.0) return 0.0;
    return base(lambda, r) * bump->tail_above(iota, lambda / r);
  };
  G.name = F.name + "*tail_" + std::to_string(iota);
  return G;
}

}  // namespace grushin::calculus
