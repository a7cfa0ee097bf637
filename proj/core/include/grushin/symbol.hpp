// One-variable multipliers F(lambda), joint symbols G(lambda, r), and the
// dyadic partition of unity.
#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace grushin::calculus {

using cplx_t = std::complex<double>;

/// A one-variable multiplier with declared support [support_lo, support_hi].
struct Symbol1D {
  std::function<cplx_t(double)> f;
  double support_lo = -std::numeric_limits<double>::infinity();
  double support_hi = std::numeric_limits<double>::infinity();
  std::string name = "symbol";

  cplx_t operator()(double lambda) const { return f(lambda); }
  bool compact_support() const;

  /// Largest |lambda| sampled outside the declared support with |F| > tol.
  double support_violation(int samples = 256, double tol = 1e-12) const;
};

/// Smooth even bump: exp(-1/(1-s^2)) profile mapped onto [lo, hi], extended
/// evenly to [-hi, -lo]. Vanishes identically outside.
Symbol1D even_bump(double lo, double hi);

/// One-sided variant supported exactly in [lo, hi], 0 < lo < hi.
Symbol1D positive_bump(double lo, double hi);

/// Indicator of [lo, hi) (in |lambda|).
Symbol1D indicator(double lo, double hi);

/// Constant symbol c on all of R.
Symbol1D constant(cplx_t c);

/// lambda -> (1 - t lambda^2)_+^delta, the Bochner-Riesz symbol in the
/// sqrt(L) variable: applying it through the multiplier calculus realizes
/// (1 - t L)_+^delta.
Symbol1D bochner_riesz(double delta, double t);

/// lambda -> cos(t lambda), the half-wave cosine symbol.
Symbol1D cosine(double t);

/// Multiplier backed by uniform samples over [-extent, extent] with
/// Catmull-Rom interpolation; used for transform-produced symbols.
Symbol1D sampled_symbol(std::vector<cplx_t> samples, double extent,
                        const std::string& name);

/// Smooth even dyadic bump chi supported in [-2,-1/2] u [1/2,2] with
/// sum_j chi(lambda/2^j) = 1 for lambda != 0. chi_j(lambda) = chi(lambda/2^j).
class DyadicBump {
 public:
  DyadicBump();  // verifies the partition on log-spaced samples to 1e-10

  double chi(double u) const;
  double chi_j(int j, double u) const { return chi(std::ldexp(u, -j)); }
  /// sum_{l > iota} chi_l(u) for u > 0, in closed telescoped form.
  double tail_above(int iota, double u) const;
  /// int_0^u chi(s) ds (tabulated; chi vanishes outside [1/2, 2]).
  double chi_cumulative(double u) const;

 private:
  static double theta(double u);  // smooth step, 0 below 1/2, 1 above 1
  std::vector<double> cum_;       // cumulative integral knots over [1/2, 2]
};

/// A two-variable joint multiplier G(lambda, r). Band-truncated symbols
/// vanish at r = 0 by convention.
struct JointSymbol {
  std::function<cplx_t(double, double)> g;
  /// sup of the lambda-support (may be +inf); drives k_max coverage checks.
  double lambda_sup = std::numeric_limits<double>::infinity();
  /// sup of lambda/r over the support (for band symbols: 2^{l+1}); +inf if none.
  double bracket_sup = std::numeric_limits<double>::infinity();
  std::string name = "joint";

  cplx_t operator()(double lambda, double r) const { return g(lambda, r); }

  /// Lift of a 1-variable multiplier: G(lambda, r) = F(sqrt(lambda)).
  static JointSymbol from_multiplier(const Symbol1D& F);
};

/// G_l(lambda, r) = F(sqrt(lambda)) chi_l(lambda/r) for r != 0, 0 at r = 0.
JointSymbol band_truncate(const Symbol1D& F, int ell,
                          std::shared_ptr<const DyadicBump> bump);

/// sum_{l > iota} G_l(lambda, r), vanishing at r = 0.
JointSymbol band_tail(const Symbol1D& F, int iota,
                      std::shared_ptr<const DyadicBump> bump);

}  // namespace grushin::calculus
