// Hermite functions, scaled oscillator eigenfunctions and eigenspace kernels.
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace grushin::hermite {

/// Multiindex nu in N^{d1}; length_1() is |nu|_1 = sum of entries.
struct MultiIndex {
  std::vector<int> entries;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> e);

  int dim() const { return static_cast<int>(entries.size()); }
  int length_1() const;

  /// All nu in N^{d1} with |nu|_1 == k, in lexicographic order.
  static std::vector<MultiIndex> with_length(int k, int d1);
};

/// Eigenvalue label for the d1-dimensional oscillator: bracket() = 2k + d1.
struct EigenIndex {
  int k = 0;
  int d1 = 1;

  EigenIndex(int k_, int d1_);
  int bracket() const { return 2 * k + d1; }
};

/// h_ell(u), the L^2(R)-normalized Hermite function of order ell.
///
/// Evaluated by the normalized three-term recurrence
///   h_{l+1}(u) = u*sqrt(2/(l+1))*h_l(u) - sqrt(l/(l+1))*h_{l-1}(u)
/// carried on a mantissa/exponent pair so that the starting value
/// exp(-u^2/2) may underflow double range without poisoning later orders.
/// Finite (and accurate) at least for ell <= 1e4, |u| <= 1e2.
double hermite_1d(int ell, double u);

/// All of h_0(u)..h_{ell_max}(u) in one recurrence pass. out.size() >= ell_max+1.
void hermite_values(int ell_max, double u, std::span<double> out);

/// Phi_nu^eta(x) = r^{d1/4} * prod_j h_{nu_j}(sqrt(r) x_j), r = |eta| > 0.
double scaled_hermite(const MultiIndex& nu, double r, std::span<const double> x);

/// |{nu in N^{d1} : |nu|_1 = k}| = C(k+d1-1, d1-1).
std::int64_t eigenspace_dim(int k, int d1);

/// K_k^eta(x,a) = sum_{|nu|_1=k} Phi_nu^eta(x) Phi_nu^eta(a), r = |eta|.
double projection_kernel(const EigenIndex& k, double r, std::span<const double> x,
                         std::span<const double> a);

/// H_k^eta(x) = K_k^eta(x,x) >= 0.
double diag_kernel(const EigenIndex& k, double r, std::span<const double> x);

/// Sampling plan for the x-variable: a uniform tensor grid on [-X, X)^{d1}
/// with per-cell quadrature weight step()^{d1}, plus the truncation order.
struct HermiteEvalPlan {
  int d1 = 1;
  int k_max = 0;
  std::vector<double> axis;  // shared by all d1 axes
  double extent = 0.0;

  static HermiteEvalPlan uniform(int d1, int k_max, double extent, int n);

  int n() const { return static_cast<int>(axis.size()); }
  double step() const { return 2.0 * extent / n(); }
  double cell_weight() const;        // step()^{d1}
  std::size_t grid_size() const;     // n()^{d1}

  /// True when the classical turning point sqrt(2 k_max + 1)/sqrt(r)
  /// lies inside [-extent/2, extent/2].
  bool extent_covers(double r) const;

  /// Coordinates of flat grid index (row-major, last axis fastest).
  void coords(std::size_t flat, std::span<double> out) const;
};

/// P_k^eta g = sum_{|nu|_1=k} (g, Phi_nu^eta) Phi_nu^eta under plan quadrature.
std::vector<std::complex<double>> project(const EigenIndex& k, double r,
                                          const HermiteEvalPlan& plan,
                                          std::span<const std::complex<double>> g);

/// Max |Gram - I| over {Phi_nu : |nu|_1 <= k_max} for scaling r, plan quadrature.
double gram_max_residual(const HermiteEvalPlan& plan, double r);

/// || L^r Phi_nu^r - (2|nu|_1+d1) r Phi_nu^r ||_2 / ||Phi_nu^r||_2 with
/// L^r = -Laplace_x + r^2 |x|^2 discretized by 4th-order central differences.
double eigen_residual(const HermiteEvalPlan& plan, const MultiIndex& nu, double r);

/// Quadrature of diag_kernel over the plan grid (trace of P_k^eta).
double kernel_trace(const EigenIndex& k, double r, const HermiteEvalPlan& plan);

}  // namespace grushin::hermite
