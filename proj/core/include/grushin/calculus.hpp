// Joint functional calculus of (L, T) on sampled grid functions: Fourier
// transform in y, Hermite expansion in x per retained frequency.
#pragma once

#include "grushin/fourier.hpp"
#include "grushin/grid.hpp"
#include "grushin/symbol.hpp"

#include <vector>

namespace grushin::calculus {

/// Truncation diagnostics of one calculus application. Energies are
/// continuum-normalized; tail_energy is the input energy left outside the
/// retained Hermite range {|nu|_1 <= k_max} summed over frequencies.
struct TailReport {
  double input_energy = 0.0;
  double tail_energy = 0.0;
  double worst_slice_fraction = 0.0;
  int uncovered_slices = 0;  // slices where the symbol support outruns k_max
  int n_slices = 0;

  double fraction() const {
    return input_energy > 0.0 ? tail_energy / input_energy : 0.0;
  }
};

struct ApplyOptions {
  double tail_tol = 1e-3;    // of input energy
  bool fail_on_tail = true;  // throw when fraction() > tail_tol
};

struct ApplyResult {
  GridFunction out;
  TailReport tail;
};

/// (G(L,T) f): for every grid frequency eta != 0 expands the slice in the
/// scaled Hermite basis, multiplies the k-th eigenspace by G([k]|eta|, |eta|),
/// and resums. The eta = 0 plane carries G(., 0) as a multiplier of -Laplace_x.
ApplyResult apply_joint(const JointSymbol& G, const GridFunction& f,
                        const ApplyOptions& opts = {});

/// F(sqrt(L)) f, i.e. apply_joint with the r-independent lift of F.
ApplyResult apply_multiplier(const Symbol1D& F, const GridFunction& f,
                             const ApplyOptions& opts = {});

/// cos(t sqrt(L)) f.
ApplyResult cosine_propagate(double t, const GridFunction& f,
                             const ApplyOptions& opts = {});

/// L f via the spectral route (G(lambda, r) = lambda).
ApplyResult apply_L(const GridFunction& f, const ApplyOptions& opts = {});

/// L f by direct second-order finite differences of -Laplace_x - |x|^2 Laplace_y
/// (wrap indexing); cross-check path for apply_L.
GridFunction apply_L_fd(const GridFunction& f);

struct RegridResult {
  GridFunction out;
  std::size_t clipped = 0;  // output nodes whose source fell outside the extent
};

/// f o delta_t sampled by separable Catmull-Rom interpolation.
RegridResult regrid_dilate(double t, const GridFunction& f);

/// Fine 1-D sampling parameters for symbol-side transforms.
struct FineGrid {
  int n = 1 << 16;
  double extent = 0.0;  // 0: choose 4x the declared support, at least 16
};

struct DyadicPieceResult {
  Symbol1D symbol;
  bool aliasing = false;
};

/// F^{(j)} = (F^ chi_j)^v computed on a fine 1-D grid.
DyadicPieceResult dyadic_piece(const Symbol1D& F, int j, const DyadicBump& bump,
                               const FineGrid& fg = {});

struct SobolevResult {
  double value = 0.0;
  bool aliasing = false;
};

/// ((2pi)^{-1} int (1+|xi|^2)^s |F^(xi)|^2 dxi)^{1/2}; s = 0 gives ||F||_2.
SobolevResult sobolev_norm(const Symbol1D& F, double s, const FineGrid& fg = {});

struct SlocResult {
  double value = 0.0;
  double arg_t = 1.0;
  bool aliasing = false;
};

/// max over t_grid of || eta_bump * F(t .) ||_{L^2_s}; a lower approximation
/// of sup_{t>0}.
SlocResult sloc_norm(const Symbol1D& F, double s, const Symbol1D& eta_bump,
                     std::span<const double> t_grid, const FineGrid& fg = {});

/// Log-spaced grid with `per_decade` points per decade over [lo, hi].
std::vector<double> log_grid(double lo, double hi, int per_decade);

/// Largest k whose scaled Hermite mode at frequency magnitude r is
/// resolvable on the x-grid (may be -1); apply_joint truncates there.
int resolvable_k(const GridSpec& spec, double r);

/// Smallest k with (2k+d1) * (pi/y_extent) > 4 * lambda_sup, clamped to cap.
int recommended_k_max(const GridSpec& spec, double lambda_sup, int cap = 64);

}  // namespace grushin::calculus
