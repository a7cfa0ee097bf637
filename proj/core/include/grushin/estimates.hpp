// Experiment harness: operator-norm probes, decay-rate fits, and verdicts
// against predicted exponents.
#pragma once

#include "grushin/calculus.hpp"
#include "grushin/geometry.hpp"
#include "grushin/grid.hpp"
#include "grushin/symbol.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace grushin::estimates {

using json = nlohmann::ordered_json;
using calculus::GridFunction;
using calculus::GridSpec;
using calculus::JointSymbol;
using calculus::Symbol1D;

/// Empirical lower bound for an operator norm ||.||_{p->2}.
struct NormEstimate {
  enum class Method { random_probe, power_iteration_on_dual, exhaustive_small };

  double value = 0.0;
  int trials = 0;
  Method method = Method::random_probe;
};

std::string to_string(NormEstimate::Method m);

/// Least-squares fit of log2(value) against the abscissa.
struct FitResult {
  double exponent = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  int n = 0;
};

FitResult fit_exponent(std::span<const double> abscissa,
                       std::span<const double> values);

/// Inputs for opnorm_p_to_2. `apply` runs the operator on the grid; `adjoint`
/// (optional) enables the dual power iteration; `column_norm` (optional)
/// gives the exact L^2 norm of the kernel column for a finite column family,
/// enabling the exhaustive route at p = 1.
struct OpNormRequest {
  GridSpec spec;
  double p = 2.0;
  int trials = 16;
  std::uint64_t seed = 1;
  std::function<GridFunction(const GridFunction&)> apply;
  std::function<GridFunction(const GridFunction&)> adjoint;
  std::function<double(std::size_t)> column_norm;
  std::size_t column_count = 0;
};

NormEstimate opnorm_p_to_2(const OpNormRequest& req);

/// One experiment outcome: inputs, raw series, fit, verdict. Serialization is
/// byte-stable for identical configs and seeds.
struct ExperimentReport {
  std::string experiment;
  json config = json::object();
  json inputs = json::object();
  json hypothesis = json::object();
  std::vector<json> series;
  json fit = json::object();
  json extras = json::object();
  std::string verdict = "PASS";

  bool passed() const { return verdict == "PASS"; }
  json to_json() const;
  void save(const std::filesystem::path& path) const;
  std::string to_csv() const;
};

/// p_{d1,d2} = min{2 d1/(d1+2), 2(d2+1)/(d2+3)}.
double p_threshold(int d1, int d2);

/// || K_{G(L,T)}(., (x,0)) ||_2 through the eigenfunction expansion: a radial
/// quadrature over the second-layer frequency of the diagonal kernel sums.
/// Exact up to quadrature once k_cap covers the symbol support.
double joint_column_norm(const JointSymbol& G, int d1, int d2,
                         std::span<const double> x, double lambda_lo,
                         double lambda_hi, int k_cap, int quad_points = 257);

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

struct RestrictionOptions {
  int d1 = 2, d2 = 2;
  int k_cap = 96;
  int quad_points = 257;
  int x_samples = 33;
  double x_max = 4.0;
  double tolerance = 0.2;        // on the fitted exponent
  bool tail_mode = false;        // measure sum_{l > iota} G_l instead of G_l
  // Grid probes (p > 1 routes); empty spec disables.
  std::optional<GridSpec> probe_spec;
  int trials = 12;
  std::uint64_t seed = 7;
};

/// Decay of ||G_l(L,T)||_{p->2} across the band index l.
ExperimentReport restriction_decay(const Symbol1D& F, double p,
                                   std::span<const int> ells,
                                   const RestrictionOptions& opts);

struct AwayFromOriginOptions {
  int d1 = 2, d2 = 1;
  double R_fraction = 0.125;     // R = R_fraction * |a|, must stay < 1/4
  int k_cap = 160;
  int quad_points = 257;
  int x_samples = 17;
  double tolerance = 0.2;
};

/// Decay of ||F(sqrt L) chi_{B_R(a,b)}||_{p->2} as |a| grows.
ExperimentReport away_from_origin_gain(const Symbol1D& F, double p,
                                       std::span<const double> a_list,
                                       const AwayFromOriginOptions& opts);

struct WeightedPlancherelOptions {
  GridSpec spec;
  int check_ell = 1;             // band used for the two-path agreement check
  double tolerance = 0.3;
  double boundary_warn = 0.01;   // flag when the outer y-shell carries > 1%
};

/// Growth of int | |y-b|^N K_{H_l(L,T)}(., (a,b)) |^2 across l; the kernel
/// column is assembled by applying the band symbol to a grid delta.
ExperimentReport weighted_plancherel(const Symbol1D& H, int N,
                                     std::span<const int> ells,
                                     const geometry::CCPoint& center,
                                     const WeightedPlancherelOptions& opts);

struct PropagationOptions {
  double eps = 0.5;        // margin on the propagation radius
  double kappa = 3.0;      // comparability allowance of the quasi-metric
  double bump_radius = 1.5;
  double budget = 1e-3;    // of ||f||_2
  std::vector<int> refine; // grid sizes for the refinement series
};

/// L^2 mass of cos(t sqrt L) f beyond comparison distance |t|(1+eps)kappa
/// from the support of f.
ExperimentReport propagation_leakage(double t, const GridSpec& base,
                                     const PropagationOptions& opts);

struct HermiteScanOptions {
  int d1 = 2;
  int x_samples = 65;
  double tolerance = 0.2;  // on the [k]-exponent of sup_x H_k
};

/// Pointwise kernel bounds: flat constant, [k]-exponent of sup_x H_k^eta,
/// and the exponential-regime fit on |eta| |x|_inf^2 >= 2 [k].
ExperimentReport hermite_bound_scan(std::span<const int> k_list,
                                    std::span<const double> r_list,
                                    const HermiteScanOptions& opts);

struct SteinTomasOptions {
  int d1 = 2, d2 = 1;
  int k_cap = 160;
  int quad_points = 257;
  int x_samples = 17;
  double tolerance = 0.3;  // on the fitted t-exponent
};

/// ||F(t sqrt L) chi_B||_{p0->2} against ((R/t)^Q / |B_R|)^{1/p0-1/2} ||F||_inf
/// over a sweep of t < R.
ExperimentReport stein_tomas_condition(const Symbol1D& F,
                                       std::span<const double> t_list,
                                       const geometry::Ball& B, double p0,
                                       const SteinTomasOptions& opts);

struct RieszOptions {
  GridSpec spec;
  double budget = 0.05;    // allowed per-function max/min ratio spread - 1
  int corpus = 4;
  std::uint64_t seed = 11;
  bool refine = false;     // also run at doubled resolution
};

/// t-uniformity of ||(1-tL)_+^delta f||_p / ||f||_p over a smooth corpus,
/// with each t-run rescaled through regrid_dilate (sqrt(t)).
ExperimentReport riesz_uniformity(double delta, double p,
                                  std::span<const double> t_list,
                                  const RieszOptions& opts);

// ---------------------------------------------------------------------------
// Probe/corpus helpers (deterministic given the seed)
// ---------------------------------------------------------------------------

GridFunction gaussian_bump(const GridSpec& spec, std::span<const double> x0,
                           std::span<const double> y0, double sigma_x,
                           double sigma_y, std::span<const double> eta0);

/// Smooth, exactly compactly supported bump (exp(-1/(1-s^2)) profile).
GridFunction compact_bump(const GridSpec& spec, double radius_x, double radius_y);

std::vector<GridFunction> smooth_corpus(const GridSpec& spec, int count,
                                        std::uint64_t seed);

/// Pointwise multiplication by the indicator of the comparison ball.
GridFunction restrict_to_ball(const GridFunction& f, const geometry::Ball& B);

/// ||G(L,T) f||^2 through the spectral sum (no synthesis / inverse transform):
/// the discrete counterpart of sum_k chi_l([k])^2 ||P_k^eta g||^2.
double spectral_sq_norm(const JointSymbol& G, const GridFunction& f);

}  // namespace grushin::estimates
