// Acceptance suite: quantitative checks of the calculus and geometry at desk
// scale, one pass/fail line per criterion.
#include "grushin/calculus.hpp"
#include "grushin/estimates.hpp"
#include "grushin/geometry.hpp"
#include "grushin/hermite.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace calc = grushin::calculus;
namespace est = grushin::estimates;
namespace geo = grushin::geometry;
namespace hm = grushin::hermite;

namespace {

const calc::ApplyOptions kNoFail{.tail_tol = 1.0, .fail_on_tail = false};
int g_failures = 0;

void report(int id, bool pass, const std::string& what, double seconds) {
  std::printf("[%s] criterion %d: %s (%.1fs)\n", pass ? "PASS" : "FAIL", id,
              what.c_str(), seconds);
  if (!pass) ++g_failures;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

// --------------------------------------------------------------------------
// 1. Hermite suite: d1 = 2, k_max = 12.
// --------------------------------------------------------------------------
void criterion_1() {
  Timer timer;
  const int d1 = 2, kmax = 12;
  const double X = 2.5 * std::sqrt(2.0 * kmax + 1.0);

  auto plan = hm::HermiteEvalPlan::uniform(d1, kmax, X, 12 * kmax);
  const double gram = std::max(hm::gram_max_residual(plan, 1.0),
                               hm::gram_max_residual(plan, 2.0));

  hm::MultiIndex nu(std::vector<int>{3, 1});
  double prev = -1.0, min_ratio = 1e300;
  for (int n : {48, 96, 192}) {
    auto p = hm::HermiteEvalPlan::uniform(d1, kmax, 10.0, n);
    const double res = hm::eigen_residual(p, nu, 1.3);
    if (prev > 0.0) min_ratio = std::min(min_ratio, prev / res);
    prev = res;
  }

  double trace_rel = 0.0;
  for (int k : {0, 5, 12}) {
    const double tr = hm::kernel_trace(hm::EigenIndex(k, d1), 1.0, plan);
    const double dim = static_cast<double>(hm::eigenspace_dim(k, d1));
    trace_rel = std::max(trace_rel, std::abs(tr - dim) / dim);
  }

  const double secs = timer.elapsed();
  const bool pass =
      gram <= 1e-8 && min_ratio >= 4.0 && trace_rel <= 1e-6 && secs <= 30.0;
  std::ostringstream os;
  os << "hermite suite: gram " << gram << " <= 1e-8, eigen-residual ratio "
     << min_ratio << " >= 4, trace rel " << trace_rel << " <= 1e-6";
  report(1, pass, os.str(), secs);
}

// --------------------------------------------------------------------------
// 2. Joint-calculus suite: (1,1), 64x64, k_max = 32.
// --------------------------------------------------------------------------
void criterion_2() {
  Timer timer;
  calc::GridSpec s;
  s.d1 = 1;
  s.d2 = 1;
  s.n_x = 64;
  s.n_y = 64;
  s.x_extent = 16.0;
  s.y_extent = 16.0;
  s.k_max = 32;

  // Pure y-mode times an x-Gaussian: the eta = 0 plane is exactly empty.
  calc::GridFunction f = calc::GridFunction::zeros(s);
  const double eta0 = s.eta(8);
  for (int i = 0; i < s.n_x; ++i) {
    const double gx = std::exp(-0.5 * s.x_coord(i) * s.x_coord(i));
    for (int j = 0; j < s.n_y; ++j) {
      const double ph = eta0 * s.y_coord(j);
      f.values[static_cast<std::size_t>(i) * s.n_y + j] =
          gx * calc::cplx{std::cos(ph), std::sin(ph)};
    }
  }

  auto bump = std::make_shared<const calc::DyadicBump>();
  const calc::Symbol1D F = calc::even_bump(0.5, 2.0);

  const auto G2 = calc::band_truncate(F, 2, bump);
  const double direct = std::pow(calc::apply_joint(G2, f, kNoFail).out.norm2(), 2);
  const double spectral = est::spectral_sq_norm(G2, f);
  const double plancherel_rel = std::abs(direct - spectral) / spectral;

  const auto whole = calc::apply_multiplier(F, f, kNoFail);
  calc::GridFunction sum = calc::GridFunction::zeros(s);
  for (int ell = 0; ell <= 8; ++ell) {
    const auto piece = calc::apply_joint(calc::band_truncate(F, ell, bump), f, kNoFail);
    for (std::size_t i = 0; i < sum.values.size(); ++i)
      sum.values[i] += piece.out.values[i];
  }
  double dn = 0.0;
  for (std::size_t i = 0; i < sum.values.size(); ++i)
    dn += std::norm(sum.values[i] - whole.out.values[i]);
  const double recon_rel = std::sqrt(dn * s.cell_volume()) / whole.out.norm2();
  const double recon_budget = std::max(whole.tail.fraction(), 1e-8);

  const auto inner = calc::apply_joint(calc::band_truncate(F, 4, bump), f, kNoFail);
  const auto outer =
      calc::apply_joint(calc::band_truncate(F, 2, bump), inner.out, kNoFail);
  const double disjoint = outer.out.norm2() / f.norm2();

  const bool pass =
      plancherel_rel <= 1e-8 && recon_rel <= recon_budget && disjoint <= 1e-10;
  std::ostringstream os;
  os << "joint calculus: plancherel rel " << plancherel_rel
     << " <= 1e-8, reconstruction " << recon_rel << " <= budget " << recon_budget
     << ", band disjointness " << disjoint << " <= 1e-10";
  report(2, pass, os.str(), timer.elapsed());
}

// --------------------------------------------------------------------------
// 3. Restriction decay: (2,2), p = 1 slope <= -0.8, p = 2 control ~ 0.
// --------------------------------------------------------------------------
void criterion_3() {
  Timer timer;
  const calc::Symbol1D F = calc::even_bump(0.25, 4.0);
  std::vector<int> ells{1, 2, 3, 4, 5};

  est::RestrictionOptions opts;
  opts.d1 = 2;
  opts.d2 = 2;
  opts.k_cap = 96;
  opts.x_samples = 33;
  opts.tolerance = 0.2;
  const auto r1 = est::restriction_decay(F, 1.0, ells, opts);
  const double slope1 = r1.fit["exponent"].get<double>();

  const auto r2 = est::restriction_decay(F, 2.0, ells, opts);
  const double slope2 = r2.fit["exponent"].get<double>();

  const double secs = timer.elapsed();
  const bool pass = slope1 <= -0.8 && std::abs(slope2) <= 0.1 &&
                    r1.verdict == "PASS" && secs <= 600.0;
  std::ostringstream os;
  os << "restriction decay: p=1 slope " << slope1 << " <= -0.8, p=2 slope "
     << slope2 << " in [-0.1, 0.1]";
  report(3, pass, os.str(), secs);
}

// --------------------------------------------------------------------------
// 4. Weighted Plancherel: d2 = 1, N in {0,1}, exponent within 0.3 of 2N - d2.
// --------------------------------------------------------------------------
void criterion_4() {
  Timer timer;
  est::WeightedPlancherelOptions opts;
  calc::GridSpec s;
  s.d1 = 2;
  s.d2 = 1;
  s.n_x = 64;
  s.n_y = 1024;
  s.x_extent = 10.0;
  s.y_extent = 512.0;
  s.k_max = 32;
  opts.spec = s;
  opts.check_ell = 1;
  opts.tolerance = 0.3;
  geo::CCPoint center{{0.5, 0.0}, {0.0}};
  const calc::Symbol1D H = calc::even_bump(0.5, 2.0);
  std::vector<int> ells{1, 2, 3, 4, 5};

  const auto rep0 = est::weighted_plancherel(H, 0, ells, center, opts);
  const auto rep1 = est::weighted_plancherel(H, 1, ells, center, opts);
  const double e0 = rep0.fit["exponent"].get<double>();
  const double e1 = rep1.fit["exponent"].get<double>();
  const double agree = rep0.extras["two_path_agreement"].get<double>();

  const bool pass = std::abs(e0 - (-1.0)) <= 0.3 && std::abs(e1 - 1.0) <= 0.3 &&
                    agree <= 1e-6 && rep0.passed() && rep1.passed();
  std::ostringstream os;
  os << "weighted plancherel: N=0 exponent " << e0 << " (target -1), N=1 "
     << e1 << " (target 1), two-path agreement " << agree;
  report(4, pass, os.str(), timer.elapsed());
}

// --------------------------------------------------------------------------
// 5. Finite propagation: leakage <= 1e-3 and decreasing under refinement.
// --------------------------------------------------------------------------
void criterion_5() {
  Timer timer;
  calc::GridSpec base;
  base.d1 = 1;
  base.d2 = 1;
  base.n_x = 64;
  base.n_y = 64;
  base.x_extent = 8.0;
  base.y_extent = 8.0;
  // The leakage floor is set by the input's spectral tail, so the Hermite cap
  // must not bind; the per-slice resolvability clamp governs instead.
  base.k_max = 1024;

  est::PropagationOptions opts;
  opts.eps = 0.5;
  opts.kappa = 3.0;
  opts.bump_radius = 1.5;
  opts.budget = 1e-3;
  opts.refine = {64, 96, 128};
  const auto rep = est::propagation_leakage(0.5, base, opts);

  const double first = rep.fit["first"].get<double>();
  const double last = rep.fit["last"].get<double>();
  const bool pass = rep.passed();
  std::ostringstream os;
  os << "propagation leakage over n=64/96/128: " << first << " -> " << last
     << " <= 1e-3, decreasing, monotone in margin";
  report(5, pass, os.str(), timer.elapsed());
}

// --------------------------------------------------------------------------
// 6. Hermite pointwise bounds: [k]-exponent of sup_x H within 0.2 of d1/2-1.
// --------------------------------------------------------------------------
void criterion_6() {
  Timer timer;
  est::HermiteScanOptions opts;
  opts.d1 = 2;
  opts.tolerance = 0.2;
  std::vector<int> ks;
  for (int k = 1; 2 * k + 2 <= 41; ++k) ks.push_back(k);
  std::vector<double> rs{0.5, 1.0, 2.0};
  const auto rep = est::hermite_bound_scan(ks, rs, opts);
  const double slope = rep.fit["exponent"].get<double>();
  const double c = rep.extras["exp_fit"]["c"].get<double>();
  const double resid = rep.extras["exp_fit"]["residual_rms"].get<double>();
  const bool pass = rep.passed();
  std::ostringstream os;
  os << "hermite bounds: sup_x exponent " << slope << " (target 0 +- 0.2), "
     << "exponential-regime c " << c << ", fit residual " << resid;
  report(6, pass, os.str(), timer.elapsed());
}

// --------------------------------------------------------------------------
// 7. Riesz uniformity: t in {1/4, 1, 4}, delta = 5, p = 1.
// --------------------------------------------------------------------------
void criterion_7() {
  Timer timer;
  est::RieszOptions opts;
  calc::GridSpec s;
  s.d1 = 1;
  s.d2 = 1;
  s.n_x = 128;
  s.n_y = 256;
  s.x_extent = 16.0;
  s.y_extent = 32.0;
  s.k_max = 40;
  opts.spec = s;
  opts.budget = 0.05;
  opts.corpus = 4;
  opts.seed = 11;
  opts.refine = true;
  std::vector<double> ts{0.25, 1.0, 4.0};
  const auto rep = est::riesz_uniformity(5.0, 1.0, ts, opts);
  const double spread = rep.fit["max_spread"].get<double>();
  const double refined = rep.fit["max_spread_refined"].get<double>();
  const bool pass = rep.passed();
  std::ostringstream os;
  os << "riesz uniformity: spread " << spread << " <= 0.05, refined " << refined
     << " <= base";
  report(7, pass, os.str(), timer.elapsed());
}

// --------------------------------------------------------------------------
// 8. Geometry suite.
// --------------------------------------------------------------------------
void criterion_8() {
  Timer timer;
  bool pass = true;
  std::ostringstream os;

  // Homogeneity: 1e4 randomized trials, relative error <= 1e-12.
  {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(-5.0, 5.0), ts(0.05, 20.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      geo::CCPoint a{{u(rng), u(rng)}, {u(rng)}};
      geo::CCPoint b{{u(rng), u(rng)}, {u(rng)}};
      const double t = ts(rng);
      const double lhs = geo::cc_distance(geo::dilate(t, a), geo::dilate(t, b));
      const double rhs = t * geo::cc_distance(a, b);
      if (rhs > 0.0) worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    pass = pass && worst <= 1e-12;
    os << "homogeneity worst rel " << worst;
  }

  // Volume doubling in [2^d, 2^Q] over 1e3 random (R, a).
  {
    std::mt19937_64 rng(102);
    std::uniform_real_distribution<double> ur(0.01, 10.0), ua(-8.0, 8.0);
    const int d1 = 2, d2 = 1, d = 3, Q = 4;
    bool ok = true;
    for (int i = 0; i < 1000; ++i) {
      const double R = ur(rng);
      std::vector<double> a{ua(rng), ua(rng)};
      const double ratio = geo::ball_volume(2.0 * R, a, d2) / geo::ball_volume(R, a, d2);
      ok = ok && ratio >= std::pow(2.0, d) - 1e-9 && ratio <= std::pow(2.0, Q) + 1e-9;
    }
    pass = pass && ok;
    os << ", doubling in [2^d, 2^Q] " << (ok ? "ok" : "violated");
  }

  // y-slab counts within a constant factor of 2^{(iota-ell) d2} for iota <= 4.
  {
    bool ok = true;
    for (int iota = 1; iota <= 4; ++iota) {
      const double R = std::ldexp(1.0, iota);
      geo::CoverCell cell;
      cell.box = geo::Box{{-R / 8.0, -R * R / 2.0}, {R / 8.0, R * R / 2.0}};
      cell.center = geo::CCPoint{{0.0}, {0.0}};
      for (int ell = 0; ell <= iota; ++ell) {
        const auto subs = geo::y_slab_decompose(cell, 1, ell, iota);
        const double target = std::ldexp(1.0, iota - ell);
        ok = ok && static_cast<double>(subs.size()) <= 2.0 * target &&
             static_cast<double>(subs.size()) >= target / 32.0;
      }
    }
    pass = pass && ok;
    os << ", y-slab counts " << (ok ? "ok" : "violated");
  }

  report(8, pass, os.str(), timer.elapsed());
}

// --------------------------------------------------------------------------
// 9. Away-from-origin gain: d2 = 1, p = 1, |a| in {4, 8, 16}, R = |a|/8.
// --------------------------------------------------------------------------
void criterion_9() {
  Timer timer;
  const calc::Symbol1D F = calc::even_bump(0.5, 2.0);
  est::AwayFromOriginOptions opts;
  opts.d1 = 2;
  opts.d2 = 1;
  opts.R_fraction = 0.125;
  opts.k_cap = 192;
  opts.x_samples = 17;
  opts.tolerance = 0.2;
  std::vector<double> a_list{4.0, 8.0, 16.0};
  const auto rep = est::away_from_origin_gain(F, 1.0, a_list, opts);
  const double slope = rep.fit["exponent"].get<double>();
  const bool pass = rep.passed() && slope <= -0.5 + 0.2;
  std::ostringstream os;
  os << "away-from-origin gain: exponent " << slope << " <= -0.3 (target -0.5)";
  report(9, pass, os.str(), timer.elapsed());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures == 0) {
    std::printf("acceptance: all criteria PASS\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return 1;
}
