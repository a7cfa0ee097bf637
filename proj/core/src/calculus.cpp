#include "grushin/calculus.hpp"

#include "grushin/hermite.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace grushin::calculus {

namespace {

constexpr double kPi = std::numbers::pi;

// One tensor pass: contract the last (fastest) axis of `in`, viewed as
// (rows x n), against M (m x n); result is (m x rows) with the contracted
// axis moved to the front. d passes with square dims restore axis order.
void contract_last_axis(const std::vector<cplx>& in, std::size_t rows, int n,
                        const std::vector<double>& M, int m, std::vector<cplx>& out) {
  out.assign(static_cast<std::size_t>(m) * rows, cplx{0.0, 0.0});
  for (std::size_t r = 0; r < rows; ++r) {
    const cplx* src = in.data() + r * n;
    for (int l = 0; l < m; ++l) {
      const double* w = M.data() + static_cast<std::size_t>(l) * n;
      cplx acc = 0.0;
      for (int i = 0; i < n; ++i) acc += src[i] * w[i];
      out[static_cast<std::size_t>(l) * rows + r] = acc;
    }
  }
}

struct SliceWork {
  std::vector<cplx> slice, tmp;
  std::vector<double> hermite_col;  // recurrence scratch
  std::vector<double> analysis;     // (L x n) matrix, includes quadrature factor
  std::vector<double> synthesis;    // (n x L) matrix
};

// Energy of a slice under x-quadrature.
double slice_energy(const std::vector<cplx>& s, double wx) {
  double e = 0.0;
  for (const cplx& v : s) e += std::norm(v);
  return e * wx;
}

}  // namespace

// Largest k whose scaled Hermite mode at frequency magnitude r stays
// resolvable on the x-grid: sqrt((2k+d1) r) <= 0.9 * pi/hx.
int resolvable_k(const GridSpec& spec, double r) {
  const double cap = 0.9 * kPi / spec.hx();
  const double bk = cap * cap / r;
  if (bk < spec.d1) return -1;
  return static_cast<int>((bk - spec.d1) / 2.0);
}

ApplyResult apply_joint(const JointSymbol& G, const GridFunction& f,
                        const ApplyOptions& opts) {
  const GridSpec& spec = f.spec;
  spec.validate();
  const int d1 = spec.d1, d2 = spec.d2;
  const int n = spec.n_x;
  const int L = spec.k_max + 1;  // per-axis orders 0..k_max
  const std::size_t NX = spec.nx_total(), NY = spec.ny_total();
  const double wx = std::pow(spec.hx(), d1);

  GridFunction fhat = fourier_y_forward(f);
  GridFunction ghat = GridFunction::zeros(spec);

  std::vector<double> tail_per_slice(NY, 0.0), energy_per_slice(NY, 0.0);
  std::vector<int> uncovered(NY, 0);

  const bool check_coverage =
      std::isfinite(G.lambda_sup) || std::isfinite(G.bracket_sup);

#pragma omp parallel
  {
    SliceWork w;
    w.slice.resize(NX);
    w.hermite_col.resize(L);
    w.analysis.resize(static_cast<std::size_t>(L) * n);
    w.synthesis.resize(static_cast<std::size_t>(L) * n);
    std::vector<int> ybins(d2);
    std::vector<cplx> gk(spec.k_max + 1);

#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t iy_s = 0; iy_s < static_cast<std::ptrdiff_t>(NY); ++iy_s) {
      const std::size_t iy = static_cast<std::size_t>(iy_s);
      spec.y_indices(iy, ybins);
      double r2 = 0.0;
      for (int a = 0; a < d2; ++a) {
        const double e = spec.eta(ybins[a]);
        r2 += e * e;
      }
      const double r = std::sqrt(r2);

      for (std::size_t ix = 0; ix < NX; ++ix) w.slice[ix] = fhat.values[ix * NY + iy];
      energy_per_slice[iy] = slice_energy(w.slice, wx);

      if (r == 0.0) {
        // eta = 0 plane: the calculus degenerates to functions of -Laplace_x.
        x_plane_multiplier(spec, w.slice,
                           [&G](double lambda) { return G(lambda, 0.0); });
        for (std::size_t ix = 0; ix < NX; ++ix)
          ghat.values[ix * NY + iy] = w.slice[ix];
        continue;
      }

      if (check_coverage) {
        double need = std::numeric_limits<double>::infinity();
        if (std::isfinite(G.lambda_sup)) need = G.lambda_sup / r;
        if (std::isfinite(G.bracket_sup)) need = std::min(need, G.bracket_sup);
        const int k_eff = std::min(spec.k_max, resolvable_k(spec, r));
        if (2.0 * k_eff + d1 < need) uncovered[iy] = 1;
      }

      // Per-axis Hermite matrices at this r.
      const double sr = std::sqrt(r);
      const double qa = spec.hx() * std::pow(r, 0.25);  // analysis factor per axis
      const double qs = std::pow(r, 0.25);              // synthesis factor per axis
      for (int i = 0; i < n; ++i) {
        hermite::hermite_values(spec.k_max, sr * spec.x_coord(i), w.hermite_col);
        for (int l = 0; l < L; ++l) {
          const double h = w.hermite_col[l];
          w.analysis[static_cast<std::size_t>(l) * n + i] = qa * h;   // (L x n)
          w.synthesis[static_cast<std::size_t>(i) * L + l] = qs * h;  // (n x L)
        }
      }

      // Analysis: d1 tensor passes, each contracting the current last axis.
      std::vector<cplx>* cur = &w.slice;
      std::vector<cplx>* nxt = &w.tmp;
      for (int pass = 0; pass < d1; ++pass) {
        std::size_t total = 1;
        for (int q = 0; q < pass; ++q) total *= L;
        for (int q = pass; q < d1; ++q) total *= n;
        contract_last_axis(*cur, total / n, n, w.analysis, L, *nxt);
        std::swap(cur, nxt);
      }

      // Retained range: |nu|_1 <= k_max and grid-resolvable oscillation.
      // Modes with sqrt([k] r) beyond the x-Nyquist alias under quadrature
      // and would corrupt the analysis; they belong to the tail.
      const int k_eff = std::min(spec.k_max, resolvable_k(spec, r));
      for (int k = 0; k <= spec.k_max; ++k)
        gk[k] = k <= k_eff ? G((2.0 * k + d1) * r, r) : cplx{0.0};
      double kept = 0.0;
      const std::size_t NC = cur->size();
      for (std::size_t c = 0; c < NC; ++c) {
        std::size_t rem = c;
        int k = 0;
        for (int a = 0; a < d1; ++a) {
          k += static_cast<int>(rem % L);
          rem /= L;
        }
        if (k > k_eff) {
          (*cur)[c] = 0.0;
        } else {
          kept += std::norm((*cur)[c]);
          (*cur)[c] *= gk[k];
        }
      }
      tail_per_slice[iy] = std::max(0.0, energy_per_slice[iy] - kept);

      // Synthesis: d1 tensor passes back to the grid.
      for (int pass = 0; pass < d1; ++pass) {
        std::size_t total = 1;
        for (int q = 0; q < pass; ++q) total *= n;
        for (int q = pass; q < d1; ++q) total *= L;
        contract_last_axis(*cur, total / L, L, w.synthesis, n, *nxt);
        std::swap(cur, nxt);
      }

      for (std::size_t ix = 0; ix < NX; ++ix) ghat.values[ix * NY + iy] = (*cur)[ix];
    }
  }

  ApplyResult res;
  res.out = fourier_y_inverse(ghat);
  TailReport& t = res.tail;
  t.n_slices = static_cast<int>(NY);
  const double wspec = std::pow(1.0 / (spec.n_y * spec.hy()), d2);
  for (std::size_t iy = 0; iy < NY; ++iy) {
    t.input_energy += wspec * energy_per_slice[iy];
    t.tail_energy += wspec * tail_per_slice[iy];
    if (energy_per_slice[iy] > 0.0)
      t.worst_slice_fraction =
          std::max(t.worst_slice_fraction, tail_per_slice[iy] / energy_per_slice[iy]);
    t.uncovered_slices += uncovered[iy];
  }
  if (opts.fail_on_tail && t.fraction() > opts.tail_tol)
    throw std::runtime_error("apply_joint: truncation tail " +
                             std::to_string(t.fraction()) + " exceeds tolerance " +
                             std::to_string(opts.tail_tol));
  return res;
}

ApplyResult apply_multiplier(const Symbol1D& F, const GridFunction& f,
                             const ApplyOptions& opts) {
  return apply_joint(JointSymbol::from_multiplier(F), f, opts);
}

ApplyResult cosine_propagate(double t, const GridFunction& f,
                             const ApplyOptions& opts) {
  if (t == 0.0) {
    // cos(0 sqrt L) is the identity; keep it exact rather than a projection.
    ApplyResult r;
    r.out = f;
    r.tail.input_energy = std::pow(f.norm2(), 2);
    r.tail.n_slices = static_cast<int>(f.spec.ny_total());
    return r;
  }
  return apply_multiplier(cosine(t), f, opts);
}

ApplyResult apply_L(const GridFunction& f, const ApplyOptions& opts) {
  JointSymbol G;
  G.g = [](double lambda, double) -> cplx_t { return lambda; };
  G.name = "L";
  return apply_joint(G, f, opts);
}

GridFunction apply_L_fd(const GridFunction& f) {
  const GridSpec& s = f.spec;
  const int n_x = s.n_x, n_y = s.n_y;
  const std::size_t NX = s.nx_total(), NY = s.ny_total();
  GridFunction out = GridFunction::zeros(s);
  const double ihx2 = 1.0 / (s.hx() * s.hx());
  const double ihy2 = 1.0 / (s.hy() * s.hy());

  std::vector<std::size_t> xstr(s.d1), ystr(s.d2);
  {
    std::size_t q = 1;
    for (int a = s.d1 - 1; a >= 0; --a) {
      xstr[a] = q;
      q *= n_x;
    }
    q = 1;
    for (int a = s.d2 - 1; a >= 0; --a) {
      ystr[a] = q;
      q *= n_y;
    }
  }

  std::vector<int> xi(s.d1), yi(s.d2);
  for (std::size_t ix = 0; ix < NX; ++ix) {
    s.x_indices(ix, xi);
    double x2 = 0.0;
    for (int a = 0; a < s.d1; ++a) {
      const double c = s.x_coord(xi[a]);
      x2 += c * c;
    }
    for (std::size_t iy = 0; iy < NY; ++iy) {
      const cplx fc = f.at(ix, iy);
      cplx lap_x = 0.0;
      for (int a = 0; a < s.d1; ++a) {
        const int i = xi[a];
        const std::size_t base = ix - static_cast<std::size_t>(i) * xstr[a];
        const std::size_t ip = base + static_cast<std::size_t>((i + 1) % n_x) * xstr[a];
        const std::size_t im = base + static_cast<std::size_t>((i + n_x - 1) % n_x) * xstr[a];
        lap_x += (f.at(ip, iy) - 2.0 * fc + f.at(im, iy)) * ihx2;
      }
      s.y_indices(iy, yi);
      cplx lap_y = 0.0;
      for (int a = 0; a < s.d2; ++a) {
        const int j = yi[a];
        const std::size_t base = iy - static_cast<std::size_t>(j) * ystr[a];
        const std::size_t jp = base + static_cast<std::size_t>((j + 1) % n_y) * ystr[a];
        const std::size_t jm = base + static_cast<std::size_t>((j + n_y - 1) % n_y) * ystr[a];
        lap_y += (f.at(ix, jp) - 2.0 * fc + f.at(ix, jm)) * ihy2;
      }
      out.at(ix, iy) = -lap_x - x2 * lap_y;
    }
  }
  return out;
}

namespace {

// Catmull-Rom weights for fractional offset u in [0,1).
void cr_weights(double u, double w[4]) {
  const double u2 = u * u, u3 = u2 * u;
  w[0] = 0.5 * (-u3 + 2.0 * u2 - u);
  w[1] = 0.5 * (3.0 * u3 - 5.0 * u2 + 2.0);
  w[2] = 0.5 * (-3.0 * u3 + 4.0 * u2 + u);
  w[3] = 0.5 * (u3 - u2);
}

}  // namespace

RegridResult regrid_dilate(double t, const GridFunction& f) {
  if (t <= 0.0) throw std::invalid_argument("regrid_dilate: t <= 0");
  const GridSpec& s = f.spec;
  const int d = s.d1 + s.d2;
  RegridResult res;
  res.out = GridFunction::zeros(s);

  std::vector<int> axis_n(d), idx(d);
  std::vector<double> axis_h(d), axis_T(d), axis_scale(d);
  for (int a = 0; a < s.d1; ++a) {
    axis_n[a] = s.n_x;
    axis_h[a] = s.hx();
    axis_T[a] = s.x_extent;
    axis_scale[a] = t;
  }
  for (int a = 0; a < s.d2; ++a) {
    axis_n[s.d1 + a] = s.n_y;
    axis_h[s.d1 + a] = s.hy();
    axis_T[s.d1 + a] = s.y_extent;
    axis_scale[s.d1 + a] = t * t;
  }

  const std::size_t N = s.size();
  std::vector<int> base(d);
  std::vector<std::array<double, 4>> wts(d);
  for (std::size_t flat = 0; flat < N; ++flat) {
    std::size_t rem = flat;
    bool outside = false;
    for (int a = d - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % axis_n[a]);
      rem /= axis_n[a];
    }
    for (int a = 0; a < d; ++a) {
      const double coord = -axis_T[a] + idx[a] * axis_h[a];
      const double src = axis_scale[a] * coord;
      const double pos = (src + axis_T[a]) / axis_h[a];
      if (pos < 0.0 || pos > axis_n[a] - 1.0) {
        outside = true;
        break;
      }
      int b = static_cast<int>(std::floor(pos));
      if (b > axis_n[a] - 2) b = axis_n[a] - 2;
      const double u = pos - b;
      base[a] = b;
      cr_weights(u, wts[a].data());
    }
    if (outside) {
      ++res.clipped;
      continue;
    }
    // Accumulate the separable 4^d stencil with clamped neighbors.
    cplx acc = 0.0;
    std::vector<int> off(d, 0);
    for (;;) {
      double w = 1.0;
      std::size_t src_flat = 0;
      for (int a = 0; a < d; ++a) {
        w *= wts[a][off[a]];
        int q = base[a] + off[a] - 1;
        q = std::clamp(q, 0, axis_n[a] - 1);
        src_flat = src_flat * axis_n[a] + static_cast<std::size_t>(q);
      }
      acc += w * f.values[src_flat];
      int a = d - 1;
      while (a >= 0 && ++off[a] == 4) off[a--] = 0;
      if (a < 0) break;
    }
    res.out.values[flat] = acc;
  }
  return res;
}

namespace {

struct FineTransform {
  std::vector<cplx> hat;  // continuum-normalized F^(xi_m), DFT bin order
  double extent = 0.0;
  int n = 0;
  bool aliasing = false;
  double h() const { return 2.0 * extent / n; }
  double xi(int m) const { return kPi / extent * GridSpec::fold(m, n); }
};

FineTransform fine_fft(const Symbol1D& F, const FineGrid& fg) {
  FineTransform ft;
  ft.n = fg.n;
  if (ft.n < 8 || (ft.n & (ft.n - 1)) != 0)
    throw std::invalid_argument("fine grid size must be a power of two >= 8");
  double U = fg.extent;
  if (U <= 0.0) {
    double w = 16.0;
    if (F.compact_support())
      w = std::max(16.0, 4.0 * std::max(std::abs(F.support_lo), std::abs(F.support_hi)));
    U = w;
  }
  ft.extent = U;
  if (F.compact_support() &&
      std::max(std::abs(F.support_lo), std::abs(F.support_hi)) > 0.5 * U)
    ft.aliasing = true;

  const double h = ft.h();
  std::vector<cplx> a(ft.n);
  for (int i = 0; i < ft.n; ++i) a[i] = F(-U + i * h);
  fft_1d(a, true);
  ft.hat.resize(ft.n);
  for (int m = 0; m < ft.n; ++m) {
    const double sign = GridSpec::fold(m, ft.n) % 2 == 0 ? 1.0 : -1.0;
    ft.hat[m] = h * sign * a[m];
  }
  return ft;
}

}  // namespace

namespace {

// Cell-averaged chi_j over one discrete frequency cell, via the tabulated
// cumulative integral. The pointwise value would drop the xi = 0 bin
// entirely (chi_j(0) = 0 for every j) and under-resolve bands narrower than
// the bin width; the average keeps sum_j weights equal to the exact coverage
// fraction of each cell.
double chi_cell_avg(const DyadicBump& bump, int j, double xi, double dxi) {
  auto antideriv = [&bump, j](double s) {
    // signed integral of chi_j from 0 to s
    const double v = std::ldexp(bump.chi_cumulative(std::abs(std::ldexp(s, -j))), j);
    return s < 0.0 ? -v : v;
  };
  return (antideriv(xi + 0.5 * dxi) - antideriv(xi - 0.5 * dxi)) / dxi;
}

}  // namespace

DyadicPieceResult dyadic_piece(const Symbol1D& F, int j, const DyadicBump& bump,
                               const FineGrid& fg) {
  FineTransform ft = fine_fft(F, fg);
  const double dxi = kPi / ft.extent;
  std::vector<cplx> a(ft.n);
  for (int m = 0; m < ft.n; ++m) {
    const double sign = GridSpec::fold(m, ft.n) % 2 == 0 ? 1.0 : -1.0;
    a[m] = sign * ft.hat[m] * chi_cell_avg(bump, j, ft.xi(m), dxi);
  }
  fft_1d(a, false);
  const double scale = 1.0 / (ft.n * ft.h());
  for (cplx& v : a) v *= scale;
  DyadicPieceResult res{sampled_symbol(std::move(a), ft.extent,
                                       F.name + "^(" + std::to_string(j) + ")"),
                        ft.aliasing};
  return res;
}

SobolevResult sobolev_norm(const Symbol1D& F, double s, const FineGrid& fg) {
  if (s < 0.0) throw std::invalid_argument("sobolev_norm: s < 0");
  FineTransform ft = fine_fft(F, fg);
  const double dxi = kPi / ft.extent;
  double acc = 0.0, top = 0.0;
  const double ximax = dxi * (ft.n / 2);
  for (int m = 0; m < ft.n; ++m) {
    const double xi = ft.xi(m);
    const double term = std::pow(1.0 + xi * xi, s) * std::norm(ft.hat[m]);
    acc += term;
    if (std::abs(xi) > 0.5 * ximax) top += term;
  }
  SobolevResult r;
  r.value = std::sqrt(acc * dxi / (2.0 * kPi));
  r.aliasing = ft.aliasing || (acc > 0.0 && top / acc > 1e-8);
  return r;
}

SlocResult sloc_norm(const Symbol1D& F, double s, const Symbol1D& eta_bump,
                     std::span<const double> t_grid, const FineGrid& fg) {
  if (t_grid.empty()) throw std::invalid_argument("sloc_norm: empty t grid");
  if (!eta_bump.compact_support() || eta_bump.support_lo < 0.0)
    throw std::invalid_argument("sloc_norm: eta bump must be supported in (0,inf)");
  SlocResult best;
  for (double t : t_grid) {
    Symbol1D w;
    auto eb = eta_bump.f;
    auto ff = F.f;
    w.f = [eb, ff, t](double lambda) { return eb(lambda) * ff(t * lambda); };
    w.support_lo = eta_bump.support_lo;
    w.support_hi = eta_bump.support_hi;
    const SobolevResult r = sobolev_norm(w, s, fg);
    if (r.value >= best.value) {
      best.value = r.value;
      best.arg_t = t;
    }
    best.aliasing = best.aliasing || r.aliasing;
  }
  return best;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(0.0 < lo && lo < hi) || per_decade < 1)
    throw std::invalid_argument("log_grid: bad parameters");
  std::vector<double> g;
  const double decades = std::log10(hi / lo);
  const int n = static_cast<int>(std::ceil(decades * per_decade));
  for (int i = 0; i <= n; ++i) g.push_back(lo * std::pow(10.0, decades * i / n));
  return g;
}

int recommended_k_max(const GridSpec& spec, double lambda_sup, int cap) {
  const double eta_min = kPi / spec.y_extent;
  int k = 0;
  while ((2.0 * k + spec.d1) * eta_min <= 4.0 * lambda_sup && k < cap) ++k;
  return k;
}

}  // namespace grushin::calculus
