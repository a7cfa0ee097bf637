#include "grushin/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace grushin::calculus {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

// Parity sign (-1)^{fold(m)} of one DFT bin.
double bin_sign(int m, int n) { return GridSpec::fold(m, n) % 2 == 0 ? 1.0 : -1.0; }

// Product of per-axis parity signs over a flat y index.
double y_phase(const GridSpec& s, std::size_t iy) {
  double sign = 1.0;
  for (int a = 0; a < s.d2; ++a) {
    sign *= bin_sign(static_cast<int>(iy % s.n_y), s.n_y);
    iy /= s.n_y;
  }
  return sign;
}

void transform_y(GridFunction& f, int fftw_sign) {
  const GridSpec& s = f.spec;
  std::vector<int> dims(s.d2, s.n_y);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_many_dft(
        s.d2, dims.data(), static_cast<int>(s.nx_total()), as_fftw(f.values.data()),
        nullptr, 1, static_cast<int>(s.ny_total()), as_fftw(f.values.data()), nullptr,
        1, static_cast<int>(s.ny_total()), fftw_sign, FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("fourier_y: fftw plan failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

}  // namespace

GridFunction fourier_y_forward(const GridFunction& f) {
  GridFunction out = f;
  transform_y(out, FFTW_FORWARD);
  const GridSpec& s = out.spec;
  const double scale = std::pow(s.hy(), s.d2);
  const std::size_t NY = s.ny_total();
  for (std::size_t ix = 0; ix < s.nx_total(); ++ix)
    for (std::size_t iy = 0; iy < NY; ++iy)
      out.values[ix * NY + iy] *= scale * y_phase(s, iy);
  return out;
}

GridFunction fourier_y_inverse(const GridFunction& fhat) {
  GridFunction out = fhat;
  const GridSpec& s = out.spec;
  const std::size_t NY = s.ny_total();
  for (std::size_t ix = 0; ix < s.nx_total(); ++ix)
    for (std::size_t iy = 0; iy < NY; ++iy)
      out.values[ix * NY + iy] *= y_phase(s, iy);
  transform_y(out, FFTW_BACKWARD);
  const double scale = 1.0 / (std::pow(s.hy(), s.d2) * static_cast<double>(NY));
  for (cplx& v : out.values) v *= scale;
  return out;
}

void x_plane_multiplier(const GridSpec& spec, std::span<cplx> slice,
                        const std::function<cplx(double)>& m_of_lambda) {
  const std::size_t NX = spec.nx_total();
  if (slice.size() != NX) throw std::invalid_argument("x_plane_multiplier: bad slice");
  std::vector<int> dims(spec.d1, spec.n_x);
  fftw_plan fwd, bwd;
  std::vector<cplx> buf(slice.begin(), slice.end());
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd = fftw_plan_dft(spec.d1, dims.data(), as_fftw(buf.data()), as_fftw(buf.data()),
                        FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft(spec.d1, dims.data(), as_fftw(buf.data()), as_fftw(buf.data()),
                        FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (!fwd || !bwd) throw std::runtime_error("x_plane_multiplier: fftw plan failed");
  fftw_execute(fwd);
  for (std::size_t ix = 0; ix < NX; ++ix) {
    std::size_t rem = ix;
    double lambda = 0.0;
    for (int a = 0; a < spec.d1; ++a) {
      const double xi = spec.xi(static_cast<int>(rem % spec.n_x));
      lambda += xi * xi;
      rem /= spec.n_x;
    }
    buf[ix] *= m_of_lambda(lambda);
  }
  fftw_execute(bwd);
  const double scale = 1.0 / static_cast<double>(NX);
  for (std::size_t ix = 0; ix < NX; ++ix) slice[ix] = buf[ix] * scale;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
}

void fft_1d(std::vector<cplx>& a, bool forward) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(a.size()), as_fftw(a.data()),
                            as_fftw(a.data()), forward ? FFTW_FORWARD : FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("fft_1d: fftw plan failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

}  // namespace grushin::calculus
