// Sampled complex functions on the product grid R^{d1} x R^{d2}.
#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace grushin::calculus {

using cplx = std::complex<double>;

/// Uniform tensor grid: per-axis points t_j = -T + j*(2T/n), j = 0..n-1
/// (so 0 is on-grid for even n), x-axes first, y-axes last, last axis fastest.
struct GridSpec {
  int d1 = 1;
  int d2 = 1;
  int n_x = 2;         // per x-axis sample count
  int n_y = 2;         // per y-axis sample count
  double x_extent = 1; // half-width X
  double y_extent = 1; // half-width Y
  int k_max = 0;       // Hermite truncation used by the calculus

  void validate() const;

  double hx() const { return 2.0 * x_extent / n_x; }
  double hy() const { return 2.0 * y_extent / n_y; }
  std::size_t nx_total() const;  // n_x^{d1}
  std::size_t ny_total() const;  // n_y^{d2}
  std::size_t size() const { return nx_total() * ny_total(); }
  double cell_volume() const;

  double x_coord(int j) const { return -x_extent + j * hx(); }
  double y_coord(int j) const { return -y_extent + j * hy(); }

  /// Signed frequency of DFT bin m along one y-axis: (pi/Y) * fold(m).
  double eta(int m) const;
  /// Signed frequency of DFT bin m along one x-axis: (pi/X) * fold(m).
  double xi(int m) const;
  static int fold(int m, int n) { return m < n / 2 ? m : m - n; }

  /// Per-axis index decompositions of flat indices.
  void x_indices(std::size_t ix, std::span<int> out) const;
  void y_indices(std::size_t iy, std::span<int> out) const;

  bool operator==(const GridSpec&) const = default;
};

struct GridFunction {
  GridSpec spec;
  std::vector<cplx> values;

  static GridFunction zeros(const GridSpec& s);

  cplx& at(std::size_t ix, std::size_t iy) { return values[ix * spec.ny_total() + iy]; }
  const cplx& at(std::size_t ix, std::size_t iy) const {
    return values[ix * spec.ny_total() + iy];
  }

  double norm2() const;             // continuum-weighted L^2 norm
  double normp(double p) const;     // continuum-weighted L^p norm, p >= 1
  double dot_re(const GridFunction& g) const;  // Re <f, g>, weighted
};

/// Binary container, little-endian:
///   bytes 0..7   magic "GRUSHGF1"
///   u32 d1, u32 d2, u32 n_x, u32 n_y, u32 k_max
///   f64 x_extent, f64 y_extent
///   size() pairs of f64 (re, im), flat row-major order (x block, y fastest)
void save_grf(const std::filesystem::path& path, const GridFunction& f);
GridFunction load_grf(const std::filesystem::path& path);

}  // namespace grushin::calculus
