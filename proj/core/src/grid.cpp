#include "grushin/grid.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "grf container assumes a little-endian host");

namespace grushin::calculus {

void GridSpec::validate() const {
  if (d1 < 1 || d1 > 3 || d2 < 1 || d2 > 3)
    throw std::invalid_argument("GridSpec: d1, d2 must be in 1..3");
  if (n_x < 2 || n_y < 2) throw std::invalid_argument("GridSpec: n_x, n_y >= 2");
  if (x_extent <= 0.0 || y_extent <= 0.0)
    throw std::invalid_argument("GridSpec: extents must be positive");
  if (k_max < 0) throw std::invalid_argument("GridSpec: k_max < 0");
}

std::size_t GridSpec::nx_total() const {
  std::size_t s = 1;
  for (int i = 0; i < d1; ++i) s *= n_x;
  return s;
}

std::size_t GridSpec::ny_total() const {
  std::size_t s = 1;
  for (int i = 0; i < d2; ++i) s *= n_y;
  return s;
}

double GridSpec::cell_volume() const {
  return std::pow(hx(), d1) * std::pow(hy(), d2);
}

double GridSpec::eta(int m) const {
  return std::numbers::pi / y_extent * fold(m, n_y);
}

double GridSpec::xi(int m) const {
  return std::numbers::pi / x_extent * fold(m, n_x);
}

void GridSpec::x_indices(std::size_t ix, std::span<int> out) const {
  for (int j = d1 - 1; j >= 0; --j) {
    out[j] = static_cast<int>(ix % n_x);
    ix /= n_x;
  }
}

void GridSpec::y_indices(std::size_t iy, std::span<int> out) const {
  for (int j = d2 - 1; j >= 0; --j) {
    out[j] = static_cast<int>(iy % n_y);
    iy /= n_y;
  }
}

GridFunction GridFunction::zeros(const GridSpec& s) {
  s.validate();
  GridFunction f;
  f.spec = s;
  f.values.assign(s.size(), cplx{0.0, 0.0});
  return f;
}

double GridFunction::norm2() const {
  double s = 0.0;
  for (const cplx& v : values) s += std::norm(v);
  return std::sqrt(s * spec.cell_volume());
}

double GridFunction::normp(double p) const {
  if (p < 1.0) throw std::invalid_argument("normp: p < 1");
  double s = 0.0;
  for (const cplx& v : values) s += std::pow(std::abs(v), p);
  return std::pow(s * spec.cell_volume(), 1.0 / p);
}

double GridFunction::dot_re(const GridFunction& g) const {
  if (!(spec == g.spec)) throw std::invalid_argument("dot_re: spec mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    s += std::real(std::conj(values[i]) * g.values[i]);
  return s * spec.cell_volume();
}

namespace {

constexpr char kMagic[8] = {'G', 'R', 'U', 'S', 'H', 'G', 'F', '1'};

template <typename T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

}  // namespace

void save_grf(const std::filesystem::path& path, const GridFunction& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_grf: cannot open " + path.string());
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.spec.d1));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.spec.d2));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.spec.n_x));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.spec.n_y));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.spec.k_max));
  put<double>(os, f.spec.x_extent);
  put<double>(os, f.spec.y_extent);
  for (const cplx& v : f.values) {
    put<double>(os, v.real());
    put<double>(os, v.imag());
  }
  if (!os) throw std::runtime_error("save_grf: write failed for " + path.string());
}

GridFunction load_grf(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_grf: cannot open " + path.string());
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("load_grf: bad magic in " + path.string());
  GridSpec s;
  s.d1 = static_cast<int>(get<std::uint32_t>(is));
  s.d2 = static_cast<int>(get<std::uint32_t>(is));
  s.n_x = static_cast<int>(get<std::uint32_t>(is));
  s.n_y = static_cast<int>(get<std::uint32_t>(is));
  s.k_max = static_cast<int>(get<std::uint32_t>(is));
  s.x_extent = get<double>(is);
  s.y_extent = get<double>(is);
  s.validate();
  GridFunction f = GridFunction::zeros(s);
  for (cplx& v : f.values) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    v = {re, im};
  }
  if (!is) throw std::runtime_error("load_grf: truncated file " + path.string());
  return f;
}

}  // namespace grushin::calculus
