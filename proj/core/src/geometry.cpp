#include "grushin/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace grushin::geometry {

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

double dist2(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

double cc_distance(const CCPoint& z, const CCPoint& w) {
  if (z.d1() != w.d1() || z.d2() != w.d2())
    throw std::invalid_argument("cc_distance: dimension mismatch");
  const double dx = dist2(z.x, w.x);
  const double dy = dist2(z.y, w.y);
  const double s = norm2(z.x) + norm2(w.x);
  // Boundary |y-b|^{1/2} == |x|+|a| belongs to the square-root branch.
  if (dy < s * s) return dx + dy / s;
  return dx + std::sqrt(dy);
}

CCPoint dilate(double t, const CCPoint& z) {
  if (t <= 0.0) throw std::invalid_argument("dilate: t <= 0");
  CCPoint out = z;
  for (double& c : out.x) c *= t;
  for (double& c : out.y) c *= t * t;
  return out;
}

double ball_volume(double R, std::span<const double> a, int d2) {
  if (R <= 0.0) throw std::invalid_argument("ball_volume: R <= 0");
  if (d2 < 1) throw std::invalid_argument("ball_volume: d2 < 1");
  const int d1 = static_cast<int>(a.size());
  return std::pow(R, d1 + d2) * std::pow(std::max(R, norm2(a)), d2);
}

bool BoxHull::contains(const CCPoint& z) const {
  return dist2(z.x, x_center) <= x_radius && dist2(z.y, y_center) <= y_radius;
}

BoxHull box_hull(const Ball& ball, double C) {
  const double R = ball.radius;
  const double an = norm2(ball.center.x);
  if (R <= 0.0) throw std::invalid_argument("box_hull: R <= 0");
  if (R < an / 4.0)
    throw std::invalid_argument("box_hull: requires R >= |a|/4");
  BoxHull h;
  h.x_center = ball.center.x;
  h.x_radius = R;
  h.y_center = ball.center.y;
  h.y_radius = C * R * R;
  return h;
}

bool Box::contains(std::span<const double> p) const {
  for (int i = 0; i < dim(); ++i)
    if (p[i] < lo[i] || p[i] >= hi[i]) return false;
  return true;
}

namespace {

CCPoint split_point(std::span<const double> p, int d1) {
  CCPoint z;
  z.x.assign(p.begin(), p.begin() + d1);
  z.y.assign(p.begin() + d1, p.end());
  return z;
}

// Distance from the origin to the box [lo,hi] in the x-layer.
double x_box_min_norm(std::span<const double> lo, std::span<const double> hi) {
  double s = 0.0;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    double c = 0.0;
    if (lo[i] > 0.0) c = lo[i];
    else if (hi[i] < 0.0) c = hi[i];
    s += c * c;
  }
  return std::sqrt(s);
}

// Per-axis cuts of [lo,hi] into ceil(len/step) equal pieces.
std::vector<double> cuts(double lo, double hi, double step) {
  const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / step - 1e-12)));
  std::vector<double> c(n + 1);
  for (int i = 0; i <= n; ++i) c[i] = lo + (hi - lo) * i / n;
  return c;
}

void cert_fail [[noreturn]] (const char* what) {
  throw std::runtime_error(std::string("cover: certification failed: ") + what);
}

}  // namespace

Cover cover(const Box& region, int d1, double R, std::span<const double> lambdas,
            const CoverOptions& opts) {
  if (R <= 0.0) throw std::invalid_argument("cover: R <= 0");
  const int d = region.dim();
  const int d2 = d - d1;
  if (d1 < 1 || d2 < 1) throw std::invalid_argument("cover: bad dimensions");
  for (int i = 0; i < d; ++i)
    if (!(region.lo[i] < region.hi[i]))
      throw std::invalid_argument("cover: empty region");

  Cover cv;
  cv.d1 = d1;
  cv.d2 = d2;
  cv.R = R;

  // Cell shape: Euclidean x-radius R/4, y-radius (R/4)*max(R/4, |a|), which
  // keeps every cell point within comparison distance R/2 of the center.
  const double rho_x = R / 4.0;
  const double step_x = 2.0 * rho_x / std::sqrt(static_cast<double>(d1));

  std::vector<std::vector<double>> xcuts(d1);
  for (int i = 0; i < d1; ++i) xcuts[i] = cuts(region.lo[i], region.hi[i], step_x);

  // Enumerate x-columns.
  std::vector<int> ci(d1, 0);
  for (;;) {
    std::vector<double> xlo(d1), xhi(d1);
    for (int i = 0; i < d1; ++i) {
      xlo[i] = xcuts[i][ci[i]];
      xhi[i] = xcuts[i][ci[i] + 1];
    }
    const double min_norm = x_box_min_norm(xlo, xhi);
    const double rho_y = (R / 4.0) * std::max(R / 4.0, min_norm);
    const double step_y = 2.0 * rho_y / std::sqrt(static_cast<double>(d2));

    std::vector<std::vector<double>> ycuts(d2);
    for (int j = 0; j < d2; ++j)
      ycuts[j] = cuts(region.lo[d1 + j], region.hi[d1 + j], step_y);

    std::vector<int> cj(d2, 0);
    for (;;) {
      CoverCell cell;
      cell.box.lo.resize(d);
      cell.box.hi.resize(d);
      for (int i = 0; i < d1; ++i) {
        cell.box.lo[i] = xlo[i];
        cell.box.hi[i] = xhi[i];
      }
      for (int j = 0; j < d2; ++j) {
        cell.box.lo[d1 + j] = ycuts[j][cj[j]];
        cell.box.hi[d1 + j] = ycuts[j][cj[j] + 1];
      }
      cell.center.x.resize(d1);
      cell.center.y.resize(d2);
      for (int i = 0; i < d1; ++i)
        cell.center.x[i] = 0.5 * (cell.box.lo[i] + cell.box.hi[i]);
      for (int j = 0; j < d2; ++j)
        cell.center.y[j] = 0.5 * (cell.box.lo[d1 + j] + cell.box.hi[d1 + j]);
      cv.cells.push_back(std::move(cell));

      int j = d2 - 1;
      while (j >= 0 && ++cj[j] == static_cast<int>(ycuts[j].size()) - 1) cj[j--] = 0;
      if (j < 0) break;
    }

    int i = d1 - 1;
    while (i >= 0 && ++ci[i] == static_cast<int>(xcuts[i].size()) - 1) ci[i--] = 0;
    if (i < 0) break;
  }

  // Certification scan: cell containment in B_R(center) over cell corners and
  // an interior witness grid, then overlap counts of the dilated balls.
  const int wpa = std::max(2, opts.witness_per_axis);
  std::vector<double> p(d);
  for (const auto& cell : cv.cells) {
    std::vector<int> wi(d, 0);
    for (;;) {
      for (int i = 0; i < d; ++i) {
        const double f = static_cast<double>(wi[i]) / (wpa - 1);
        p[i] = cell.box.lo[i] + f * (cell.box.hi[i] - cell.box.lo[i]);
      }
      if (cc_distance(split_point(p, d1), cell.center) > R)
        cert_fail("cell not inside its comparison ball");
      int i = d - 1;
      while (i >= 0 && ++wi[i] == wpa) wi[i--] = 0;
      if (i < 0) break;
    }
  }

  // Witnesses: all cell centers plus all cell corners.
  std::vector<CCPoint> witnesses;
  for (const auto& cell : cv.cells) {
    witnesses.push_back(cell.center);
    std::vector<int> corner(d, 0);
    for (;;) {
      for (int i = 0; i < d; ++i)
        p[i] = corner[i] ? cell.box.hi[i] : cell.box.lo[i];
      witnesses.push_back(split_point(p, d1));
      int i = d - 1;
      while (i >= 0 && ++corner[i] == 2) corner[i--] = 0;
      if (i < 0) break;
    }
  }
  for (double lam : lambdas) {
    if (lam < 1.0) throw std::invalid_argument("cover: lambda < 1");
    int worst = 0;
    for (const auto& z : witnesses) {
      int count = 0;
      for (const auto& cell : cv.cells)
        if (cc_distance(z, cell.center) <= lam * R) ++count;
      worst = std::max(worst, count);
      if (worst > opts.max_overlap) cert_fail("overlap bound exceeded");
    }
    cv.overlap_bound[lam] = worst;
  }
  return cv;
}

std::vector<CoverCell> y_slab_decompose(const CoverCell& cell, int d1, int ell,
                                        int iota, double C) {
  if (ell < 0 || ell > iota)
    throw std::invalid_argument("y_slab_decompose: need 0 <= ell <= iota");
  const double R = std::ldexp(1.0, iota);
  const double Rl = std::ldexp(1.0, ell) * R;
  const int d = cell.box.dim();
  const int d2 = d - d1;
  if (d2 < 1) throw std::invalid_argument("y_slab_decompose: bad dimensions");
  if (norm2(cell.center.x) > 4.0 * R + 1e-12)
    throw std::invalid_argument("y_slab_decompose: requires |a_n| <= 4R");

  // Per-axis slab width C*R_l/sqrt(d2): Euclidean y-radius of each slab is
  // then <= C*R_l/2 and adjacent designated centers are C*R_l/sqrt(d2) > R_l/2
  // apart for d2 <= 3.
  const double w = C * Rl / std::sqrt(static_cast<double>(d2));

  std::vector<std::vector<double>> ycuts(d2);
  for (int j = 0; j < d2; ++j)
    ycuts[j] = cuts(cell.box.lo[d1 + j], cell.box.hi[d1 + j], w);

  std::vector<CoverCell> out;
  std::vector<int> cj(d2, 0);
  for (;;) {
    CoverCell sub;
    sub.box = cell.box;
    sub.center = cell.center;
    for (int j = 0; j < d2; ++j) {
      sub.box.lo[d1 + j] = ycuts[j][cj[j]];
      sub.box.hi[d1 + j] = ycuts[j][cj[j] + 1];
      sub.center.y[j] = 0.5 * (sub.box.lo[d1 + j] + sub.box.hi[d1 + j]);
    }
    out.push_back(std::move(sub));
    int j = d2 - 1;
    while (j >= 0 && ++cj[j] == static_cast<int>(ycuts[j].size()) - 1) cj[j--] = 0;
    if (j < 0) break;
  }
  return out;
}

}  // namespace grushin::geometry
