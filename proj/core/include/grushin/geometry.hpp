// Carnot-Caratheodory comparison metric, dilations, volumes, coverings.
#pragma once

#include <map>
#include <span>
#include <vector>

namespace grushin::geometry {

/// A point of R^{d1} x R^{d2} split into its two layers.
struct CCPoint {
  std::vector<double> x;
  std::vector<double> y;

  int d1() const { return static_cast<int>(x.size()); }
  int d2() const { return static_cast<int>(y.size()); }
};

/// Comparison representative of the Carnot-Caratheodory distance:
///   |x-a| + |y-b|/(|x|+|a|)   if |y-b|^{1/2} <  |x|+|a|,
///   |x-a| + |y-b|^{1/2}       if |y-b|^{1/2} >= |x|+|a|.
/// Equivalent to the true CC metric up to absolute constants; it is a
/// quasi-metric only (no exact triangle inequality).
double cc_distance(const CCPoint& z, const CCPoint& w);

/// Anisotropic dilation delta_t(x,y) = (t x, t^2 y), t > 0.
CCPoint dilate(double t, const CCPoint& z);

/// Comparison representative of |B_R(a,b)|: R^{d1+d2} * max{R,|a|}^{d2}.
double ball_volume(double R, std::span<const double> a, int d2);

struct Ball {
  CCPoint center;
  double radius = 0.0;
};

/// Euclidean product hull B_R(a) x B_{C R^2}(b); valid whenever R >= |a|/4.
struct BoxHull {
  std::vector<double> x_center;
  double x_radius = 0.0;
  std::vector<double> y_center;
  double y_radius = 0.0;

  bool contains(const CCPoint& z) const;
};

BoxHull box_hull(const Ball& ball, double C = 9.0);

/// Axis-aligned box in R^{d1+d2}, layers concatenated, half-open [lo, hi).
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(std::span<const double> p) const;
};

struct CoverCell {
  Box box;        // the disjoint cell
  CCPoint center; // designated center (a_n, b_n)
};

struct Cover {
  int d1 = 0, d2 = 0;
  double R = 0.0;
  std::vector<CoverCell> cells;
  /// Certified bound: no witness point lies in more than overlap_bound[lambda]
  /// of the dilated balls B_{lambda R}(a_n, b_n).
  std::map<double, int> overlap_bound;
};

struct CoverOptions {
  int witness_per_axis = 17;   // certification scan resolution per cell
  int max_overlap = 4096;      // certification failure threshold
};

/// Disjoint anisotropic boxes tiling `region`, each inside the comparison
/// ball of radius R about its center; overlap of the lambda-dilated balls is
/// certified over a witness grid for each lambda in `lambdas`.
Cover cover(const Box& region, int d1, double R, std::span<const double> lambdas,
            const CoverOptions& opts = {});

/// Splits a cell into y-slabs of Euclidean y-radius <= C*R_l, R_l = 2^l * R
/// with R = 2^iota, whose y-centers are > R_l/2 separated. Requires
/// |a_n| <= 4R (non-elliptic case) and 0 <= l <= iota.
std::vector<CoverCell> y_slab_decompose(const CoverCell& cell, int d1, int ell,
                                        int iota, double C = 9.0);

}  // namespace grushin::geometry
