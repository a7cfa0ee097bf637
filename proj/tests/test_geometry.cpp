#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "grushin/geometry.hpp"

#include <cmath>
#include <random>

using namespace grushin::geometry;

namespace {

CCPoint pt(std::vector<double> x, std::vector<double> y) {
  return CCPoint{std::move(x), std::move(y)};
}

CCPoint random_point(std::mt19937_64& rng, int d1, int d2, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  CCPoint z;
  for (int i = 0; i < d1; ++i) z.x.push_back(u(rng));
  for (int i = 0; i < d2; ++i) z.y.push_back(u(rng));
  return z;
}

}  // namespace

TEST_CASE("cc_distance two-case formula") {
  CHECK(cc_distance(pt({0.3}, {-2.0}), pt({0.3}, {-2.0})) == 0.0);
  // |x|+|a| = 0 <= |y-b|^{1/2} = 2: square-root branch.
  CHECK(cc_distance(pt({0.0}, {0.0}), pt({0.0}, {4.0})) == doctest::Approx(2.0));
  // First branch: |y-b| = 1 < (|x|+|a|)^2 = 16, value |y-b| / (2|a|) = 1/4.
  CHECK(cc_distance(pt({2.0}, {1.0}), pt({2.0}, {0.0})) == doctest::Approx(0.25));
  // Boundary |y-b|^{1/2} == |x|+|a| goes to the square-root branch.
  CHECK(cc_distance(pt({1.0}, {4.0}), pt({1.0}, {0.0})) == doctest::Approx(2.0));
  CHECK_THROWS_AS(cc_distance(pt({0.0}, {0.0}), pt({0.0, 0.0}, {0.0})),
                  std::invalid_argument);
}

TEST_CASE("dilate and homogeneity") {
  const CCPoint z = pt({1.0, -2.0}, {3.0});
  const CCPoint id = dilate(1.0, z);
  CHECK(id.x == z.x);
  CHECK(id.y == z.y);
  const CCPoint two = dilate(2.0, z);
  CHECK(two.x == std::vector<double>{2.0, -4.0});
  CHECK(two.y == std::vector<double>{12.0});
  CHECK_THROWS_AS(dilate(0.0, z), std::invalid_argument);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ts(0.05, 20.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const CCPoint a = random_point(rng, 2, 1, 5.0);
    const CCPoint b = random_point(rng, 2, 1, 5.0);
    const double t = ts(rng);
    const double lhs = cc_distance(dilate(t, a), dilate(t, b));
    const double rhs = t * cc_distance(a, b);
    if (rhs > 0.0) CHECK(std::abs(lhs - rhs) / rhs <= 1e-12);
  }
}

TEST_CASE("cc_distance symmetry and quasi-triangle fit") {
  std::mt19937_64 rng(23);
  double K = 0.0;
  for (int trial = 0; trial < 20000; ++trial) {
    const CCPoint a = random_point(rng, 1, 2, 4.0);
    const CCPoint b = random_point(rng, 1, 2, 4.0);
    const CCPoint c = random_point(rng, 1, 2, 4.0);
    CHECK(cc_distance(a, b) == cc_distance(b, a));
    const double direct = cc_distance(a, b);
    const double via = cc_distance(a, c) + cc_distance(c, b);
    if (via > 0.0) K = std::max(K, direct / via);
  }
  // The comparison representative is a quasi-metric; the fitted constant must
  // stay bounded (no blow-up), not equal any specific value.
  CHECK(K >= 0.99);
  CHECK(K < 10.0);
  MESSAGE("fitted quasi-triangle constant K = ", K);
}

TEST_CASE("ball_volume") {
  std::vector<double> origin{0.0, 0.0};
  CHECK(ball_volume(1.0, origin, 1) == doctest::Approx(1.0));
  std::vector<double> a3{3.0, 0.0};
  CHECK(ball_volume(1.0, a3, 2) == doctest::Approx(9.0));
  // R^Q at the origin, Q = d1 + 2 d2.
  CHECK(ball_volume(0.5, origin, 2) == doctest::Approx(std::pow(0.5, 6)));
  CHECK_THROWS_AS(ball_volume(0.0, origin, 1), std::invalid_argument);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  const int d1 = 2, d2 = 1, d = d1 + d2, Q = d1 + 2 * d2;
  for (int t = 0; t < 1000; ++t) {
    const double R = u(rng);
    std::vector<double> a{u(rng) - 5.0, u(rng) - 5.0};
    const double ratio = ball_volume(2.0 * R, a, d2) / ball_volume(R, a, d2);
    CHECK(ratio >= std::pow(2.0, d) - 1e-9);
    CHECK(ratio <= std::pow(2.0, Q) + 1e-9);
  }
}

TEST_CASE("box_hull") {
  Ball b{pt({0.0}, {0.0}), 1.0};
  const BoxHull h = box_hull(b);
  CHECK(h.x_radius == doctest::Approx(1.0));
  CHECK(h.y_radius == doctest::Approx(9.0));

  // Boundary case R = |a|/4 accepted, below rejected.
  Ball edge{pt({4.0}, {0.0}), 1.0};
  CHECK_NOTHROW(box_hull(edge));
  Ball bad{pt({4.1}, {0.0}), 1.0};
  CHECK_THROWS_AS(box_hull(bad), std::invalid_argument);

  // Exhaustive scan oracle at d1 = d2 = 1: every grid point within
  // comparison distance R of the center lies in the hull.
  Ball B{pt({0.5}, {0.25}), 1.0};
  const BoxHull H = box_hull(B);
  for (double x = -4.0; x <= 4.0; x += 0.05)
    for (double y = -4.0; y <= 4.0; y += 0.05) {
      const CCPoint z = pt({x}, {y});
      if (cc_distance(z, B.center) < B.radius) CHECK(H.contains(z));
    }
}

TEST_CASE("cover: single cell, tiling, scaling, overlap") {
  const double R = 1.0;
  // A ball-sized box produces exactly one cell.
  {
    Box region{{-0.1, -0.01}, {0.1, 0.01}};
    const Cover cv = cover(region, 1, R, std::vector<double>{1.0});
    CHECK(cv.cells.size() == 1);
    CHECK(cv.overlap_bound.at(1.0) == 1);
  }

  Box region{{-2.0, -2.0}, {2.0, 2.0}};
  std::vector<double> lambdas{3.0};
  std::size_t counts[3];
  const double Rs[3] = {1.0, 0.5, 0.25};
  for (int i = 0; i < 3; ++i) {
    const Cover cv = cover(region, 1, Rs[i], lambdas);
    counts[i] = cv.cells.size();

    // Tiling: every interior point lies in exactly one cell.
    std::mt19937_64 rng(31 + i);
    std::uniform_real_distribution<double> u(-1.99, 1.99);
    for (int t = 0; t < 500; ++t) {
      const double p[2] = {u(rng), u(rng)};
      int hits = 0;
      for (const auto& cell : cv.cells)
        if (cell.box.contains(std::span<const double>(p, 2))) ++hits;
      CHECK(hits == 1);
    }
  }
  // Halving R multiplies the count by a factor within [2^d, 2^Q] with slack.
  for (int i = 0; i + 1 < 3; ++i) {
    const double growth =
        static_cast<double>(counts[i + 1]) / static_cast<double>(counts[i]);
    CHECK(growth >= std::pow(2.0, 2) / 1.6);
    CHECK(growth <= std::pow(2.0, 3) * 1.6);
  }

  // Overlap bound R-independence, measured on delta_R-scaled regions so the
  // local cell structure around each witness is the same at every scale.
  int overlaps[3];
  for (int i = 0; i < 3; ++i) {
    const double r = Rs[i];
    Box scaled{{-2.0 * r, -2.0 * r * r}, {2.0 * r, 2.0 * r * r}};
    const Cover cv = cover(scaled, 1, r, lambdas);
    overlaps[i] = cv.overlap_bound.at(3.0);
    CHECK(overlaps[i] > 0);
  }
  CHECK(overlaps[1] <= overlaps[0] * 1.25 + 2);
  CHECK(overlaps[2] <= overlaps[0] * 1.25 + 2);
  MESSAGE("overlap(3) over R sweep: ", overlaps[0], " ", overlaps[1], " ", overlaps[2]);
}

TEST_CASE("y_slab_decompose") {
  const int iota = 3;
  const double R = std::ldexp(1.0, iota);
  // A non-elliptic cell: center near the x = 0 plane, y-extent ~ R^2.
  CoverCell cell;
  cell.box = Box{{-R / 8.0, -R * R / 2.0}, {R / 8.0, R * R / 2.0}};
  cell.center = pt({0.0}, {0.0});

  for (int ell = 0; ell <= iota; ++ell) {
    const auto subs = y_slab_decompose(cell, 1, ell, iota);
    const double Rl = std::ldexp(1.0, ell) * R;

    // Partition: disjoint, union recovers the cell (check by sampling).
    std::mt19937_64 rng(7 + ell);
    std::uniform_real_distribution<double> ux(-R / 8.0 + 1e-9, R / 8.0 - 1e-9);
    std::uniform_real_distribution<double> uy(-R * R / 2.0 + 1e-9, R * R / 2.0 - 1e-9);
    for (int t = 0; t < 300; ++t) {
      const double p[2] = {ux(rng), uy(rng)};
      int hits = 0;
      for (const auto& sc : subs)
        if (sc.box.contains(std::span<const double>(p, 2))) ++hits;
      CHECK(hits == 1);
    }

    // Separation of designated y-centers > R_l / 2.
    for (std::size_t i = 0; i < subs.size(); ++i)
      for (std::size_t j = i + 1; j < subs.size(); ++j)
        CHECK(std::abs(subs[i].center.y[0] - subs[j].center.y[0]) > Rl / 2.0);

    // Subcell shape: x within B_R(a_n), y within B_{C R_l}(b_m).
    for (const auto& sc : subs) {
      CHECK(sc.box.hi[0] - sc.box.lo[0] <= 2.0 * R + 1e-12);
      CHECK(sc.box.hi[1] - sc.box.lo[1] <= 2.0 * 9.0 * Rl + 1e-12);
    }

    // Count within a constant factor of 2^{(iota-ell) d2}.
    const double target = std::ldexp(1.0, iota - ell);
    CHECK(static_cast<double>(subs.size()) <= 2.0 * target);
    CHECK(static_cast<double>(subs.size()) >= target / 32.0);
  }

  CHECK(y_slab_decompose(cell, 1, iota, iota).size() <= 2);  // M = O(1) at ell = iota
  CHECK_THROWS_AS(y_slab_decompose(cell, 1, -1, iota), std::invalid_argument);
  CHECK_THROWS_AS(y_slab_decompose(cell, 1, iota + 1, iota), std::invalid_argument);

  CoverCell far = cell;
  far.center = pt({5.0 * R}, {0.0});
  CHECK_THROWS_AS(y_slab_decompose(far, 1, 0, iota), std::invalid_argument);
}
