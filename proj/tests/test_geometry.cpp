#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "revolve/geometry.hpp"
#include "revolve/util.hpp"

using namespace revolve;

TEST_CASE("reflect mirrors across the rotation axis") {
  PlanePoint w = reflect({1.0, 2.0});
  CHECK(w.x == -1.0);
  CHECK(w.y == 2.0);

  PlanePoint axis = reflect({0.0, 5.0});
  CHECK(axis.x == 0.0);
  CHECK(axis.y == 5.0);

  PlanePoint p{3.7, -1.2};
  PlanePoint back = reflect(reflect(p));
  CHECK(back.x == p.x);
  CHECK(back.y == p.y);
}

TEST_CASE("reflect preserves modulus and height") {
  SplitMix64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    PlanePoint p{rng.uniform(-10, 10), rng.uniform(-10, 10)};
    PlanePoint r = reflect(p);
    CHECK(std::hypot(r.x, r.y) == doctest::Approx(std::hypot(p.x, p.y)).epsilon(1e-15));
    CHECK(r.y == p.y);
  }
}

TEST_CASE("rotate by pi and by zero") {
  SpacePoint half = rotate({1, 0, 0}, M_PI);
  CHECK(half.x == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(half.y == 0.0);
  CHECK(std::abs(half.zeta) < 1e-15);

  SpacePoint p{2, 3, 4};
  SpacePoint same = rotate(p, 0.0);
  CHECK(same.x == p.x);
  CHECK(same.y == p.y);
  CHECK(same.zeta == p.zeta);
}

TEST_CASE("rotate preserves height and axis distance") {
  SplitMix64 rng(11);
  for (int i = 0; i < 10000; ++i) {
    SpacePoint p{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    double t = rng.uniform(-10, 10);
    SpacePoint q = rotate(p, t);
    CHECK(q.y == p.y);
    double before = p.x * p.x + p.zeta * p.zeta;
    double after = q.x * q.x + q.zeta * q.zeta;
    CHECK(std::abs(after - before) <= 1e-12 * std::max(1.0, before));
  }
}

TEST_CASE("rotated squared distance matches the reduction identity") {
  // |sigma_t(z) - w|^2 = x^2 + u^2 + (y - v)^2 - 2 x u cos t, hand value 6 at
  // z = (2,1), w = (1,0), t = pi/2.
  SpacePoint z3 = lift_to_surface({2, 1}, 0.0);
  SpacePoint w3 = lift_to_surface({1, 0}, 0.0);
  CHECK(space_dist2(rotate(z3, M_PI / 2), w3) == doctest::Approx(6.0).epsilon(1e-14));

  SplitMix64 rng(13);
  for (int i = 0; i < 10000; ++i) {
    PlanePoint z{rng.uniform(0, 5), rng.uniform(-5, 5)};
    PlanePoint w{rng.uniform(0, 5), rng.uniform(-5, 5)};
    double t = rng.uniform(0, 2 * M_PI);
    double lhs = space_dist2(rotate(lift_to_surface(z, 0.0), t), lift_to_surface(w, 0.0));
    double dy = z.y - w.y;
    double rhs = z.x * z.x + w.x * w.x + dy * dy - 2.0 * z.x * w.x * std::cos(t);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("lift_to_surface places generator points") {
  SpacePoint a = lift_to_surface({4, 0}, 0.0);
  CHECK(a.x == 4.0);
  CHECK(a.y == 0.0);
  CHECK(a.zeta == 0.0);

  SpacePoint b = lift_to_surface({4, 0}, M_PI);
  CHECK(b.x == doctest::Approx(-4.0).epsilon(1e-15));

  SpacePoint c = lift_to_surface({3, 1}, M_PI / 2);
  CHECK(std::abs(c.x) < 1e-15);
  CHECK(c.y == 1.0);
  CHECK(c.zeta == doctest::Approx(3.0).epsilon(1e-15));

  CHECK_THROWS_AS(lift_to_surface({-0.1, 0}, 0.0), std::domain_error);
}

TEST_CASE("curve evaluation") {
  GeneratorCurve circle = GeneratorCurve::circle({3, 0}, 1.0);
  PlanePoint right = circle.eval(0.0);
  CHECK(right.x == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(right.y == 0.0);
  PlanePoint top = circle.eval(M_PI / 2);
  CHECK(top.x == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(top.y == doctest::Approx(1.0).epsilon(1e-15));

  GeneratorCurve seg = GeneratorCurve::vertical_segment(2.0, 0.0, 1.0);
  PlanePoint mid = seg.eval(0.5);
  CHECK(mid.x == 2.0);
  CHECK(mid.y == 0.5);

  CHECK_THROWS_AS(seg.eval(1.5), std::domain_error);
  CHECK_THROWS_AS(GeneratorCurve::circle({0, 0}, 1.0), std::invalid_argument);
}

TEST_CASE("curve frames: circle, segment, ellipse") {
  GeneratorCurve circle = GeneratorCurve::circle({3, 0}, 1.0);
  CurveFrame f = circle.frame(0.0);
  CHECK(f.curvature == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(f.normal.has_value());
  CHECK(f.normal->x == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(f.normal->y) < 1e-12);

  GeneratorCurve seg = GeneratorCurve::vertical_segment(2.0, 0.0, 1.0);
  CurveFrame fs = seg.frame(0.5);
  CHECK(fs.curvature == 0.0);
  CHECK(!fs.normal.has_value());

  GeneratorCurve ell = GeneratorCurve::ellipse({3, 0}, 2.0, 1.0);
  CurveFrame fe = ell.frame(0.0);
  CHECK(fe.curvature == doctest::Approx(2.0).epsilon(1e-12));  // a_e / b_e^2

  GeneratorCurve line = GeneratorCurve::polyline({{1, 0}, {2, 1}});
  CHECK_THROWS_AS(line.frame(0.5), std::domain_error);
}

TEST_CASE("frame orthonormality and curvature against finite differences") {
  std::vector<GeneratorCurve> curves = {
      GeneratorCurve::circle({3, 0}, 1.0),
      GeneratorCurve::ellipse({3, 0}, 2.0, 1.0),
      GeneratorCurve::ellipse({4, -1}, 1.3, 2.1),
  };
  SplitMix64 rng(17);
  for (const auto& curve : curves) {
    for (int i = 0; i < 1000; ++i) {
      double t = rng.uniform(curve.param_lo() + 1e-3, curve.param_hi() - 1e-3);
      CurveFrame f = curve.frame(t);
      CHECK(std::abs(std::hypot(f.tangent.x, f.tangent.y) - 1.0) <= 1e-10);
      REQUIRE(f.normal.has_value());
      CHECK(std::abs(std::hypot(f.normal->x, f.normal->y) - 1.0) <= 1e-10);
      CHECK(std::abs(f.tangent.x * f.normal->x + f.tangent.y * f.normal->y) <= 1e-12);

      // kappa = |dT/dt| / speed via centered differences of the unit tangent
      const double h = 1e-5;
      CurveFrame fp = curve.frame(t + h);
      CurveFrame fm = curve.frame(t - h);
      Vec2 d1 = curve.derivative(t);
      double speed = std::hypot(d1.x, d1.y);
      double dTx = (fp.tangent.x - fm.tangent.x) / (2 * h);
      double dTy = (fp.tangent.y - fm.tangent.y) / (2 * h);
      double kappa_fd = std::hypot(dTx, dTy) / speed;
      CHECK(std::abs(kappa_fd - f.curvature) <= 1e-5 * std::max(1.0, f.curvature));
    }
  }
}

namespace {

// Independent O(n^2) oracle for the per-y maxima.
std::vector<PlanePoint> rightmost_bruteforce(const std::vector<PlanePoint>& pts, double tol) {
  std::vector<PlanePoint> keep;
  for (const PlanePoint& p : pts) {
    bool beaten = false;
    for (const PlanePoint& q : pts) {
      bool same_bin = tol == 0.0 ? (q.y == p.y)
                                 : (std::floor(q.y / tol) == std::floor(p.y / tol));
      if (same_bin && q.x > p.x) beaten = true;
    }
    if (!beaten) keep.push_back(p);
  }
  std::sort(keep.begin(), keep.end(), [](const PlanePoint& a, const PlanePoint& b) {
    return a.y < b.y || (a.y == b.y && a.x < b.x);
  });
  return keep;
}

bool same_points(const std::vector<PlanePoint>& a, const std::vector<PlanePoint>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].x != b[i].x || a[i].y != b[i].y) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("rightmost keeps per-y maxima") {
  RightmostSet r = rightmost({{1, 0}, {2, 0}, {0.5, 1}}, 0.0);
  REQUIRE(r.points.size() == 2);
  CHECK(r.points[0].x == 2.0);
  CHECK(r.points[0].y == 0.0);
  CHECK(r.points[1].x == 0.5);
  CHECK(r.points[1].y == 1.0);

  CHECK_THROWS_AS(rightmost({}, 0.0), std::invalid_argument);
}

TEST_CASE("rightmost of a vertical segment returns every sample") {
  std::vector<PlanePoint> pts;
  for (int i = 0; i < 50; ++i) pts.push_back({2.0, i * 0.02});
  RightmostSet r = rightmost(pts, 1e-9);
  CHECK(r.points.size() == pts.size());
}

TEST_CASE("rightmost of a dense circle sample is the right half") {
  // Sample the circle about (3,0) in left/right pairs sharing the exact same
  // y, so the per-y maxima are the arc |t| <= pi/2.
  std::vector<PlanePoint> pts;
  const int n = 1000;
  for (int i = 0; i <= n; ++i) {
    double t = -M_PI / 2 + M_PI * i / n;
    double c = std::abs(std::cos(t));
    double y = std::sin(t);
    pts.push_back({3.0 + c, y});
    pts.push_back({3.0 - c, y});
  }
  double tol = 1e-9;
  RightmostSet r = rightmost(pts, tol);
  for (const PlanePoint& p : r.points) CHECK(p.x >= 3.0);
  CHECK(same_points(r.points, rightmost_bruteforce(pts, tol)));
}

TEST_CASE("rightmost is stable under permutation") {
  SplitMix64 rng(23);
  std::vector<PlanePoint> pts;
  for (int i = 0; i < 200; ++i) pts.push_back({rng.uniform(0, 4), rng.uniform(-1, 1)});
  RightmostSet r1 = rightmost(pts, 1e-3);

  // deterministic shuffle
  for (std::size_t i = pts.size(); i > 1; --i) {
    std::swap(pts[i - 1], pts[rng.next() % i]);
  }
  RightmostSet r2 = rightmost(pts, 1e-3);
  CHECK(same_points(r1.points, r2.points));
}

TEST_CASE("node grids are mirror-exact and seam-free") {
  GeneratorCurve circle = GeneratorCurve::circle({3, 0}, 1.0);
  auto grid = circle.node_grid(401);
  REQUIRE(grid.size() == 401);
  std::set<double> uniq(grid.begin(), grid.end());
  CHECK(uniq.size() == 401);  // no duplicated seam node on closed curves
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(grid[i] == -grid[grid.size() - 1 - i]);  // exact mirror
  }
  CHECK(grid[200] == 0.0);

  GeneratorCurve seg = GeneratorCurve::vertical_segment(2.0, 0.0, 1.0);
  auto open = seg.node_grid(201);
  CHECK(open.front() == 0.0);
  CHECK(open.back() == 1.0);
}

TEST_CASE("rightmost_x honors shape and domain") {
  GeneratorCurve circle = GeneratorCurve::circle({3, 0}, 1.0);
  CHECK(circle.rightmost_x(0.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(circle.rightmost_x(1.0) == doctest::Approx(3.0).epsilon(1e-7));
  CHECK_THROWS_AS(circle.rightmost_x(2.0), std::domain_error);

  GeneratorCurve ell = GeneratorCurve::ellipse({3, 0}, 2.0, 1.0);
  CHECK(ell.rightmost_x(0.0) == doctest::Approx(5.0).epsilon(1e-14));

  GeneratorCurve seg = GeneratorCurve::vertical_segment(2.5, -1.0, 1.0);
  CHECK(seg.rightmost_x(0.3) == 2.5);

  GeneratorCurve line = GeneratorCurve::polyline({{1, 0}, {3, 1}, {2, 2}});
  CHECK(line.rightmost_x(0.5) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(line.rightmost_x(1.0) == doctest::Approx(3.0).epsilon(1e-14));
}
