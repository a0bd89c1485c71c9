#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace revolve {

// Point z = x + iy of the half-plane H+ = {x >= 0}; x is the distance from
// the rotation axis, y the height.
struct PlanePoint {
  double x = 0.0;
  double y = 0.0;
};

// Cartesian point in 3-space; the rotation axis is the y-axis.
struct SpacePoint {
  double x = 0.0;
  double y = 0.0;
  double zeta = 0.0;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double zeta = 0.0;
};

inline PlanePoint reflect(PlanePoint w) { return {-w.x, w.y}; }
inline PlanePoint conjugate(PlanePoint w) { return {w.x, -w.y}; }

inline double plane_dist(PlanePoint z, PlanePoint w) { return std::hypot(z.x - w.x, z.y - w.y); }

inline double space_dist2(const SpacePoint& p, const SpacePoint& q) {
  double dx = p.x - q.x, dy = p.y - q.y, dz = p.zeta - q.zeta;
  return dx * dx + dy * dy + dz * dz;
}
inline double space_dist(const SpacePoint& p, const SpacePoint& q) {
  return std::sqrt(space_dist2(p, q));
}

// Rotation about the y-axis through angle t.
SpacePoint rotate(const SpacePoint& p, double t);

// Places the generator point z on the revolved surface at rotation angle phi.
// Throws std::domain_error for z.x < 0.
SpacePoint lift_to_surface(PlanePoint z, double phi);

// Unit tangent / normal frame of a generator curve at one parameter value.
// The normal is T'/|T'| (inward for a counterclockwise circle) and is absent
// on straight pieces, where the curvature vanishes.
struct CurveFrame {
  PlanePoint point;
  Vec2 tangent;
  std::optional<Vec2> normal;
  double curvature = 0.0;  // with respect to arclength, >= 0
};

struct CircleShape {
  PlanePoint center;
  double radius = 1.0;
  double t_lo = -M_PI;
  double t_hi = M_PI;
};

struct VerticalSegmentShape {
  double abscissa = 1.0;  // x = R > 0
  double y_lo = 0.0;
  double y_hi = 1.0;
};

struct EllipseShape {
  PlanePoint center;
  double semi_x = 1.0;  // a_e
  double semi_y = 1.0;  // b_e
  double t_lo = -M_PI;
  double t_hi = M_PI;
};

struct PolylineShape {
  std::vector<PlanePoint> vertices;  // parameter t in [0, n-1], linear pieces
};

// Parametric generator curve in H+. Frames require a twice differentiable
// shape with nonvanishing speed; polylines support evaluation only.
class GeneratorCurve {
public:
  using Shape = std::variant<CircleShape, VerticalSegmentShape, EllipseShape, PolylineShape>;

  static GeneratorCurve circle(PlanePoint center, double radius, double t_lo = -M_PI,
                               double t_hi = M_PI);
  static GeneratorCurve vertical_segment(double abscissa, double y_lo, double y_hi);
  static GeneratorCurve ellipse(PlanePoint center, double semi_x, double semi_y,
                                double t_lo = -M_PI, double t_hi = M_PI);
  static GeneratorCurve polyline(std::vector<PlanePoint> vertices);

  double param_lo() const { return a_; }
  double param_hi() const { return b_; }
  // Closed curves (full-angle circles and ellipses) are sampled without a
  // duplicated seam node.
  bool closed() const { return closed_; }
  bool has_frames() const;

  PlanePoint eval(double t) const;       // throws std::domain_error outside [a, b]
  Vec2 derivative(double t) const;       // gamma'(t); throws for polylines
  CurveFrame frame(double t) const;      // throws where no frame exists

  // n parameter values spanning the domain: endpoint-inclusive for open
  // curves, midpoint-offset for closed ones. Built so that the grid is an
  // exact mirror image of itself about the domain midpoint.
  std::vector<double> node_grid(std::size_t n) const;

  // x_A(y): largest x the curve attains at height y, honoring the parameter
  // domain. Throws std::domain_error when the curve never reaches height y.
  double rightmost_x(double y) const;

  const Shape& shape() const { return shape_; }
  std::string describe() const;

private:
  explicit GeneratorCurve(Shape shape);

  Shape shape_;
  double a_ = 0.0;
  double b_ = 1.0;
  bool closed_ = false;
};

// "Right-most" subset of a finite sample: one group of maximal-x points per
// y-bin, sorted by y.
struct RightmostSet {
  std::vector<PlanePoint> points;
  std::optional<std::string> as_curve;
};

// Bins the input by y with the given bin width (exact grouping for
// y_tolerance == 0) and keeps the points of maximal x in each bin.
// Throws std::invalid_argument on empty input.
RightmostSet rightmost(const std::vector<PlanePoint>& points, double y_tolerance);

}  // namespace revolve
