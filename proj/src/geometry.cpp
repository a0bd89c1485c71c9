#include "revolve/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace revolve {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

constexpr double kDomainSlack = 1e-9;

}  // namespace

SpacePoint rotate(const SpacePoint& p, double t) {
  double c = std::cos(t), s = std::sin(t);
  return {p.x * c - p.zeta * s, p.y, p.x * s + p.zeta * c};
}

SpacePoint lift_to_surface(PlanePoint z, double phi) {
  if (z.x < 0.0) throw std::domain_error("lift_to_surface: point left of the rotation axis");
  return {z.x * std::cos(phi), z.y, z.x * std::sin(phi)};
}

GeneratorCurve::GeneratorCurve(Shape shape) : shape_(std::move(shape)) {
  if (auto* c = std::get_if<CircleShape>(&shape_)) {
    require_finite(c->center.x, "circle center");
    require_finite(c->center.y, "circle center");
    if (!(c->radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
    if (!(c->t_lo < c->t_hi)) throw std::invalid_argument("circle angle range is empty");
    a_ = c->t_lo;
    b_ = c->t_hi;
    closed_ = std::abs((b_ - a_) - 2.0 * M_PI) <= 1e-12;
  } else if (auto* v = std::get_if<VerticalSegmentShape>(&shape_)) {
    if (!(v->abscissa > 0.0)) throw std::invalid_argument("segment abscissa must be positive");
    if (!(v->y_lo < v->y_hi)) throw std::invalid_argument("segment y range is empty");
    a_ = v->y_lo;
    b_ = v->y_hi;
    closed_ = false;
  } else if (auto* e = std::get_if<EllipseShape>(&shape_)) {
    if (!(e->semi_x > 0.0) || !(e->semi_y > 0.0))
      throw std::invalid_argument("ellipse semi-axes must be positive");
    if (!(e->t_lo < e->t_hi)) throw std::invalid_argument("ellipse angle range is empty");
    a_ = e->t_lo;
    b_ = e->t_hi;
    closed_ = std::abs((b_ - a_) - 2.0 * M_PI) <= 1e-12;
  } else {
    auto& p = std::get<PolylineShape>(shape_);
    if (p.vertices.size() < 2) throw std::invalid_argument("polyline needs >= 2 vertices");
    a_ = 0.0;
    b_ = static_cast<double>(p.vertices.size() - 1);
    closed_ = false;
  }

  // The image must stay in H+; a dense parameter sweep is robust for every
  // shape, including angle-restricted arcs.
  double min_x = HUGE_VAL;
  constexpr int kSamples = 4096;
  for (int i = 0; i <= kSamples; ++i) {
    double t = a_ + (b_ - a_) * static_cast<double>(i) / kSamples;
    min_x = std::min(min_x, eval(t).x);
  }
  if (min_x < -1e-12) throw std::invalid_argument("curve leaves the half-plane H+");
}

GeneratorCurve GeneratorCurve::circle(PlanePoint center, double radius, double t_lo, double t_hi) {
  return GeneratorCurve(CircleShape{center, radius, t_lo, t_hi});
}

GeneratorCurve GeneratorCurve::vertical_segment(double abscissa, double y_lo, double y_hi) {
  return GeneratorCurve(VerticalSegmentShape{abscissa, y_lo, y_hi});
}

GeneratorCurve GeneratorCurve::ellipse(PlanePoint center, double semi_x, double semi_y,
                                       double t_lo, double t_hi) {
  return GeneratorCurve(EllipseShape{center, semi_x, semi_y, t_lo, t_hi});
}

GeneratorCurve GeneratorCurve::polyline(std::vector<PlanePoint> vertices) {
  return GeneratorCurve(PolylineShape{std::move(vertices)});
}

bool GeneratorCurve::has_frames() const {
  return !std::holds_alternative<PolylineShape>(shape_);
}

PlanePoint GeneratorCurve::eval(double t) const {
  if (t < a_ - kDomainSlack || t > b_ + kDomainSlack)
    throw std::domain_error("curve parameter outside domain");
  t = std::clamp(t, a_, b_);

  if (auto* c = std::get_if<CircleShape>(&shape_)) {
    return {c->center.x + c->radius * std::cos(t), c->center.y + c->radius * std::sin(t)};
  }
  if (auto* v = std::get_if<VerticalSegmentShape>(&shape_)) {
    return {v->abscissa, t};
  }
  if (auto* e = std::get_if<EllipseShape>(&shape_)) {
    return {e->center.x + e->semi_x * std::cos(t), e->center.y + e->semi_y * std::sin(t)};
  }
  auto& p = std::get<PolylineShape>(shape_);
  double fi = std::floor(t);
  std::size_t i = std::min(static_cast<std::size_t>(std::max(fi, 0.0)), p.vertices.size() - 2);
  double u = t - static_cast<double>(i);
  const PlanePoint& p0 = p.vertices[i];
  const PlanePoint& p1 = p.vertices[i + 1];
  return {p0.x + u * (p1.x - p0.x), p0.y + u * (p1.y - p0.y)};
}

Vec2 GeneratorCurve::derivative(double t) const {
  if (t < a_ - kDomainSlack || t > b_ + kDomainSlack)
    throw std::domain_error("curve parameter outside domain");
  t = std::clamp(t, a_, b_);

  if (auto* c = std::get_if<CircleShape>(&shape_)) {
    return {-c->radius * std::sin(t), c->radius * std::cos(t)};
  }
  if (std::holds_alternative<VerticalSegmentShape>(shape_)) {
    return {0.0, 1.0};
  }
  if (auto* e = std::get_if<EllipseShape>(&shape_)) {
    return {-e->semi_x * std::sin(t), e->semi_y * std::cos(t)};
  }
  throw std::domain_error("polyline curves are not differentiable");
}

CurveFrame GeneratorCurve::frame(double t) const {
  if (!has_frames()) throw std::domain_error("polyline curves carry no frame");

  CurveFrame f;
  f.point = eval(t);

  Vec2 d1 = derivative(t);
  Vec2 d2;
  if (auto* c = std::get_if<CircleShape>(&shape_)) {
    d2 = {-c->radius * std::cos(t), -c->radius * std::sin(t)};
  } else if (std::holds_alternative<VerticalSegmentShape>(shape_)) {
    d2 = {0.0, 0.0};
  } else {
    auto& e = std::get<EllipseShape>(shape_);
    d2 = {-e.semi_x * std::cos(t), -e.semi_y * std::sin(t)};
  }

  double speed = std::hypot(d1.x, d1.y);
  if (speed < 1e-14) throw std::domain_error("curve frame undefined: vanishing speed");
  f.tangent = {d1.x / speed, d1.y / speed};

  // Arclength normalization on demand: T' w.r.t. arclength is
  // (d2 - (d2.T)T)/speed^2, kappa = |T'|.
  double d2t = d2.x * f.tangent.x + d2.y * f.tangent.y;
  Vec2 tp = {(d2.x - d2t * f.tangent.x) / (speed * speed),
             (d2.y - d2t * f.tangent.y) / (speed * speed)};
  double kappa = std::hypot(tp.x, tp.y);
  f.curvature = kappa;
  if (kappa > 1e-14) {
    f.normal = Vec2{tp.x / kappa, tp.y / kappa};
  }
  return f;
}

std::vector<double> GeneratorCurve::node_grid(std::size_t n) const {
  if (n == 0) throw std::invalid_argument("node_grid: n must be positive");
  double mid = 0.5 * (a_ + b_);
  double half = 0.5 * (b_ - a_);
  std::vector<double> t(n);
  if (n == 1) {
    t[0] = mid;
    return t;
  }
  // Offsets are mirrored by negation so the grid is exactly symmetric about
  // the domain midpoint.
  for (std::size_t k = 0; k < (n + 1) / 2; ++k) {
    double s = closed_ ? (static_cast<double>(2 * k + 1) / static_cast<double>(n) - 1.0)
                       : (2.0 * static_cast<double>(k) / static_cast<double>(n - 1) - 1.0);
    t[k] = mid + half * s;
    t[n - 1 - k] = mid - half * s;
  }
  return t;
}

double GeneratorCurve::rightmost_x(double y) const {
  auto in_domain = [&](double t) { return t >= a_ - kDomainSlack && t <= b_ + kDomainSlack; };

  if (auto* v = std::get_if<VerticalSegmentShape>(&shape_)) {
    if (y < v->y_lo - kDomainSlack || y > v->y_hi + kDomainSlack)
      throw std::domain_error("height not attained by the segment");
    return v->abscissa;
  }

  auto arc_max = [&](double cx, double cy, double rx, double ry) {
    double q = (y - cy) / ry;
    if (std::abs(q) > 1.0 + 1e-12) throw std::domain_error("height not attained by the curve");
    q = std::clamp(q, -1.0, 1.0);
    double t0 = std::asin(q);
    double best = -HUGE_VAL;
    bool found = false;
    for (double cand : {t0, M_PI - t0, -M_PI - t0, t0 + 2.0 * M_PI, t0 - 2.0 * M_PI}) {
      if (!in_domain(cand)) continue;
      found = true;
      best = std::max(best, cx + rx * std::cos(cand));
    }
    if (!found) throw std::domain_error("height not attained within the parameter domain");
    return best;
  };

  if (auto* c = std::get_if<CircleShape>(&shape_)) {
    return arc_max(c->center.x, c->center.y, c->radius, c->radius);
  }
  if (auto* e = std::get_if<EllipseShape>(&shape_)) {
    return arc_max(e->center.x, e->center.y, e->semi_x, e->semi_y);
  }

  auto& p = std::get<PolylineShape>(shape_);
  double best = -HUGE_VAL;
  bool found = false;
  for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
    const PlanePoint& p0 = p.vertices[i];
    const PlanePoint& p1 = p.vertices[i + 1];
    double ylo = std::min(p0.y, p1.y), yhi = std::max(p0.y, p1.y);
    if (y < ylo - kDomainSlack || y > yhi + kDomainSlack) continue;
    found = true;
    if (std::abs(p1.y - p0.y) <= 1e-15) {
      best = std::max(best, std::max(p0.x, p1.x));
    } else {
      double u = std::clamp((y - p0.y) / (p1.y - p0.y), 0.0, 1.0);
      best = std::max(best, p0.x + u * (p1.x - p0.x));
    }
  }
  if (!found) throw std::domain_error("height not attained by the polyline");
  return best;
}

std::string GeneratorCurve::describe() const {
  std::ostringstream os;
  if (auto* c = std::get_if<CircleShape>(&shape_)) {
    os << "circle(center=(" << c->center.x << "," << c->center.y << "),r=" << c->radius << ")";
  } else if (auto* v = std::get_if<VerticalSegmentShape>(&shape_)) {
    os << "vertical_segment(x=" << v->abscissa << ",y=[" << v->y_lo << "," << v->y_hi << "])";
  } else if (auto* e = std::get_if<EllipseShape>(&shape_)) {
    os << "ellipse(center=(" << e->center.x << "," << e->center.y << "),a=" << e->semi_x
       << ",b=" << e->semi_y << ")";
  } else {
    os << "polyline(" << std::get<PolylineShape>(shape_).vertices.size() << " vertices)";
  }
  return os.str();
}

RightmostSet rightmost(const std::vector<PlanePoint>& points, double y_tolerance) {
  if (points.empty()) throw std::invalid_argument("rightmost: empty input");
  if (y_tolerance < 0.0) throw std::invalid_argument("rightmost: negative tolerance");

  // Bin key: exact y for tolerance 0, floor(y / tol) otherwise.
  std::map<double, std::vector<PlanePoint>> bins;
  for (const PlanePoint& p : points) {
    double key = (y_tolerance == 0.0) ? p.y : std::floor(p.y / y_tolerance);
    bins[key].push_back(p);
  }

  RightmostSet out;
  for (auto& [key, group] : bins) {
    double max_x = -HUGE_VAL;
    for (const PlanePoint& p : group) max_x = std::max(max_x, p.x);
    for (const PlanePoint& p : group) {
      if (p.x == max_x) out.points.push_back(p);
    }
  }
  std::sort(out.points.begin(), out.points.end(), [](const PlanePoint& a, const PlanePoint& b) {
    return a.y < b.y || (a.y == b.y && a.x < b.x);
  });
  return out;
}

}  // namespace revolve
