#include "revolve/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "revolve/util.hpp"

namespace revolve {

namespace {

constexpr double kCoincidence = 1e-14;

void require_halfplane(PlanePoint z) {
  if (z.x < 0.0) throw std::domain_error("reduced kernel: point outside H+");
}

}  // namespace

KernelSpec KernelSpec::riesz(double s) {
  if (!(s > 0.0)) throw std::invalid_argument("Riesz exponent must be positive");
  KernelSpec k{KernelKind::Riesz3D};
  k.s = s;
  return k;
}

KernelSpec KernelSpec::scaled(double R) {
  if (!(R > 0.0)) throw std::invalid_argument("kernel scale R must be positive");
  KernelSpec k{KernelKind::ScaledKR};
  k.R = R;
  return k;
}

KernelSpec KernelSpec::parse(const std::string& name) {
  if (name == "log3d") return log3d();
  if (name == "K") return reduced();
  if (name == "Kinf") return limit();
  if (name == "Kinf-sym") return limit_symmetrized();
  if (name.rfind("riesz:", 0) == 0) return riesz(std::stod(name.substr(6)));
  if (name.rfind("KR:", 0) == 0) return scaled(std::stod(name.substr(3)));
  throw std::invalid_argument("unknown kernel '" + name +
                              "' (expected riesz:<s>, log3d, K, KR:<R>, Kinf, Kinf-sym)");
}

std::string KernelSpec::to_string() const {
  switch (kind) {
    case KernelKind::Riesz3D:
      return "riesz:" + format_g17(s);
    case KernelKind::Log3D:
      return "log3d";
    case KernelKind::ReducedK:
      return "K";
    case KernelKind::ScaledKR:
      return "KR:" + format_g17(R);
    case KernelKind::LimitKInf:
      return "Kinf";
    case KernelKind::SymmetrizedKInf:
      return "Kinf-sym";
  }
  return "?";
}

double kernel_3d(const SpacePoint& p, const SpacePoint& q, const KernelSpec& spec) {
  double r = space_dist(p, q);
  if (r < kCoincidence) throw std::domain_error("kernel_3d: coincident points");
  switch (spec.kind) {
    case KernelKind::Riesz3D:
      return std::pow(r, -spec.s);
    case KernelKind::Log3D:
      return -std::log(r);
    default:
      throw std::invalid_argument("kernel_3d: spec is not a 3D kernel");
  }
}

Vec3 kernel_3d_grad(const SpacePoint& p, const SpacePoint& q, const KernelSpec& spec) {
  double r2 = space_dist2(p, q);
  double r = std::sqrt(r2);
  if (r < kCoincidence) throw std::domain_error("kernel_3d_grad: coincident points");
  double factor;
  switch (spec.kind) {
    case KernelKind::Riesz3D:
      factor = -spec.s * std::pow(r, -spec.s - 2.0);
      break;
    case KernelKind::Log3D:
      factor = -1.0 / r2;
      break;
    default:
      throw std::invalid_argument("kernel_3d_grad: spec is not a 3D kernel");
  }
  return {factor * (p.x - q.x), factor * (p.y - q.y), factor * (p.zeta - q.zeta)};
}

double log_trig_integral(double a, double b) {
  if (!(a > std::abs(b))) throw std::domain_error("log_trig_integral requires a > |b|");
  return std::log(0.5 * (a + std::sqrt((a - b) * (a + b))));
}

double reduced_k(PlanePoint z, PlanePoint w) {
  require_halfplane(z);
  require_halfplane(w);
  double d = plane_dist(z, w);
  double ds = plane_dist(z, reflect(w));
  double sum = d + ds;
  if (sum < kCoincidence)
    throw std::domain_error("reduced kernel singular: coincident axis points");
  return std::log(2.0 / sum);
}

double reduced_k_quadrature(PlanePoint z, PlanePoint w, std::size_t n) {
  if (n < 16) throw std::invalid_argument("reduced_k_quadrature: need n >= 16");
  require_halfplane(z);
  require_halfplane(w);
  if (plane_dist(z, w) + plane_dist(z, reflect(w)) < kCoincidence)
    throw std::domain_error("reduced kernel singular: coincident axis points");

  // |sigma_t(z) - w|^2 = a + b cos t with a = x^2 + u^2 + (y-v)^2, b = -2xu.
  // Offset nodes keep the diagonal's t = 0 singularity off the grid; for
  // smooth periodic integrands the rule is spectrally accurate either way.
  double dy = z.y - w.y;
  double a = z.x * z.x + w.x * w.x + dy * dy;
  double b = -2.0 * z.x * w.x;
  KahanSum acc;
  for (std::size_t k = 0; k < n; ++k) {
    double t = 2.0 * M_PI * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    acc.add(std::log(a + b * std::cos(t)));
  }
  return -0.5 * acc.value() / static_cast<double>(n);
}

double scaled_kr(PlanePoint z, PlanePoint w, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("scaled_kr: R must be positive");
  return 2.0 * R * (reduced_k({z.x + R, z.y}, {w.x + R, w.y}) + std::log(R));
}

double k_inf(PlanePoint z, PlanePoint w) { return -((z.x + w.x) + plane_dist(z, w)); }

double k_inf_sym(PlanePoint z, PlanePoint w) {
  return 0.5 * (k_inf(z, w) + k_inf(z, conjugate(w)));
}

double kernel_plane(const KernelSpec& spec, PlanePoint z, PlanePoint w) {
  switch (spec.kind) {
    case KernelKind::ReducedK:
      return reduced_k(z, w);
    case KernelKind::ScaledKR:
      return scaled_kr(z, w, spec.R);
    case KernelKind::LimitKInf:
      return k_inf(z, w);
    case KernelKind::SymmetrizedKInf:
      return k_inf_sym(z, w);
    default:
      throw std::invalid_argument("kernel_plane: spec is a 3D kernel");
  }
}

namespace {

Vec2 reduced_k_grad(PlanePoint z, PlanePoint w) {
  double d = plane_dist(z, w);
  double ds = plane_dist(z, reflect(w));
  double sum = d + ds;
  if (sum < kCoincidence)
    throw std::domain_error("reduced kernel gradient singular: coincident axis points");
  double gx = 0.0, gy = 0.0;
  if (d >= kCoincidence) {
    gx += (z.x - w.x) / d;
    gy += (z.y - w.y) / d;
  }
  if (ds >= kCoincidence) {
    gx += (z.x + w.x) / ds;
    gy += (z.y - w.y) / ds;
  }
  return {-gx / sum, -gy / sum};
}

Vec2 k_inf_grad(PlanePoint z, PlanePoint w) {
  double d = plane_dist(z, w);
  Vec2 g{-1.0, 0.0};
  if (d >= kCoincidence) {
    g.x -= (z.x - w.x) / d;
    g.y -= (z.y - w.y) / d;
  }
  return g;
}

}  // namespace

Vec2 kernel_plane_grad(const KernelSpec& spec, PlanePoint z, PlanePoint w) {
  switch (spec.kind) {
    case KernelKind::ReducedK:
      return reduced_k_grad(z, w);
    case KernelKind::ScaledKR: {
      Vec2 g = reduced_k_grad({z.x + spec.R, z.y}, {w.x + spec.R, w.y});
      return {2.0 * spec.R * g.x, 2.0 * spec.R * g.y};
    }
    case KernelKind::LimitKInf:
      return k_inf_grad(z, w);
    case KernelKind::SymmetrizedKInf: {
      Vec2 g1 = k_inf_grad(z, w);
      Vec2 g2 = k_inf_grad(z, conjugate(w));
      return {0.5 * (g1.x + g2.x), 0.5 * (g1.y + g2.y)};
    }
    default:
      throw std::invalid_argument("kernel_plane_grad: spec is a 3D kernel");
  }
}

}  // namespace revolve
