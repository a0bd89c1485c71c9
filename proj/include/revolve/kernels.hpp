#pragma once

#include <cstddef>
#include <string>

#include "revolve/geometry.hpp"

namespace revolve {

enum class KernelKind {
  Riesz3D,          // 1/|p-q|^s on R^3
  Log3D,            // log(1/|p-q|) on R^3
  ReducedK,         // K(z,w) = log(2/(|z-w| + |z-w*|)) on H+
  ScaledKR,         // K_R(z,w) = 2R (K(R+z, R+w) + log R)
  LimitKInf,        // K_inf(z,w) = -(Re[z - w*] + |z-w|)
  SymmetrizedKInf,  // (K_inf(z,w) + K_inf(z, conj w)) / 2
};

struct KernelSpec {
  KernelKind kind = KernelKind::ReducedK;
  double s = 0.0;  // Riesz exponent, > 0
  double R = 0.0;  // scaling distance, > 0

  static KernelSpec riesz(double s);
  static KernelSpec log3d() { return {KernelKind::Log3D}; }
  static KernelSpec reduced() { return {KernelKind::ReducedK}; }
  static KernelSpec scaled(double R);
  static KernelSpec limit() { return {KernelKind::LimitKInf}; }
  static KernelSpec limit_symmetrized() { return {KernelKind::SymmetrizedKInf}; }

  // CLI names: "riesz:<s>", "log3d", "K", "KR:<R>", "Kinf", "Kinf-sym".
  static KernelSpec parse(const std::string& name);
  std::string to_string() const;

  bool is_3d() const { return kind == KernelKind::Riesz3D || kind == KernelKind::Log3D; }
  bool is_plane() const { return !is_3d(); }
};

// 3D interaction kernels. Throws std::domain_error on coincident points.
double kernel_3d(const SpacePoint& p, const SpacePoint& q, const KernelSpec& spec);
// Gradient with respect to p.
Vec3 kernel_3d_grad(const SpacePoint& p, const SpacePoint& q, const KernelSpec& spec);

// (1/2pi) Int_0^{2pi} log(a + b cos t) dt = log((a + sqrt(a^2 - b^2)) / 2).
// Requires a > |b|.
double log_trig_integral(double a, double b);

// Reduced half-plane kernel K(z,w) = log(2/(|z-w| + |z-w*|)). Finite on the
// diagonal off the axis; throws std::domain_error for z = w on the axis and
// for points outside H+.
double reduced_k(PlanePoint z, PlanePoint w);

// Quadrature oracle for K: periodic-rule average of log(1/|sigma_t(z) - w|)
// over n offset nodes. Requires n >= 16.
double reduced_k_quadrature(PlanePoint z, PlanePoint w, std::size_t n);

// K_R(z,w) = 2R (K(R+z, R+w) + log R), R > 0.
double scaled_kr(PlanePoint z, PlanePoint w, double R);

// K_inf(z,w) = -((x + u) + |z-w|); defined on the whole plane.
double k_inf(PlanePoint z, PlanePoint w);

// Symmetrized limit kernel (K_inf(z,w) + K_inf(z, conj w)) / 2.
double k_inf_sym(PlanePoint z, PlanePoint w);

// Dispatch over the plane kernels (ReducedK, ScaledKR, LimitKInf,
// SymmetrizedKInf).
double kernel_plane(const KernelSpec& spec, PlanePoint z, PlanePoint w);

// d/dz of a plane kernel. At the |z-w| = 0 kink of the limit kernels the
// subgradient 0 is used for the distance term.
Vec2 kernel_plane_grad(const KernelSpec& spec, PlanePoint z, PlanePoint w);

}  // namespace revolve
