#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "revolve/equilibrium.hpp"
#include "revolve/geometry.hpp"
#include "revolve/kernels.hpp"

namespace revolve {

enum class ConfigMode {
  Surface3D,  // points sigma_phi(gamma(t), 0) on the revolved surface
  Curve1D,    // points gamma(t) on the generator curve
};

// An N-point configuration omega_N on a revolved surface or generator curve.
struct Configuration {
  ConfigMode mode = ConfigMode::Curve1D;
  GeneratorCurve curve;
  std::vector<double> t;    // curve parameters, one per point
  std::vector<double> phi;  // rotation angles in [0, 2pi); Surface3D only

  Configuration(ConfigMode mode, GeneratorCurve curve, std::vector<double> t,
                std::vector<double> phi = {});

  std::size_t size() const { return t.size(); }
  PlanePoint plane_point(std::size_t i) const { return curve.eval(t[i]); }
  SpacePoint space_point(std::size_t i) const;

  void validate() const;  // N >= 2, parameters within domain, phi in [0, 2pi)
};

struct EnergyReport {
  double energy = 0.0;
  std::vector<double> point_potentials;  // s_i = sum_{j != i} k(x_i, x_j)
  double grad_norm = 0.0;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  std::vector<double> energy_trace;  // accepted-step energies when recorded
};

struct OptimizeOptions {
  std::size_t restarts = 8;
  std::size_t max_iterations = 100000;
  double grad_tol = 1e-9;        // sup norm of the projected gradient
  double armijo_slope = 1e-4;
  double backtrack = 0.5;
  bool record_trace = false;
};

// E_k(omega_N) = sum over ordered pairs i != j of k(x_i, x_j); each unordered
// pair counts twice. 3D kernels pair with Surface3D configurations, plane
// kernels with Curve1D ones. Throws on coincident points under a singular
// kernel.
double pair_energy(const Configuration& config, const KernelSpec& spec);

// Per-point sums s_i = sum_{j != i} k(x_i, x_j); pair_energy is their total.
std::vector<double> point_potentials(const Configuration& config, const KernelSpec& spec);

// Gradient of pair_energy with respect to the free parameters, laid out as
// [t_0..t_{N-1}] for Curve1D and [t_0..t_{N-1}, phi_0..phi_{N-1}] for
// Surface3D. Analytic chain rule through the curve and the surface lift;
// the |z-w| kinks of the limit kernels use the subgradient 0.
std::vector<double> energy_gradient(const Configuration& config, const KernelSpec& spec);

// Multi-start projected gradient descent with Armijo backtracking. Curve
// parameters are clamped to the domain, rotation angles wrap modulo 2pi.
// Deterministic for fixed (seed, opts); returns the lowest-energy restart.
std::pair<Configuration, EnergyReport> optimize_config(const GeneratorCurve& curve,
                                                       const KernelSpec& spec, std::size_t N,
                                                       std::uint64_t seed,
                                                       const OptimizeOptions& opts = {});

// Normalized counting measure (1/N) sum delta_{gamma(t_i)} in the generator
// plane.
DiscreteMeasure counting_measure(const Configuration& config);

}  // namespace revolve
