#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "revolve/geometry.hpp"
#include "revolve/kernels.hpp"

namespace revolve {

// Nonnegative weights summing to 1 on a finite node set; the discretization
// of an equilibrium measure. params carries the originating curve parameters
// when the nodes were sampled from a generator curve.
struct DiscreteMeasure {
  std::vector<PlanePoint> nodes;
  std::vector<double> weights;
  std::vector<double> params;

  std::size_t size() const { return nodes.size(); }
  void validate() const;  // throws std::invalid_argument on violation
};

struct PotentialField {
  std::vector<PlanePoint> points;
  std::vector<double> values;
  KernelSpec kernel;
};

struct SupportEstimate {
  std::vector<std::size_t> active;  // indices with weight > threshold
  double threshold = 0.0;
  double param_lo = 0.0;  // hull interval I = [t1, t2] of active parameters
  double param_hi = 0.0;
  // max |t| over active nodes; the support arc half-width when the
  // parameters are circle angles.
  std::optional<double> arc_angle;
  bool two_point_degenerate = false;
  std::optional<double> theta_m;  // smallest |t| carrying mass, degenerate case
};

struct EquilibriumReport {
  double j_value = 0.0;
  double wolfe_gap = 0.0;
  double frostman_max_violation_on_support = 0.0;
  double frostman_min_slack_off_support = 0.0;
  std::size_t iterations = 0;
  std::size_t polish_rounds = 0;
  bool converged = false;
  std::vector<double> j_trace;  // per-iteration objective when recorded
};

struct SolveOptions {
  double tol = 1e-9;                  // Wolfe gap target
  std::size_t max_iterations = 200000;
  bool polish = true;                 // active-set refinement after Frank-Wolfe
  bool record_trace = false;
};

struct FrostmanReport {
  double j_value = 0.0;
  double max_violation_on_support = 0.0;  // max |W - J| over active nodes
  double min_slack_off_support = 0.0;     // min (W - J) over candidates
  double tol = 0.0;
  bool pass = false;
};

struct WeightedSpacePoints {
  std::vector<SpacePoint> points;
  std::vector<double> weights;
};

// J(nu) = sum_ij w_i w_j k(z_i, z_j), diagonal included (the plane kernels
// are continuous off the axis). Throws for axis diagonals under K/K_R.
double quadratic_energy(const DiscreteMeasure& m, const KernelSpec& spec);

// W^nu(z) = sum_j w_j k(z, z_j).
double potential(const DiscreteMeasure& m, const KernelSpec& spec, PlanePoint z);

PotentialField potential_field(const DiscreteMeasure& m, const KernelSpec& spec,
                               const std::vector<PlanePoint>& points);

// Minimizes the quadratic energy over the probability simplex on the given
// nodes: Frank-Wolfe with away steps, then an active-set polish that solves
// the stationarity system on the detected support (adding and dropping nodes
// until the optimality certificate holds). Deterministic.
std::pair<DiscreteMeasure, EquilibriumReport> solve_equilibrium(
    const std::vector<PlanePoint>& nodes, const KernelSpec& spec, const SolveOptions& opts = {},
    const std::vector<double>& params = {});

// Active set, parameter hull, arc angle and the two-point degeneracy flag of
// a solved measure. Requires params when interval/angle data is wanted.
SupportEstimate support_estimate(const DiscreteMeasure& m, double threshold);

// Equilibrium (Frostman-type) conditions: W = J on the support, W >= J on
// the candidate set, both within tol.
FrostmanReport frostman_check(const DiscreteMeasure& m, const KernelSpec& spec,
                              const std::vector<PlanePoint>& candidates, double tol);

// Rotationally symmetric lift of the measure to the revolved surface:
// each node is tensorized with phi_k = 2 pi k / M at weight w_j / M.
WeightedSpacePoints lift_measure(const DiscreteMeasure& m, std::size_t phi_samples);

// Default active-weight threshold: 1e-6 of total mass per node.
inline double default_support_threshold(std::size_t n_nodes) {
  return n_nodes == 0 ? 0.0 : 1e-6 / static_cast<double>(n_nodes);
}

}  // namespace revolve
