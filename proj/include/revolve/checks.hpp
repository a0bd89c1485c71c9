#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "revolve/energy.hpp"
#include "revolve/equilibrium.hpp"
#include "revolve/geometry.hpp"
#include "revolve/kernels.hpp"

namespace revolve {

// Outcome of one executable verification. Margins are oriented so that
// positive means the claim held on the grid; these are floating-point
// surrogates for the paper's strict inequalities, not proofs.
struct CheckReport {
  std::string name;
  std::string instance;
  bool pass = false;
  bool guaranteed = true;  // false for exploratory instances without a guarantee
  double worst_margin = 0.0;
  std::vector<std::size_t> grid;
  std::uint64_t seed = 0;
  std::vector<std::string> details;
};

// Strict inequalities are certified as margin > this on the grid.
inline constexpr double kStrictMargin = 1e-10;

struct MonotoneGrid {
  std::size_t rays = 1000;
  std::size_t samples_per_ray = 101;
  double x_max = 10.0;
  double const_tolerance = 1e-12;  // allowed variation on the constant segment
  std::uint64_t seed = 1;
};

// Lemma-style decrease of x -> k((x,y), w) along horizontal rays, plus the
// constant-then-decreasing split at x = u for y = v. spec must be K or K_inf.
CheckReport check_horizontal_monotonicity(const KernelSpec& spec, const MonotoneGrid& grid = {});

struct PairGrid {
  std::size_t ns = 201;
  std::size_t nt = 201;
  double fd_step = 1e-4;
};

// Strict convexity of t -> k(gamma(t), gamma(s)) for t != s. Closed forms for
// the vertical segment under K and circles under K_inf; central finite
// differences otherwise (with a half-step Richardson retry near zero).
// Closed curves are checked on their right-half arc |t| <= pi/2.
CheckReport check_convexity(const GeneratorCurve& curve, const KernelSpec& spec,
                            const PairGrid& grid = {});

// The frame conditions N.u_w < 0 and kappa + N.u_w/r_w > 0 for
// w in {gamma(s), gamma(s)_*}; cross-validated against circle closed forms.
// Non-circle instances are exploratory.
CheckReport check_kappa(const GeneratorCurve& curve, const PairGrid& grid = {});

// Every optimized point / active node lies on A_+ within tol in x at its y.
CheckReport check_support_in_aplus(const Configuration& config, const GeneratorCurve& curve,
                                   double tol = 1e-6);
CheckReport check_support_in_aplus(const DiscreteMeasure& measure, const GeneratorCurve& curve,
                                   double threshold, double tol = 1e-6);

struct Pi3Options {
  double spacing = 0.0;     // node spacing; support bound is pi/3 + 2*spacing
  double mass_tol = 0.01;   // degenerate case: each endpoint mass is 1/2 +- this
  std::size_t tail_samples = 64;
};

// Support-angle bound for a K_inf equilibrium measure on a circle-family
// node set symmetric about the circle's horizontal axis: theta <= pi/3 +
// 2*spacing when A_+^{pi/3} is populated, otherwise a two-point measure at
// +-theta_m. Also certifies the increasing potential tail beyond pi/3.
// Rejects asymmetric node sets.
CheckReport check_pi3(const DiscreteMeasure& solved, const Pi3Options& opts);

struct KrLimitOptions {
  std::vector<double> r_list{50.0, 100.0, 200.0, 400.0};
  std::size_t grid_per_axis = 7;  // z, w on grids over [0,2] x [-1,1]
  double ratio_window = 0.2;      // e(R')/e(R) within (1 +- window) * R/R'
  std::vector<double> weak_star_r{10.0, 100.0, 1000.0};
  std::size_t weak_star_nodes = 201;  // 0 disables the weak-star part
  SolveOptions solve{};
};

// K_R -> K_inf: sup-grid errors shrink like 1/R (consecutive ratios within
// the window, e(R)*R bounded within a factor 2), and equilibrium weights on
// a fixed circle discretization approach the K_inf weights in total
// variation.
CheckReport check_kr_limit(const KrLimitOptions& opts = {});

struct SandwichOptions {
  std::vector<std::size_t> n_list{10, 50, 100};
  std::size_t equilibrium_nodes = 401;
  double slack = 1e-3;
  std::uint64_t seed = 42;
  OptimizeOptions optimize{};
  SolveOptions solve{};
};

// Discrete-continuous sandwich E/(N(N-1)) <= J <= E/N^2 + ||k||_A/N within
// the stated slack, and the counting-measure energies approaching J.
CheckReport check_sandwich(const GeneratorCurve& curve, const KernelSpec& spec,
                           const SandwichOptions& opts = {});

}  // namespace revolve
