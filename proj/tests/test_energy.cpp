#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "revolve/energy.hpp"
#include "revolve/util.hpp"

using namespace revolve;

namespace {

Configuration ring_config(double rho, double y, const std::vector<double>& phis) {
  GeneratorCurve seg = GeneratorCurve::vertical_segment(rho, y - 0.5, y + 0.5);
  std::vector<double> t(phis.size(), y);
  return Configuration(ConfigMode::Surface3D, seg, t, phis);
}

}  // namespace

TEST_CASE("pair energy of two points at unit and doubled distance") {
  // Two lifts of (1, 0.5) at angle gap pi/3 sit at distance 1.
  Configuration c1 = ring_config(1.0, 0.5, {0.0, M_PI / 3});
  CHECK(pair_energy(c1, KernelSpec::log3d()) == doctest::Approx(0.0).epsilon(1e-14));

  Configuration c2 = ring_config(1.0, 0.5, {0.0, M_PI});
  CHECK(pair_energy(c2, KernelSpec::log3d()) ==
        doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("pair energy of an equilateral ring") {
  // Three equally spaced points on a 3D circle of radius rho: pairwise
  // distance sqrt(3) rho, E_0 = -6 log(sqrt(3) rho).
  double rho = 2.0;
  Configuration c = ring_config(rho, 0.0, {0.0, 2 * M_PI / 3, 4 * M_PI / 3});
  double expect = -6.0 * std::log(std::sqrt(3.0) * rho);
  CHECK(pair_energy(c, KernelSpec::log3d()) == doctest::Approx(expect).epsilon(1e-13));

  // Brute-force enumeration over ordered pairs.
  KahanSum acc;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j) acc.add(-std::log(space_dist(c.space_point(i), c.space_point(j))));
    }
  }
  CHECK(pair_energy(c, KernelSpec::log3d()) == doctest::Approx(acc.value()).epsilon(1e-14));
}

TEST_CASE("pair energy under the reduced kernel on a segment") {
  GeneratorCurve seg = GeneratorCurve::vertical_segment(2.0, 0.0, 1.0);
  Configuration c(ConfigMode::Curve1D, seg, {0.0, 1.0});
  double k = reduced_k({2, 0}, {2, 1});
  CHECK(pair_energy(c, KernelSpec::reduced()) == doctest::Approx(2.0 * k).epsilon(1e-14));
}

TEST_CASE("energy is invariant under permutation and global rotation") {
  GeneratorCurve circle = GeneratorCurve::circle({3, 0}, 1.0);
  SplitMix64 rng(33);
  std::vector<double> t, phi;
  for (int i = 0; i < 8; ++i) {
    t.push_back(rng.uniform(-M_PI, M_PI));
    phi.push_back(rng.uniform(0, 2 * M_PI));
  }
  Configuration c(ConfigMode::Surface3D, circle, t, phi);
  double e = pair_energy(c, KernelSpec::log3d());

  std::vector<double> t2 = t, phi2 = phi;
  std::swap(t2[0], t2[5]);
  std::swap(phi2[0], phi2[5]);
  Configuration cp(ConfigMode::Surface3D, circle, t2, phi2);
  CHECK(pair_energy(cp, KernelSpec::log3d()) == doctest::Approx(e).epsilon(1e-13));

  double shift = 1.234;
  std::vector<double> phi3;
  for (double p : phi) phi3.push_back(std::fmod(p + shift, 2 * M_PI));
  Configuration cr(ConfigMode::Surface3D, circle, t, phi3);
  CHECK(pair_energy(cr, KernelSpec::log3d()) == doctest::Approx(e).epsilon(1e-12));
}

TEST_CASE("mode and kernel pairing is enforced") {
  GeneratorCurve circle = GeneratorCurve::circle({3, 0}, 1.0);
  Configuration c1d(ConfigMode::Curve1D, circle, {0.0, 1.0});
  CHECK_THROWS_AS(pair_energy(c1d, KernelSpec::log3d()), std::invalid_argument);
  Configuration c3d(ConfigMode::Surface3D, circle, {0.0, 1.0}, {0.0, 1.0});
  CHECK_THROWS_AS(pair_energy(c3d, KernelSpec::reduced()), std::invalid_argument);
  CHECK_THROWS_AS(Configuration(ConfigMode::Curve1D, circle, {0.0}, {0.0}),
                  std::invalid_argument);
}

namespace {

double fd_gradient_error(const Configuration& cfg, const KernelSpec& spec) {
  std::vector<double> g = energy_gradient(cfg, spec);
  const double h = 1e-6;
  double worst = 0.0;
  double scale = 0.0;
  for (double gi : g) scale = std::max(scale, std::abs(gi));
  for (std::size_t i = 0; i < g.size(); ++i) {
    Configuration up = cfg, dn = cfg;
    if (i < cfg.size()) {
      up.t[i] += h;
      dn.t[i] -= h;
    } else {
      up.phi[i - cfg.size()] += h;
      dn.phi[i - cfg.size()] -= h;
    }
    double fd = (pair_energy(up, spec) - pair_energy(dn, spec)) / (2 * h);
    worst = std::max(worst, std::abs(fd - g[i]));
  }
  return worst / std::max(scale, 1e-8);
}

}  // namespace

TEST_CASE("analytic gradients match finite differences") {
  GeneratorCurve circle = GeneratorCurve::circle({3, 0}, 1.0);
  GeneratorCurve seg = GeneratorCurve::vertical_segment(2.0, 0.0, 1.0);
  GeneratorCurve ell = GeneratorCurve::ellipse({3, 0}, 1.0, 1.5);
  SplitMix64 rng(37);

  for (const auto& curve : {circle, seg, ell}) {
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<double> t, phi;
      for (int i = 0; i < 5; ++i) {
        t.push_back(rng.uniform(curve.param_lo() + 0.05, curve.param_hi() - 0.05));
        phi.push_back(rng.uniform(0.1, 2 * M_PI - 0.1));
      }
      Configuration c3(ConfigMode::Surface3D, curve, t, phi);
      CHECK(fd_gradient_error(c3, KernelSpec::log3d()) <= 1e-5);
      CHECK(fd_gradient_error(c3, KernelSpec::riesz(1.0)) <= 1e-5);
      Configuration c1(ConfigMode::Curve1D, curve, t);
      CHECK(fd_gradient_error(c1, KernelSpec::reduced()) <= 1e-5);
      CHECK(fd_gradient_error(c1, KernelSpec::limit()) <= 1e-5);
    }
  }
}

TEST_CASE("gradient of K along a vertical segment matches the closed form") {
  // d/dt K(gamma(t), gamma(s)) = sgn(s - t)/sqrt(4R^2 + (s-t)^2).
  GeneratorCurve seg = GeneratorCurve::vertical_segment(2.0, 0.0, 1.0);
  double t = 0.25, s = 0.85;
  Configuration c(ConfigMode::Curve1D, seg, {t, s});
  std::vector<double> g = energy_gradient(c, KernelSpec::reduced());
  // E = 2 K, so dE/dt = 2 dK/dt.
  double d = s - t;
  double expect = 2.0 * ((d > 0) - (d < 0)) / std::sqrt(16.0 + d * d);
  CHECK(g[0] == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("two-point optimum on the torus is the outer diameter") {
  GeneratorCurve circle = GeneratorCurve::circle({3, 0}, 1.0);
  OptimizeOptions opts;
  opts.restarts = 4;
  opts.max_iterations = 20000;
  // Stationarity at the scale monotone line searches can certify in doubles.
  opts.grad_tol = 1e-6;
  auto [cfg, rep] = optimize_config(circle, KernelSpec::log3d(), 2, 7, opts);
  double dist = space_dist(cfg.space_point(0), cfg.space_point(1));
  CHECK(dist == doctest::Approx(8.0).epsilon(1e-6));
  CHECK(rep.converged);
  CHECK(rep.grad_norm <= opts.grad_tol);
}

TEST_CASE("optimizer is deterministic for a fixed seed") {
  GeneratorCurve circle = GeneratorCurve::circle({3, 0}, 1.0);
  OptimizeOptions opts;
  opts.restarts = 2;
  opts.max_iterations = 2000;
  auto [cfg1, rep1] = optimize_config(circle, KernelSpec::log3d(), 12, 42, opts);
  auto [cfg2, rep2] = optimize_config(circle, KernelSpec::log3d(), 12, 42, opts);
  REQUIRE(cfg1.size() == cfg2.size());
  for (std::size_t i = 0; i < cfg1.size(); ++i) {
    CHECK(cfg1.t[i] == cfg2.t[i]);
    CHECK(cfg1.phi[i] == cfg2.phi[i]);
  }
  CHECK(rep1.energy == rep2.energy);
}

TEST_CASE("optimizer rejects N < 2 and reports a recomputable energy") {
  GeneratorCurve circle = GeneratorCurve::circle({3, 0}, 1.0);
  CHECK_THROWS_AS(optimize_config(circle, KernelSpec::log3d(), 1, 0), std::invalid_argument);

  OptimizeOptions opts;
  opts.restarts = 2;
  opts.max_iterations = 3000;
  opts.record_trace = true;
  auto [cfg, rep] = optimize_config(circle, KernelSpec::reduced(), 10, 5, opts);
  CHECK(std::abs(pair_energy(cfg, KernelSpec::reduced()) - rep.energy) <=
        1e-10 * std::max(1.0, std::abs(rep.energy)));
  REQUIRE(!rep.energy_trace.empty());
  for (std::size_t i = 1; i < rep.energy_trace.size(); ++i) {
    CHECK(rep.energy_trace[i] <= rep.energy_trace[i - 1] + 1e-13);
  }
  double total = 0.0;
  for (double s : rep.point_potentials) total += s;
  CHECK(total == doctest::Approx(rep.energy).epsilon(1e-12));
}

TEST_CASE("K-optimized points cluster on the right of an ellipse") {
  GeneratorCurve ell = GeneratorCurve::ellipse({3, 0}, 1.0, 1.5);
  OptimizeOptions opts;
  opts.restarts = 2;
  opts.max_iterations = 6000;
  auto [cfg, rep] = optimize_config(ell, KernelSpec::reduced(), 30, 42, opts);
  for (double t : cfg.t) CHECK(std::abs(t) <= M_PI / 2 + 1e-6);
}

TEST_CASE("counting measure carries uniform weights") {
  GeneratorCurve circle = GeneratorCurve::circle({3, 0}, 1.0);
  Configuration c(ConfigMode::Curve1D, circle, {0.1, -0.4, 1.2});
  DiscreteMeasure m = counting_measure(c);
  REQUIRE(m.size() == 3);
  for (double w : m.weights) CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  double sum = 0.0;
  for (double w : m.weights) sum += w;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.params == c.t);
}
