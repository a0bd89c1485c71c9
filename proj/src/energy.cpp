#include "revolve/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "revolve/util.hpp"

namespace revolve {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_angle(double phi) {
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
  return phi;
}

void require_mode_kernel(const Configuration& config, const KernelSpec& spec) {
  if (spec.is_3d() && config.mode != ConfigMode::Surface3D)
    throw std::invalid_argument("3D kernels need a Surface3D configuration");
  if (spec.is_plane() && config.mode != ConfigMode::Curve1D)
    throw std::invalid_argument("plane kernels need a Curve1D configuration");
}

}  // namespace

Configuration::Configuration(ConfigMode mode_, GeneratorCurve curve_, std::vector<double> t_,
                             std::vector<double> phi_)
    : mode(mode_), curve(std::move(curve_)), t(std::move(t_)), phi(std::move(phi_)) {
  if (mode == ConfigMode::Curve1D && !phi.empty())
    throw std::invalid_argument("Curve1D configurations carry no rotation angles");
  if (mode == ConfigMode::Surface3D && phi.size() != t.size())
    throw std::invalid_argument("Surface3D configurations need one phi per point");
}

SpacePoint Configuration::space_point(std::size_t i) const {
  double angle = mode == ConfigMode::Surface3D ? phi[i] : 0.0;
  return lift_to_surface(curve.eval(t[i]), angle);
}

void Configuration::validate() const {
  if (size() < 2) throw std::invalid_argument("configuration needs N >= 2 points");
  for (double ti : t) {
    if (ti < curve.param_lo() - 1e-9 || ti > curve.param_hi() + 1e-9)
      throw std::invalid_argument("configuration parameter outside curve domain");
  }
  for (double p : phi) {
    if (p < 0.0 || p >= kTwoPi) throw std::invalid_argument("phi must lie in [0, 2pi)");
  }
}

std::vector<double> point_potentials(const Configuration& config, const KernelSpec& spec) {
  require_mode_kernel(config, spec);
  const std::size_t n = config.size();
  std::vector<double> s(n, 0.0);

  if (spec.is_3d()) {
    std::vector<SpacePoint> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = config.space_point(i);
    parallel_chunks(n, 32, [&](std::size_t, std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        KahanSum acc;
        for (std::size_t j = 0; j < n; ++j) {
          if (j != i) acc.add(kernel_3d(p[i], p[j], spec));
        }
        s[i] = acc.value();
      }
    });
  } else {
    std::vector<PlanePoint> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = config.plane_point(i);
    parallel_chunks(n, 32, [&](std::size_t, std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        KahanSum acc;
        for (std::size_t j = 0; j < n; ++j) {
          if (j != i) acc.add(kernel_plane(spec, z[i], z[j]));
        }
        s[i] = acc.value();
      }
    });
  }
  return s;
}

double pair_energy(const Configuration& config, const KernelSpec& spec) {
  std::vector<double> s = point_potentials(config, spec);
  KahanSum acc;
  for (double v : s) acc.add(v);
  return acc.value();
}

std::vector<double> energy_gradient(const Configuration& config, const KernelSpec& spec) {
  require_mode_kernel(config, spec);
  const std::size_t n = config.size();

  if (spec.is_plane()) {
    std::vector<PlanePoint> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = config.plane_point(i);
    std::vector<double> grad(n, 0.0);
    parallel_chunks(n, 32, [&](std::size_t, std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        KahanSum gx, gy;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          Vec2 g = kernel_plane_grad(spec, z[i], z[j]);
          gx.add(g.x);
          gy.add(g.y);
        }
        Vec2 dz = config.curve.derivative(config.t[i]);
        // E counts each unordered pair twice and the kernel is symmetric.
        grad[i] = 2.0 * (gx.value() * dz.x + gy.value() * dz.y);
      }
    });
    return grad;
  }

  std::vector<SpacePoint> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = config.space_point(i);
  std::vector<double> grad(2 * n, 0.0);
  parallel_chunks(n, 32, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      KahanSum gx, gy, gz;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        Vec3 g = kernel_3d_grad(p[i], p[j], spec);
        gx.add(g.x);
        gy.add(g.y);
        gz.add(g.zeta);
      }
      Vec2 dz = config.curve.derivative(config.t[i]);
      double c = std::cos(config.phi[i]), s = std::sin(config.phi[i]);
      PlanePoint plane = config.curve.eval(config.t[i]);
      // dp/dt = (x'(t) cos phi, y'(t), x'(t) sin phi),
      // dp/dphi = (-x sin phi, 0, x cos phi).
      double dt = gx.value() * dz.x * c + gy.value() * dz.y + gz.value() * dz.x * s;
      double dphi = gx.value() * (-plane.x * s) + gz.value() * (plane.x * c);
      grad[i] = 2.0 * dt;
      grad[n + i] = 2.0 * dphi;
    }
  });
  return grad;
}

DiscreteMeasure counting_measure(const Configuration& config) {
  DiscreteMeasure m;
  const std::size_t n = config.size();
  if (n == 0) throw std::invalid_argument("counting_measure: empty configuration");
  m.nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) m.nodes.push_back(config.plane_point(i));
  m.params = config.t;
  m.weights.assign(n, 1.0 / static_cast<double>(n));
  return m;
}

namespace {

struct LocalResult {
  std::vector<double> x;
  double energy = 0.0;
  double grad_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

class ParamSpace {
public:
  ParamSpace(const GeneratorCurve& curve, ConfigMode mode, std::size_t n)
      : lo_(curve.param_lo()), hi_(curve.param_hi()), mode_(mode), n_(n) {}

  std::size_t dim() const { return mode_ == ConfigMode::Surface3D ? 2 * n_ : n_; }

  void project(std::vector<double>& x) const {
    for (std::size_t i = 0; i < n_; ++i) x[i] = std::clamp(x[i], lo_, hi_);
    if (mode_ == ConfigMode::Surface3D) {
      for (std::size_t i = n_; i < 2 * n_; ++i) x[i] = wrap_angle(x[i]);
    }
  }

  // Sup norm of the gradient with components blocked by an active clamp
  // zeroed out.
  double projected_grad_norm(const std::vector<double>& x, const std::vector<double>& g) const {
    double norm = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) {
      double gi = g[i];
      if (i < n_) {
        if (x[i] <= lo_ && gi > 0.0) gi = 0.0;
        if (x[i] >= hi_ && gi < 0.0) gi = 0.0;
      }
      norm = std::max(norm, std::abs(gi));
    }
    return norm;
  }

  Configuration make_config(const GeneratorCurve& curve, const std::vector<double>& x) const {
    std::vector<double> t(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n_));
    std::vector<double> phi;
    if (mode_ == ConfigMode::Surface3D)
      phi.assign(x.begin() + static_cast<std::ptrdiff_t>(n_), x.end());
    return Configuration(mode_, curve, std::move(t), std::move(phi));
  }

private:
  double lo_, hi_;
  ConfigMode mode_;
  std::size_t n_;
};

LocalResult descend(const GeneratorCurve& curve, const KernelSpec& spec, const ParamSpace& space,
                    std::vector<double> x, const OptimizeOptions& opts) {
  LocalResult res;
  space.project(x);
  Configuration cfg = space.make_config(curve, x);
  double energy = pair_energy(cfg, spec);
  std::vector<double> g = energy_gradient(cfg, spec);
  if (opts.record_trace) res.trace.push_back(energy);

  double step = 1.0;
  std::size_t it = 0;
  for (; it < opts.max_iterations; ++it) {
    double pg = space.projected_grad_norm(x, g);
    if (pg <= opts.grad_tol) {
      res.converged = true;
      break;
    }

    // Armijo backtracking along the projected steepest descent arc; the
    // accepted step warm-starts the next iteration.
    bool accepted = false;
    std::vector<double> x_new(x.size());
    double energy_new = 0.0;
    for (; step > 1e-18; step *= opts.backtrack) {
      for (std::size_t i = 0; i < x.size(); ++i) x_new[i] = x[i] - step * g[i];
      space.project(x_new);
      Configuration cand = space.make_config(curve, x_new);
      try {
        energy_new = pair_energy(cand, spec);
      } catch (const std::domain_error&) {
        continue;  // step collided two points under a singular kernel
      }
      double decrease = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) decrease += g[i] * (x_new[i] - x[i]);
      if (energy_new <= energy + opts.armijo_slope * decrease) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no admissible step left at this precision

    x = x_new;
    energy = energy_new;
    cfg = space.make_config(curve, x);
    g = energy_gradient(cfg, spec);
    if (opts.record_trace) res.trace.push_back(energy);
    step = std::min(step * 2.0, 1e6);
  }

  res.x = std::move(x);
  res.energy = energy;
  res.grad_norm = space.projected_grad_norm(res.x, g);
  res.iterations = it;
  return res;
}

}  // namespace

std::pair<Configuration, EnergyReport> optimize_config(const GeneratorCurve& curve,
                                                       const KernelSpec& spec, std::size_t N,
                                                       std::uint64_t seed,
                                                       const OptimizeOptions& opts) {
  if (N < 2) throw std::invalid_argument("optimize_config: need N >= 2 points");
  if (spec.is_plane() && !curve.has_frames())
    throw std::invalid_argument("optimize_config: polyline curves are not differentiable");

  ConfigMode mode = spec.is_3d() ? ConfigMode::Surface3D : ConfigMode::Curve1D;
  ParamSpace space(curve, mode, N);

  LocalResult best;
  bool have_best = false;
  std::size_t restarts = std::max<std::size_t>(1, opts.restarts);
  for (std::size_t r = 0; r < restarts; ++r) {
    SplitMix64 rng(mix_seed(seed, r));
    std::vector<double> x(space.dim());
    for (std::size_t i = 0; i < N; ++i) x[i] = rng.uniform(curve.param_lo(), curve.param_hi());
    if (mode == ConfigMode::Surface3D) {
      for (std::size_t i = N; i < 2 * N; ++i) x[i] = rng.uniform(0.0, kTwoPi);
    }

    LocalResult res = descend(curve, spec, space, std::move(x), opts);
    if (!have_best || res.energy < best.energy) {
      best = std::move(res);
      have_best = true;
    }
  }

  Configuration cfg = space.make_config(curve, best.x);
  EnergyReport rep;
  rep.point_potentials = point_potentials(cfg, spec);
  KahanSum total;
  for (double v : rep.point_potentials) total.add(v);
  rep.energy = total.value();
  rep.grad_norm = best.grad_norm;
  rep.iterations = best.iterations;
  rep.seed = seed;
  rep.converged = best.converged;
  rep.energy_trace = std::move(best.trace);
  return {cfg, rep};
}

}  // namespace revolve
