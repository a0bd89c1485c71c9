#include "revolve/checks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "revolve/util.hpp"

namespace revolve {

namespace {

std::string fmt(double v) { return format_g17(v); }

void note(CheckReport& rep, const std::string& msg) { rep.details.push_back(msg); }

void finish(CheckReport& rep) { rep.pass = rep.worst_margin >= 0.0; }

// Sub-arc the convexity/kappa grids run over: the full domain for open
// curves, the right-half arc for closed ones (the theorems address A_+).
std::pair<double, double> grid_domain(const GeneratorCurve& curve) {
  if (curve.closed()) return {-M_PI / 2.0, M_PI / 2.0};
  return {curve.param_lo(), curve.param_hi()};
}

}  // namespace

CheckReport check_horizontal_monotonicity(const KernelSpec& spec, const MonotoneGrid& grid) {
  if (spec.kind != KernelKind::ReducedK && spec.kind != KernelKind::LimitKInf)
    throw std::invalid_argument("check_horizontal_monotonicity: spec must be K or Kinf");

  CheckReport rep;
  rep.name = "monotone";
  rep.instance = spec.to_string();
  rep.seed = grid.seed;
  rep.grid = {grid.rays, grid.samples_per_ray};

  SplitMix64 rng(mix_seed(grid.seed, 0));
  double worst_strict = HUGE_VAL;

  // Strict decrease along rays with y != v.
  for (std::size_t r = 0; r < grid.rays; ++r) {
    PlanePoint w{rng.uniform(0.5, 5.0), rng.uniform(-3.0, 3.0)};
    double y;
    do {
      y = rng.uniform(-3.0, 3.0);
    } while (std::abs(y - w.y) < 0.01);

    double prev = kernel_plane(spec, {0.0, y}, w);
    for (std::size_t i = 1; i < grid.samples_per_ray; ++i) {
      double x = grid.x_max * static_cast<double>(i) / static_cast<double>(grid.samples_per_ray - 1);
      double cur = kernel_plane(spec, {x, y}, w);
      worst_strict = std::min(worst_strict, prev - cur);
      prev = cur;
    }
  }
  note(rep, "strict rays: min decrease " + fmt(worst_strict));

  // y = v rays: constant on [0, u], strictly decreasing on [u, x_max].
  double worst_const = 0.0;
  double worst_tail = HUGE_VAL;
  std::size_t const_rays = std::max<std::size_t>(grid.rays / 10, 16);
  for (std::size_t r = 0; r < const_rays; ++r) {
    PlanePoint w{rng.uniform(0.5, 5.0), rng.uniform(-3.0, 3.0)};
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    for (std::size_t i = 0; i < grid.samples_per_ray; ++i) {
      double x = w.x * static_cast<double>(i) / static_cast<double>(grid.samples_per_ray - 1);
      double v = kernel_plane(spec, {x, w.y}, w);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    worst_const = std::max(worst_const, hi - lo);

    double prev = kernel_plane(spec, {w.x, w.y}, w);
    for (std::size_t i = 1; i < grid.samples_per_ray; ++i) {
      double x = w.x + (grid.x_max - w.x) * static_cast<double>(i) /
                           static_cast<double>(grid.samples_per_ray - 1);
      double cur = kernel_plane(spec, {x, w.y}, w);
      worst_tail = std::min(worst_tail, prev - cur);
      prev = cur;
    }
  }
  note(rep, "constant segment: max variation " + fmt(worst_const));
  note(rep, "past-u rays: min decrease " + fmt(worst_tail));

  rep.worst_margin = std::min({worst_strict - kStrictMargin, grid.const_tolerance - worst_const,
                               worst_tail - kStrictMargin});
  finish(rep);
  return rep;
}

namespace {

// Closed-form second derivative of t -> k(gamma(t), gamma(s)) where one is
// known; empty otherwise.
std::optional<double> convexity_closed_form(const GeneratorCurve& curve, const KernelSpec& spec,
                                            double s, double t) {
  if (spec.kind == KernelKind::ReducedK) {
    if (auto* v = std::get_if<VerticalSegmentShape>(&curve.shape())) {
      double d = s - t;
      double q = 4.0 * v->abscissa * v->abscissa + d * d;
      return std::abs(d) / (q * std::sqrt(q));
    }
  }
  if (spec.kind == KernelKind::LimitKInf) {
    if (auto* c = std::get_if<CircleShape>(&curve.shape())) {
      return c->radius * (std::cos(t) + 0.5 * std::abs(std::sin(0.5 * (s - t))));
    }
  }
  return std::nullopt;
}

double convexity_fd(const GeneratorCurve& curve, const KernelSpec& spec, double s, double t,
                    double h) {
  PlanePoint ws = curve.eval(s);
  double f0 = kernel_plane(spec, curve.eval(t), ws);
  double fp = kernel_plane(spec, curve.eval(t + h), ws);
  double fm = kernel_plane(spec, curve.eval(t - h), ws);
  return (fp - 2.0 * f0 + fm) / (h * h);
}

}  // namespace

CheckReport check_convexity(const GeneratorCurve& curve, const KernelSpec& spec,
                            const PairGrid& grid) {
  if (!curve.has_frames()) throw std::invalid_argument("check_convexity: curve not differentiable");
  if (!spec.is_plane()) throw std::invalid_argument("check_convexity: needs a plane kernel");

  CheckReport rep;
  rep.name = "convexity";
  rep.instance = spec.to_string() + " on " + curve.describe();
  rep.grid = {grid.ns, grid.nt};

  auto [lo, hi] = grid_domain(curve);
  const double h = grid.fd_step;
  bool have_closed = convexity_closed_form(curve, spec, lo, hi).has_value();
  note(rep, have_closed ? "method: closed form" : "method: central differences, h=" + fmt(h));

  double worst = HUGE_VAL;
  std::vector<double> per_row(grid.ns, HUGE_VAL);

  parallel_chunks(grid.ns, 32, [&](std::size_t, std::size_t a, std::size_t b) {
    for (std::size_t is = a; is < b; ++is) {
      double s = lo + (hi - lo) * static_cast<double>(is) / static_cast<double>(grid.ns - 1);
      double row = HUGE_VAL;
      for (std::size_t it = 0; it < grid.nt; ++it) {
        double t = lo + (hi - lo) * static_cast<double>(it) / static_cast<double>(grid.nt - 1);
        if (std::abs(t - s) <= 2.0 * h) continue;  // convexity splits at t = s
        if (!have_closed && (t - h < curve.param_lo() || t + h > curve.param_hi())) continue;
        double d2;
        if (auto cf = convexity_closed_form(curve, spec, s, t)) {
          d2 = *cf;
        } else {
          d2 = convexity_fd(curve, spec, s, t, h);
          if (std::abs(d2) <= 10.0 * h * h) d2 = convexity_fd(curve, spec, s, t, 0.5 * h);
        }
        row = std::min(row, d2);
      }
      per_row[is] = row;
    }
  });
  for (std::size_t is = 0; is < grid.ns; ++is) worst = std::min(worst, per_row[is]);

  note(rep, "min d2/dt2 over grid (cells within 2h of t=s skipped): " + fmt(worst));
  rep.worst_margin = worst - kStrictMargin;
  finish(rep);
  return rep;
}

namespace {

struct KappaQuantities {
  double n_dot_u = 0.0;
  double bracket = 0.0;
};

KappaQuantities kappa_frame(const GeneratorCurve& curve, double t, PlanePoint w) {
  CurveFrame f = curve.frame(t);
  if (!f.normal) throw std::domain_error("check_kappa: zero curvature");
  double rx = f.point.x - w.x;
  double ry = f.point.y - w.y;
  double r = std::hypot(rx, ry);
  double dot = (f.normal->x * rx + f.normal->y * ry) / r;
  return {dot, f.curvature + dot / r};
}

// Corollary-style closed forms on a circle of center (cx, .) and radius r,
// written for arbitrary radius via Rt = cx / r.
KappaQuantities kappa_circle_closed(double cx, double r, double s, double t, bool reflected) {
  double Rt = cx / r;
  KappaQuantities q;
  if (!reflected) {
    q.n_dot_u = -std::abs(std::sin(0.5 * (s - t)));
    q.bracket = 0.5 / r;
  } else {
    double den2 = (2.0 * Rt + std::cos(s) + std::cos(t)) * (2.0 * Rt + std::cos(s) + std::cos(t)) +
                  (std::sin(s) - std::sin(t)) * (std::sin(s) - std::sin(t));
    q.n_dot_u = -(2.0 * Rt * std::cos(t) + std::cos(s + t) + 1.0) / std::sqrt(den2);
    q.bracket = (0.5 + 2.0 * Rt * (Rt + std::cos(s)) / den2) / r;
  }
  return q;
}

}  // namespace

CheckReport check_kappa(const GeneratorCurve& curve, const PairGrid& grid) {
  if (!curve.has_frames()) throw std::invalid_argument("check_kappa: curve not differentiable");

  CheckReport rep;
  rep.name = "kappa";
  rep.instance = curve.describe();
  rep.grid = {grid.ns, grid.nt};

  auto* circ = std::get_if<CircleShape>(&curve.shape());
  rep.guaranteed = circ != nullptr;  // the paper settles circles only
  if (!rep.guaranteed) note(rep, "exploratory instance: margins reported without a guarantee");

  auto [lo, hi] = grid_domain(curve);
  double worst = HUGE_VAL;
  double worst_agree = 0.0;
  std::vector<double> row_margin(grid.ns, HUGE_VAL);
  std::vector<double> row_agree(grid.ns, 0.0);

  parallel_chunks(grid.ns, 32, [&](std::size_t, std::size_t a, std::size_t b) {
    for (std::size_t is = a; is < b; ++is) {
      double s = lo + (hi - lo) * static_cast<double>(is) / static_cast<double>(grid.ns - 1);
      PlanePoint ws = curve.eval(s);
      for (std::size_t it = 0; it < grid.nt; ++it) {
        double t = lo + (hi - lo) * static_cast<double>(it) / static_cast<double>(grid.nt - 1);
        if (std::abs(t - s) <= 1e-12) continue;
        for (int refl = 0; refl < 2; ++refl) {
          PlanePoint w = refl ? reflect(ws) : ws;
          KappaQuantities q = kappa_frame(curve, t, w);
          row_margin[is] = std::min({row_margin[is], -q.n_dot_u, q.bracket});
          if (circ) {
            KappaQuantities c =
                kappa_circle_closed(circ->center.x, circ->radius, s, t, refl != 0);
            row_agree[is] = std::max({row_agree[is], std::abs(c.n_dot_u - q.n_dot_u),
                                      std::abs(c.bracket - q.bracket)});
          }
        }
      }
    }
  });
  for (std::size_t is = 0; is < grid.ns; ++is) {
    worst = std::min(worst, row_margin[is]);
    worst_agree = std::max(worst_agree, row_agree[is]);
  }

  note(rep, "min of (-N.u, bracket): " + fmt(worst));
  if (circ) {
    note(rep, "closed form vs frame evaluation: max deviation " + fmt(worst_agree));
    rep.worst_margin = std::min(worst - kStrictMargin, 1e-8 - worst_agree);
  } else {
    rep.worst_margin = worst - kStrictMargin;
  }
  finish(rep);
  return rep;
}

namespace {

CheckReport aplus_check(const std::vector<PlanePoint>& pts, const GeneratorCurve& curve,
                        double tol, const std::string& what) {
  CheckReport rep;
  rep.name = "aplus";
  rep.instance = what + " on " + curve.describe();
  rep.grid = {pts.size()};

  double worst_deficit = -HUGE_VAL;
  for (const PlanePoint& p : pts) {
    double xa = curve.rightmost_x(p.y);
    worst_deficit = std::max(worst_deficit, xa - p.x);
  }
  note(rep, "max (x_A(y) - x) over points: " + fmt(worst_deficit));
  rep.worst_margin = tol - worst_deficit;
  finish(rep);
  return rep;
}

}  // namespace

CheckReport check_support_in_aplus(const Configuration& config, const GeneratorCurve& curve,
                                   double tol) {
  std::vector<PlanePoint> pts;
  pts.reserve(config.size());
  for (std::size_t i = 0; i < config.size(); ++i) pts.push_back(config.plane_point(i));
  return aplus_check(pts, curve, tol, "configuration(" + std::to_string(config.size()) + ")");
}

CheckReport check_support_in_aplus(const DiscreteMeasure& measure, const GeneratorCurve& curve,
                                   double threshold, double tol) {
  std::vector<PlanePoint> pts;
  for (std::size_t i = 0; i < measure.size(); ++i) {
    if (measure.weights[i] > threshold) pts.push_back(measure.nodes[i]);
  }
  if (pts.empty()) throw std::invalid_argument("check_support_in_aplus: no active nodes");
  return aplus_check(pts, curve, tol, "measure(" + std::to_string(measure.size()) + " nodes)");
}

CheckReport check_pi3(const DiscreteMeasure& solved, const Pi3Options& opts) {
  if (solved.params.empty())
    throw std::invalid_argument("check_pi3: measure must carry circle angles");

  CheckReport rep;
  rep.name = "pi3";
  rep.instance = "Kinf circle family, " + std::to_string(solved.size()) + " nodes";
  rep.grid = {solved.size(), opts.tail_samples};

  // The node set must be symmetric about the circle's horizontal axis
  // (angle t <-> -t).
  {
    std::vector<double> sorted = solved.params;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      double mirror = -sorted[sorted.size() - 1 - i];
      if (std::abs(sorted[i] - mirror) > 1e-9)
        throw std::invalid_argument("check_pi3: node set is not symmetric about angle 0");
    }
  }

  const double pi3 = M_PI / 3.0;
  double theta_min = HUGE_VAL;
  for (double t : solved.params) theta_min = std::min(theta_min, std::abs(t));

  double thr = default_support_threshold(solved.size());
  SupportEstimate est = support_estimate(solved, thr);

  double margin_case;
  if (theta_min <= pi3) {
    double bound = pi3 + 2.0 * opts.spacing;
    margin_case = bound - est.arc_angle.value();
    note(rep, "support angle " + fmt(est.arc_angle.value()) + " vs bound " + fmt(bound));
  } else {
    // A_+^{pi/3} is empty: expect (delta_{+theta_m} + delta_{-theta_m}) / 2.
    note(rep, std::string("degenerate branch, theta_m = ") + fmt(theta_min));
    double m = -HUGE_VAL;
    if (!est.two_point_degenerate) {
      m = -1.0;
      note(rep, "two-point degeneracy flag not set");
    } else {
      double w0 = solved.weights[est.active[0]];
      double w1 = solved.weights[est.active[1]];
      m = std::min(opts.mass_tol - std::abs(w0 - 0.5), opts.mass_tol - std::abs(w1 - 0.5));
      m = std::min(m, opts.spacing + 1e-12 - std::abs(est.theta_m.value() - theta_min));
      note(rep, "endpoint masses " + fmt(w0) + ", " + fmt(w1));
    }
    margin_case = m;
  }

  // Potential tail: d/dt W(gamma(t)) > 0 for t > pi/3, evaluated through the
  // analytic kernel gradient; skip sample points near active-node kinks.
  double margin_tail = HUGE_VAL;
  {
    KernelSpec spec = KernelSpec::limit();
    // Recover the circle geometry from nodes and angles: z = c + r e^{it}.
    // Two distinct angles determine (c, r) linearly; use extreme ones.
    std::size_t i0 = 0, i1 = 0;
    for (std::size_t i = 0; i < solved.size(); ++i) {
      if (solved.params[i] < solved.params[i0]) i0 = i;
      if (solved.params[i] > solved.params[i1]) i1 = i;
    }
    double t0 = solved.params[i0], t1 = solved.params[i1];
    double r = plane_dist(solved.nodes[i0], solved.nodes[i1]) /
               (2.0 * std::abs(std::sin(0.5 * (t1 - t0))));
    PlanePoint c{solved.nodes[i0].x - r * std::cos(t0), solved.nodes[i0].y - r * std::sin(t0)};

    for (std::size_t k = 0; k < opts.tail_samples; ++k) {
      double t = pi3 + (M_PI / 2.0 - pi3) * (static_cast<double>(k) + 0.5) /
                           static_cast<double>(opts.tail_samples);
      bool near_node = false;
      for (std::size_t i : est.active) {
        if (std::abs(t - solved.params[i]) < 1e-6) near_node = true;
      }
      if (near_node) continue;
      PlanePoint z{c.x + r * std::cos(t), c.y + r * std::sin(t)};
      Vec2 dz{-r * std::sin(t), r * std::cos(t)};
      KahanSum acc;
      for (std::size_t j = 0; j < solved.size(); ++j) {
        if (solved.weights[j] <= 0.0) continue;
        Vec2 g = kernel_plane_grad(spec, z, solved.nodes[j]);
        acc.add(solved.weights[j] * (g.x * dz.x + g.y * dz.y));
      }
      margin_tail = std::min(margin_tail, acc.value());
    }
    note(rep, "min dW/dt on (pi/3, pi/2]: " + fmt(margin_tail));
  }

  rep.worst_margin = std::min(margin_case, margin_tail - kStrictMargin);
  finish(rep);
  return rep;
}

CheckReport check_kr_limit(const KrLimitOptions& opts) {
  if (opts.r_list.size() < 2) throw std::invalid_argument("check_kr_limit: need >= 2 R values");
  for (std::size_t i = 1; i < opts.r_list.size(); ++i) {
    if (!(opts.r_list[i] > opts.r_list[i - 1]))
      throw std::invalid_argument("check_kr_limit: R list must increase");
  }

  CheckReport rep;
  rep.name = "kr-limit";
  rep.instance = "grid [0,2]x[-1,1] squared";
  rep.grid = {opts.grid_per_axis, opts.grid_per_axis};

  // Test grid of (z, w) pairs.
  std::vector<PlanePoint> pts;
  for (std::size_t i = 0; i < opts.grid_per_axis; ++i) {
    for (std::size_t j = 0; j < opts.grid_per_axis; ++j) {
      double fx = static_cast<double>(i) / static_cast<double>(opts.grid_per_axis - 1);
      double fy = static_cast<double>(j) / static_cast<double>(opts.grid_per_axis - 1);
      pts.push_back({2.0 * fx, -1.0 + 2.0 * fy});
    }
  }

  std::vector<double> err(opts.r_list.size(), 0.0);
  for (std::size_t k = 0; k < opts.r_list.size(); ++k) {
    double R = opts.r_list[k];
    double e = 0.0;
    for (const PlanePoint& z : pts) {
      for (const PlanePoint& w : pts) {
        e = std::max(e, std::abs(scaled_kr(z, w, R) - k_inf(z, w)));
      }
    }
    err[k] = e;
    note(rep, "e(R=" + fmt(R) + ") = " + fmt(e));
  }

  double margin = HUGE_VAL;
  for (std::size_t k = 0; k + 1 < opts.r_list.size(); ++k) {
    margin = std::min(margin, err[k] - err[k + 1]);  // decreasing
    double ratio = err[k + 1] / err[k];
    // The O(1/R) rate predicts e(R')/e(R) = R/R'; accept a window of
    // +-ratio_window * expected around it ([0.4, 0.6] for a halving step).
    double expected = opts.r_list[k] / opts.r_list[k + 1];
    double width = opts.ratio_window * expected;
    margin = std::min({margin, ratio - (expected - width), (expected + width) - ratio});
    note(rep, "ratio e(" + fmt(opts.r_list[k + 1]) + ")/e(" + fmt(opts.r_list[k]) + ") = " +
                  fmt(ratio));
  }
  double re_lo = HUGE_VAL, re_hi = -HUGE_VAL;
  for (std::size_t k = 0; k < opts.r_list.size(); ++k) {
    re_lo = std::min(re_lo, err[k] * opts.r_list[k]);
    re_hi = std::max(re_hi, err[k] * opts.r_list[k]);
  }
  margin = std::min(margin, 2.0 - re_hi / re_lo);
  note(rep, "e(R)*R spread factor: " + fmt(re_hi / re_lo));

  if (opts.weak_star_nodes > 0) {
    GeneratorCurve circle = GeneratorCurve::circle({3.0, 0.0}, 1.0);
    std::vector<double> params = circle.node_grid(opts.weak_star_nodes);
    std::vector<PlanePoint> nodes;
    nodes.reserve(params.size());
    for (double t : params) nodes.push_back(circle.eval(t));

    auto [minf, rinf] = solve_equilibrium(nodes, KernelSpec::limit(), opts.solve, params);
    double prev_tv = HUGE_VAL;
    for (double R : opts.weak_star_r) {
      auto [mr, rr] = solve_equilibrium(nodes, KernelSpec::scaled(R), opts.solve, params);
      double tv = 0.0;
      for (std::size_t i = 0; i < nodes.size(); ++i)
        tv += std::abs(mr.weights[i] - minf.weights[i]);
      tv *= 0.5;
      note(rep, "TV(lambda_R, lambda_inf) at R=" + fmt(R) + ": " + fmt(tv));
      if (prev_tv != HUGE_VAL) margin = std::min(margin, prev_tv - tv);
      prev_tv = tv;
    }
  }

  rep.worst_margin = margin;
  finish(rep);
  return rep;
}

CheckReport check_sandwich(const GeneratorCurve& curve, const KernelSpec& spec,
                           const SandwichOptions& opts) {
  if (!spec.is_plane()) throw std::invalid_argument("check_sandwich: needs a continuous kernel");

  CheckReport rep;
  rep.name = "sandwich";
  rep.instance = spec.to_string() + " on " + curve.describe();
  rep.grid = {opts.n_list.size(), opts.equilibrium_nodes};
  rep.seed = opts.seed;

  std::vector<double> params = curve.node_grid(opts.equilibrium_nodes);
  std::vector<PlanePoint> nodes;
  nodes.reserve(params.size());
  for (double t : params) nodes.push_back(curve.eval(t));
  auto [eq, eq_rep] = solve_equilibrium(nodes, spec, opts.solve, params);
  double j_hat = eq_rep.j_value;

  double knorm = -HUGE_VAL;  // ||k||_A = sup k(z,z) over the discretization
  for (const PlanePoint& z : nodes) knorm = std::max(knorm, kernel_plane(spec, z, z));
  note(rep, "J_hat = " + fmt(j_hat) + ", ||k||_A = " + fmt(knorm));

  double margin = HUGE_VAL;
  double prev_gap = HUGE_VAL;
  double fitted_c = 0.0;
  for (std::size_t N : opts.n_list) {
    auto [cfg, er] = optimize_config(curve, spec, N, opts.seed, opts.optimize);
    double E = er.energy;
    double nn1 = static_cast<double>(N) * static_cast<double>(N - 1);
    double lower = E / nn1;  // E/(N(N-1)) <= J_hat + slack
    double upper = E / (static_cast<double>(N) * static_cast<double>(N)) +
                   knorm / static_cast<double>(N);  // J_hat <= E/N^2 + ||k||/N + slack
    double i_n = (E + [&] {
                   KahanSum diag;
                   for (std::size_t i = 0; i < N; ++i) {
                     PlanePoint z = cfg.plane_point(i);
                     diag.add(kernel_plane(spec, z, z));
                   }
                   return diag.value();
                 }()) /
                 (static_cast<double>(N) * static_cast<double>(N));

    margin = std::min(margin, j_hat + opts.slack - lower);
    margin = std::min(margin, upper + opts.slack - j_hat);
    double gap = i_n - j_hat;
    if (prev_gap != HUGE_VAL) margin = std::min(margin, prev_gap - gap);
    prev_gap = gap;
    fitted_c = std::max(fitted_c, gap * static_cast<double>(N));
    note(rep, "N=" + std::to_string(N) + ": E/(N(N-1))=" + fmt(lower) + " I_N=" + fmt(i_n) +
                  " E/N^2+||k||/N=" + fmt(upper) + " gap=" + fmt(gap));
  }
  note(rep, "fitted C in I_N - J <= C/N: " + fmt(fitted_c));

  rep.worst_margin = margin;
  finish(rep);
  return rep;
}

}  // namespace revolve
