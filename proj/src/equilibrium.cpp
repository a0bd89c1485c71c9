#include "revolve/equilibrium.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "revolve/util.hpp"

namespace revolve {

namespace {

void require_plane_kernel(const KernelSpec& spec, const char* who) {
  if (!spec.is_plane()) throw std::invalid_argument(std::string(who) + ": needs a plane kernel");
}

Eigen::MatrixXd kernel_matrix(const std::vector<PlanePoint>& nodes, const KernelSpec& spec) {
  const std::size_t n = nodes.size();
  Eigen::MatrixXd Q(n, n);
  parallel_chunks(n, 64, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double v = kernel_plane(spec, nodes[i], nodes[j]);
        Q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        Q(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
      }
    }
  });
  return Q;
}

}  // namespace

void DiscreteMeasure::validate() const {
  if (nodes.size() != weights.size())
    throw std::invalid_argument("measure: node/weight length mismatch");
  if (!params.empty() && params.size() != nodes.size())
    throw std::invalid_argument("measure: parameter length mismatch");
  KahanSum total;
  for (double w : weights) {
    if (!(w >= -1e-15)) throw std::invalid_argument("measure: negative weight");
    total.add(w);
  }
  if (std::abs(total.value() - 1.0) > 1e-12)
    throw std::invalid_argument("measure: weights must sum to 1");
  for (const PlanePoint& z : nodes) {
    if (!std::isfinite(z.x) || !std::isfinite(z.y))
      throw std::invalid_argument("measure: non-finite node");
  }
}

double quadratic_energy(const DiscreteMeasure& m, const KernelSpec& spec) {
  require_plane_kernel(spec, "quadratic_energy");
  m.validate();
  KahanSum acc;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      acc.add(m.weights[i] * m.weights[j] * kernel_plane(spec, m.nodes[i], m.nodes[j]));
    }
  }
  return acc.value();
}

double potential(const DiscreteMeasure& m, const KernelSpec& spec, PlanePoint z) {
  require_plane_kernel(spec, "potential");
  KahanSum acc;
  for (std::size_t j = 0; j < m.size(); ++j) {
    acc.add(m.weights[j] * kernel_plane(spec, z, m.nodes[j]));
  }
  return acc.value();
}

PotentialField potential_field(const DiscreteMeasure& m, const KernelSpec& spec,
                               const std::vector<PlanePoint>& points) {
  PotentialField f;
  f.points = points;
  f.kernel = spec;
  f.values.resize(points.size());
  parallel_chunks(points.size(), 32, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) f.values[i] = potential(m, spec, points[i]);
  });
  return f;
}

std::pair<DiscreteMeasure, EquilibriumReport> solve_equilibrium(
    const std::vector<PlanePoint>& nodes, const KernelSpec& spec, const SolveOptions& opts,
    const std::vector<double>& params) {
  require_plane_kernel(spec, "solve_equilibrium");
  if (nodes.empty()) throw std::invalid_argument("solve_equilibrium: no nodes");
  if (!params.empty() && params.size() != nodes.size())
    throw std::invalid_argument("solve_equilibrium: parameter length mismatch");
  for (const PlanePoint& z : nodes) {
    if (z.x < 0.0) throw std::invalid_argument("solve_equilibrium: node outside H+");
  }

  const std::size_t n = nodes.size();
  DiscreteMeasure m;
  m.nodes = nodes;
  m.params = params;
  m.weights.assign(n, 0.0);

  EquilibriumReport rep;

  if (n == 1) {
    m.weights[0] = 1.0;
    rep.j_value = kernel_plane(spec, nodes[0], nodes[0]);
    rep.converged = true;
    return {m, rep};
  }

  Eigen::MatrixXd Q = kernel_matrix(nodes, spec);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));

  // Start at the vertex with the smallest self-energy; ties break low.
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i < Q.rows(); ++i) {
    if (Q(i, i) < Q(start, start)) start = i;
  }
  w[start] = 1.0;

  Eigen::VectorXd g = 2.0 * Q.col(start);  // gradient 2Qw, kept incrementally
  std::set<Eigen::Index> active{start};

  const double tol = opts.tol;
  std::size_t it = 0;
  bool gap_met = false;
  for (; it < opts.max_iterations; ++it) {
    if (opts.record_trace) rep.j_trace.push_back(0.5 * g.dot(w));
    // Frank-Wolfe vertex (argmin of the gradient) and away vertex
    // (argmax over the active set); index order breaks ties.
    Eigen::Index s = 0;
    for (Eigen::Index i = 1; i < g.size(); ++i) {
      if (g[i] < g[s]) s = i;
    }
    for (auto iter = active.begin(); iter != active.end();) {
      if (w[*iter] <= 0.0) {
        iter = active.erase(iter);
      } else {
        ++iter;
      }
    }
    if (active.empty()) active.insert(s);
    Eigen::Index v = *active.begin();
    for (Eigen::Index i : active) {
      if (g[i] > g[v]) v = i;
    }

    double gw = g.dot(w);
    double gap_fw = gw - g[s];
    if (gap_fw <= tol) {
      gap_met = true;
      break;
    }
    double gap_away = g[v] - gw;

    bool fw_step = gap_fw >= gap_away;
    // d = e_s - w (toward) or w - e_v (away); both have directional
    // derivative g.d < 0 here.
    double gd = fw_step ? (g[s] - gw) : (gw - g[v]);
    // dQd for d = e_s - w is Q_ss - 2(Qw)_s + wQw, with (Qw)_i = g_i/2 and
    // wQw = g.w/2; the away direction w - e_v mirrors it.
    double dQd = fw_step ? (Q(s, s) - g[s] + 0.5 * gw) : (0.5 * gw - g[v] + Q(v, v));

    double alpha_max = fw_step ? 1.0 : (w[v] < 1.0 ? w[v] / (1.0 - w[v]) : 1e30);
    double alpha = alpha_max;
    if (dQd > 0.0) alpha = std::min(alpha_max, -gd / (2.0 * dQd));
    if (alpha <= 0.0) break;  // numerically stuck

    if (fw_step) {
      w *= (1.0 - alpha);
      w[s] += alpha;
      g = (1.0 - alpha) * g + (2.0 * alpha) * Q.col(s);
      active.insert(s);
    } else {
      w *= (1.0 + alpha);
      w[v] -= alpha;
      g = (1.0 + alpha) * g - (2.0 * alpha) * Q.col(v);
      if (alpha == alpha_max) {
        w[v] = 0.0;  // drop step
        active.erase(v);
      }
    }

    // Clear denormal dust and refresh the gradient now and then to stop
    // incremental drift.
    if ((it & 0x3ff) == 0x3ff) {
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w[i] < 0.0) w[i] = 0.0;
      }
      w /= w.sum();
      g = 2.0 * (Q * w);
      active.clear();
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w[i] > 0.0) active.insert(i);
      }
    }
  }
  rep.iterations = it;

  // Active-set polish: solve the stationarity system on the support
  //   [2 Q_S  1; 1^T 0] [w; lambda] = [0; 1]
  // dropping negative-weight nodes and adding nodes whose potential dips
  // below J, until the Frostman certificate holds on the whole node set.
  if (opts.polish) {
    std::set<Eigen::Index> S;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (w[i] > 1e-12) S.insert(i);
    }
    if (S.empty()) S.insert(start);

    for (std::size_t round = 0; round < 200; ++round) {
      ++rep.polish_rounds;
      std::vector<Eigen::Index> idx(S.begin(), S.end());
      const Eigen::Index k = static_cast<Eigen::Index>(idx.size());
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k + 1, k + 1);
      for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) A(a, b) = 2.0 * Q(idx[a], idx[b]);
        A(a, k) = 1.0;
        A(k, a) = 1.0;
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
      rhs[k] = 1.0;
      Eigen::VectorXd sol = A.partialPivLu().solve(rhs);

      double worst = 0.0;
      Eigen::Index worst_i = -1;
      for (Eigen::Index a = 0; a < k; ++a) {
        if (sol[a] < worst) {
          worst = sol[a];
          worst_i = idx[a];
        }
      }
      if (worst_i >= 0 && worst < -1e-14) {
        S.erase(worst_i);
        if (S.empty()) S.insert(start);
        continue;
      }

      Eigen::VectorXd w_new = Eigen::VectorXd::Zero(w.size());
      for (Eigen::Index a = 0; a < k; ++a) w_new[idx[a]] = std::max(sol[a], 0.0);
      w_new /= w_new.sum();

      Eigen::VectorXd g_new = 2.0 * (Q * w_new);
      double J = 0.5 * g_new.dot(w_new);
      // Batch-add every node whose potential violates W >= J beyond a
      // fraction of the target gap.
      std::vector<Eigen::Index> viol;
      for (Eigen::Index i = 0; i < g_new.size(); ++i) {
        if (!S.count(i) && 0.5 * g_new[i] < J - 0.1 * tol) viol.push_back(i);
      }
      w = w_new;
      g = g_new;
      if (viol.empty()) break;
      for (Eigen::Index i : viol) S.insert(i);
    }
  }

  // Final certificate on the full node set.
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] < 0.0) w[i] = 0.0;
  }
  w /= w.sum();
  g = 2.0 * (Q * w);
  double gw = g.dot(w);
  double gmin = g.minCoeff();
  rep.wolfe_gap = gw - gmin;
  rep.j_value = 0.5 * gw;
  rep.converged = gap_met || rep.wolfe_gap <= tol;

  m.weights.assign(w.data(), w.data() + w.size());

  // Frostman residuals relative to the node set.
  double thr = default_support_threshold(n);
  double max_viol = 0.0;
  double min_slack = HUGE_VAL;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    double resid = 0.5 * g[i] - rep.j_value;  // W(z_i) - J
    if (w[i] > thr) max_viol = std::max(max_viol, std::abs(resid));
    min_slack = std::min(min_slack, resid);
  }
  rep.frostman_max_violation_on_support = max_viol;
  rep.frostman_min_slack_off_support = min_slack;
  return {m, rep};
}

SupportEstimate support_estimate(const DiscreteMeasure& m, double threshold) {
  m.validate();
  SupportEstimate est;
  est.threshold = threshold;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.weights[i] > threshold) est.active.push_back(i);
  }
  if (est.active.empty())
    throw std::invalid_argument("support_estimate: threshold leaves no active node");

  if (!m.params.empty()) {
    double lo = HUGE_VAL, hi = -HUGE_VAL, amax = 0.0, amin = HUGE_VAL;
    for (std::size_t i : est.active) {
      lo = std::min(lo, m.params[i]);
      hi = std::max(hi, m.params[i]);
      amax = std::max(amax, std::abs(m.params[i]));
      amin = std::min(amin, std::abs(m.params[i]));
    }
    est.param_lo = lo;
    est.param_hi = hi;
    est.arc_angle = amax;

    if (est.active.size() == 2) {
      double t0 = m.params[est.active[0]];
      double t1 = m.params[est.active[1]];
      double mass = m.weights[est.active[0]] + m.weights[est.active[1]];
      bool mirrored = std::abs(t0 + t1) <= 1e-9 * std::max(1.0, std::abs(t0));
      double need = 1.0 - 2.0 * threshold * static_cast<double>(m.size());
      if (mirrored && mass >= need) {
        est.two_point_degenerate = true;
        est.theta_m = amin;
      }
    }
  }
  return est;
}

FrostmanReport frostman_check(const DiscreteMeasure& m, const KernelSpec& spec,
                              const std::vector<PlanePoint>& candidates, double tol) {
  FrostmanReport rep;
  rep.tol = tol;
  rep.j_value = quadratic_energy(m, spec);

  double thr = default_support_threshold(m.size());
  double max_viol = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.weights[i] > thr) {
      max_viol = std::max(max_viol, std::abs(potential(m, spec, m.nodes[i]) - rep.j_value));
    }
  }
  double min_slack = HUGE_VAL;
  for (const PlanePoint& z : candidates) {
    min_slack = std::min(min_slack, potential(m, spec, z) - rep.j_value);
  }
  rep.max_violation_on_support = max_viol;
  rep.min_slack_off_support = candidates.empty() ? 0.0 : min_slack;
  rep.pass = max_viol <= tol && rep.min_slack_off_support >= -tol;
  return rep;
}

WeightedSpacePoints lift_measure(const DiscreteMeasure& m, std::size_t phi_samples) {
  if (phi_samples == 0) throw std::invalid_argument("lift_measure: need phi_samples >= 1");
  m.validate();
  WeightedSpacePoints out;
  out.points.reserve(m.size() * phi_samples);
  out.weights.reserve(m.size() * phi_samples);
  for (std::size_t j = 0; j < m.size(); ++j) {
    for (std::size_t k = 0; k < phi_samples; ++k) {
      double phi = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(phi_samples);
      out.points.push_back(lift_to_surface(m.nodes[j], phi));
      out.weights.push_back(m.weights[j] / static_cast<double>(phi_samples));
    }
  }
  return out;
}

}  // namespace revolve
