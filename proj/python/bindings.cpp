#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "revolve/checks.hpp"
#include "revolve/energy.hpp"
#include "revolve/equilibrium.hpp"
#include "revolve/io.hpp"
#include "revolve/kernels.hpp"

namespace py = pybind11;
using namespace revolve;

namespace {

PlanePoint to_plane(std::pair<double, double> p) { return {p.first, p.second}; }

py::dict measure_dict(const DiscreteMeasure& m, const EquilibriumReport& rep) {
  py::dict d;
  py::list xs, ys, ws, ts;
  for (std::size_t i = 0; i < m.size(); ++i) {
    xs.append(m.nodes[i].x);
    ys.append(m.nodes[i].y);
    ws.append(m.weights[i]);
    if (!m.params.empty()) ts.append(m.params[i]);
  }
  d["x"] = xs;
  d["y"] = ys;
  d["weight"] = ws;
  d["t"] = ts;
  d["j_value"] = rep.j_value;
  d["wolfe_gap"] = rep.wolfe_gap;
  d["converged"] = rep.converged;
  SupportEstimate est = support_estimate(m, default_support_threshold(m.size()));
  d["support_interval"] = py::make_tuple(est.param_lo, est.param_hi);
  if (est.arc_angle) d["theta"] = *est.arc_angle;
  d["two_point_degenerate"] = est.two_point_degenerate;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Minimum-energy configurations and equilibrium measures on surfaces of revolution";

  m.def(
      "kernel_value",
      [](const std::string& kernel, std::pair<double, double> z, std::pair<double, double> w) {
        KernelSpec spec = KernelSpec::parse(kernel);
        return kernel_plane(spec, to_plane(z), to_plane(w));
      },
      py::arg("kernel"), py::arg("z"), py::arg("w"),
      "Evaluate a plane kernel (K, KR:<R>, Kinf, Kinf-sym) at z, w.");

  m.def(
      "kernel_value_3d",
      [](const std::string& kernel, std::tuple<double, double, double> p,
         std::tuple<double, double, double> q) {
        KernelSpec spec = KernelSpec::parse(kernel);
        SpacePoint sp{std::get<0>(p), std::get<1>(p), std::get<2>(p)};
        SpacePoint sq{std::get<0>(q), std::get<1>(q), std::get<2>(q)};
        return kernel_3d(sp, sq, spec);
      },
      py::arg("kernel"), py::arg("p"), py::arg("q"),
      "Evaluate a 3D kernel (riesz:<s>, log3d) at p, q.");

  m.def(
      "reduced_k_quadrature",
      [](std::pair<double, double> z, std::pair<double, double> w, std::size_t n) {
        return reduced_k_quadrature(to_plane(z), to_plane(w), n);
      },
      py::arg("z"), py::arg("w"), py::arg("n") = 16384,
      "Quadrature oracle for the reduced kernel K.");

  m.def("log_trig_integral", &log_trig_integral, py::arg("a"), py::arg("b"));

  m.def(
      "curve_eval",
      [](const std::string& curve_json, double t) {
        GeneratorCurve c = curve_from_json(nlohmann::json::parse(curve_json));
        PlanePoint p = c.eval(t);
        return py::make_tuple(p.x, p.y);
      },
      py::arg("curve_json"), py::arg("t"));

  m.def(
      "optimize",
      [](const std::string& curve_json, const std::string& kernel, std::size_t n,
         std::uint64_t seed, std::size_t restarts, std::size_t max_iter, double tol) {
        GeneratorCurve curve = curve_from_json(nlohmann::json::parse(curve_json));
        KernelSpec spec = KernelSpec::parse(kernel);
        OptimizeOptions opts;
        opts.restarts = restarts;
        opts.max_iterations = max_iter;
        opts.grad_tol = tol;
        auto [cfg, rep] = optimize_config(curve, spec, n, seed, opts);
        py::dict d;
        d["t"] = cfg.t;
        d["phi"] = cfg.phi;
        d["energy"] = rep.energy;
        d["grad_norm"] = rep.grad_norm;
        d["iterations"] = rep.iterations;
        d["converged"] = rep.converged;
        return d;
      },
      py::arg("curve_json"), py::arg("kernel"), py::arg("n"), py::arg("seed") = 0,
      py::arg("restarts") = 8, py::arg("max_iter") = 100000, py::arg("tol") = 1e-9,
      "Multi-start minimization of the N-point discrete energy.");

  m.def(
      "equilibrium",
      [](const std::string& curve_or_instance, const std::string& kernel, std::size_t nodes,
         double tol, std::size_t max_iter) {
        KernelSpec spec = KernelSpec::parse(kernel);
        std::vector<PlanePoint> pts;
        std::vector<double> params;
        if (!curve_or_instance.empty() && curve_or_instance.front() == '{') {
          GeneratorCurve curve = curve_from_json(nlohmann::json::parse(curve_or_instance));
          params = curve.node_grid(nodes);
          for (double t : params) pts.push_back(curve.eval(t));
        } else {
          std::tie(pts, params) = instance_nodes(parse_instance(curve_or_instance), nodes);
        }
        SolveOptions opts;
        opts.tol = tol;
        opts.max_iterations = max_iter;
        auto [meas, rep] = solve_equilibrium(pts, spec, opts, params);
        return measure_dict(meas, rep);
      },
      py::arg("curve"), py::arg("kernel"), py::arg("nodes") = 401, py::arg("tol") = 1e-9,
      py::arg("max_iter") = 200000,
      "Discretized equilibrium measure on a curve spec (JSON) or named instance.");

  m.def(
      "verify",
      [](const std::string& check, const std::string& instance) {
        CheckReport rep;
        if (check == "monotone") {
          rep = check_horizontal_monotonicity(KernelSpec::parse(instance.empty() ? "K" : instance));
        } else if (check == "kr-limit") {
          rep = check_kr_limit();
        } else if (check == "convexity") {
          Instance inst = parse_instance(instance.empty() ? "vseg:2,0,1" : instance);
          KernelSpec spec = inst.arc_pair ? KernelSpec::limit() : KernelSpec::reduced();
          rep = check_convexity(*inst.curve, spec);
        } else if (check == "kappa") {
          Instance inst = parse_instance(instance.empty() ? "circle:3,0,1" : instance);
          rep = check_kappa(*inst.curve);
        } else {
          throw std::invalid_argument("verify binding supports monotone, convexity, kappa, kr-limit");
        }
        return py::module_::import("json").attr("loads")(check_report_to_json(rep).dump());
      },
      py::arg("check"), py::arg("instance") = std::string(),
      "Run one executable theorem check and return its report.");

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
