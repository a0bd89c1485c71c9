#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "revolve/checks.hpp"
#include "revolve/energy.hpp"
#include "revolve/equilibrium.hpp"
#include "revolve/io.hpp"
#include "revolve/kernels.hpp"
#include "revolve/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace revolve;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;

PlanePoint parse_plane_point(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("expected x,y");
  return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

SpacePoint parse_space_point(const std::string& s) {
  auto c1 = s.find(',');
  auto c2 = s.find(',', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw CLI::ValidationError("expected x,y,zeta");
  return {std::stod(s.substr(0, c1)), std::stod(s.substr(c1 + 1, c2 - c1 - 1)),
          std::stod(s.substr(c2 + 1))};
}

std::string joined_command_line(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

struct KernelEvalArgs {
  std::string kernel = "K";
  std::string z, w, p, q;
  bool oracle = false;
  std::size_t n = 16384;
};

int run_kernel_eval(const KernelEvalArgs& a) {
  KernelSpec spec = KernelSpec::parse(a.kernel);
  if (spec.is_3d()) {
    if (a.p.empty() || a.q.empty()) {
      std::cerr << "3D kernels need --p x,y,zeta and --q x,y,zeta\n";
      return kExitUsage;
    }
    double v = kernel_3d(parse_space_point(a.p), parse_space_point(a.q), spec);
    std::cout << format_g17(v) << "\n";
    return kExitOk;
  }
  if (a.z.empty() || a.w.empty()) {
    std::cerr << "plane kernels need --z x,y and --w x,y\n";
    return kExitUsage;
  }
  PlanePoint z = parse_plane_point(a.z), w = parse_plane_point(a.w);
  double v = kernel_plane(spec, z, w);
  std::cout << format_g17(v) << "\n";
  if (a.oracle) {
    if (spec.kind != KernelKind::ReducedK) {
      std::cerr << "--oracle applies to kernel K only\n";
      return kExitUsage;
    }
    double o = reduced_k_quadrature(z, w, a.n);
    std::cout << "oracle " << format_g17(o) << "\n";
    std::cout << "abs_diff " << format_g17(std::abs(v - o)) << "\n";
  }
  return kExitOk;
}

struct OptimizeArgs {
  std::string kernel = "log3d";
  std::string curve_path;
  std::size_t n_points = 0;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  OptimizeOptions opts;
};

int run_optimize(const OptimizeArgs& a, const std::string& cmdline) {
  GeneratorCurve curve = load_curve(a.curve_path);
  KernelSpec spec = KernelSpec::parse(a.kernel);
  auto [cfg, rep] = optimize_config(curve, spec, a.n_points, a.seed, a.opts);

  fs::create_directories(a.out_dir);
  fs::path dir(a.out_dir);
  write_text_file((dir / "config.json").string(), config_to_json(cfg).dump(2) + "\n");
  write_text_file((dir / "config.csv").string(), config_to_csv(cfg));
  json jrep = energy_report_to_json(rep);
  jrep["kernel"] = spec.to_string();
  write_text_file((dir / "report.json").string(), jrep.dump(2) + "\n");

  json inputs;
  inputs["curve"] = curve_to_json(curve);
  inputs["kernel"] = spec.to_string();
  inputs["N"] = a.n_points;
  inputs["seed"] = a.seed;
  inputs["restarts"] = a.opts.restarts;
  inputs["max_iterations"] = a.opts.max_iterations;
  inputs["grad_tol"] = a.opts.grad_tol;
  json manifest =
      make_manifest(cmdline, inputs, {"config.json", "config.csv", "report.json"});
  write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");

  std::cout << "energy " << format_g17(rep.energy) << "\n";
  std::cout << (rep.converged ? "converged" : "not converged within iteration budget") << "\n";
  return rep.converged ? kExitOk : kExitNotConverged;
}

struct EquilibriumArgs {
  std::string kernel = "K";
  std::string curve_path;
  std::string instance;  // alternative to --curve
  std::size_t nodes = 401;
  double tol = 1e-9;
  std::size_t max_iter = 200000;
  std::size_t refine = 1;
  double threshold = -1.0;
  std::string out_dir = ".";
};

int run_equilibrium(const EquilibriumArgs& a, const std::string& cmdline) {
  KernelSpec spec = KernelSpec::parse(a.kernel);
  std::vector<PlanePoint> nodes;
  std::vector<double> params;
  json curve_desc;
  if (!a.instance.empty()) {
    Instance inst = parse_instance(a.instance);
    std::tie(nodes, params) = instance_nodes(inst, a.nodes);
    curve_desc = a.instance;
  } else {
    GeneratorCurve curve = load_curve(a.curve_path);
    params = curve.node_grid(a.nodes);
    for (double t : params) nodes.push_back(curve.eval(t));
    curve_desc = curve_to_json(curve);
  }

  SolveOptions sopts;
  sopts.tol = a.tol;
  sopts.max_iterations = a.max_iter;
  auto [m, rep] = solve_equilibrium(nodes, spec, sopts, params);

  double threshold = a.threshold >= 0.0 ? a.threshold : default_support_threshold(m.size());
  SupportEstimate est = support_estimate(m, threshold);

  json jrep = equilibrium_report_to_json(rep);
  jrep["kernel"] = spec.to_string();
  jrep["nodes"] = m.size();
  jrep["support"] = support_to_json(est);

  if (a.refine > 1) {
    std::size_t n2 = a.nodes * a.refine;
    std::vector<PlanePoint> nodes2;
    std::vector<double> params2;
    if (!a.instance.empty()) {
      std::tie(nodes2, params2) = instance_nodes(parse_instance(a.instance), n2);
    } else {
      GeneratorCurve curve = load_curve(a.curve_path);
      params2 = curve.node_grid(n2);
      for (double t : params2) nodes2.push_back(curve.eval(t));
    }
    auto [m2, rep2] = solve_equilibrium(nodes2, spec, sopts, params2);
    jrep["refined_nodes"] = n2;
    jrep["refined_j_value"] = rep2.j_value;
    jrep["j_drift"] = std::abs(rep2.j_value - rep.j_value);
  }

  fs::create_directories(a.out_dir);
  fs::path dir(a.out_dir);
  write_text_file((dir / "measure.csv").string(), measure_to_csv(m));
  write_text_file((dir / "report.json").string(), jrep.dump(2) + "\n");

  json inputs;
  inputs["curve"] = curve_desc;
  inputs["kernel"] = spec.to_string();
  inputs["nodes"] = a.nodes;
  inputs["tol"] = a.tol;
  inputs["max_iterations"] = a.max_iter;
  write_text_file((dir / "manifest.json").string(),
                  make_manifest(cmdline, inputs, {"measure.csv", "report.json"}).dump(2) + "\n");

  std::cout << "J " << format_g17(rep.j_value) << "\n";
  std::cout << "gap " << format_g17(rep.wolfe_gap) << "\n";
  if (est.arc_angle) {
    std::cout << "support interval [" << format_g17(est.param_lo) << ", "
              << format_g17(est.param_hi) << "], theta " << format_g17(*est.arc_angle) << "\n";
  }
  if (est.two_point_degenerate) std::cout << "two-point degenerate support\n";
  std::cout << (rep.converged ? "converged" : "not converged within iteration budget") << "\n";
  return rep.converged ? kExitOk : kExitNotConverged;
}

std::pair<DiscreteMeasure, EquilibriumReport> solve_equilibrium_on(const GeneratorCurve& curve,
                                                                   const KernelSpec& spec,
                                                                   std::size_t n) {
  std::vector<double> params = curve.node_grid(n);
  std::vector<PlanePoint> nodes;
  nodes.reserve(params.size());
  for (double t : params) nodes.push_back(curve.eval(t));
  return solve_equilibrium(nodes, spec, {}, params);
}

struct VerifyArgs {
  std::string check = "all";
  std::string instance;
  std::string out_dir;
  std::size_t grid = 201;
  std::size_t nodes = 401;
  std::vector<std::size_t> n_list{10, 50, 100};
  std::uint64_t seed = 42;
};

int run_verify(const VerifyArgs& a) {
  std::vector<CheckReport> reports;

  auto curve_or_default = [&](const char* fallback) {
    Instance inst = parse_instance(a.instance.empty() ? fallback : a.instance);
    return inst;
  };

  const bool all = a.check == "all";
  if (all || a.check == "monotone") {
    MonotoneGrid g;
    reports.push_back(check_horizontal_monotonicity(KernelSpec::reduced(), g));
    reports.push_back(check_horizontal_monotonicity(KernelSpec::limit(), g));
  }
  if (all || a.check == "convexity") {
    PairGrid g{a.grid, a.grid};
    Instance vseg = parse_instance("vseg:2,0,1");
    reports.push_back(check_convexity(*vseg.curve, KernelSpec::reduced(), g));
    Instance inst = curve_or_default("circle:3,0,1");
    if (inst.curve) {
      reports.push_back(check_convexity(*inst.curve, KernelSpec::limit(), g));
      reports.push_back(check_convexity(*inst.curve, KernelSpec::reduced(), g));
    }
  }
  if (all || a.check == "kappa") {
    PairGrid g{a.grid, a.grid};
    Instance inst = curve_or_default("circle:3,0,1");
    if (inst.curve) reports.push_back(check_kappa(*inst.curve, g));
  }
  if (all || a.check == "aplus") {
    Instance inst = curve_or_default("circle:3,0,1");
    if (inst.curve) {
      OptimizeOptions oo;
      oo.restarts = 4;
      oo.max_iterations = 20000;
      auto [cfg, rep] = optimize_config(*inst.curve, KernelSpec::log3d(), 100, a.seed, oo);
      reports.push_back(check_support_in_aplus(cfg, *inst.curve));
      auto [m, erep] = solve_equilibrium_on(*inst.curve, KernelSpec::reduced(), a.nodes);
      reports.push_back(
          check_support_in_aplus(m, *inst.curve, default_support_threshold(m.size())));
    }
  }
  if (all || a.check == "pi3") {
    Instance inst = curve_or_default("circle:3,0,1");
    auto [nodes, params] = instance_nodes(inst, a.nodes);
    auto [m, rep] = solve_equilibrium(nodes, KernelSpec::limit(), {}, params);
    Pi3Options po;
    po.spacing = inst.arc_pair
                     ? (inst.t_hi - inst.t_lo) / static_cast<double>(std::max<std::size_t>(
                                                     1, a.nodes / 2 - 1))
                     : 2.0 * M_PI / static_cast<double>(a.nodes);
    reports.push_back(check_pi3(m, po));
  }
  if (all || a.check == "kr-limit") {
    reports.push_back(check_kr_limit());
  }
  if (all || a.check == "sandwich") {
    Instance inst = curve_or_default("circle:3,0,1");
    SandwichOptions so;
    so.n_list = a.n_list;
    so.seed = a.seed;
    so.optimize.restarts = 4;
    so.optimize.max_iterations = 20000;
    if (inst.curve) reports.push_back(check_sandwich(*inst.curve, KernelSpec::reduced(), so));
  }
  if (reports.empty()) {
    std::cerr << "unknown check '" << a.check
              << "' (monotone, convexity, kappa, aplus, pi3, kr-limit, sandwich, all)\n";
    return kExitUsage;
  }

  bool ok = true;
  for (const CheckReport& rep : reports) {
    json j = check_report_to_json(rep);
    std::cout << j.dump() << "\n";
    if (!a.out_dir.empty()) {
      fs::create_directories(a.out_dir);
      write_text_file((fs::path(a.out_dir) / (rep.name + ".json")).string(), j.dump(2) + "\n");
    }
    if (rep.guaranteed && !rep.pass) ok = false;
  }
  return ok ? kExitOk : kExitUsage;
}

struct PlotArgs {
  std::string input;
  std::string output;
  bool threed = false;
  std::size_t phi_samples = 64;
};

int run_plot(const PlotArgs& a) {
  std::string text = read_text_file(a.input);
  std::string svg;
  if (text.rfind("t,x,y,weight", 0) == 0) {
    DiscreteMeasure m = measure_from_csv(text);
    if (a.threed) {
      WeightedSpacePoints lifted = lift_measure(m, a.phi_samples);
      svg = svg_space_scatter(lifted.points, lifted.weights);
    } else {
      svg = svg_plane_scatter(m.nodes, m.weights);
    }
  } else if (text.rfind("t,phi,x,y,zeta", 0) == 0) {
    std::vector<SpacePoint> pts;
    std::vector<PlanePoint> plane;
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);
    while (std::getline(ss, line)) {
      if (line.empty()) continue;
      std::stringstream ls(line);
      std::string col;
      std::vector<double> v;
      while (std::getline(ls, col, ',')) v.push_back(std::stod(col));
      if (v.size() != 5) throw std::invalid_argument("config CSV: expected 5 columns");
      pts.push_back({v[2], v[3], v[4]});
      plane.push_back({std::hypot(v[2], v[4]), v[3]});
    }
    svg = a.threed ? svg_space_scatter(pts, {}) : svg_plane_scatter(plane, {});
  } else {
    std::cerr << "unrecognized input file header\n";
    return kExitUsage;
  }
  write_text_file(a.output, svg);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-energy point configurations and equilibrium measures on surfaces of revolution"};
  app.require_subcommand(1);
  std::string cmdline = joined_command_line(argc, argv);

  KernelEvalArgs ke;
  CLI::App* ke_cmd = app.add_subcommand("kernel-eval", "Evaluate an interaction kernel");
  ke_cmd->add_option("--kernel", ke.kernel, "riesz:<s>|log3d|K|KR:<R>|Kinf|Kinf-sym");
  ke_cmd->add_option("--z", ke.z, "plane point x,y");
  ke_cmd->add_option("--w", ke.w, "plane point x,y");
  ke_cmd->add_option("--p", ke.p, "space point x,y,zeta");
  ke_cmd->add_option("--q", ke.q, "space point x,y,zeta");
  ke_cmd->add_flag("--oracle", ke.oracle, "also print the quadrature oracle for K");
  ke_cmd->add_option("--n", ke.n, "oracle node count");

  OptimizeArgs oa;
  CLI::App* opt_cmd = app.add_subcommand("optimize", "Minimize the N-point discrete energy");
  opt_cmd->add_option("--kernel", oa.kernel, "kernel name")->required();
  opt_cmd->add_option("--curve", oa.curve_path, "curve spec JSON file")->required();
  opt_cmd->add_option("--N", oa.n_points, "number of points")->required();
  opt_cmd->add_option("--seed", oa.seed, "random seed");
  opt_cmd->add_option("--out", oa.out_dir, "output directory");
  opt_cmd->add_option("--restarts", oa.opts.restarts, "random restarts");
  opt_cmd->add_option("--max-iter", oa.opts.max_iterations, "iteration cap per restart");
  opt_cmd->add_option("--tol", oa.opts.grad_tol, "projected-gradient tolerance");

  EquilibriumArgs ea;
  CLI::App* eq_cmd = app.add_subcommand("equilibrium", "Solve the discretized equilibrium measure");
  eq_cmd->add_option("--kernel", ea.kernel, "kernel name")->required();
  eq_cmd->add_option("--curve", ea.curve_path, "curve spec JSON file");
  eq_cmd->add_option("--instance", ea.instance, "named instance, e.g. circle:3,0,1");
  eq_cmd->add_option("--nodes", ea.nodes, "node count");
  eq_cmd->add_option("--tol", ea.tol, "Wolfe gap tolerance");
  eq_cmd->add_option("--max-iter", ea.max_iter, "iteration cap");
  eq_cmd->add_option("--refine", ea.refine, "also solve with this node multiplier");
  eq_cmd->add_option("--threshold", ea.threshold, "support weight threshold");
  eq_cmd->add_option("--out", ea.out_dir, "output directory");

  VerifyArgs va;
  CLI::App* ver_cmd = app.add_subcommand("verify", "Run executable theorem checks");
  ver_cmd->add_option("--check", va.check, "monotone|convexity|kappa|aplus|pi3|kr-limit|sandwich|all");
  ver_cmd->add_option("--instance", va.instance, "named instance");
  ver_cmd->add_option("--out", va.out_dir, "directory for JSON reports");
  ver_cmd->add_option("--grid", va.grid, "grid resolution for pair checks");
  ver_cmd->add_option("--nodes", va.nodes, "equilibrium node count");
  ver_cmd->add_option("--N", va.n_list, "N list for the sandwich check")->delimiter(',');
  ver_cmd->add_option("--seed", va.seed, "seed for randomized checks");

  PlotArgs pa;
  CLI::App* plot_cmd = app.add_subcommand("plot", "Render a configuration or measure as SVG");
  plot_cmd->add_option("--in", pa.input, "config.csv or measure.csv")->required();
  plot_cmd->add_option("--out", pa.output, "output SVG path")->required();
  plot_cmd->add_flag("--threed", pa.threed, "orthographic 3D projection of lifted points");
  plot_cmd->add_option("--phi-samples", pa.phi_samples, "angles for the measure lift");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ke_cmd->parsed()) return run_kernel_eval(ke);
    if (opt_cmd->parsed()) return run_optimize(oa, cmdline);
    if (eq_cmd->parsed()) return run_equilibrium(ea, cmdline);
    if (ver_cmd->parsed()) return run_verify(va);
    if (plot_cmd->parsed()) return run_plot(pa);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
