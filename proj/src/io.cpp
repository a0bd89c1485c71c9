#include "revolve/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "revolve/util.hpp"

namespace revolve {

namespace {

using nlohmann::json;

PlanePoint point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [x, y] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json point_to_json(PlanePoint p) { return json::array({p.x, p.y}); }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = std::stod(s, &used);
  return v;
}

}  // namespace

GeneratorCurve curve_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "circle") {
    PlanePoint c = point_from_json(j.at("center"));
    double r = j.at("radius").get<double>();
    double lo = -M_PI, hi = M_PI;
    if (j.contains("angles")) {
      lo = j["angles"][0].get<double>();
      hi = j["angles"][1].get<double>();
    }
    return GeneratorCurve::circle(c, r, lo, hi);
  }
  if (kind == "vertical_segment") {
    double x = j.at("abscissa").get<double>();
    const json& yr = j.at("y_range");
    return GeneratorCurve::vertical_segment(x, yr[0].get<double>(), yr[1].get<double>());
  }
  if (kind == "ellipse") {
    PlanePoint c = point_from_json(j.at("center"));
    const json& ax = j.at("semi_axes");
    double lo = -M_PI, hi = M_PI;
    if (j.contains("angles")) {
      lo = j["angles"][0].get<double>();
      hi = j["angles"][1].get<double>();
    }
    return GeneratorCurve::ellipse(c, ax[0].get<double>(), ax[1].get<double>(), lo, hi);
  }
  if (kind == "polyline") {
    std::vector<PlanePoint> verts;
    for (const json& v : j.at("vertices")) verts.push_back(point_from_json(v));
    return GeneratorCurve::polyline(std::move(verts));
  }
  throw std::invalid_argument("unknown curve kind '" + kind + "'");
}

json curve_to_json(const GeneratorCurve& curve) {
  json j;
  if (auto* c = std::get_if<CircleShape>(&curve.shape())) {
    j["kind"] = "circle";
    j["center"] = point_to_json(c->center);
    j["radius"] = c->radius;
    j["angles"] = json::array({c->t_lo, c->t_hi});
  } else if (auto* v = std::get_if<VerticalSegmentShape>(&curve.shape())) {
    j["kind"] = "vertical_segment";
    j["abscissa"] = v->abscissa;
    j["y_range"] = json::array({v->y_lo, v->y_hi});
  } else if (auto* e = std::get_if<EllipseShape>(&curve.shape())) {
    j["kind"] = "ellipse";
    j["center"] = point_to_json(e->center);
    j["semi_axes"] = json::array({e->semi_x, e->semi_y});
    j["angles"] = json::array({e->t_lo, e->t_hi});
  } else {
    auto& p = std::get<PolylineShape>(curve.shape());
    j["kind"] = "polyline";
    json verts = json::array();
    for (const PlanePoint& v : p.vertices) verts.push_back(point_to_json(v));
    j["vertices"] = std::move(verts);
  }
  return j;
}

GeneratorCurve load_curve(const std::string& path) {
  return curve_from_json(json::parse(read_text_file(path)));
}

json config_to_json(const Configuration& config) {
  json j;
  j["mode"] = config.mode == ConfigMode::Surface3D ? "surface3d" : "curve1d";
  j["curve"] = curve_to_json(config.curve);
  json pts = json::array();
  for (std::size_t i = 0; i < config.size(); ++i) {
    json p;
    p["t"] = config.t[i];
    if (config.mode == ConfigMode::Surface3D) p["phi"] = config.phi[i];
    pts.push_back(std::move(p));
  }
  j["points"] = std::move(pts);
  return j;
}

Configuration config_from_json(const json& j) {
  ConfigMode mode =
      j.at("mode").get<std::string>() == "surface3d" ? ConfigMode::Surface3D : ConfigMode::Curve1D;
  GeneratorCurve curve = curve_from_json(j.at("curve"));
  std::vector<double> t, phi;
  for (const json& p : j.at("points")) {
    t.push_back(p.at("t").get<double>());
    if (mode == ConfigMode::Surface3D) phi.push_back(p.at("phi").get<double>());
  }
  return Configuration(mode, std::move(curve), std::move(t), std::move(phi));
}

std::string config_to_csv(const Configuration& config) {
  std::ostringstream os;
  os << "t,phi,x,y,zeta\n";
  for (std::size_t i = 0; i < config.size(); ++i) {
    double phi = config.mode == ConfigMode::Surface3D ? config.phi[i] : 0.0;
    SpacePoint p = config.space_point(i);
    os << format_g17(config.t[i]) << ',' << format_g17(phi) << ',' << format_g17(p.x) << ','
       << format_g17(p.y) << ',' << format_g17(p.zeta) << '\n';
  }
  return os.str();
}

std::string measure_to_csv(const DiscreteMeasure& m) {
  std::ostringstream os;
  os << "t,x,y,weight\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    double t = m.params.empty() ? 0.0 : m.params[i];
    os << format_g17(t) << ',' << format_g17(m.nodes[i].x) << ',' << format_g17(m.nodes[i].y)
       << ',' << format_g17(m.weights[i]) << '\n';
  }
  return os.str();
}

DiscreteMeasure measure_from_csv(const std::string& text) {
  DiscreteMeasure m;
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) throw std::invalid_argument("measure CSV: empty file");
  if (line != "t,x,y,weight") throw std::invalid_argument("measure CSV: unexpected header");
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    auto cols = split(line, ',');
    if (cols.size() != 4) throw std::invalid_argument("measure CSV: expected 4 columns");
    m.params.push_back(parse_double(cols[0]));
    m.nodes.push_back({parse_double(cols[1]), parse_double(cols[2])});
    m.weights.push_back(parse_double(cols[3]));
  }
  return m;
}

json energy_report_to_json(const EnergyReport& rep) {
  json j;
  j["energy"] = rep.energy;
  j["grad_norm"] = rep.grad_norm;
  j["iterations"] = rep.iterations;
  j["seed"] = rep.seed;
  j["converged"] = rep.converged;
  j["point_potentials"] = rep.point_potentials;
  return j;
}

json equilibrium_report_to_json(const EquilibriumReport& rep) {
  json j;
  j["j_value"] = rep.j_value;
  j["wolfe_gap"] = rep.wolfe_gap;
  j["frostman_max_violation_on_support"] = rep.frostman_max_violation_on_support;
  j["frostman_min_slack_off_support"] = rep.frostman_min_slack_off_support;
  j["iterations"] = rep.iterations;
  j["polish_rounds"] = rep.polish_rounds;
  j["converged"] = rep.converged;
  return j;
}

json support_to_json(const SupportEstimate& est) {
  json j;
  j["active_count"] = est.active.size();
  j["threshold"] = est.threshold;
  j["interval"] = json::array({est.param_lo, est.param_hi});
  if (est.arc_angle) j["theta"] = *est.arc_angle;
  j["two_point_degenerate"] = est.two_point_degenerate;
  if (est.theta_m) j["theta_m"] = *est.theta_m;
  return j;
}

json check_report_to_json(const CheckReport& rep) {
  json j;
  j["check"] = rep.name;
  j["instance"] = rep.instance;
  j["pass"] = rep.pass;
  j["guaranteed"] = rep.guaranteed;
  j["worst_margin"] = rep.worst_margin;
  j["grid"] = rep.grid;
  j["seed"] = rep.seed;
  j["details"] = rep.details;
  return j;
}

json make_manifest(const std::string& command_line, const json& inputs,
                   const std::vector<std::string>& outputs) {
  json j;
  j["tool"] = "revolve";
  j["version"] = "0.1.0";
  j["command_line"] = command_line;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  std::time_t stamp = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    stamp = static_cast<std::time_t>(std::atoll(env));
  } else {
    stamp = std::time(nullptr);
  }
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&stamp, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  j["timestamp"] = buf;
  return j;
}

Instance parse_instance(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("instance must look like kind:args, got '" + text + "'");
  std::string kind = text.substr(0, colon);
  auto args = split(text.substr(colon + 1), ',');
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      throw std::invalid_argument("instance '" + kind + "' needs " + std::to_string(n) + " args");
  };

  Instance inst;
  inst.text = text;
  if (kind == "circle") {
    need(3);
    inst.curve = GeneratorCurve::circle({parse_double(args[0]), parse_double(args[1])},
                                        parse_double(args[2]));
  } else if (kind == "vseg") {
    need(3);
    inst.curve = GeneratorCurve::vertical_segment(parse_double(args[0]), parse_double(args[1]),
                                                  parse_double(args[2]));
  } else if (kind == "ellipse") {
    need(4);
    inst.curve = GeneratorCurve::ellipse({parse_double(args[0]), parse_double(args[1])},
                                         parse_double(args[2]), parse_double(args[3]));
  } else if (kind == "arc") {
    need(5);
    inst.arc_pair = true;
    inst.center = {parse_double(args[0]), parse_double(args[1])};
    inst.radius = parse_double(args[2]);
    inst.t_lo = parse_double(args[3]);
    inst.t_hi = parse_double(args[4]);
    if (!(inst.radius > 0.0) || !(inst.t_lo >= 0.0) || !(inst.t_lo < inst.t_hi))
      throw std::invalid_argument("arc instance needs r > 0 and 0 <= t0 < t1");
  } else {
    throw std::invalid_argument("unknown instance kind '" + kind + "'");
  }
  return inst;
}

std::pair<std::vector<PlanePoint>, std::vector<double>> instance_nodes(const Instance& inst,
                                                                       std::size_t n) {
  std::vector<PlanePoint> nodes;
  std::vector<double> params;
  if (!inst.arc_pair) {
    const GeneratorCurve& curve = *inst.curve;
    params = curve.node_grid(n);
    nodes.reserve(params.size());
    for (double t : params) nodes.push_back(curve.eval(t));
    return {nodes, params};
  }

  // Symmetric pair of arcs |t| in [t_lo, t_hi]: build the upper arc and
  // mirror it across the circle's horizontal axis, so the node set is an
  // exact mirror image of itself.
  std::size_t half = std::max<std::size_t>(2, n / 2);
  for (std::size_t k = 0; k < half; ++k) {
    double t = inst.t_lo + (inst.t_hi - inst.t_lo) * static_cast<double>(k) /
                               static_cast<double>(half - 1);
    double dx = inst.radius * std::cos(t);
    double dy = inst.radius * std::sin(t);
    params.push_back(-t);
    nodes.push_back({inst.center.x + dx, inst.center.y - dy});
    params.push_back(t);
    nodes.push_back({inst.center.x + dx, inst.center.y + dy});
  }
  return {nodes, params};
}

namespace {

struct SvgFrame {
  double min_x = 0, max_x = 1, min_y = 0, max_y = 1;
  double width = 480, height = 480, pad = 24;

  void fit(double x, double y) {
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }
  void init(double x, double y) { min_x = max_x = x; min_y = max_y = y; }

  std::pair<double, double> map(double x, double y) const {
    double sx = (width - 2 * pad) / std::max(max_x - min_x, 1e-9);
    double sy = (height - 2 * pad) / std::max(max_y - min_y, 1e-9);
    double s = std::min(sx, sy);
    double px = pad + (x - min_x) * s;
    double py = height - pad - (y - min_y) * s;  // y up
    return {px, py};
  }
};

std::string svg_round(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string svg_emit(const std::vector<std::pair<double, double>>& xy,
                     const std::vector<double>& radii) {
  SvgFrame frame;
  bool first = true;
  for (const auto& [x, y] : xy) {
    if (first) {
      frame.init(x, y);
      first = false;
    } else {
      frame.fit(x, y);
    }
  }
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << frame.width << "\" height=\""
     << frame.height << "\" viewBox=\"0 0 " << frame.width << " " << frame.height << "\">\n";
  os << "<rect width=\"" << frame.width << "\" height=\"" << frame.height
     << "\" fill=\"white\" stroke=\"#cccccc\"/>\n";
  for (std::size_t i = 0; i < xy.size(); ++i) {
    auto [px, py] = frame.map(xy[i].first, xy[i].second);
    os << "<circle cx=\"" << svg_round(px) << "\" cy=\"" << svg_round(py) << "\" r=\""
       << svg_round(radii[i]) << "\" fill=\"#1f5fa8\" fill-opacity=\"0.8\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace

std::string svg_plane_scatter(const std::vector<PlanePoint>& points,
                              const std::vector<double>& weights) {
  if (!weights.empty() && weights.size() != points.size())
    throw std::invalid_argument("svg_plane_scatter: weight length mismatch");
  std::vector<std::pair<double, double>> xy;
  std::vector<double> radii;
  double wmax = 0.0;
  for (double w : weights) wmax = std::max(wmax, w);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!weights.empty()) {
      if (weights[i] <= 0.0) continue;  // empty-weight nodes omitted
      radii.push_back(2.0 + 8.0 * std::sqrt(weights[i] / wmax));  // area ~ weight
    } else {
      radii.push_back(3.0);
    }
    xy.emplace_back(points[i].x, points[i].y);
  }
  return svg_emit(xy, radii);
}

std::string svg_space_scatter(const std::vector<SpacePoint>& points,
                              const std::vector<double>& weights) {
  if (!weights.empty() && weights.size() != points.size())
    throw std::invalid_argument("svg_space_scatter: weight length mismatch");
  // Fixed orthographic view: rotate about y by -0.6 rad, tilt by 0.35 rad.
  const double cy = std::cos(-0.6), sy = std::sin(-0.6);
  const double ct = std::cos(0.35), st = std::sin(0.35);
  std::vector<std::pair<double, double>> xy;
  std::vector<double> radii;
  double wmax = 0.0;
  for (double w : weights) wmax = std::max(wmax, w);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!weights.empty() && weights[i] <= 0.0) continue;
    const SpacePoint& p = points[i];
    double rx = p.x * cy + p.zeta * sy;
    double rz = -p.x * sy + p.zeta * cy;
    double sx = rx;
    double sy2 = p.y * ct - rz * st;
    xy.emplace_back(sx, sy2);
    radii.push_back(weights.empty() ? 3.0 : 1.5 + 6.0 * std::sqrt(weights[i] / wmax));
  }
  return svg_emit(xy, radii);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << content;
  if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace revolve
