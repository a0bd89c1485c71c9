#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "revolve/checks.hpp"
#include "revolve/energy.hpp"
#include "revolve/equilibrium.hpp"
#include "revolve/geometry.hpp"

namespace revolve {

// Curve-spec documents:
//   {"kind": "circle", "center": [3.0, 0.0], "radius": 1.0,
//    "angles": [-3.14159265, 3.14159265]}
// and analogous objects for "vertical_segment" (abscissa, y_range),
// "ellipse" (center, semi_axes, optional angles) and "polyline" (vertices).
GeneratorCurve curve_from_json(const nlohmann::json& j);
nlohmann::json curve_to_json(const GeneratorCurve& curve);
GeneratorCurve load_curve(const std::string& path);

// Configuration persistence: JSON carries the curve spec plus {t[,phi]} per
// point; CSV has columns t,phi,x,y,zeta. All floats use 17 significant
// digits so a write-read round trip is exact.
nlohmann::json config_to_json(const Configuration& config);
Configuration config_from_json(const nlohmann::json& j);
std::string config_to_csv(const Configuration& config);

// Measure CSV: columns t,x,y,weight.
std::string measure_to_csv(const DiscreteMeasure& m);
DiscreteMeasure measure_from_csv(const std::string& text);

nlohmann::json energy_report_to_json(const EnergyReport& rep);
nlohmann::json equilibrium_report_to_json(const EquilibriumReport& rep);
nlohmann::json support_to_json(const SupportEstimate& est);
nlohmann::json check_report_to_json(const CheckReport& rep);

// Run manifest: everything needed to reproduce a run bit-for-bit. The
// timestamp honors SOURCE_DATE_EPOCH so that repeated runs can be compared
// byte-for-byte.
nlohmann::json make_manifest(const std::string& command_line, const nlohmann::json& inputs,
                             const std::vector<std::string>& outputs);

// Named verification instances for the CLI:
//   circle:cx,cy,r | vseg:R,c,d | ellipse:cx,cy,ae,be | arc:cx,cy,r,t0,t1
// where arc denotes the symmetric pair of arcs |t| in [t0, t1].
struct Instance {
  std::string text;
  std::optional<GeneratorCurve> curve;  // unset for arc pairs
  bool arc_pair = false;
  PlanePoint center;
  double radius = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
};
Instance parse_instance(const std::string& text);

// Node sample of an instance: curve grid for curves, mirrored inclusive
// grids for arc pairs. Returns (nodes, parameters).
std::pair<std::vector<PlanePoint>, std::vector<double>> instance_nodes(const Instance& inst,
                                                                       std::size_t n);

// Deterministic SVG scatter plots. Measures draw markers with area
// proportional to weight (zero-weight nodes omitted); configurations use
// uniform markers. The 3D variant projects lifted points orthographically.
std::string svg_plane_scatter(const std::vector<PlanePoint>& points,
                              const std::vector<double>& weights);
std::string svg_space_scatter(const std::vector<SpacePoint>& points,
                              const std::vector<double>& weights);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace revolve
