#include <doctest.h>

#include <cstdlib>
#include <json.hpp>

#include "revolve/io.hpp"

using namespace revolve;
using nlohmann::json;

TEST_CASE("curve specs round trip through JSON") {
  const char* doc = R"({"kind": "circle", "center": [3.0, 0.0], "radius": 1.0,
                        "angles": [-3.14159265, 3.14159265]})";
  GeneratorCurve c = curve_from_json(json::parse(doc));
  auto* shape = std::get_if<CircleShape>(&c.shape());
  REQUIRE(shape != nullptr);
  CHECK(shape->center.x == 3.0);
  CHECK(shape->radius == 1.0);

  json back = curve_to_json(c);
  GeneratorCurve c2 = curve_from_json(back);
  CHECK(c2.param_lo() == c.param_lo());
  CHECK(c2.param_hi() == c.param_hi());

  GeneratorCurve seg = curve_from_json(json::parse(
      R"({"kind": "vertical_segment", "abscissa": 2.0, "y_range": [0.0, 1.0]})"));
  CHECK(std::get_if<VerticalSegmentShape>(&seg.shape()) != nullptr);

  GeneratorCurve ell = curve_from_json(json::parse(
      R"({"kind": "ellipse", "center": [3.0, 0.0], "semi_axes": [1.2, 1.0]})"));
  CHECK(std::get_if<EllipseShape>(&ell.shape()) != nullptr);

  GeneratorCurve poly = curve_from_json(json::parse(
      R"({"kind": "polyline", "vertices": [[1.0, 0.0], [2.0, 1.0], [1.5, 2.0]]})"));
  CHECK(std::get_if<PolylineShape>(&poly.shape()) != nullptr);

  CHECK_THROWS_AS(curve_from_json(json::parse(R"({"kind": "sphere"})")), std::invalid_argument);
}

TEST_CASE("configurations round trip exactly") {
  GeneratorCurve circle = GeneratorCurve::circle({3, 0}, 1.0);
  Configuration cfg(ConfigMode::Surface3D, circle,
                    {0.12345678901234567, -1.0987654321098765, 2.2},
                    {0.1, 3.3333333333333335, 6.2});
  json j = config_to_json(cfg);
  Configuration back = config_from_json(json::parse(j.dump()));
  REQUIRE(back.size() == cfg.size());
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    CHECK(back.t[i] == cfg.t[i]);
    CHECK(back.phi[i] == cfg.phi[i]);
  }

  std::string csv = config_to_csv(cfg);
  CHECK(csv.rfind("t,phi,x,y,zeta\n", 0) == 0);
}

TEST_CASE("measures round trip exactly through CSV") {
  DiscreteMeasure m;
  m.nodes = {{2.0, 0.0}, {2.0, 0.3333333333333333}, {2.0, 1.0}};
  m.params = {0.0, 0.3333333333333333, 1.0};
  m.weights = {0.1234567890123456, 0.5, 0.3765432109876544};
  std::string csv = measure_to_csv(m);
  DiscreteMeasure back = measure_from_csv(csv);
  REQUIRE(back.size() == m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(back.nodes[i].x == m.nodes[i].x);
    CHECK(back.nodes[i].y == m.nodes[i].y);
    CHECK(back.weights[i] == m.weights[i]);
    CHECK(back.params[i] == m.params[i]);
  }
  CHECK_THROWS_AS(measure_from_csv("x,y\n"), std::invalid_argument);
}

TEST_CASE("instances parse and sample") {
  Instance circ = parse_instance("circle:3,0,1");
  REQUIRE(circ.curve.has_value());
  auto [nodes, params] = instance_nodes(circ, 101);
  CHECK(nodes.size() == 101);

  Instance arc = parse_instance("arc:3,0,1,1.2,1.5707963267948966");
  CHECK(arc.arc_pair);
  auto [anodes, aparams] = instance_nodes(arc, 80);
  CHECK(anodes.size() == 80);
  // Exact mirror pairs.
  for (std::size_t i = 0; i + 1 < aparams.size(); i += 2) {
    CHECK(aparams[i] == -aparams[i + 1]);
    CHECK(anodes[i].x == anodes[i + 1].x);
    CHECK(anodes[i].y == -anodes[i + 1].y);
  }

  CHECK_THROWS_AS(parse_instance("box:1,2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_instance("nocolon"), std::invalid_argument);
}

TEST_CASE("SVG output is deterministic and weight-aware") {
  std::vector<PlanePoint> pts = {{1, 0}, {2, 1}, {3, 0.5}};
  std::vector<double> w = {0.5, 0.0, 0.5};
  std::string svg1 = svg_plane_scatter(pts, w);
  std::string svg2 = svg_plane_scatter(pts, w);
  CHECK(svg1 == svg2);

  // Zero-weight nodes are omitted: two markers drawn.
  std::size_t count = 0;
  for (std::size_t pos = svg1.find("<circle"); pos != std::string::npos;
       pos = svg1.find("<circle", pos + 1)) {
    ++count;
  }
  CHECK(count == 2);

  std::vector<SpacePoint> sp = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::string svg3 = svg_space_scatter(sp, {});
  CHECK(svg3.find("<svg") == 0);
}

TEST_CASE("manifest timestamp honors SOURCE_DATE_EPOCH") {
  setenv("SOURCE_DATE_EPOCH", "0", 1);
  json m1 = make_manifest("revolve optimize", json::object(), {"a.csv"});
  json m2 = make_manifest("revolve optimize", json::object(), {"a.csv"});
  unsetenv("SOURCE_DATE_EPOCH");
  CHECK(m1.dump() == m2.dump());
  CHECK(m1["timestamp"] == "1970-01-01T00:00:00Z");
  CHECK(m1["command_line"] == "revolve optimize");
}

TEST_CASE("file writers round trip bytes") {
  std::string path = "/tmp/revolve_io_test.txt";
  write_text_file(path, "alpha\nbeta\n");
  CHECK(read_text_file(path) == "alpha\nbeta\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text_file("/nonexistent/nope"), std::runtime_error);
}
