#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dynrt/scenario.hpp"
#include "dynrt/scene.hpp"
#include "dynrt/scene_io.hpp"

using namespace dynrt;

namespace {

Facet unit_square(const std::string& id, Motion m = {}) {
  Facet f;
  f.id = id;
  f.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  f.motion = m;
  return f;
}

Scene one_facet(Motion m = {}) {
  return Scene({unit_square("sq", m)}, {}, Motion::stationary({0, 0, 5}), Motion::stationary({3, 0, 5}), 6e9, 30);
}

}  // namespace

TEST_CASE("position_at evaluates the quadratic motion") {
  CHECK(position_at({{0, 0, 0}, {}, {}, 0}, 5) == Vec3{0, 0, 0});
  const Vec3 p = position_at({{0, 0, 0}, {1, 0, 0}, {0, 2, 0}, 0}, 2);
  CHECK(p == Vec3{2, 4, 0});
  const Vec3 q = position_at({{0, 10, 1}, {0, 10, 0}, {}, 0}, 0.1);
  CHECK(std::abs(q.y - 11.0) < 1e-12);
  CHECK(q.x == 0.0);
  CHECK(q.z == 1.0);
}

TEST_CASE("re-referencing does not drift") {
  const MotionState m{{1, -2, 3}, {0.5, 2, -1}, {0.3, -0.7, 0.1}, 0.25};
  for (double t1 : {-3.0, 0.0, 1.7, 12.0}) {
    const MotionState r = rereference(m, t1);
    for (double t2 : {-1.0, 0.4, 9.5}) {
      const Vec3 d = position_at(r, t2) - position_at(m, t2);
      CHECK(norm(d) <= 1e-12 * (1 + norm(position_at(m, t2))));
    }
  }
}

TEST_CASE("piecewise motion switches segment at t_ref") {
  const Motion m({MotionState{{0, 0, 0}, {1, 0, 0}, {}, 0}, MotionState{{2, 0, 0}, {0, 3, 0}, {}, 2}});
  CHECK(m.position(1) == Vec3{1, 0, 0});
  CHECK(m.position(3) == Vec3{2, 3, 0});
  CHECK(m.position(-1) == Vec3{-1, 0, 0});
}

TEST_CASE("scene_at moves facets rigidly and leaves stationary scenes alone") {
  const Scene still = one_facet();
  const auto a = still.at(0).facet_vertices(0);
  const auto b = still.at(123.4).facet_vertices(0);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

  const Scene moving = one_facet(Motion::linear({}, {1, 0, 0}));
  const auto v = moving.at(1).facet_vertices(0);
  const auto v0 = moving.at(0).facet_vertices(0);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == v0[i] + Vec3{1, 0, 0});
  // The reference time reproduces the stored geometry exactly.
  for (std::size_t i = 0; i < v0.size(); ++i) CHECK(v0[i] == moving.facets()[0].vertices[i]);
}

TEST_CASE("retime equals a fresh instant") {
  const Scene s = generate_v2v_scenario({});
  SceneInstant at = s.at(0.0);
  for (double t : {0.37, 1.9, 0.05}) {
    at.retime(t);
    const SceneInstant fresh = s.at(t);
    CHECK(at.tx() == fresh.tx());
    CHECK(at.rx() == fresh.rx());
    for (std::size_t f = 0; f < s.facets().size(); ++f) CHECK(at.facet_displacement(f) == fresh.facet_displacement(f));
    for (std::size_t e = 0; e < s.edges().size(); ++e) CHECK(at.edge_displacement(e) == fresh.edge_displacement(e));
  }
}

TEST_CASE("V2V antennas advance 1 m in 0.1 s") {
  const Scene s = generate_v2v_scenario({});
  const Vec3 d_tx = s.at(0.1).tx() - s.at(0).tx();
  const Vec3 d_rx = s.at(0.1).rx() - s.at(0).rx();
  CHECK(d_tx.y == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d_rx.y == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d_tx.x == 0.0);
}

TEST_CASE("point_in_facet signed distance") {
  const Scene s = one_facet();
  const SceneInstant at = s.at(0);
  const PointInFacet c = point_in_facet({0.5, 0.5, 0}, at, 0);
  CHECK(c.inside);
  CHECK(c.distance == doctest::Approx(0.5).epsilon(1e-12));
  const PointInFacet o = point_in_facet({1.2, 0.5, 0}, at, 0);
  CHECK_FALSE(o.inside);
  CHECK(o.distance == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(std::abs(point_in_facet({1, 1, 0}, at, 0).distance) <= 1e-9);
  CHECK_THROWS_AS(point_in_facet({0.5, 0.5, 0.01}, at, 0), SceneError);
}

TEST_CASE("point_in_facet changes sign once across an edge") {
  const Scene s = one_facet();
  const SceneInstant at = s.at(0);
  int changes = 0;
  double prev = point_in_facet({0.3, -0.5, 0}, at, 0).distance;
  for (int i = 1; i <= 2000; ++i) {
    const double y = -0.5 + i * 0.001;
    const double d = point_in_facet({0.3 + 0.0001 * i, y, 0}, at, 0).distance;
    if ((d > 0) != (prev > 0)) ++changes;
    prev = d;
  }
  CHECK(changes == 2);  // enters through y = 0 and leaves through y = 1
}

TEST_CASE("scene validation") {
  Facet bent = unit_square("bent");
  bent.vertices[2].z = 0.1;
  CHECK_THROWS_AS(Scene({bent}, {}, Motion{}, Motion{}, 6e9, 30), SceneError);

  Facet concave;
  concave.id = "concave";
  concave.vertices = {{0, 0, 0}, {2, 0, 0}, {1, 0.5, 0}, {2, 2, 0}, {0, 2, 0}};
  CHECK_THROWS_AS(Scene({concave}, {}, Motion{}, Motion{}, 6e9, 30), SceneError);

  CHECK_THROWS_AS(Scene({unit_square("a"), unit_square("a")}, {}, Motion{}, Motion{}, 6e9, 30), SceneError);
  CHECK_THROWS_AS(Scene({unit_square("a")}, {}, Motion{}, Motion{}, 0.0, 30), SceneError);

  Facet lossy = unit_square("lossy");
  lossy.material.attenuation_alpha = -1;
  CHECK_THROWS_AS(Scene({lossy}, {}, Motion{}, Motion{}, 6e9, 30), SceneError);

  // Edge off its facet plane.
  const Edge off{"e", {0, 0, 1}, {1, 0, 1}, {0, 0}, 2 * kPi};
  CHECK_THROWS_AS(Scene({unit_square("a")}, {off}, Motion{}, Motion{}, 6e9, 30), SceneError);
}

TEST_CASE("scene JSON round trip") {
  const Scene s = generate_v2v_scenario({});
  const Scene back = scene_from_json(scene_to_json(s));
  REQUIRE(back.facets().size() == s.facets().size());
  REQUIRE(back.edges().size() == s.edges().size());
  for (double t : {0.0, 1.3}) {
    CHECK(back.at(t).tx() == s.at(t).tx());
    CHECK(back.at(t).rx() == s.at(t).rx());
    for (std::size_t f = 0; f < s.facets().size(); ++f) {
      CHECK(back.facets()[f].id == s.facets()[f].id);
      CHECK(back.at(t).facet_displacement(f) == s.at(t).facet_displacement(f));
      CHECK(back.facets()[f].material.transparent == s.facets()[f].material.transparent);
    }
  }
  CHECK(scene_to_json(back) == scene_to_json(s));
}

TEST_CASE("scene JSON defaults and errors") {
  const auto j = nlohmann::json::parse(R"({
    "frequency_hz": 6e9, "tx_power_dbm": 30,
    "facets": [{"id": "w", "vertices": [[0,0,0],[1,0,0],[1,1,0],[0,1,0]]}],
    "edges": [],
    "tx": {"motion_segments": [{"t_ref": 0, "position": [0,0,1]}]},
    "rx": {"motion_segments": [{"t_ref": 0, "position": [1,0,1], "velocity": [0,1,0]}]}
  })");
  const Scene s = scene_from_json(j);
  CHECK(s.facets()[0].material.rel_permittivity == 5.31);
  CHECK(s.facets()[0].material.conductivity == 0.0326);
  CHECK(s.facets()[0].thickness == 0.2);
  CHECK(s.at(2).rx() == Vec3{1, 2, 1});

  auto bad = j;
  bad["facets"][0]["vertices"] = "nope";
  CHECK_THROWS_AS(scene_from_json(bad), SceneError);
  auto dangling = j;
  dangling["edges"] = nlohmann::json::parse(R"([{"id": "e", "endpoints": [[0,0,0],[1,0,0]], "adjacent_facets": ["x", "w"], "exterior_wedge_angle": 6.283185307179586}])");
  CHECK_THROWS_AS(scene_from_json(dangling), SceneError);
  CHECK_THROWS_AS(load_scene("/nonexistent/scene.json"), std::runtime_error);
}
