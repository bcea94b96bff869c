#include <doctest.h>

#include <set>

#include "dynrt/rt.hpp"
#include "dynrt/runner.hpp"
#include "dynrt/scenario.hpp"
#include "oracles.hpp"

using namespace dynrt;

TEST_CASE("default V2V scene has at least five oracle-verified path events") {
  const Scene s = generate_v2v_scenario({});
  std::vector<double> t;
  for (int i = 0; i <= 200; ++i) t.push_back(i * 0.01);
  const oracle::Sweep sweep = oracle::rt_sweep(s, t);
  int events = 0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    std::set<PathSignature> a(sweep.present[k - 1].begin(), sweep.present[k - 1].end());
    std::set<PathSignature> b(sweep.present[k].begin(), sweep.present[k].end());
    for (const auto& x : a) events += !b.count(x);
    for (const auto& x : b) events += !a.count(x);
  }
  CHECK(events >= 5);
  MESSAGE("signature changes over 2 s at 0.01 s: " << events);
}

TEST_CASE("no buildings leaves the two vehicles in free space") {
  V2vScenario v;
  v.building_segments = 0;
  v.oncoming_truck = false;
  const Scene s = generate_v2v_scenario(v);
  for (double t : {0.0, 1.0}) {
    const Snapshot snap = trace_snapshot(s, t);
    REQUIRE(snap.paths.size() == 1);
    CHECK(snap.paths[0].signature.is_los());
  }
}

TEST_CASE("generator rejects degenerate dimensions and is deterministic") {
  for (auto bad : {&V2vScenario::length, &V2vScenario::street_width, &V2vScenario::building_height,
                   &V2vScenario::building_depth}) {
    V2vScenario v;
    v.*bad = 0.0;
    CHECK_THROWS_AS(generate_v2v_scenario(v), SceneError);
  }
  V2vScenario neg;
  neg.building_segments = -1;
  CHECK_THROWS_AS(generate_v2v_scenario(neg), SceneError);

  const Scene a = generate_v2v_scenario({});
  const Scene b = generate_v2v_scenario({});
  REQUIRE(a.facets().size() == b.facets().size());
  for (std::size_t i = 0; i < a.facets().size(); ++i) CHECK(a.facets()[i].vertices == b.facets()[i].vertices);
  V2vScenario other;
  other.seed = 2;
  const Scene c = generate_v2v_scenario(other);
  bool differs = c.facets().size() != a.facets().size();
  for (std::size_t i = 0; !differs && i < a.facets().size(); ++i) differs = c.facets()[i].vertices != a.facets()[i].vertices;
  CHECK(differs);
}

TEST_CASE("route position count") {
  // 285 m at 36 km/h sampled every 0.1 s.
  RunConfig c;
  c.mode = Mode::Rt;
  c.t_c = 0.5;
  c.dt = 0.1;
  c.duration = 28.5;
  const auto t = position_times(c);
  CHECK(t.size() == 286);
  CHECK(t.back() * 10.0 == doctest::Approx(285.0));
}
