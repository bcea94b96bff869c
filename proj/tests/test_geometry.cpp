#include <doctest.h>

#include <cmath>
#include <random>

#include "dynrt/geometry.hpp"
#include "oracles.hpp"

using namespace dynrt;

namespace {

Facet rect(const std::string& id, std::vector<Vec3> v) {
  Facet f;
  f.id = id;
  f.vertices = std::move(v);
  return f;
}

// Unit square on z = 0 centred at (0, 2, 0).
Scene floor_scene() {
  return Scene({rect("floor", {{-0.5, 1.5, 0}, {0.5, 1.5, 0}, {0.5, 2.5, 0}, {-0.5, 2.5, 0}})}, {}, Motion{},
               Motion{}, 6e9, 30);
}

// Vertical screen y = 0, z <= 0, with its top edge along x from -1 to 1.
Scene screen_scene() {
  Facet f = rect("screen", {{-1, 0, 0}, {-1, 0, -2}, {1, 0, -2}, {1, 0, 0}});
  return Scene({f}, {Edge{"top", {-1, 0, 0}, {1, 0, 0}, {0, 0}, 2 * kPi}}, Motion{}, Motion{}, 6e9, 30);
}

}  // namespace

TEST_CASE("image-method reflection point") {
  const Scene s = floor_scene();
  const SceneInstant at = s.at(0);
  const auto r = find_reflection_point({0, 0, 1}, {0, 4, 1}, at, 0);
  REQUIRE(r);
  CHECK(distance(*r, {0, 2, 0}) < 1e-12);

  const auto foot = find_reflection_point({0.2, 2.1, 1}, {0.2, 2.1, 1}, at, 0);
  REQUIRE(foot);
  CHECK(distance(*foot, {0.2, 2.1, 0}) < 1e-12);

  // Specular point at y = 2.6, 0.1 m beyond the far edge.
  CHECK_FALSE(find_reflection_point({0, 0, 1}, {0, 5.2, 1}, at, 0));
  // Opposite sides of the plane.
  CHECK_FALSE(find_reflection_point({0, 0, 1}, {0, 4, -1}, at, 0));
}

TEST_CASE("reflection point follows the receiver at half its speed") {
  // Tx fixed, Rx moving along y above z = 0: the specular point moves at V_y / 2.
  Facet big = rect("floor", {{-50, -50, 0}, {50, -50, 0}, {50, 50, 0}, {-50, 50, 0}});
  const double vy = 2.0;
  const Scene s({big}, {}, Motion::stationary({0, 0, 1}), Motion::linear({0, 4, 1}, {0, vy, 0}), 6e9, 30);
  const double h = 1e-4;
  for (double t : {0.0, 0.7, 2.0}) {
    const auto a = find_reflection_point(s.at(t - h).tx(), s.at(t - h).rx(), s.at(t - h), 0);
    const auto b = find_reflection_point(s.at(t + h).tx(), s.at(t + h).rx(), s.at(t + h), 0);
    REQUIRE(a);
    REQUIRE(b);
    const Vec3 v = (*b - *a) / (2 * h);
    CHECK(v.y == doctest::Approx(vy / 2).epsilon(1e-8));
    CHECK(std::abs(v.x) < 1e-9);
    CHECK(std::abs(v.z) < 1e-9);
  }
}

TEST_CASE("diffraction point") {
  const Scene s = screen_scene();
  const SceneInstant at = s.at(0);
  const auto p = find_diffraction_point({0, -1, 1}, {0, 1, 1}, at, 0);
  REQUIRE(p);
  CHECK(distance(*p, {0, 0, 0}) < 1e-12);

  const auto sym = find_diffraction_point({0.3, -2, 0.5}, {-0.3, 2, 0.5}, at, 0);
  REQUIRE(sym);
  CHECK(distance(*sym, {0, 0, 0}) < 1e-12);

  // Minimizer at parameter 1.3 of the edge (x = 1.6): clipped.
  CHECK_FALSE(find_diffraction_point({1.6, -1, 1}, {1.6, 1, 1}, at, 0));
}

TEST_CASE("diffraction point minimizes the path length and satisfies the Keller cone") {
  const Scene s = screen_scene();
  const SceneInstant at = s.at(0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int found = 0;
  for (int i = 0; i < 40; ++i) {
    const Vec3 tx{u(rng), -1.5 + 0.5 * u(rng), 1 + u(rng)};
    const Vec3 rx{u(rng), 1.5 + 0.5 * u(rng), 1 + u(rng)};
    const auto p = find_diffraction_point(tx, rx, at, 0);
    // Brute force over the segment.
    double best = 1e300;
    double best_x = 0;
    for (int k = 0; k <= 200000; ++k) {
      const Vec3 q{-1 + k * 1e-5, 0, 0};
      const double len = distance(tx, q) + distance(q, rx);
      if (len < best) {
        best = len;
        best_x = q.x;
      }
    }
    if (!p) {
      CHECK((best_x < -1 + 1e-4 || best_x > 1 - 1e-4));
      continue;
    }
    ++found;
    CHECK(std::abs(p->x - best_x) < 2e-5);
    CHECK(distance(tx, *p) + distance(*p, rx) <= best + 1e-12);
    const Vec3 e{1, 0, 0};
    CHECK(std::abs(dot(normalized(*p - tx), e) - dot(normalized(rx - *p), e)) < 1e-9);
  }
  CHECK(found > 10);
}

TEST_CASE("segment crossings against an independent polygon test") {
  const Scene s = screen_scene();
  const SceneInstant at = s.at(0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<std::uint32_t> hits;
  for (int i = 0; i < 2000; ++i) {
    const Vec3 a{u(rng), u(rng), u(rng)};
    const Vec3 b{u(rng), u(rng), u(rng)};
    segment_crossings(a, b, at, hits);
    CHECK((hits.size() == 1) == oracle::segment_hits_polygon(a, b, at.facet_vertices(0)));
  }
}

TEST_CASE("swept facet box covers the facet over the interval") {
  Facet f = rect("m", {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}});
  f.motion = Motion(MotionState{{}, {1, -2, 0}, {0, 3, 0}, 0});
  const Scene s({f}, {}, Motion{}, Motion{}, 6e9, 30);
  const Aabb box = swept_facet_box(s, 0, 0.0, 2.0);
  for (int i = 0; i <= 400; ++i) {
    const Aabb b = s.at(i * 0.005).facet_box(0);
    CHECK(box.lo.x <= b.lo.x);
    CHECK(box.lo.y <= b.lo.y);
    CHECK(box.hi.x >= b.hi.x);
    CHECK(box.hi.y >= b.hi.y);
  }
}

TEST_CASE("solve_path rejects overlong signatures") {
  const Scene s = floor_scene();
  PathSignature sig;
  sig.steps.assign(9, SignatureStep{Mechanism::Reflection, 0});
  CHECK_THROWS_AS(solve_path(sig, s.at(0)), std::invalid_argument);
}
