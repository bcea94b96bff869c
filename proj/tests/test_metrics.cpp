#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dynrt/metrics.hpp"

using namespace dynrt;

namespace {

Path make(std::uint32_t id, double magnitude, double delay, double dbm) {
  Path p;
  if (id > 0) p.signature.steps.push_back({Mechanism::Reflection, id});
  p.field = {Complex{magnitude, 0.0}, Complex{}};
  p.delay = delay;
  p.power_dbm = dbm;
  return p;
}

Snapshot snap(std::vector<Path> paths) {
  Snapshot s;
  s.paths = std::move(paths);
  sort_paths(s);
  return s;
}

std::vector<Snapshot> random_run(std::uint64_t seed, int positions) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Snapshot> run;
  for (int k = 0; k < positions; ++k) {
    std::vector<Path> paths;
    const int n = 1 + static_cast<int>(u(rng) * 8);
    for (int i = 0; i < n; ++i)
      paths.push_back(make(static_cast<std::uint32_t>(i), 1.0, (10 + 200 * u(rng)) * 1e-9, -90 + 40 * u(rng)));
    run.push_back(snap(paths));
  }
  return run;
}

}  // namespace

TEST_CASE("geometry and field error worked examples") {
  std::vector<Path> ten;
  for (std::uint32_t i = 0; i < 10; ++i) ten.push_back(make(i, 1.0, 1e-7, -60));
  const std::vector<Snapshot> ref{snap(ten)};
  CHECK(geometry_error(ref, ref) == 0.0);
  CHECK(field_error(ref, ref) == 0.0);

  std::vector<Path> nine(ten.begin(), ten.end() - 1);
  CHECK(geometry_error(ref, {snap(nine)}) == doctest::Approx(0.1).epsilon(1e-15));

  const std::vector<Snapshot> one{snap({make(0, 1.0, 1e-7, -60)})};
  const std::vector<Snapshot> off{snap({make(0, 0.99, 1e-7, -60)})};
  CHECK(field_error(one, off) == doctest::Approx(0.01).epsilon(1e-12));

  // Extra predicted paths do not count; unmatched ones are not in the field error.
  const std::vector<Snapshot> extra{snap({make(0, 1.0, 1e-7, -60), make(5, 3.0, 1e-7, -60)})};
  CHECK(geometry_error(one, extra) == 0.0);
  CHECK(field_error(one, extra) == 0.0);
}

TEST_CASE("error report skips empty positions and weak paths") {
  const std::vector<Snapshot> ref{snap({}), snap({make(0, 1e-16, 1e-7, -300), make(1, 2.0, 1e-7, -50)}),
                                  snap({make(0, 1.0, 1e-7, -60)})};
  const std::vector<Snapshot> pre{snap({make(0, 1.0, 1e-7, -60)}), snap({make(0, 1.0, 1e-7, -60), make(1, 1.0, 1e-7, -60)}),
                                  snap({})};
  const ErrorReport r = evaluate_errors(ref, pre);
  CHECK(r.skipped_empty_positions == 1);
  CHECK(r.skipped_weak_paths == 1);
  REQUIRE(r.positions.size() == 2);
  CHECK(r.epsilon_g == doctest::Approx(0.5));
  CHECK(r.epsilon_e == doctest::Approx(0.5));

  const ErrorReport masked = evaluate_errors(ref, pre, {false, false, true});
  CHECK(masked.positions.size() == 1);
  CHECK(masked.epsilon_g == 1.0);
  CHECK_THROWS_AS(evaluate_errors(ref, {snap({})}), std::invalid_argument);
}

TEST_CASE("similarity index worked examples") {
  const std::vector<Snapshot> a{snap({make(0, 1, 50e-9, -60)})};
  CHECK(similarity_index(a, a) == doctest::Approx(1.0).epsilon(1e-15));
  const std::vector<Snapshot> far{snap({make(0, 1, 150e-9, -60)})};
  CHECK(similarity_index(a, far) == doctest::Approx(0.0).epsilon(1e-15));
  const std::vector<Snapshot> half{snap({make(0, 1, 50e-9, -63), make(1, 1, 150e-9, -63)})};
  CHECK(similarity_index(a, half) == doctest::Approx(0.5).epsilon(1e-12));
  const std::vector<Snapshot> silent{snap({})};
  CHECK_THROWS_AS(similarity_index(a, silent), std::invalid_argument);
  CHECK_THROWS_AS(similarity_index(a, {a[0], a[0]}), std::invalid_argument);
}

TEST_CASE("similarity index is symmetric, scale-invariant and order-invariant") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto x = random_run(seed, 12);
    const auto y = random_run(seed + 1000, 12);
    const double si = similarity_index(x, y);
    CHECK(si >= 0.0);
    CHECK(si <= 1.0);
    CHECK(similarity_index(y, x) == doctest::Approx(si).epsilon(1e-12));
    auto scaled = y;
    for (auto& s : scaled)
      for (auto& p : s.paths) p.power_dbm += 17.3;
    CHECK(similarity_index(x, scaled) == doctest::Approx(si).epsilon(1e-12));
    auto shuffled = y;
    std::mt19937_64 rng(seed);
    for (auto& s : shuffled) std::shuffle(s.paths.begin(), s.paths.end(), rng);
    CHECK(similarity_index(x, shuffled) == doctest::Approx(si).epsilon(1e-12));
    CHECK(geometry_error(x, shuffled) == doctest::Approx(geometry_error(x, y)).epsilon(1e-15));
  }
}

TEST_CASE("PDP keeps the strongest ten, strongest first") {
  std::vector<Path> three{make(0, 1, 1e-8, -70), make(1, 1, 2e-8, -50), make(2, 1, 3e-8, -60)};
  auto pdp = pdp_extract({snap(three)});
  REQUIRE(pdp.size() == 1);
  REQUIRE(pdp[0].size() == 3);
  CHECK(pdp[0][0].power_dbm == -50);
  CHECK(pdp[0][0].delay_s == 2e-8);
  CHECK(pdp[0][2].power_dbm == -70);

  std::vector<Path> fifteen;
  for (std::uint32_t i = 0; i < 15; ++i) fifteen.push_back(make(i, 1, i * 1e-9, -100.0 + i));
  pdp = pdp_extract({snap(fifteen)});
  REQUIRE(pdp[0].size() == 10);
  CHECK(pdp[0].front().power_dbm == -86);
  CHECK(pdp[0].back().power_dbm == -95);
  CHECK(std::is_sorted(pdp[0].begin(), pdp[0].end(),
                       [](const PdpEntry& a, const PdpEntry& b) { return a.power_dbm > b.power_dbm; }));
}

TEST_CASE("dBm conversion") {
  CHECK(dbm_to_watts(30) == doctest::Approx(1.0));
  CHECK(dbm_to_watts(0) == doctest::Approx(1e-3));
}
