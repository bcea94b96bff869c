#include "dynrt/scenario.hpp"

#include <cmath>
#include <random>
#include <string>

namespace dynrt {

namespace {

constexpr double kMinGap = 12.0;
constexpr double kMaxGap = 16.0;
constexpr double kMinBlock = 6.0;
constexpr double kMedianWidth = 1.2;
constexpr double kMedianHeight = 3.0;
constexpr double kTruckLength = 10.0;
constexpr double kTruckWidth = 2.5;
constexpr double kTruckHeight = 3.5;

Material concrete() { return Material{}; }

Material glass() {
  Material m;
  m.rel_permittivity = 6.27;
  m.conductivity = 0.0043;
  m.attenuation_alpha = 1.0;
  m.transparent = true;
  return m;
}

Material metal_body() {
  Material m;
  m.rel_permittivity = 1.0;
  m.conductivity = 1e7;
  return m;
}

struct Builder {
  std::vector<Facet> facets;
  std::vector<Edge> edges;

  // Vertical rectangle over the ground segment a -> b; the normal points to the right
  // of a -> b.
  std::size_t wall(const std::string& id, double ax, double ay, double bx, double by, double h,
                   const Material& m, const Motion& motion, double thickness = 0.2) {
    Facet f;
    f.id = id;
    f.vertices = {{ax, ay, 0.0}, {bx, by, 0.0}, {bx, by, h}, {ax, ay, h}};
    f.material = m;
    f.thickness = thickness;
    f.motion = motion;
    facets.push_back(std::move(f));
    return facets.size() - 1;
  }

  void edge(const std::string& id, double x, double y, double h, std::size_t f0, std::size_t f1, double angle) {
    edges.push_back(Edge{id, {x, y, 0.0}, {x, y, h}, {f0, f1}, angle});
  }

  // Closed box from a counterclockwise footprint; `open_side` skips one wall (its corners
  // then only get edges where two walls meet).
  void box(const std::string& id, const std::vector<std::pair<double, double>>& ccw, double h, const Material& m,
           const Motion& motion, int open_side = -1) {
    const std::size_t n = ccw.size();
    std::vector<long> wall_of(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      if (static_cast<int>(i) == open_side) continue;
      const auto& a = ccw[i];
      const auto& b = ccw[(i + 1) % n];
      wall_of[i] = static_cast<long>(wall(id + "_w" + std::to_string(i), a.first, a.second, b.first, b.second, h, m,
                                          motion));
    }
    for (std::size_t i = 0; i < n; ++i) {
      const long in = wall_of[(i + n - 1) % n];
      const long out = wall_of[i];
      if (in < 0 || out < 0) continue;
      edge(id + "_c" + std::to_string(i), ccw[i].first, ccw[i].second, h, static_cast<std::size_t>(out),
           static_cast<std::size_t>(in), 1.5 * kPi);
    }
  }
};

void require(bool ok, const char* msg) {
  if (!ok) throw SceneError(std::string("scenario: ") + msg);
}

}  // namespace

Scene generate_v2v_scenario(const V2vScenario& p) {
  require(std::isfinite(p.length) && p.length > 0.0, "length must be positive");
  require(std::isfinite(p.street_width) && p.street_width > 0.0, "street width must be positive");
  require(p.building_segments >= 0, "building segments must be >= 0");
  require(p.lane_offset > kMedianWidth / 2.0 && p.lane_offset < p.street_width / 2.0,
          "lanes must lie between the median and the facades");
  require(std::isfinite(p.tx_speed) && std::isfinite(p.rx_speed) && std::isfinite(p.truck_speed),
          "speeds must be finite");
  require(p.antenna_height > 0.0 && p.antenna_height < kMedianHeight, "antenna height must be in (0, 3) m");
  require(p.building_depth > 0.0 && p.building_height > kMedianHeight, "building dimensions too small");

  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> gap_dist(kMinGap, kMaxGap);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Builder b;
  const Motion still = Motion::stationary({});
  const double half = p.street_width / 2.0;

  if (p.building_segments > 0) {
    const double pitch = p.length / p.building_segments;
    require(pitch - kMaxGap >= kMinBlock, "too many building segments for the street length");

    for (int side = 0; side < 2; ++side) {
      // Right side is staggered by half a pitch so gaps on both sides do not line up.
      const double offset = side == 0 ? 0.0 : 0.5 * pitch;
      for (int i = 0; i < p.building_segments; ++i) {
        const double y0 = offset + i * pitch;
        const double y1 = y0 + pitch - gap_dist(rng);
        const std::string id = (side == 0 ? "bl" : "br") + std::to_string(i);
        if (side == 0) {
          const double xf = -half;
          const double xb = -half - p.building_depth;
          b.box(id, {{xb, y0}, {xf, y0}, {xf, y1}, {xb, y1}}, p.building_height, concrete(), still, 3);
        } else {
          const double xf = half;
          const double xb = half + p.building_depth;
          b.box(id, {{xf, y0}, {xb, y0}, {xb, y1}, {xf, y1}}, p.building_height, concrete(), still, 1);
        }
      }
    }

    const double mpitch = p.length / p.building_segments;
    for (int i = 0; i < p.building_segments; ++i) {
      const double y0 = 0.25 * mpitch + i * mpitch;
      const double y1 = y0 + mpitch - gap_dist(rng);
      const std::string id = "m" + std::to_string(i);
      if (unit(rng) < 0.4) {
        const std::size_t f = b.wall(id + "_glass", 0.0, y1, 0.0, y0, kMedianHeight, glass(), still, 0.02);
        b.edge(id + "_e0", 0.0, y0, kMedianHeight, f, f, 2.0 * kPi);
        b.edge(id + "_e1", 0.0, y1, kMedianHeight, f, f, 2.0 * kPi);
      } else {
        const double w = kMedianWidth / 2.0;
        b.box(id, {{-w, y0}, {w, y0}, {w, y1}, {-w, y1}}, kMedianHeight, concrete(), still);
      }
    }

    if (p.oncoming_truck) {
      const double x0 = half - 1.0 - kTruckWidth;
      const double x1 = half - 1.0;
      const double y0 = 0.75 * p.length;
      const Motion truck = Motion::linear({}, {0.0, -p.truck_speed, 0.0});
      b.box("truck", {{x0, y0}, {x1, y0}, {x1, y0 + kTruckLength}, {x0, y0 + kTruckLength}}, kTruckHeight,
            metal_body(), truck);
    }
  }

  const Motion tx = Motion::linear({-p.lane_offset, p.tx_start, p.antenna_height}, {0.0, p.tx_speed, 0.0});
  const Motion rx =
      Motion::linear({p.lane_offset, p.tx_start + p.rx_lead, p.antenna_height}, {0.0, p.rx_speed, 0.0});
  return Scene(std::move(b.facets), std::move(b.edges), tx, rx, p.frequency_hz, p.tx_power_dbm);
}

}  // namespace dynrt
