#pragma once

#include <cstdint>

#include "dynrt/scene.hpp"

namespace dynrt {

// Street canyon along +y: segmented buildings on both sides, a median row of concrete
// kiosks and glass panels between the two lanes, and an optional oncoming truck on the
// outer lane. Tx and Rx drive along +y on opposite lanes; everything is vertical and
// both antennas share one height, so all rays stay horizontal.
struct V2vScenario {
  double length = 160.0;        // street length, m
  double street_width = 20.0;   // facade to facade, m
  int building_segments = 6;    // buildings per side; also the number of median elements
  double tx_speed = 10.0;       // m/s
  double rx_speed = 10.0;       // m/s
  double tx_start = 10.0;       // Tx position along the street at t = 0, m
  double rx_lead = 8.0;         // Rx ahead of Tx at t = 0, m
  double lane_offset = 3.5;     // |x| of both lanes, m
  double antenna_height = 1.5;  // m
  double building_depth = 10.0;
  double building_height = 15.0;
  bool oncoming_truck = true;
  double truck_speed = 8.0;     // m/s along -y
  double frequency_hz = 6e9;
  double tx_power_dbm = 30.0;
  std::uint64_t seed = 1;
};

// Throws SceneError on degenerate dimensions.
Scene generate_v2v_scenario(const V2vScenario& params);

}  // namespace dynrt
