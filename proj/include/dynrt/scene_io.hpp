#pragma once

#include <string>

#include <json.hpp>

#include "dynrt/scene.hpp"

namespace dynrt {

// Scene file schema (lengths m, times s, angles rad):
// {
//   "frequency_hz": 6e9, "tx_power_dbm": 30,
//   "facets": [{"id": "w1", "vertices": [[x,y,z], ...],
//               "material": {"rel_permittivity": 5.31, "conductivity": 0.0326,
//                            "attenuation_alpha": 0, "transparent": false},
//               "thickness": 0.2, "motion_segments": [...]}],
//   "edges": [{"id": "e1", "endpoints": [[x,y,z], [x,y,z]], "adjacent_facets": ["w1", "w2"],
//              "exterior_wedge_angle": 4.712}],
//   "tx": {"motion_segments": [...]}, "rx": {"motion_segments": [...]}
// }
// A motion segment is {"t_ref": 0, "position": [..], "velocity": [..], "acceleration": [..]};
// velocity and acceleration default to zero. Missing material, thickness or motion take
// the defaults (concrete, 0.2 m, stationary at zero displacement).
Scene scene_from_json(const nlohmann::json& j);
nlohmann::json scene_to_json(const Scene& scene);

// std::runtime_error if the file cannot be read, SceneError if its content is invalid.
Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);

}  // namespace dynrt
