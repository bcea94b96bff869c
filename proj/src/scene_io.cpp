#include "dynrt/scene_io.hpp"

#include <fstream>
#include <stdexcept>

namespace dynrt {

namespace {

using nlohmann::json;

Vec3 vec_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw SceneError("expected a 3-element array, got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec_to(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Motion motion_from(const json& parent) {
  if (!parent.contains("motion_segments")) return Motion{};
  std::vector<MotionState> segs;
  for (const auto& s : parent.at("motion_segments")) {
    MotionState m;
    m.t_ref = s.value("t_ref", 0.0);
    m.r0 = vec_from(s.at("position"));
    if (s.contains("velocity")) m.v0 = vec_from(s["velocity"]);
    if (s.contains("acceleration")) m.a0 = vec_from(s["acceleration"]);
    segs.push_back(m);
  }
  if (segs.empty()) throw SceneError("motion_segments must not be empty");
  return Motion(std::move(segs));
}

json motion_to(const Motion& m) {
  json segs = json::array();
  for (const auto& s : m.segments())
    segs.push_back({{"t_ref", s.t_ref}, {"position", vec_to(s.r0)}, {"velocity", vec_to(s.v0)},
                    {"acceleration", vec_to(s.a0)}});
  return segs;
}

Material material_from(const json& j) {
  Material m;
  m.rel_permittivity = j.value("rel_permittivity", m.rel_permittivity);
  m.conductivity = j.value("conductivity", m.conductivity);
  m.attenuation_alpha = j.value("attenuation_alpha", m.attenuation_alpha);
  m.transparent = j.value("transparent", m.transparent);
  return m;
}

}  // namespace

Scene scene_from_json(const json& j) {
  try {
    std::vector<Facet> facets;
    for (const auto& jf : j.value("facets", json::array())) {
      Facet f;
      f.id = jf.at("id").get<std::string>();
      for (const auto& v : jf.at("vertices")) f.vertices.push_back(vec_from(v));
      if (jf.contains("material")) f.material = material_from(jf["material"]);
      f.thickness = jf.value("thickness", f.thickness);
      f.motion = motion_from(jf);
      facets.push_back(std::move(f));
    }

    auto facet_by_id = [&](const std::string& id) -> std::size_t {
      for (std::size_t i = 0; i < facets.size(); ++i)
        if (facets[i].id == id) return i;
      throw SceneError("edge refers to unknown facet " + id);
    };

    std::vector<Edge> edges;
    for (const auto& je : j.value("edges", json::array())) {
      Edge e;
      e.id = je.at("id").get<std::string>();
      const auto& ends = je.at("endpoints");
      if (!ends.is_array() || ends.size() != 2) throw SceneError("edge " + e.id + ": needs two endpoints");
      e.a = vec_from(ends[0]);
      e.b = vec_from(ends[1]);
      const auto& adj = je.at("adjacent_facets");
      if (!adj.is_array() || adj.size() != 2) throw SceneError("edge " + e.id + ": needs two adjacent facets");
      e.adjacent_facets = {facet_by_id(adj[0].get<std::string>()), facet_by_id(adj[1].get<std::string>())};
      e.exterior_wedge_angle = je.at("exterior_wedge_angle").get<double>();
      edges.push_back(std::move(e));
    }

    return Scene(std::move(facets), std::move(edges), motion_from(j.at("tx")), motion_from(j.at("rx")),
                 j.at("frequency_hz").get<double>(), j.value("tx_power_dbm", 30.0));
  } catch (const json::exception& e) {
    throw SceneError(std::string("scene file: ") + e.what());
  }
}

json scene_to_json(const Scene& scene) {
  json j;
  j["frequency_hz"] = scene.frequency();
  j["tx_power_dbm"] = scene.tx_power_dbm();
  json facets = json::array();
  for (const auto& f : scene.facets()) {
    json verts = json::array();
    for (const auto& v : f.vertices) verts.push_back(vec_to(v));
    facets.push_back({{"id", f.id},
                      {"vertices", verts},
                      {"material",
                       {{"rel_permittivity", f.material.rel_permittivity},
                        {"conductivity", f.material.conductivity},
                        {"attenuation_alpha", f.material.attenuation_alpha},
                        {"transparent", f.material.transparent}}},
                      {"thickness", f.thickness},
                      {"motion_segments", motion_to(f.motion)}});
  }
  j["facets"] = facets;
  json edges = json::array();
  for (const auto& e : scene.edges())
    edges.push_back({{"id", e.id},
                     {"endpoints", json::array({vec_to(e.a), vec_to(e.b)})},
                     {"adjacent_facets",
                      json::array({scene.facets()[e.adjacent_facets[0]].id, scene.facets()[e.adjacent_facets[1]].id})},
                     {"exterior_wedge_angle", e.exterior_wedge_angle}});
  j["edges"] = edges;
  j["tx"] = {{"motion_segments", motion_to(scene.tx_motion())}};
  j["rx"] = {{"motion_segments", motion_to(scene.rx_motion())}};
  return j;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scene file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SceneError("scene file " + path + ": " + e.what());
  }
  return scene_from_json(j);
}

void save_scene(const Scene& scene, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << scene_to_json(scene).dump(2) << '\n';
}

}  // namespace dynrt
