#include "dynrt/scene.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace dynrt {

Vec3 position_at(const MotionState& m, double t) {
  const double dt = t - m.t_ref;
  return m.r0 + m.v0 * dt + m.a0 * (0.5 * dt * dt);
}

Vec3 velocity_at(const MotionState& m, double t) { return m.v0 + m.a0 * (t - m.t_ref); }

MotionState rereference(const MotionState& m, double t_new) {
  return {position_at(m, t_new), velocity_at(m, t_new), m.a0, t_new};
}

Motion::Motion(std::vector<MotionState> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) {
    segments_.push_back(MotionState{});
  }
  std::stable_sort(segments_.begin(), segments_.end(),
                   [](const MotionState& a, const MotionState& b) { return a.t_ref < b.t_ref; });
}

const MotionState& Motion::segment(double t) const {
  // Segment lists are short (usually one entry); a linear scan beats bisection here.
  std::size_t k = 0;
  for (std::size_t i = 1; i < segments_.size(); ++i) {
    if (segments_[i].t_ref <= t) k = i;
  }
  return segments_[k];
}

bool Motion::is_stationary() const {
  const Vec3 zero{};
  for (const auto& s : segments_) {
    if (!(s.v0 == zero) || !(s.a0 == zero) || !(s.r0 == segments_.front().r0)) return false;
  }
  return true;
}

void Aabb::expand(const Vec3& p) {
  lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
  hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw SceneError(what);
}

void validate_material(const Material& m, const std::string& owner) {
  require(std::isfinite(m.rel_permittivity) && m.rel_permittivity >= 1.0,
          owner + ": relative permittivity must be >= 1");
  require(std::isfinite(m.conductivity) && m.conductivity >= 0.0,
          owner + ": conductivity must be >= 0");
  require(std::isfinite(m.attenuation_alpha) && m.attenuation_alpha >= 0.0,
          owner + ": attenuation must be finite and >= 0");
}

Vec3 in_plane_direction(const Vec3& v, const Vec3& along, const Vec3& normal) {
  Vec3 t = v - along * dot(v, along);
  t -= normal * dot(t, normal);
  return normalized(t);
}

}  // namespace

FacetFrame compute_frame(const Facet& facet) {
  const auto& v = facet.vertices;
  require(v.size() >= 3, "facet " + facet.id + ": needs at least 3 vertices");

  // Newell's method: orientation follows the vertex order.
  Vec3 n{};
  Vec3 c{};
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec3& p = v[i];
    const Vec3& q = v[(i + 1) % v.size()];
    n.x += (p.y - q.y) * (p.z + q.z);
    n.y += (p.z - q.z) * (p.x + q.x);
    n.z += (p.x - q.x) * (p.y + q.y);
    c += p;
  }
  require(norm(n) > 1e-12, "facet " + facet.id + ": degenerate (zero area)");

  FacetFrame f;
  f.normal = normalized(n);
  f.centroid = c / static_cast<double>(v.size());
  f.offset = dot(f.normal, f.centroid);

  for (std::size_t i = 0; i < v.size(); ++i) {
    require(std::abs(dot(f.normal, v[i]) - f.offset) <= kPlaneTolerance,
            "facet " + facet.id + ": vertices are not coplanar");
    const Vec3 e0 = v[(i + 1) % v.size()] - v[i];
    const Vec3 e1 = v[(i + 2) % v.size()] - v[(i + 1) % v.size()];
    require(norm(e0) > kPlaneTolerance, "facet " + facet.id + ": repeated vertex");
    require(dot(cross(e0, e1), f.normal) >= -kPlaneTolerance * norm(e0) * norm(e1),
            "facet " + facet.id + ": polygon is not convex");
    f.inward.push_back(normalized(cross(f.normal, e0)));
    f.box.expand(v[i]);
  }
  return f;
}

PointInFacet point_in_frame(const Vec3& p, const Facet& facet, const FacetFrame& frame) {
  const auto& v = facet.vertices;
  double min_inside = 1e300;
  for (std::size_t i = 0; i < v.size(); ++i) {
    min_inside = std::min(min_inside, dot(p - v[i], frame.inward[i]));
  }
  if (min_inside >= 0.0) return {true, min_inside};

  // Outside: exact distance to the nearest boundary segment.
  double best = 1e300;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec3& a = v[i];
    const Vec3 ab = v[(i + 1) % v.size()] - a;
    const double u = std::clamp(dot(p - a, ab) / norm2(ab), 0.0, 1.0);
    best = std::min(best, norm2(p - (a + ab * u)));
  }
  return {false, -std::sqrt(best)};
}

SceneInstant::SceneInstant(const Scene& scene, double t)
    : scene_(&scene), t_(t), tx_(scene.tx_motion().position(t)), rx_(scene.rx_motion().position(t)) {
  facet_disp_.reserve(scene.facets().size());
  for (const auto& f : scene.facets()) facet_disp_.push_back(f.motion.position(t));
  edge_disp_.reserve(scene.edges().size());
  for (const auto& e : scene.edges()) edge_disp_.push_back(facet_disp_[e.adjacent_facets[0]]);
}

void SceneInstant::retime(double t) {
  t_ = t;
  tx_ = scene_->tx_motion().position(t);
  rx_ = scene_->rx_motion().position(t);
  for (std::size_t f : scene_->moving_facets()) facet_disp_[f] = scene_->facets()[f].motion.position(t);
  for (std::size_t e : scene_->moving_edges()) edge_disp_[e] = facet_disp_[scene_->edges()[e].adjacent_facets[0]];
}

double SceneInstant::plane_offset(std::size_t facet) const {
  const auto& fr = scene_->frame(facet);
  return fr.offset + dot(fr.normal, facet_disp_[facet]);
}

double SceneInstant::signed_plane_distance(std::size_t facet, const Vec3& p) const {
  const auto& fr = scene_->frame(facet);
  return dot(fr.normal, p - facet_disp_[facet]) - fr.offset;
}

Aabb SceneInstant::facet_box(std::size_t facet) const {
  return scene_->frame(facet).box.translated(facet_disp_[facet]);
}

std::vector<Vec3> SceneInstant::facet_vertices(std::size_t facet) const {
  std::vector<Vec3> out = scene_->facets()[facet].vertices;
  for (auto& p : out) p += facet_disp_[facet];
  return out;
}

Vec3 SceneInstant::edge_a(std::size_t edge) const { return scene_->edges()[edge].a + edge_disp_[edge]; }
Vec3 SceneInstant::edge_b(std::size_t edge) const { return scene_->edges()[edge].b + edge_disp_[edge]; }

PointInFacet point_in_facet(const Vec3& p, const SceneInstant& at, std::size_t facet) {
  const double off = at.signed_plane_distance(facet, p);
  if (std::abs(off) > kPlaneTolerance) {
    std::ostringstream os;
    os << "point " << p << " is " << off << " m off the plane of facet "
       << at.scene().facets()[facet].id;
    throw SceneError(os.str());
  }
  return point_in_facet_unchecked(p, at, facet);
}

PointInFacet point_in_facet_unchecked(const Vec3& p, const SceneInstant& at, std::size_t facet) {
  const auto& fr = at.scene().frame(facet);
  Vec3 local = p - at.facet_displacement(facet);
  local -= fr.normal * (dot(fr.normal, local) - fr.offset);
  return point_in_frame(local, at.scene().facets()[facet], fr);
}

Scene::Scene(std::vector<Facet> facets, std::vector<Edge> edges, Motion tx, Motion rx,
             double frequency_hz, double tx_power_dbm)
    : facets_(std::move(facets)),
      edges_(std::move(edges)),
      tx_(std::move(tx)),
      rx_(std::move(rx)),
      frequency_(frequency_hz),
      tx_power_dbm_(tx_power_dbm) {
  require(std::isfinite(frequency_) && frequency_ > 0.0, "frequency must be positive");
  require(std::isfinite(tx_power_dbm_), "transmit power must be finite");

  std::set<std::string> ids;
  for (const auto& f : facets_) {
    require(!f.id.empty(), "facet id must be non-empty");
    require(ids.insert(f.id).second, "duplicate id " + f.id);
    validate_material(f.material, "facet " + f.id);
    require(std::isfinite(f.thickness) && f.thickness > 0.0, "facet " + f.id + ": thickness must be > 0");
    frames_.push_back(compute_frame(f));
  }

  for (const auto& e : edges_) {
    require(!e.id.empty(), "edge id must be non-empty");
    require(ids.insert(e.id).second, "duplicate id " + e.id);
    require(norm(e.b - e.a) > kPlaneTolerance, "edge " + e.id + ": endpoints coincide");
    require(e.exterior_wedge_angle > kPi && e.exterior_wedge_angle <= 2.0 * kPi + 1e-12,
            "edge " + e.id + ": exterior wedge angle must lie in (pi, 2pi]");
    for (std::size_t k : e.adjacent_facets) {
      require(k < facets_.size(), "edge " + e.id + ": adjacent facet out of range");
      const auto& fr = frames_[k];
      require(std::abs(dot(fr.normal, e.a) - fr.offset) <= kPlaneTolerance &&
                  std::abs(dot(fr.normal, e.b) - fr.offset) <= kPlaneTolerance,
              "edge " + e.id + ": not on the plane of facet " + facets_[k].id);
    }

    WedgeFrame w;
    w.edge_dir = normalized(e.b - e.a);
    w.length = norm(e.b - e.a);
    w.n = e.exterior_wedge_angle / kPi;
    const auto& f0 = frames_[e.adjacent_facets[0]];
    w.face0_tangent = in_plane_direction(f0.centroid - e.a, w.edge_dir, f0.normal);
    w.face0_normal = f0.normal;
    if (e.adjacent_facets[0] != e.adjacent_facets[1]) {
      const auto& f1 = frames_[e.adjacent_facets[1]];
      const Vec3 tn = in_plane_direction(f1.centroid - e.a, w.edge_dir, f1.normal);
      if (dot(w.face0_normal, tn) > 0.0) w.face0_normal = -w.face0_normal;
      double ang = std::atan2(dot(tn, w.face0_normal), dot(tn, w.face0_tangent));
      if (ang < 0.0) ang += 2.0 * kPi;
      require(std::abs(ang - e.exterior_wedge_angle) <= 1e-6,
              "edge " + e.id + ": exterior wedge angle disagrees with the adjacent facets");
    }
    wedges_.push_back(w);
  }

  auto same_motion = [](const Motion& a, const Motion& b) {
    const auto& x = a.segments();
    const auto& y = b.segments();
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!(x[i].r0 == y[i].r0) || !(x[i].v0 == y[i].v0) || !(x[i].a0 == y[i].a0) || x[i].t_ref != y[i].t_ref)
        return false;
    return true;
  };
  for (const auto& e : edges_)
    require(same_motion(facets_[e.adjacent_facets[0]].motion, facets_[e.adjacent_facets[1]].motion),
            "edge " + e.id + ": adjacent facets move differently");

  for (std::size_t i = 0; i < facets_.size(); ++i)
    if (!facets_[i].motion.is_stationary()) moving_facets_.push_back(i);
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (!facets_[edges_[i].adjacent_facets[0]].motion.is_stationary()) moving_edges_.push_back(i);
}

bool Scene::is_stationary() const {
  if (!tx_.is_stationary() || !rx_.is_stationary()) return false;
  return std::all_of(facets_.begin(), facets_.end(),
                     [](const Facet& f) { return f.motion.is_stationary(); });
}

std::optional<std::size_t> Scene::facet_index(const std::string& id) const {
  for (std::size_t i = 0; i < facets_.size(); ++i)
    if (facets_[i].id == id) return i;
  return std::nullopt;
}

std::optional<std::size_t> Scene::edge_index(const std::string& id) const {
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].id == id) return i;
  return std::nullopt;
}

}  // namespace dynrt
