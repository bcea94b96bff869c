#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynrt/vec3.hpp"

namespace dynrt {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;
inline constexpr double kPi = 3.14159265358979323846;

// Tolerances shared by scene validation and the geometric queries.
inline constexpr double kPlaneTolerance = 1e-6;
inline constexpr double kDirectionTolerance = 1e-9;

class SceneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Kinematic state of a moving entity with constant acceleration from t_ref on.
struct MotionState {
  Vec3 r0;
  Vec3 v0;
  Vec3 a0;
  double t_ref = 0.0;
};

// r(t) = r0 + v0 dt + a0 dt^2 / 2, dt = t - t_ref. Higher-order terms are dropped.
Vec3 position_at(const MotionState& m, double t);
Vec3 velocity_at(const MotionState& m, double t);

// Re-expresses the same polynomial motion around a new reference time.
MotionState rereference(const MotionState& m, double t_new);

// Piecewise constant-acceleration motion. Segment i governs t >= segments[i].t_ref;
// the first segment also governs all earlier times.
class Motion {
 public:
  Motion() : segments_{MotionState{}} {}
  explicit Motion(MotionState single) : segments_{single} {}
  explicit Motion(std::vector<MotionState> segments);

  static Motion stationary(const Vec3& at) { return Motion(MotionState{at, {}, {}, 0.0}); }
  static Motion linear(const Vec3& r0, const Vec3& v0, double t_ref = 0.0) {
    return Motion(MotionState{r0, v0, {}, t_ref});
  }

  Vec3 position(double t) const { return position_at(segment(t), t); }
  Vec3 velocity(double t) const { return velocity_at(segment(t), t); }
  const MotionState& segment(double t) const;
  const std::vector<MotionState>& segments() const { return segments_; }
  bool is_stationary() const;

 private:
  std::vector<MotionState> segments_;
};

struct Material {
  double rel_permittivity = 5.31;  // concrete
  double conductivity = 0.0326;    // S/m
  double attenuation_alpha = 0.0;  // Np/m, bulk loss when penetrated
  bool transparent = false;
};

struct Aabb {
  Vec3 lo{1e300, 1e300, 1e300};
  Vec3 hi{-1e300, -1e300, -1e300};

  void expand(const Vec3& p);
  Aabb translated(const Vec3& d) const { return {lo + d, hi + d}; }
  Aabb padded(double r) const { return {lo - Vec3{r, r, r}, hi + Vec3{r, r, r}}; }
  bool overlaps(const Aabb& o) const {
    return lo.x <= o.hi.x && hi.x >= o.lo.x && lo.y <= o.hi.y && hi.y >= o.lo.y &&
           lo.z <= o.hi.z && hi.z >= o.lo.z;
  }
};

// Planar convex polygon. Vertices are counterclockwise around the normal and are
// given in reference coordinates; the facet's motion supplies a rigid translation.
struct Facet {
  std::string id;
  std::vector<Vec3> vertices;
  Material material;
  double thickness = 0.2;  // slab thickness for penetration, m
  Motion motion;           // displacement of the facet (stationary at zero by default)
};

// A straight wedge edge shared by two facets (the same facet twice for a half-plane).
// Edges translate with their first adjacent facet.
struct Edge {
  std::string id;
  Vec3 a;
  Vec3 b;
  std::array<std::size_t, 2> adjacent_facets{0, 0};
  double exterior_wedge_angle = 2.0 * kPi;  // n * pi, in (pi, 2pi]
};

// Precomputed, time-invariant frame of a facet.
struct FacetFrame {
  Vec3 normal;
  double offset = 0.0;            // plane: dot(normal, p) == offset (reference position)
  std::vector<Vec3> inward;       // unit in-plane inward normal per boundary edge
  Vec3 centroid;
  Aabb box;
};

// Local frame of a wedge used for diffraction angles.
struct WedgeFrame {
  Vec3 edge_dir;        // unit, a -> b
  Vec3 face0_tangent;   // unit, in face 0, perpendicular to the edge, pointing into face 0
  Vec3 face0_normal;    // unit, pointing into the exterior region on face 0's side
  double n = 2.0;       // exterior angle / pi
  double length = 0.0;  // edge length, m
};

struct PointInFacet {
  bool inside = false;
  double distance = 0.0;  // positive inside, negative outside, |.| = distance to boundary
};

class Scene;

// The world at one instant. Geometry is stored as per-entity displacements from the
// reference configuration; all facet queries translate the query point instead.
class SceneInstant {
 public:
  SceneInstant(const Scene& scene, double t);

  // Moves the instant to another time, touching only entities that move. The result is
  // identical to constructing a new instant at t.
  void retime(double t);

  double time() const { return t_; }
  const Scene& scene() const { return *scene_; }
  const Vec3& tx() const { return tx_; }
  const Vec3& rx() const { return rx_; }
  const Vec3& facet_displacement(std::size_t i) const { return facet_disp_[i]; }
  const Vec3& edge_displacement(std::size_t i) const { return edge_disp_[i]; }

  double plane_offset(std::size_t facet) const;
  double signed_plane_distance(std::size_t facet, const Vec3& p) const;
  Aabb facet_box(std::size_t facet) const;
  std::vector<Vec3> facet_vertices(std::size_t facet) const;
  Vec3 edge_a(std::size_t edge) const;
  Vec3 edge_b(std::size_t edge) const;

 private:
  const Scene* scene_;
  double t_;
  Vec3 tx_;
  Vec3 rx_;
  std::vector<Vec3> facet_disp_;
  std::vector<Vec3> edge_disp_;
};

class Scene {
 public:
  // Validates every invariant and throws SceneError on violation.
  Scene(std::vector<Facet> facets, std::vector<Edge> edges, Motion tx, Motion rx,
        double frequency_hz, double tx_power_dbm);

  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const FacetFrame& frame(std::size_t facet) const { return frames_[facet]; }
  const WedgeFrame& wedge(std::size_t edge) const { return wedges_[edge]; }
  const Motion& tx_motion() const { return tx_; }
  const Motion& rx_motion() const { return rx_; }
  double frequency() const { return frequency_; }
  double wavelength() const { return kSpeedOfLight / frequency_; }
  double wavenumber() const { return 2.0 * kPi * frequency_ / kSpeedOfLight; }
  double tx_power_dbm() const { return tx_power_dbm_; }
  bool is_stationary() const;

  const std::vector<std::size_t>& moving_facets() const { return moving_facets_; }
  const std::vector<std::size_t>& moving_edges() const { return moving_edges_; }

  std::optional<std::size_t> facet_index(const std::string& id) const;
  std::optional<std::size_t> edge_index(const std::string& id) const;

  SceneInstant at(double t) const { return SceneInstant(*this, t); }

 private:
  std::vector<Facet> facets_;
  std::vector<Edge> edges_;
  std::vector<FacetFrame> frames_;
  std::vector<WedgeFrame> wedges_;
  std::vector<std::size_t> moving_facets_;
  std::vector<std::size_t> moving_edges_;
  Motion tx_;
  Motion rx_;
  double frequency_;
  double tx_power_dbm_;
};

// Point-in-convex-polygon against the facet at the instant. Throws SceneError if p is
// farther than kPlaneTolerance from the facet plane.
PointInFacet point_in_facet(const Vec3& p, const SceneInstant& at, std::size_t facet);

// Same test without the on-plane check; p is projected implicitly.
PointInFacet point_in_facet_unchecked(const Vec3& p, const SceneInstant& at, std::size_t facet);

// Signed distance of the in-plane point (already expressed in reference coordinates).
PointInFacet point_in_frame(const Vec3& p_ref, const Facet& facet, const FacetFrame& frame);

FacetFrame compute_frame(const Facet& facet);

}  // namespace dynrt
