#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dynrt/path.hpp"
#include "dynrt/scene.hpp"

namespace dynrt {

// Endpoints closer than this to a facet plane never count as crossing it.
inline constexpr double kSegmentPlaneEpsilon = 1e-9;

// Intersection of segment a-b with the facet plane; std::nullopt unless a and b are
// strictly (beyond kSegmentPlaneEpsilon) on opposite sides.
std::optional<Vec3> segment_plane_intersection(const Vec3& a, const Vec3& b, const SceneInstant& at,
                                               std::size_t facet);

Vec3 mirror_point(const Vec3& p, const SceneInstant& at, std::size_t facet);

// Image-method specular point on the facet plane; std::nullopt if tx and rx are not
// strictly on the same side, or the point falls outside the polygon.
std::optional<Vec3> find_reflection_point(const Vec3& tx, const Vec3& rx, const SceneInstant& at,
                                          std::size_t facet);

// Point on the edge minimizing |tx - p| + |p - rx|; std::nullopt when the minimizer of
// the infinite line falls outside the edge segment.
std::optional<Vec3> find_diffraction_point(const Vec3& tx, const Vec3& rx, const SceneInstant& at,
                                           std::size_t edge);

// Unclipped Fermat point on the infinite edge line and its parameter along the edge.
struct EdgePoint {
  Vec3 point;
  double s = 0.0;  // distance from endpoint a along the edge direction
};
std::optional<EdgePoint> fermat_point_on_line(const Vec3& tx, const Vec3& rx, const Vec3& a,
                                              const Vec3& dir);

// Geometric construction of a signature at one instant, without validity clipping.
struct PathGeometry {
  bool constructed = false;
  std::vector<Vec3> nodes;      // tx, interaction points in signature order, rx
  std::vector<double> margins;  // per interaction, signed on-geometry margin

  // Reflection/diffraction points must be on their geometry (margin >= 0); a
  // penetration point must lie strictly inside its facet (margin > 0).
  bool interaction_ok(const PathSignature& sig, std::size_t i) const;
  bool points_ok(const PathSignature& sig) const;
  double length() const;
};

// Throws std::invalid_argument for signatures longer than 8 interactions.
PathGeometry solve_path(const PathSignature& sig, const SceneInstant& at);
// Same, reusing the storage of `out`.
void solve_path(const PathSignature& sig, const SceneInstant& at, PathGeometry& out);

// Candidate facet subset for occlusion tests; nullptr means every facet.
using FacetSubset = const std::vector<std::uint32_t>*;

// Facets whose interior the open segment a-b crosses, ordered from a to b.
void segment_crossings(const Vec3& a, const Vec3& b, const SceneInstant& at,
                       std::vector<std::uint32_t>& out, FacetSubset candidates = nullptr);

// True iff the crossings along every base segment are exactly the declared penetrations.
bool occlusion_consistent(const PathSignature& sig, const PathGeometry& g, const SceneInstant& at,
                          FacetSubset candidates = nullptr);

struct PathStatus {
  bool constructed = false;
  bool points_ok = false;
  bool clear = false;
  bool valid() const { return constructed && points_ok && clear; }
};

PathStatus evaluate_path(const PathSignature& sig, const PathGeometry& g, const SceneInstant& at,
                         FacetSubset candidates = nullptr);

// Converts a solved geometry into the interaction list of a Path.
std::vector<Interaction> make_interactions(const PathSignature& sig, const PathGeometry& g);

// Result of classifying a base (reflection/diffraction only) candidate against the
// scene: std::nullopt if blocked, otherwise the full signature with penetrations.
struct ClassifiedPath {
  PathSignature signature;
  PathGeometry geometry;
};
std::optional<ClassifiedPath> classify_base_path(const PathSignature& base, PathGeometry base_geometry,
                                                 const SceneInstant& at);

// Facets whose boxes overlap the given box.
std::vector<std::uint32_t> facets_near(const Aabb& box, const SceneInstant& at);

// Box containing the facet at every time in [t0, t1].
Aabb swept_facet_box(const Scene& scene, std::size_t facet, double t0, double t1);

// Facets whose swept boxes over [t0, t1] overlap the given box.
std::vector<std::uint32_t> facets_near_swept(const Aabb& box, const Scene& scene, double t0, double t1);

}  // namespace dynrt
