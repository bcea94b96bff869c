#pragma once

#include <vector>

#include "dynrt/geometry.hpp"
#include "dynrt/path.hpp"
#include "dynrt/scene.hpp"

namespace dynrt {

// Wall time spent in the two stages of a computation, seconds.
struct StageTiming {
  double geometry_s = 0.0;
  double field_s = 0.0;

  StageTiming& operator+=(const StageTiming& o) {
    geometry_s += o.geometry_s;
    field_s += o.field_s;
    return *this;
  }
};

// Number of base candidates: LOS, first-order reflections, ordered reflection pairs
// (including the unusable diagonal), single diffractions.
std::size_t candidate_count(const Scene& scene);

// Classifies candidate `index` at the instant; std::nullopt if it is not a valid path.
std::optional<ClassifiedPath> trace_candidate(std::size_t index, const SceneInstant& at);

// All valid path geometries at the instant, sorted by signature.
std::vector<ClassifiedPath> find_paths(const SceneInstant& at);
std::vector<ClassifiedPath> find_paths_serial(const SceneInstant& at);

// Fields for solved geometries; order is preserved.
Snapshot compute_fields(std::vector<ClassifiedPath> paths, const SceneInstant& at);
Snapshot compute_fields_serial(std::vector<ClassifiedPath> paths, const SceneInstant& at);

// Full RT at one time instant. The parallel and serial versions return identical snapshots.
Snapshot trace_snapshot(const Scene& scene, double t, StageTiming* timing = nullptr);
Snapshot trace_snapshot_serial(const Scene& scene, double t);

}  // namespace dynrt
