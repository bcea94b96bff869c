#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dynrt/path.hpp"
#include "dynrt/rt.hpp"
#include "dynrt/scene.hpp"

namespace dynrt {

struct PredictionConfig {
  double t_c = 1.0;  // window between full RT runs, s
  double dt = 0.1;   // prediction step, s
  int rounds = 1;
  // Also emit the RT snapshot at rounds * t_c, closing the last window.
  bool close_last_window = false;

  // Throws std::invalid_argument unless 0 < dt < t_c, t_c = k dt, rounds >= 1.
  void validate() const;
  int steps_per_window() const;
  // Time of position index i; every mode uses this so positions coincide bit-wise.
  double time_of(int position) const { return position * dt; }
};

// Interaction points of a fixed signature as a function of time, re-solved exactly at
// each query. std::nullopt when the construction is impossible at that time.
using InteractionTrajectory = std::function<std::optional<std::vector<Vec3>>(double)>;
InteractionTrajectory interaction_trajectory(const Path& path, const Scene& scene, double round_start);

struct PredictionStats {
  int dropped_paths = 0;        // construction failed at the prediction time
  int fallback_fields = 0;      // E-DRT: field computed directly instead of extrapolated
  int blocked_common = 0;       // E-DRT: common path suppressed by transient blockage
  int unresolved_lifetimes = 0; // E-DRT: no geometric birth/death cause found

  PredictionStats& operator+=(const PredictionStats& o) {
    dropped_paths += o.dropped_paths;
    fallback_fields += o.fallback_fields;
    blocked_common += o.blocked_common;
    unresolved_lifetimes += o.unresolved_lifetimes;
    return *this;
  }
};

// Frozen-structure prediction: every reference path advanced to t, field computed directly.
Snapshot predict_snapshot_drt(const Snapshot& reference, const Scene& scene, double t,
                              PredictionStats* stats = nullptr);

// Output of a DRT or E-DRT run: one snapshot per position in time order.
struct ModeRun {
  std::vector<Snapshot> snapshots;
  std::vector<bool> from_rt;     // true where the snapshot is a full RT run
  std::vector<double> rt_times;  // every RT invocation, in order
  StageTiming timing;
  double total_s = 0.0;
  PredictionStats stats;
};

ModeRun drt_run(const Scene& scene, const PredictionConfig& config);

}  // namespace dynrt
