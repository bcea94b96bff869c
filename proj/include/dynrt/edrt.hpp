#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dynrt/drt.hpp"
#include "dynrt/field.hpp"
#include "dynrt/path.hpp"
#include "dynrt/scene.hpp"

namespace dynrt {

// Reference coefficient magnitude below which a ratio is not attempted.
inline constexpr double kCoefficientFloor = 1e-12;
// Bisection tolerance for birth/death times, s.
inline constexpr double kLifetimeTolerance = 1e-6;
// Birth/death scans sample the window at dt / kLifetimeScanDivisions.
inline constexpr int kLifetimeScanDivisions = 20;

struct MatchedPaths {
  std::vector<std::pair<Path, Path>> common;  // (at n Tc, at (n+1) Tc)
  std::vector<Path> dying;                    // only at n Tc
  std::vector<Path> born;                     // only at (n+1) Tc
};

// Partitions two snapshots by exact signature equality. Both must be sorted by signature.
MatchedPaths match_paths(const Snapshot& a, const Snapshot& b);

enum class Existence { Common, Dying, Born };
const char* existence_name(Existence e);

struct Lifetime {
  Path path;  // extrapolation reference: n Tc for common and dying, (n+1) Tc for born
  Existence kind = Existence::Common;
  double birth_time = 0.0;
  double death_time = 0.0;
  bool unresolved = false;  // no geometric cause found; fallback time used
};

struct LifetimeEstimate {
  double time = 0.0;
  bool resolved = false;
};

// Validity of a signature at t, one bit per interaction (on its facet or edge) plus
// kOcclusionBit; 0 means the path exists. Construction failure sets every bit.
inline constexpr std::uint32_t kOcclusionBit = 1u << 31;
std::uint32_t validity_failures(const PathSignature& sig, const SceneInstant& at,
                                FacetSubset candidates = nullptr);

// First time in (start, end] at which the path (valid at start) stops existing: the
// earliest exit of any interaction point or the onset of occlusion. Falls back to
// end - dt when no cause is found.
LifetimeEstimate death_time(const PathSignature& sig, const Scene& scene, double start, double end, double dt);

// Mirror image: the path exists at end; returns the earliest time from which it exists
// up to end. Falls back to start + dt.
LifetimeEstimate birth_time(const PathSignature& sig, const Scene& scene, double start, double end, double dt);

// Field-magnitude extrapolation by coefficient and spreading ratios. Each returns
// std::nullopt when a reference coefficient is below kCoefficientFloor.
std::optional<double> extrapolate_field_reflection(double ref_magnitude, Complex r_ref, Complex r_t,
                                                   double length_ref, double length_t);
std::optional<double> extrapolate_field_diffraction(double ref_magnitude, Complex d_ref, Complex d_t,
                                                    double dl_ref, double dp_ref, double dl_t, double dp_t);
// Any signature: product of coefficient ratios, spreading ratio and bulk-loss difference.
std::optional<double> extrapolate_field_mixed(double ref_magnitude, const std::vector<Complex>& coeff_ref,
                                              const std::vector<Complex>& coeff_t, double spreading_ref,
                                              double spreading_t, double absorption_ref, double absorption_t);

// Path at a new geometry with its field extrapolated from `reference`; phase advanced by
// -k times the change in length. std::nullopt when extrapolation is not applicable
// (field on both channels, channel switch, or a vanishing reference coefficient).
std::optional<Path> extrapolate_path(const Path& reference, const PathGeometry& g, const SceneInstant& at);

struct PredictionRound {
  double start = 0.0;
  double end = 0.0;
  Snapshot first;
  Snapshot last;
  MatchedPaths matched;
  std::vector<Lifetime> lifetimes;  // common, then dying, then born; each in signature order
  std::vector<Snapshot> predicted;
};

PredictionRound prepare_round(Snapshot first, Snapshot last, const Scene& scene, const PredictionConfig& config,
                              PredictionStats* stats = nullptr);

// Structure at t from lifetimes, geometry advanced, field extrapolated (direct on fallback).
Snapshot predict_snapshot_edrt(const PredictionRound& round, const Scene& scene, double t,
                               PredictionStats* stats = nullptr);

// Same as calling predict_snapshot_edrt at each time, batched so occlusion tests use a
// per-path candidate set. Stage times are added to `timing`.
std::vector<Snapshot> predict_round_edrt(const PredictionRound& round, const Scene& scene,
                                         const std::vector<double>& times, PredictionStats* stats = nullptr,
                                         StageTiming* timing = nullptr);

struct EdrtRun : ModeRun {
  std::vector<PredictionRound> rounds;  // predicted snapshots moved out into `snapshots`
};

EdrtRun edrt_run(const Scene& scene, const PredictionConfig& config);

}  // namespace dynrt
