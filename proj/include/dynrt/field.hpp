#pragma once

#include <array>
#include <optional>
#include <vector>

#include "dynrt/geometry.hpp"
#include "dynrt/path.hpp"
#include "dynrt/scene.hpp"

namespace dynrt {

// Relative amplitude below which a polarization channel counts as empty.
inline constexpr double kChannelLeakTolerance = 1e-9;

struct FieldResult {
  std::array<Complex, 2> field{};
  double power_dbm = -300.0;
  FieldTrace trace;
};

// Peak field amplitude at 1 m of an isotropic radiator of the given power.
double emitted_field_amplitude(double tx_power_dbm);

// Received power (dBm) of an isotropic antenna for a peak field magnitude.
double received_power_dbm(double field_magnitude, double wavelength);

// Full electric-field computation along a solved path: vertical polarization from an
// isotropic Tx, free-space spreading, Fresnel/UTD/slab coefficients applied as dyadics
// in the local interaction bases. Throws SceneError if an interaction point is off
// its facet plane or edge line.
FieldResult field_of_path(const PathSignature& sig, const std::vector<Vec3>& nodes,
                          const SceneInstant& at);

// Spreading amplitude of a path: 1/L, or 1/sqrt(dl dp (dl + dp)) with a diffraction.
double path_spreading(double length, bool diffracted, double incident_length, double diffracted_length);

// Walks a solved path carrying only the polarization channel the field occupies,
// evaluating just that channel's coefficients. The returned trace has the same layout
// as field_of_path's. std::nullopt if the field leaves a single channel, or (when
// `expect` is given) if any interaction uses a different channel than recorded there.
std::optional<FieldTrace> single_channel_trace(const PathSignature& sig, const std::vector<Vec3>& nodes,
                                               const SceneInstant& at, const FieldTrace* expect = nullptr);

// Builds a complete Path (interactions, delay, field) from a solved geometry.
Path make_path(const PathSignature& sig, const PathGeometry& g, const SceneInstant& at);

}  // namespace dynrt
