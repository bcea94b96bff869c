#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "dynrt/scene.hpp"
#include "dynrt/vec3.hpp"

namespace dynrt {

enum class Mechanism : std::uint8_t { Reflection = 0, Diffraction = 1, Penetration = 2 };

char mechanism_code(Mechanism m);

// One step of a signature: the mechanism and the facet (R, P) or edge (D) index.
struct SignatureStep {
  Mechanism mechanism = Mechanism::Reflection;
  std::uint32_t geometry = 0;

  friend auto operator<=>(const SignatureStep&, const SignatureStep&) = default;
};

// Ordered interaction list from Tx to Rx; empty for the line-of-sight path.
struct PathSignature {
  std::vector<SignatureStep> steps;

  bool is_los() const { return steps.empty(); }
  int count(Mechanism m) const;
  // Base steps are reflections and diffractions; penetrations ride on the segments.
  std::vector<SignatureStep> base_steps() const;

  friend auto operator<=>(const PathSignature& a, const PathSignature& b) {
    if (a.steps.size() != b.steps.size()) return a.steps.size() <=> b.steps.size();
    return a.steps <=> b.steps;
  }
  friend bool operator==(const PathSignature&, const PathSignature&) = default;
};

// "LOS" or e.g. "R:wall_3|P:glass_1". Stable for a given scene.
std::string encode_signature(const PathSignature& sig, const Scene& scene);

struct Interaction {
  Mechanism mechanism = Mechanism::Reflection;
  std::uint32_t geometry = 0;
  Vec3 point;
};

// Per-interaction record of the coefficient actually applied to the field, kept so a
// later field can be obtained by ratio instead of recomputation.
struct CoefficientRecord {
  Mechanism mechanism = Mechanism::Reflection;
  int channel = 0;       // 0: perpendicular / soft, 1: parallel / hard
  Complex value;         // coefficient on that channel (slab: without bulk loss)
};

struct FieldTrace {
  bool single_channel = false;  // field stayed on one local polarization channel throughout
  std::vector<CoefficientRecord> coefficients;
  double spreading = 0.0;        // real spreading amplitude factor
  double absorption_exponent = 0.0;  // sum of alpha * in-slab crossing length
  double length = 0.0;           // total geometric length
  double incident_length = 0.0;  // Tx -> diffraction point (diffraction paths)
  double diffracted_length = 0.0;  // diffraction point -> Rx (diffraction paths)
};

struct Path {
  PathSignature signature;
  std::vector<Interaction> interactions;
  double length = 0.0;  // m
  double delay = 0.0;   // s
  std::array<Complex, 2> field{};  // (vertical, horizontal) in the arrival ray-fixed basis, V/m
  double power_dbm = -300.0;
  FieldTrace trace;

  double field_magnitude() const;
};

struct Snapshot {
  double time = 0.0;
  std::vector<Path> paths;  // sorted by signature
};

void sort_paths(Snapshot& s);

}  // namespace dynrt
