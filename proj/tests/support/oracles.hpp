#pragma once

// Independent reference computations for the tests. Nothing here calls into the
// library's electromagnetics or geometry kernels.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "dynrt/path.hpp"
#include "dynrt/scene.hpp"

namespace oracle {

using Complex = std::complex<double>;
using dynrt::Vec3;

// F(x) = 2j sqrt(x) e^{jx} int_sqrt(x)^inf e^{-j t^2} dt by composite Simpson on a finite
// range plus a two-term integration-by-parts tail.
Complex transition(double x);

// Fresnel reflection from the angle, written directly from the textbook formulas.
Complex fresnel_perp(double theta, Complex eps);
Complex fresnel_par(double theta, Complex eps);

// Thin slab, perpendicular polarization: t12 * t21 via Snell's law in the lossless part
// plus the path length inside, thickness / cos(theta_t) with real refraction.
Complex slab_perp(double theta, Complex eps);
double slab_length(double theta, double eps_r, double thickness);

// Kouyoumjian-Pathak soft coefficient of a PEC wedge of exterior angle n pi, with the
// transition function from the quadrature above.
Complex utd_soft(double phi, double phi_inc, double beta0, double n, double L, double k);

// Open segment a-b against a convex polygon: true if it crosses the polygon interior
// (endpoints on the plane do not count).
bool segment_hits_polygon(const Vec3& a, const Vec3& b, const std::vector<Vec3>& poly);

// Signature presence through a fine RT sweep: sample times and, per sample, the
// signatures present.
struct Sweep {
  std::vector<double> times;
  std::vector<std::vector<dynrt::PathSignature>> present;
  bool has(std::size_t k, const dynrt::PathSignature& s) const;
};
Sweep rt_sweep(const dynrt::Scene& scene, const std::vector<double>& times);

// Last sample of the run of presence that starts at the first sample, and first sample
// of the run of presence that ends at the last sample.
std::optional<double> last_appearance(const Sweep& s, const dynrt::PathSignature& sig);
std::optional<double> first_appearance(const Sweep& s, const dynrt::PathSignature& sig);

// Small random street-like scene: vertical walls, boxes and glass panels with random yaw,
// antennas on one horizontal plane, optional movers. Seeded and deterministic.
dynrt::Scene random_scene(std::uint64_t seed, bool swap_ends = false);

}  // namespace oracle
