#pragma once

#include "dynrt/scene.hpp"
#include "dynrt/vec3.hpp"

namespace dynrt {

inline constexpr double kFreeSpaceImpedance = 376.730313668;

// Complex relative permittivity eps_r - j sigma / (omega eps0).
Complex complex_permittivity(const Material& m, double frequency_hz);

// Fresnel reflection coefficients for a half-space; angle is measured from the normal.
// perp: E normal to the plane of incidence; par: E in the plane of incidence.
struct FresnelPair {
  Complex perp;
  Complex par;
};

FresnelPair fresnel_coefficients(double incidence_angle, const Material& m, double frequency_hz);

// Same, from cos(incidence angle) directly; avoids an acos/cos round trip in hot loops.
FresnelPair fresnel_from_cos(double cos_i, Complex eps);
Complex fresnel_perp_from_cos(double cos_i, Complex eps);
Complex fresnel_par_from_cos(double cos_i, Complex eps);

// Thin slab: transmission air -> medium -> air without internal multiple bounces.
// coeff holds the product of the two interface transmission factors per polarization;
// crossing_length is the in-slab path thickness / cos(refraction angle).
struct SlabTransmission {
  FresnelPair coeff;
  double crossing_length = 0.0;
};

SlabTransmission transmission_coefficient(double incidence_angle, const Material& m, double thickness,
                                          double frequency_hz);
SlabTransmission transmission_from_cos(double cos_i, Complex eps, double rel_permittivity,
                                       double thickness);
Complex slab_perp_from_cos(double cos_i, Complex eps);
Complex slab_par_from_cos(double cos_i, Complex eps);
double slab_crossing_length(double cos_i, double rel_permittivity, double thickness);

// UTD transition function F(x) = 2j sqrt(x) e^{jx} int_{sqrt(x)}^inf e^{-j tau^2} d tau, x >= 0.
Complex fresnel_transition(double x);

// Diffraction coefficients of a wedge (soft: E parallel to the edge plane of incidence
// component beta0, hard: phi component). Perfectly conducting faces.
struct DiffractionCoefficients {
  Complex soft;
  Complex hard;
};

// phi, phi_incident measured from face 0 in [0, n pi]; beta0 is the Keller cone angle;
// distance_param is L = s s' sin^2(beta0) / (s + s').
DiffractionCoefficients utd_coefficient(double phi, double phi_incident, double beta0, double n,
                                        double distance_param, double wavenumber);

// Only one polarization; same cost as the pair minus a few adds.
Complex utd_soft(double phi, double phi_incident, double beta0, double n, double distance_param,
                 double wavenumber);
Complex utd_hard(double phi, double phi_incident, double beta0, double n, double distance_param,
                 double wavenumber);

// Angles of a diffraction geometry.
struct DiffractionGeometry {
  double phi = 0.0;           // observer
  double phi_incident = 0.0;  // source
  double beta0 = 0.0;         // angle between the incident ray and the edge
  double s_incident = 0.0;    // |source - q|
  double s_diffracted = 0.0;  // |observer - q|
  double distance_param = 0.0;
};

// Angle in [0, 2pi) of point p around the wedge edge through q, measured from face 0.
double wedge_angle(const WedgeFrame& w, const Vec3& q, const Vec3& p);

DiffractionGeometry diffraction_geometry(const WedgeFrame& w, const Vec3& source, const Vec3& q,
                                         const Vec3& observer);

// Geometric wrapper: computes angles from the wedge frame and evaluates both coefficients.
DiffractionCoefficients utd_coefficient(const WedgeFrame& w, const Vec3& source, const Vec3& q,
                                        const Vec3& observer, double wavenumber);

}  // namespace dynrt
