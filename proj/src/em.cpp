#include "dynrt/em.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace dynrt {

namespace {

constexpr Complex kJ{0.0, 1.0};
const Complex kExpJPi4 = std::polar(1.0, kPi / 4.0);

// sqrt(eps - sin^2) on the principal branch (non-negative real part).
Complex normal_wavenumber_ratio(double cos_i, Complex eps) {
  const double sin2 = std::max(0.0, 1.0 - cos_i * cos_i);
  return std::sqrt(eps - sin2);
}

// F(x) for x < 4: power series of int_0^w e^{-j tau^2}.
Complex transition_series(double x) {
  const double w = std::sqrt(x);
  const Complex total = 0.5 * std::sqrt(kPi) * std::conj(kExpJPi4);
  // sum_n (-j)^n w^(2n+1) / (n! (2n+1)); (-j)^n cycles through 1, -j, -1, j.
  double mag = w;  // x^n w / n!
  double re = w;
  double im = 0.0;
  for (int n = 1; n < 80; ++n) {
    mag *= x / n;
    const double add = mag / (2 * n + 1);
    switch (n & 3) {
      case 1: im -= add; break;
      case 2: re -= add; break;
      case 3: im += add; break;
      default: re += add; break;
    }
    if (add < 1e-17 * w) break;
  }
  return 2.0 * kJ * w * std::polar(1.0, x) * (total - Complex{re, im});
}

// F(x) for x >= 4: F = z K(z), z = e^{j pi/4} sqrt(x), with K the continued fraction
// 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))) of erfc, evaluated by modified Lentz.
Complex transition_continued_fraction(double x) {
  const Complex z = kExpJPi4 * std::sqrt(x);
  constexpr double tiny = 1e-150;
  // Plain 1/c; the operands stay far from overflow so the library's scaled division is unneeded.
  auto inverse = [](Complex c) { return std::conj(c) / std::norm(c); };
  Complex f = tiny;
  Complex c = f;
  Complex d = 0.0;
  for (int i = 1; i < 500; ++i) {
    const double a = (i == 1) ? 1.0 : 0.5 * (i - 1);
    d = z + a * d;
    if (std::norm(d) < tiny * tiny) d = tiny;
    c = z + a * inverse(c);
    if (std::norm(c) < tiny * tiny) c = tiny;
    d = inverse(d);
    const Complex delta = c * d;
    f *= delta;
    if (std::norm(delta - 1.0) < 1e-32) break;
  }
  return z * f;
}

// F(x) for large x: sum_n (2n-1)!! (j / 2x)^n, truncated once terms drop below 1e-17.
// The terms keep shrinking until n ~ x, far beyond that point for x >= kAsymptoticStart.
Complex transition_asymptotic(double x) {
  const double r = 1.0 / (2.0 * x);
  double re = 1.0;
  double im = 0.0;
  double mag = 1.0;
  for (int n = 1; n < 64; ++n) {
    mag *= (2 * n - 1) * r;
    // (j)^n cycles through j, -1, -j, 1.
    switch (n & 3) {
      case 1: im += mag; break;
      case 2: re -= mag; break;
      case 3: im -= mag; break;
      default: re += mag; break;
    }
    if (mag < 1e-17) break;
  }
  return {re, im};
}

constexpr double kAsymptoticStart = 40.0;
constexpr double kSeriesEnd = 4.0;

// H(w) = e^{j w^2} int_w^inf e^{-j t^2} dt, so that F = 2j w H. Tabulated over
// [sqrt(kSeriesEnd), sqrt(kAsymptoticStart)] from the continued fraction and expanded
// locally in the Taylor series of H' = 2j w H - 1.
struct TransitionTable {
  double w_first = 0.0;
  double step = 0.0;
  std::vector<Complex> h;
};

const TransitionTable& transition_table() {
  static const TransitionTable table = [] {
    TransitionTable t;
    t.step = 0.02;
    t.w_first = std::sqrt(kSeriesEnd);
    const double w_last = std::sqrt(kAsymptoticStart) + t.step;
    for (double w = t.w_first; w <= w_last; w = t.w_first + t.step * static_cast<double>(t.h.size()))
      t.h.push_back(transition_continued_fraction(w * w) / (2.0 * kJ * w));
    return t;
  }();
  return table;
}

Complex transition_tabulated(double x) {
  const TransitionTable& t = transition_table();
  const double w = std::sqrt(x);
  const auto last = static_cast<long>(t.h.size()) - 1;
  const long i = std::clamp(std::lround((w - t.w_first) / t.step), 0L, last);
  const double w0 = t.w_first + t.step * static_cast<double>(i);
  const double h = w - w0;
  // (n + 1) c_{n+1} = 2j w0 c_n + 2j c_{n-1} - [n = 0]
  Complex before = 0.0;
  Complex c = t.h[static_cast<std::size_t>(i)];
  Complex sum = c;
  double hn = 1.0;
  int small = 0;
  for (int n = 0; n < 40 && small < 2; ++n) {
    Complex next = 2.0 * kJ * (w0 * c + before);
    if (n == 0) next -= 1.0;
    next /= static_cast<double>(n + 1);
    before = c;
    c = next;
    hn *= h;
    const Complex term = c * hn;
    sum += term;
    small = std::norm(term) < 1e-34 * std::norm(sum) ? small + 1 : 0;
  }
  return 2.0 * kJ * w * sum;
}

double cot(double a) { return std::cos(a) / std::sin(a); }

// One cot * F term of the wedge coefficient. Exactly on a shadow or reflection
// boundary the product has a finite one-sided limit; the angle is nudged off it.
Complex wedge_term(double sign, double beta, double n, double kl) {
  double arg = (kPi + sign * beta) / (2.0 * n);
  if (std::abs(std::sin(arg)) < 1e-12) {
    beta += 1e-9;
    arg = (kPi + sign * beta) / (2.0 * n);
  }
  // N most nearly satisfying 2 pi n N - beta = +-pi.
  const double big_n = std::round((beta + sign * kPi) / (2.0 * kPi * n));
  const double c = std::cos((2.0 * kPi * n * big_n - beta) / 2.0);
  const double a = 2.0 * c * c;
  return cot(arg) * fresnel_transition(kl * a);
}

struct WedgeSums {
  Complex difference;  // terms in phi - phi'
  Complex sum;         // terms in phi + phi'
  Complex prefactor;
};

WedgeSums wedge_sums(double phi, double phi_incident, double beta0, double n, double distance_param,
                     double k) {
  const double kl = k * distance_param;
  const double bm = phi - phi_incident;
  const double bp = phi + phi_incident;
  WedgeSums s;
  s.difference = wedge_term(+1.0, bm, n, kl) + wedge_term(-1.0, bm, n, kl);
  s.sum = wedge_term(+1.0, bp, n, kl) + wedge_term(-1.0, bp, n, kl);
  s.prefactor = -std::conj(kExpJPi4) / (2.0 * n * std::sqrt(2.0 * kPi * k) * std::sin(beta0));
  return s;
}

}  // namespace

Complex complex_permittivity(const Material& m, double frequency_hz) {
  const double omega = 2.0 * kPi * frequency_hz;
  return {m.rel_permittivity, -m.conductivity / (omega * kVacuumPermittivity)};
}

Complex fresnel_perp_from_cos(double cos_i, Complex eps) {
  const Complex q = normal_wavenumber_ratio(cos_i, eps);
  return (cos_i - q) / (cos_i + q);
}

Complex fresnel_par_from_cos(double cos_i, Complex eps) {
  const Complex q = normal_wavenumber_ratio(cos_i, eps);
  return (eps * cos_i - q) / (eps * cos_i + q);
}

FresnelPair fresnel_from_cos(double cos_i, Complex eps) {
  const Complex q = normal_wavenumber_ratio(cos_i, eps);
  return {(cos_i - q) / (cos_i + q), (eps * cos_i - q) / (eps * cos_i + q)};
}

FresnelPair fresnel_coefficients(double incidence_angle, const Material& m, double frequency_hz) {
  return fresnel_from_cos(std::cos(incidence_angle), complex_permittivity(m, frequency_hz));
}

Complex slab_perp_from_cos(double cos_i, Complex eps) {
  const Complex q = normal_wavenumber_ratio(cos_i, eps);
  const Complex den = cos_i + q;
  return 4.0 * q * cos_i / (den * den);
}

Complex slab_par_from_cos(double cos_i, Complex eps) {
  const Complex q = normal_wavenumber_ratio(cos_i, eps);
  const Complex den = eps * cos_i + q;
  return 4.0 * eps * q * cos_i / (den * den);
}

double slab_crossing_length(double cos_i, double rel_permittivity, double thickness) {
  const double sin2_t = std::max(0.0, 1.0 - cos_i * cos_i) / rel_permittivity;
  return thickness / std::sqrt(1.0 - sin2_t);
}

SlabTransmission transmission_from_cos(double cos_i, Complex eps, double rel_permittivity,
                                       double thickness) {
  SlabTransmission out;
  out.coeff = {slab_perp_from_cos(cos_i, eps), slab_par_from_cos(cos_i, eps)};
  out.crossing_length = slab_crossing_length(cos_i, rel_permittivity, thickness);
  return out;
}

SlabTransmission transmission_coefficient(double incidence_angle, const Material& m, double thickness,
                                          double frequency_hz) {
  return transmission_from_cos(std::cos(incidence_angle), complex_permittivity(m, frequency_hz),
                               m.rel_permittivity, thickness);
}

Complex fresnel_transition(double x) {
  if (x <= 0.0) return 0.0;
  if (x < kSeriesEnd) return transition_series(x);
  return x < kAsymptoticStart ? transition_tabulated(x) : transition_asymptotic(x);
}

DiffractionCoefficients utd_coefficient(double phi, double phi_incident, double beta0, double n,
                                        double distance_param, double wavenumber) {
  const WedgeSums s = wedge_sums(phi, phi_incident, beta0, n, distance_param, wavenumber);
  return {s.prefactor * (s.difference - s.sum), s.prefactor * (s.difference + s.sum)};
}

Complex utd_soft(double phi, double phi_incident, double beta0, double n, double distance_param,
                 double wavenumber) {
  const WedgeSums s = wedge_sums(phi, phi_incident, beta0, n, distance_param, wavenumber);
  return s.prefactor * (s.difference - s.sum);
}

Complex utd_hard(double phi, double phi_incident, double beta0, double n, double distance_param,
                 double wavenumber) {
  const WedgeSums s = wedge_sums(phi, phi_incident, beta0, n, distance_param, wavenumber);
  return s.prefactor * (s.difference + s.sum);
}

double wedge_angle(const WedgeFrame& w, const Vec3& q, const Vec3& p) {
  const Vec3 v = p - q;
  double a = std::atan2(dot(v, w.face0_normal), dot(v, w.face0_tangent));
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

DiffractionGeometry diffraction_geometry(const WedgeFrame& w, const Vec3& source, const Vec3& q,
                                         const Vec3& observer) {
  DiffractionGeometry g;
  g.phi = wedge_angle(w, q, observer);
  g.phi_incident = wedge_angle(w, q, source);
  g.s_incident = distance(source, q);
  g.s_diffracted = distance(observer, q);
  const double cb = std::clamp(dot((q - source) / g.s_incident, w.edge_dir), -1.0, 1.0);
  g.beta0 = std::acos(cb);
  const double sb = std::sin(g.beta0);
  g.distance_param = g.s_incident * g.s_diffracted * sb * sb / (g.s_incident + g.s_diffracted);
  return g;
}

DiffractionCoefficients utd_coefficient(const WedgeFrame& w, const Vec3& source, const Vec3& q,
                                        const Vec3& observer, double wavenumber) {
  const DiffractionGeometry g = diffraction_geometry(w, source, q, observer);
  return utd_coefficient(g.phi, g.phi_incident, g.beta0, w.n, g.distance_param, wavenumber);
}

}  // namespace dynrt
