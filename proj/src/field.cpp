#include "dynrt/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dynrt/em.hpp"

namespace dynrt {

namespace {

Vec3 any_perpendicular(const Vec3& k) {
  const Vec3 trial = std::abs(k.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  return normalized(cross(k, trial));
}

Vec3 perpendicular_basis(const Vec3& k, const Vec3& normal) {
  const Vec3 c = cross(k, normal);
  const double n = norm(c);
  return n > kDirectionTolerance ? c / n : any_perpendicular(k);
}

void off_geometry(const char* what, const std::string& id, double off) {
  std::ostringstream os;
  os << "interaction point is " << off << " m off " << what << ' ' << id;
  throw SceneError(os.str());
}

// Records which local channel carries the field and whether the other one is empty.
int pick_channel(Complex a0, Complex a1, FieldTrace& trace) {
  const double m0 = std::abs(a0);
  const double m1 = std::abs(a1);
  const int ch = m1 > m0 ? 1 : 0;
  const double lo = ch ? m0 : m1;
  const double hi = ch ? m1 : m0;
  if (lo > kChannelLeakTolerance * hi) trace.single_channel = false;
  return ch;
}

}  // namespace

double emitted_field_amplitude(double tx_power_dbm) {
  const double watts = std::pow(10.0, (tx_power_dbm - 30.0) / 10.0);
  return std::sqrt(kFreeSpaceImpedance * watts / (2.0 * kPi));
}

double received_power_dbm(double field_magnitude, double wavelength) {
  const double watts = field_magnitude * field_magnitude / (2.0 * kFreeSpaceImpedance) *
                       wavelength * wavelength / (4.0 * kPi);
  if (!(watts > 0.0)) return -300.0;
  return 10.0 * std::log10(watts) + 30.0;
}

double path_spreading(double length, bool diffracted, double incident_length, double diffracted_length) {
  if (!diffracted) return 1.0 / length;
  const double dl = incident_length;
  const double dp = diffracted_length;
  return 1.0 / dl * std::sqrt(dl / ((dl + dp) * dp));
}

FieldResult field_of_path(const PathSignature& sig, const std::vector<Vec3>& nodes, const SceneInstant& at) {
  const Scene& scene = at.scene();
  const double k = scene.wavenumber();
  FieldResult out;
  FieldTrace& trace = out.trace;
  trace.single_channel = true;
  trace.coefficients.reserve(sig.steps.size());

  double total = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i) total += distance(nodes[i - 1], nodes[i]);
  trace.length = total;

  const Vec3 up{0.0, 0.0, 1.0};
  const Vec3 k0 = normalized(nodes[1] - nodes[0]);
  Vec3 pol = up - k0 * dot(up, k0);
  pol = norm(pol) > kDirectionTolerance ? normalized(pol) : any_perpendicular(k0);
  CVec3 e = CVec3::from_real(pol, 1.0);

  double travelled = 0.0;
  bool diffracted = false;
  for (std::size_t i = 0; i < sig.steps.size(); ++i) {
    const SignatureStep& step = sig.steps[i];
    const Vec3& prev = nodes[i];
    const Vec3& p = nodes[i + 1];
    const Vec3& next = nodes[i + 2];
    travelled += distance(prev, p);
    const Vec3 k_in = normalized(p - prev);
    const Vec3 k_out = normalized(next - p);

    if (step.mechanism == Mechanism::Diffraction) {
      const Edge& edge = scene.edges()[step.geometry];
      const WedgeFrame& w = scene.wedge(step.geometry);
      const Vec3 a = at.edge_a(step.geometry);
      const Vec3 along = a + w.edge_dir * dot(p - a, w.edge_dir);
      if (distance(p, along) > kPlaneTolerance) off_geometry("edge", edge.id, distance(p, along));

      const double dl = travelled;
      const double dp = total - travelled;
      // Penetrations do not bend rays, so the source and observer lie along k_in / k_out.
      const Vec3 source = p - k_in * dl;
      const Vec3 observer = p + k_out * dp;
      const double phi = wedge_angle(w, p, observer);
      const double phi_inc = wedge_angle(w, p, source);
      const double beta0 = std::acos(std::clamp(dot(k_in, w.edge_dir), -1.0, 1.0));
      const double sb = std::sin(beta0);
      const double l = dl * dp * sb * sb / (dl + dp);
      const DiffractionCoefficients d = utd_coefficient(phi, phi_inc, beta0, w.n, l, k);

      const Vec3 phi_hat_in = -normalized(cross(w.edge_dir, k_in));
      const Vec3 beta_hat_in = cross(phi_hat_in, k_in);
      const Vec3 phi_hat_out = normalized(cross(w.edge_dir, k_out));
      const Vec3 beta_hat_out = cross(phi_hat_out, k_out);
      const Complex a_soft = dot(e, beta_hat_in);
      const Complex a_hard = dot(e, phi_hat_in);
      const Complex c_soft = -d.soft;
      const Complex c_hard = -d.hard;
      e = CVec3::from_real(beta_hat_out, c_soft * a_soft) + CVec3::from_real(phi_hat_out, c_hard * a_hard);

      const int ch = pick_channel(a_soft, a_hard, trace);
      trace.coefficients.push_back({step.mechanism, ch, ch ? c_hard : c_soft});
      trace.incident_length = dl;
      trace.diffracted_length = dp;
      diffracted = true;
      continue;
    }

    const Facet& facet = scene.facets()[step.geometry];
    const double off = at.signed_plane_distance(step.geometry, p);
    if (std::abs(off) > kPlaneTolerance) off_geometry("facet", facet.id, off);

    const Vec3& n = scene.frame(step.geometry).normal;
    const Complex eps = complex_permittivity(facet.material, scene.frequency());
    const double cos_i = std::min(1.0, std::abs(dot(k_in, n)));
    const Vec3 e_perp = perpendicular_basis(k_in, n);
    const Vec3 e_par_in = cross(e_perp, k_in);
    const Complex a_perp = dot(e, e_perp);
    const Complex a_par = dot(e, e_par_in);

    FresnelPair c;
    Vec3 e_par_out = e_par_in;
    if (step.mechanism == Mechanism::Reflection) {
      c = fresnel_from_cos(cos_i, eps);
      e_par_out = cross(e_perp, k_out);
    } else {
      const SlabTransmission t =
          transmission_from_cos(cos_i, eps, facet.material.rel_permittivity, facet.thickness);
      c = t.coeff;
      trace.absorption_exponent += facet.material.attenuation_alpha * t.crossing_length;
    }
    e = CVec3::from_real(e_perp, c.perp * a_perp) + CVec3::from_real(e_par_out, c.par * a_par);

    const int ch = pick_channel(a_perp, a_par, trace);
    trace.coefficients.push_back({step.mechanism, ch, ch ? c.par : c.perp});
  }

  trace.spreading = path_spreading(total, diffracted, trace.incident_length, trace.diffracted_length);

  const double amplitude =
      emitted_field_amplitude(scene.tx_power_dbm()) * trace.spreading * std::exp(-trace.absorption_exponent);
  e *= amplitude * std::polar(1.0, -k * total);

  const Vec3 kf = normalized(nodes.back() - nodes[nodes.size() - 2]);
  Vec3 h = cross(up, kf);
  h = norm(h) > kDirectionTolerance ? normalized(h) : Vec3{1.0, 0.0, 0.0};
  const Vec3 v = cross(kf, h);
  out.field = {dot(e, v), dot(e, h)};
  out.power_dbm = received_power_dbm(norm(e), scene.wavelength());
  return out;
}

std::optional<FieldTrace> single_channel_trace(const PathSignature& sig, const std::vector<Vec3>& nodes,
                                               const SceneInstant& at, const FieldTrace* expect) {
  const Scene& scene = at.scene();
  FieldTrace trace;
  trace.single_channel = true;
  trace.coefficients.reserve(sig.steps.size());

  double total = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i) total += distance(nodes[i - 1], nodes[i]);
  trace.length = total;

  const Vec3 up{0.0, 0.0, 1.0};
  const Vec3 k0 = normalized(nodes[1] - nodes[0]);
  Vec3 pol = up - k0 * dot(up, k0);
  pol = norm(pol) > kDirectionTolerance ? normalized(pol) : any_perpendicular(k0);

  auto choose = [&](double a0, double a1, std::size_t i) -> std::optional<int> {
    const int ch = std::abs(a1) > std::abs(a0) ? 1 : 0;
    const double lo = std::abs(ch ? a0 : a1);
    const double hi = std::abs(ch ? a1 : a0);
    if (lo > kChannelLeakTolerance * hi) return std::nullopt;
    if (expect && expect->coefficients[i].channel != ch) return std::nullopt;
    return ch;
  };

  double travelled = 0.0;
  bool diffracted = false;
  for (std::size_t i = 0; i < sig.steps.size(); ++i) {
    const SignatureStep& step = sig.steps[i];
    const Vec3& prev = nodes[i];
    const Vec3& p = nodes[i + 1];
    const Vec3& next = nodes[i + 2];
    travelled += distance(prev, p);
    const Vec3 k_in = normalized(p - prev);
    const Vec3 k_out = normalized(next - p);

    if (step.mechanism == Mechanism::Diffraction) {
      const WedgeFrame& w = scene.wedge(step.geometry);
      const double dl = travelled;
      const double dp = total - travelled;
      const Vec3 phi_hat_in = -normalized(cross(w.edge_dir, k_in));
      const Vec3 beta_hat_in = cross(phi_hat_in, k_in);
      const auto ch = choose(dot(pol, beta_hat_in), dot(pol, phi_hat_in), i);
      if (!ch) return std::nullopt;

      const Vec3 source = p - k_in * dl;
      const Vec3 observer = p + k_out * dp;
      const double phi = wedge_angle(w, p, observer);
      const double phi_inc = wedge_angle(w, p, source);
      const double beta0 = std::acos(std::clamp(dot(k_in, w.edge_dir), -1.0, 1.0));
      const double sb = std::sin(beta0);
      const double l = dl * dp * sb * sb / (dl + dp);
      const Complex c = *ch ? -utd_hard(phi, phi_inc, beta0, w.n, l, scene.wavenumber())
                            : -utd_soft(phi, phi_inc, beta0, w.n, l, scene.wavenumber());
      const Vec3 phi_hat_out = normalized(cross(w.edge_dir, k_out));
      pol = *ch ? phi_hat_out : cross(phi_hat_out, k_out);
      trace.coefficients.push_back({step.mechanism, *ch, c});
      trace.incident_length = dl;
      trace.diffracted_length = dp;
      diffracted = true;
      continue;
    }

    const Facet& facet = scene.facets()[step.geometry];
    const Vec3& n = scene.frame(step.geometry).normal;
    const double cos_i = std::min(1.0, std::abs(dot(k_in, n)));
    const Vec3 e_perp = perpendicular_basis(k_in, n);
    const Vec3 e_par_in = cross(e_perp, k_in);
    const auto ch = choose(dot(pol, e_perp), dot(pol, e_par_in), i);
    if (!ch) return std::nullopt;

    const Complex eps = complex_permittivity(facet.material, scene.frequency());
    Complex c;
    if (step.mechanism == Mechanism::Reflection) {
      c = *ch ? fresnel_par_from_cos(cos_i, eps) : fresnel_perp_from_cos(cos_i, eps);
      pol = *ch ? cross(e_perp, k_out) : e_perp;
    } else {
      c = *ch ? slab_par_from_cos(cos_i, eps) : slab_perp_from_cos(cos_i, eps);
      trace.absorption_exponent +=
          facet.material.attenuation_alpha * slab_crossing_length(cos_i, facet.material.rel_permittivity,
                                                                  facet.thickness);
      pol = *ch ? e_par_in : e_perp;
    }
    trace.coefficients.push_back({step.mechanism, *ch, c});
  }
  trace.spreading = path_spreading(total, diffracted, trace.incident_length, trace.diffracted_length);
  return trace;
}

Path make_path(const PathSignature& sig, const PathGeometry& g, const SceneInstant& at) {
  Path p;
  p.signature = sig;
  p.interactions = make_interactions(sig, g);
  FieldResult f = field_of_path(sig, g.nodes, at);
  p.length = f.trace.length;
  p.delay = p.length / kSpeedOfLight;
  p.field = f.field;
  p.power_dbm = f.power_dbm;
  p.trace = std::move(f.trace);
  return p;
}

}  // namespace dynrt
