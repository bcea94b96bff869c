#include "dynrt/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "dynrt/em.hpp"

namespace dynrt {

namespace {

double diffraction_margin(const SceneInstant& at, std::size_t edge, const EdgePoint& ep,
                          const Vec3& prev, const Vec3& next) {
  const WedgeFrame& w = at.scene().wedge(edge);
  const double n_pi = w.n * kPi;
  const double phi_in = wedge_angle(w, ep.point, prev);
  const double phi_out = wedge_angle(w, ep.point, next);
  return std::min({ep.s, w.length - ep.s, phi_in, n_pi - phi_in, phi_out, n_pi - phi_out});
}

constexpr std::size_t kMaxSteps = 8;

// Base interaction points (reflections/diffractions) written to nodes[1..nb];
// nodes[0] and nodes[nb + 1] are tx and rx.
bool solve_base(const std::array<SignatureStep, kMaxSteps>& base, std::size_t nb, const SceneInstant& at,
                std::array<Vec3, kMaxSteps + 2>& nodes) {
  nodes[0] = at.tx();
  nodes[nb + 1] = at.rx();
  if (nb == 0) return true;

  bool all_reflections = true;
  for (std::size_t i = 0; i < nb; ++i) all_reflections &= base[i].mechanism == Mechanism::Reflection;

  if (all_reflections) {
    std::array<Vec3, kMaxSteps + 1> images;
    images[0] = at.tx();
    for (std::size_t i = 0; i < nb; ++i) images[i + 1] = mirror_point(images[i], at, base[i].geometry);
    Vec3 target = at.rx();
    for (std::size_t i = nb; i-- > 0;) {
      const auto p = segment_plane_intersection(images[i + 1], target, at, base[i].geometry);
      if (!p) return false;
      nodes[i + 1] = *p;
      target = *p;
    }
    return true;
  }

  if (nb == 1 && base[0].mechanism == Mechanism::Diffraction) {
    const std::size_t e = base[0].geometry;
    const auto ep = fermat_point_on_line(at.tx(), at.rx(), at.edge_a(e), at.scene().wedge(e).edge_dir);
    if (!ep) return false;
    nodes[1] = ep->point;
    return true;
  }
  return false;
}

}  // namespace

std::optional<Vec3> segment_plane_intersection(const Vec3& a, const Vec3& b, const SceneInstant& at,
                                               std::size_t facet) {
  const double sa = at.signed_plane_distance(facet, a);
  const double sb = at.signed_plane_distance(facet, b);
  if (std::abs(sa) <= kSegmentPlaneEpsilon || std::abs(sb) <= kSegmentPlaneEpsilon) return std::nullopt;
  if ((sa > 0.0) == (sb > 0.0)) return std::nullopt;
  return a + (b - a) * (sa / (sa - sb));
}

Vec3 mirror_point(const Vec3& p, const SceneInstant& at, std::size_t facet) {
  const Vec3& n = at.scene().frame(facet).normal;
  return p - n * (2.0 * at.signed_plane_distance(facet, p));
}

std::optional<Vec3> find_reflection_point(const Vec3& tx, const Vec3& rx, const SceneInstant& at,
                                          std::size_t facet) {
  const auto p = segment_plane_intersection(mirror_point(tx, at, facet), rx, at, facet);
  if (!p) return std::nullopt;
  if (!point_in_facet_unchecked(*p, at, facet).inside) return std::nullopt;
  return p;
}

std::optional<EdgePoint> fermat_point_on_line(const Vec3& tx, const Vec3& rx, const Vec3& a,
                                              const Vec3& dir) {
  // Unfolding both rays into one plane: the optimum splits [s_tx, s_rx] in the
  // ratio of the perpendicular distances to the line.
  const double s_tx = dot(tx - a, dir);
  const double s_rx = dot(rx - a, dir);
  const double rho_tx = norm(tx - (a + dir * s_tx));
  const double rho_rx = norm(rx - (a + dir * s_rx));
  if (rho_tx + rho_rx < 1e-12) return std::nullopt;
  const double s = s_tx + (s_rx - s_tx) * rho_tx / (rho_tx + rho_rx);
  return EdgePoint{a + dir * s, s};
}

std::optional<Vec3> find_diffraction_point(const Vec3& tx, const Vec3& rx, const SceneInstant& at,
                                           std::size_t edge) {
  const WedgeFrame& w = at.scene().wedge(edge);
  const auto ep = fermat_point_on_line(tx, rx, at.edge_a(edge), w.edge_dir);
  if (!ep || ep->s < 0.0 || ep->s > w.length) return std::nullopt;
  return ep->point;
}

bool PathGeometry::interaction_ok(const PathSignature& sig, std::size_t i) const {
  if (!constructed) return false;
  return sig.steps[i].mechanism == Mechanism::Penetration ? margins[i] > 0.0 : margins[i] >= 0.0;
}

bool PathGeometry::points_ok(const PathSignature& sig) const {
  if (!constructed) return false;
  for (std::size_t i = 0; i < sig.steps.size(); ++i)
    if (!interaction_ok(sig, i)) return false;
  return true;
}

double PathGeometry::length() const {
  double l = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i) l += distance(nodes[i - 1], nodes[i]);
  return l;
}

PathGeometry solve_path(const PathSignature& sig, const SceneInstant& at) {
  PathGeometry g;
  solve_path(sig, at, g);
  return g;
}

void solve_path(const PathSignature& sig, const SceneInstant& at, PathGeometry& g) {
  g.constructed = false;
  g.nodes.clear();
  g.margins.clear();
  if (sig.steps.size() > kMaxSteps) throw std::invalid_argument("signature has too many interactions");

  std::array<SignatureStep, kMaxSteps> base;
  std::size_t nb = 0;
  for (const auto& s : sig.steps)
    if (s.mechanism != Mechanism::Penetration) base[nb++] = s;
  std::array<Vec3, kMaxSteps + 2> base_nodes;
  if (!solve_base(base, nb, at, base_nodes)) return;

  g.nodes.push_back(at.tx());
  std::size_t k = 0;  // base steps consumed so far
  for (const auto& step : sig.steps) {
    switch (step.mechanism) {
      case Mechanism::Reflection: {
        const Vec3& p = base_nodes[k + 1];
        g.nodes.push_back(p);
        g.margins.push_back(point_in_facet_unchecked(p, at, step.geometry).distance);
        ++k;
        break;
      }
      case Mechanism::Diffraction: {
        const WedgeFrame& w = at.scene().wedge(step.geometry);
        const Vec3& p = base_nodes[k + 1];
        const EdgePoint ep{p, dot(p - at.edge_a(step.geometry), w.edge_dir)};
        g.nodes.push_back(p);
        g.margins.push_back(diffraction_margin(at, step.geometry, ep, base_nodes[k], base_nodes[k + 2]));
        ++k;
        break;
      }
      case Mechanism::Penetration: {
        const auto p = segment_plane_intersection(base_nodes[k], base_nodes[k + 1], at, step.geometry);
        if (!p) return;
        g.nodes.push_back(*p);
        g.margins.push_back(point_in_facet_unchecked(*p, at, step.geometry).distance);
        break;
      }
    }
  }
  g.nodes.push_back(at.rx());
  g.constructed = true;
}

void segment_crossings(const Vec3& a, const Vec3& b, const SceneInstant& at,
                       std::vector<std::uint32_t>& out, FacetSubset candidates) {
  out.clear();
  Aabb seg;
  seg.expand(a);
  seg.expand(b);

  struct Hit {
    double u;
    std::uint32_t facet;
  };
  thread_local std::vector<Hit> hits;
  hits.clear();

  auto test = [&](std::uint32_t f) {
    if (!at.facet_box(f).overlaps(seg)) return;
    const double sa = at.signed_plane_distance(f, a);
    const double sb = at.signed_plane_distance(f, b);
    if (std::abs(sa) <= kSegmentPlaneEpsilon || std::abs(sb) <= kSegmentPlaneEpsilon) return;
    if ((sa > 0.0) == (sb > 0.0)) return;
    const double u = sa / (sa - sb);
    const Vec3 x = a + (b - a) * u;
    if (point_in_facet_unchecked(x, at, f).distance > 0.0) hits.push_back({u, f});
  };

  if (candidates) {
    for (std::uint32_t f : *candidates) test(f);
  } else {
    const auto n = static_cast<std::uint32_t>(at.scene().facets().size());
    for (std::uint32_t f = 0; f < n; ++f) test(f);
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) { return x.u < y.u; });
  for (const auto& h : hits) out.push_back(h.facet);
}

bool occlusion_consistent(const PathSignature& sig, const PathGeometry& g, const SceneInstant& at,
                          FacetSubset candidates) {
  if (!g.constructed) return false;
  // Walk base segments; penetrations declared between two base nodes must be exactly
  // the facets the segment crosses.
  thread_local std::vector<std::uint32_t> declared;
  thread_local std::vector<std::uint32_t> found;
  declared.clear();
  Vec3 seg_start = g.nodes.front();
  for (std::size_t i = 0; i <= sig.steps.size(); ++i) {
    const bool at_end = i == sig.steps.size();
    if (!at_end && sig.steps[i].mechanism == Mechanism::Penetration) {
      declared.push_back(sig.steps[i].geometry);
      continue;
    }
    const Vec3& seg_end = g.nodes[i + 1];
    segment_crossings(seg_start, seg_end, at, found, candidates);
    if (found != declared) return false;
    declared.clear();
    seg_start = seg_end;
  }
  return true;
}

PathStatus evaluate_path(const PathSignature& sig, const PathGeometry& g, const SceneInstant& at,
                         FacetSubset candidates) {
  PathStatus st;
  st.constructed = g.constructed;
  if (!st.constructed) return st;
  st.points_ok = g.points_ok(sig);
  st.clear = occlusion_consistent(sig, g, at, candidates);
  return st;
}

std::vector<Interaction> make_interactions(const PathSignature& sig, const PathGeometry& g) {
  std::vector<Interaction> out;
  out.reserve(sig.steps.size());
  for (std::size_t i = 0; i < sig.steps.size(); ++i)
    out.push_back({sig.steps[i].mechanism, sig.steps[i].geometry, g.nodes[i + 1]});
  return out;
}

std::optional<ClassifiedPath> classify_base_path(const PathSignature& base, PathGeometry base_geometry,
                                                 const SceneInstant& at) {
  if (!base_geometry.points_ok(base)) return std::nullopt;

  const auto& facets = at.scene().facets();
  std::vector<std::uint32_t> found;
  int transparent_hits = 0;
  std::size_t hit_segment = 0;
  std::uint32_t hit_facet = 0;
  for (std::size_t k = 0; k + 1 < base_geometry.nodes.size(); ++k) {
    segment_crossings(base_geometry.nodes[k], base_geometry.nodes[k + 1], at, found);
    for (std::uint32_t f : found) {
      if (!facets[f].material.transparent) return std::nullopt;
      ++transparent_hits;
      hit_segment = k;
      hit_facet = f;
    }
  }
  if (transparent_hits > 1) return std::nullopt;
  if (transparent_hits == 0) return ClassifiedPath{base, std::move(base_geometry)};

  // Penetration sits after the k-th base step.
  PathSignature full = base;
  full.steps.insert(full.steps.begin() + static_cast<std::ptrdiff_t>(hit_segment),
                    SignatureStep{Mechanism::Penetration, hit_facet});
  PathGeometry g = solve_path(full, at);
  // The re-solve must reproduce the classification exactly; anything else is a
  // numerical tie at a facet boundary and is treated as blocked.
  if (!evaluate_path(full, g, at).valid()) return std::nullopt;
  return ClassifiedPath{std::move(full), std::move(g)};
}

std::vector<std::uint32_t> facets_near(const Aabb& box, const SceneInstant& at) {
  std::vector<std::uint32_t> out;
  const auto n = static_cast<std::uint32_t>(at.scene().facets().size());
  for (std::uint32_t f = 0; f < n; ++f)
    if (at.facet_box(f).overlaps(box)) out.push_back(f);
  return out;
}

Aabb swept_facet_box(const Scene& scene, std::size_t facet, double t0, double t1) {
  const Facet& f = scene.facets()[facet];
  const Aabb& ref = scene.frame(facet).box;
  if (f.motion.is_stationary()) return ref.translated(f.motion.position(t0));

  // Breakpoints split [t0, t1] into constant-acceleration pieces; on each piece the
  // trajectory deviates from its chord by at most |a| h^2 / 8.
  std::vector<double> times{t0};
  for (const auto& seg : f.motion.segments())
    if (seg.t_ref > t0 && seg.t_ref < t1) times.push_back(seg.t_ref);
  times.push_back(t1);

  Aabb box;
  double pad = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Aabb b = ref.translated(f.motion.position(times[i]));
    box.expand(b.lo);
    box.expand(b.hi);
    if (i + 1 < times.size()) {
      const double h = times[i + 1] - times[i];
      const double a = norm(f.motion.segment(0.5 * (times[i] + times[i + 1])).a0);
      pad = std::max(pad, a * h * h / 8.0);
    }
  }
  return box.padded(pad + 1e-9);
}

std::vector<std::uint32_t> facets_near_swept(const Aabb& box, const Scene& scene, double t0, double t1) {
  std::vector<std::uint32_t> out;
  const auto n = static_cast<std::uint32_t>(scene.facets().size());
  for (std::uint32_t f = 0; f < n; ++f)
    if (swept_facet_box(scene, f, t0, t1).overlaps(box)) out.push_back(f);
  return out;
}

}  // namespace dynrt
