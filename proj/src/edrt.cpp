#include "dynrt/edrt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dynrt/geometry.hpp"
#include "dynrt/rt.hpp"
#include "dynrt/stopwatch.hpp"

namespace dynrt {

namespace {

// Slack around sampled interaction points when collecting candidate blockers; covers
// the motion of the points between samples.
constexpr double kNodePad = 0.5;
// Margin (m) at the far end of the scan that counts as reaching the boundary there.
constexpr double kBoundaryTouch = 1e-9;

std::uint32_t point_bits(const PathSignature& sig) {
  return static_cast<std::uint32_t>((1ull << sig.steps.size()) - 1);
}

std::uint32_t point_failures(const PathSignature& sig, const PathGeometry& g) {
  if (!g.constructed) return point_bits(sig) | kOcclusionBit;
  std::uint32_t m = 0;
  for (std::size_t i = 0; i < sig.steps.size(); ++i)
    if (!g.interaction_ok(sig, i)) m |= 1u << i;
  return m;
}

std::uint32_t failures_of(const PathSignature& sig, const PathGeometry& g, const SceneInstant& at,
                          FacetSubset candidates) {
  std::uint32_t m = point_failures(sig, g);
  if (g.constructed && !occlusion_consistent(sig, g, at, candidates)) m |= kOcclusionBit;
  return m;
}

void expand_nodes(Aabb& box, const PathGeometry& g) {
  if (!g.constructed) return;
  for (const auto& p : g.nodes) box.expand(p);
}

// Scans from `from` toward `to` (either direction) until the path, valid at `from`,
// stops existing; returns the boundary on the valid side (birth) or the invalid side
// (death) refined to kLifetimeTolerance.
std::optional<double> find_transition(const PathSignature& sig, const Scene& scene, double from, double to,
                                      double dt) {
  const double span = to - from;
  const int samples =
      std::max(1, static_cast<int>(std::lround(std::abs(span) / (dt / kLifetimeScanDivisions))));
  auto time_at = [&](int k) { return k == samples ? to : from + span * k / samples; };

  SceneInstant at = scene.at(from);
  PathGeometry g;
  solve_path(sig, at, g);
  Aabb box;
  expand_nodes(box, g);

  // Point exits need no occlusion tests, so locate the first one before collecting blockers.
  int k_points = -1;
  for (int k = 1; k <= samples; ++k) {
    at.retime(time_at(k));
    solve_path(sig, at, g);
    expand_nodes(box, g);
    if (point_failures(sig, g) != 0) {
      k_points = k;
      break;
    }
  }
  const int k_last = k_points > 0 ? k_points : samples;
  const double t_lo = std::min(from, time_at(k_last));
  const double t_hi = std::max(from, time_at(k_last));
  const std::vector<std::uint32_t> candidates = facets_near_swept(box.padded(kNodePad), scene, t_lo, t_hi);

  int k_fail = -1;
  for (int k = 1; k <= k_last; ++k) {
    if (k == k_points) {
      k_fail = k;
      break;
    }
    at.retime(time_at(k));
    solve_path(sig, at, g);
    if (!occlusion_consistent(sig, g, at, &candidates)) {
      k_fail = k;
      break;
    }
  }
  if (k_fail < 0) {
    // A point that only touches its boundary at `to` still leaves there.
    at.retime(to);
    solve_path(sig, at, g);
    if (g.constructed)
      for (double m : g.margins)
        if (m < kBoundaryTouch) return to;
    return std::nullopt;
  }

  at.retime(time_at(k_fail));
  solve_path(sig, at, g);
  const std::uint32_t mask = failures_of(sig, g, at, &candidates);
  const bool death = span > 0.0;
  double best = to;
  for (int b = 0; b < 32; ++b) {
    const std::uint32_t bit = 1u << b;
    if (!(mask & bit)) continue;
    double ok_t = time_at(k_fail - 1);
    double bad_t = time_at(k_fail);
    while (std::abs(bad_t - ok_t) > kLifetimeTolerance) {
      const double mid = 0.5 * (ok_t + bad_t);
      at.retime(mid);
      solve_path(sig, at, g);
      const std::uint32_t m =
          bit == kOcclusionBit ? failures_of(sig, g, at, &candidates) : point_failures(sig, g);
      (m & bit ? bad_t : ok_t) = mid;
    }
    const double edge = death ? bad_t : ok_t;
    if (std::abs(edge - from) < std::abs(best - from)) best = edge;
  }
  return best;
}

Complex product(const std::vector<Complex>& v) {
  Complex p = 1.0;
  for (const auto& c : v) p *= c;
  return p;
}

bool any_below_floor(const std::vector<Complex>& v) {
  return std::any_of(v.begin(), v.end(), [](Complex c) { return std::abs(c) < kCoefficientFloor; });
}

bool alive(const Lifetime& l, double t) {
  switch (l.kind) {
    case Existence::Common:
      return true;
    case Existence::Dying:
      return t < l.death_time;
    case Existence::Born:
      return t >= l.birth_time;
  }
  return false;
}

Path field_for(const Lifetime& l, const PathGeometry& g, const SceneInstant& at, PredictionStats& stats) {
  if (auto p = extrapolate_path(l.path, g, at)) return std::move(*p);
  ++stats.fallback_fields;
  return make_path(l.path.signature, g, at);
}

}  // namespace

MatchedPaths match_paths(const Snapshot& a, const Snapshot& b) {
  MatchedPaths m;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.paths.size() || j < b.paths.size()) {
    if (j == b.paths.size() || (i < a.paths.size() && a.paths[i].signature < b.paths[j].signature)) {
      m.dying.push_back(a.paths[i++]);
    } else if (i == a.paths.size() || b.paths[j].signature < a.paths[i].signature) {
      m.born.push_back(b.paths[j++]);
    } else {
      m.common.emplace_back(a.paths[i++], b.paths[j++]);
    }
  }
  return m;
}

const char* existence_name(Existence e) {
  switch (e) {
    case Existence::Common:
      return "common";
    case Existence::Dying:
      return "dying";
    case Existence::Born:
      return "born";
  }
  return "?";
}

std::uint32_t validity_failures(const PathSignature& sig, const SceneInstant& at, FacetSubset candidates) {
  return failures_of(sig, solve_path(sig, at), at, candidates);
}

LifetimeEstimate death_time(const PathSignature& sig, const Scene& scene, double start, double end, double dt) {
  if (auto t = find_transition(sig, scene, start, end, dt)) return {*t, true};
  return {end - dt, false};
}

LifetimeEstimate birth_time(const PathSignature& sig, const Scene& scene, double start, double end, double dt) {
  if (auto t = find_transition(sig, scene, end, start, dt)) return {*t, true};
  return {start + dt, false};
}

std::optional<double> extrapolate_field_reflection(double ref_magnitude, Complex r_ref, Complex r_t,
                                                   double length_ref, double length_t) {
  if (std::abs(r_ref) < kCoefficientFloor) return std::nullopt;
  return ref_magnitude * std::abs(r_t / r_ref) * (length_ref / length_t);
}

std::optional<double> extrapolate_field_diffraction(double ref_magnitude, Complex d_ref, Complex d_t,
                                                    double dl_ref, double dp_ref, double dl_t, double dp_t) {
  if (std::abs(d_ref) < kCoefficientFloor) return std::nullopt;
  const double spreading = std::sqrt(dl_ref * dp_ref * (dl_ref + dp_ref) / (dl_t * dp_t * (dl_t + dp_t)));
  return ref_magnitude * std::abs(d_t / d_ref) * spreading;
}

std::optional<double> extrapolate_field_mixed(double ref_magnitude, const std::vector<Complex>& coeff_ref,
                                              const std::vector<Complex>& coeff_t, double spreading_ref,
                                              double spreading_t, double absorption_ref, double absorption_t) {
  if (any_below_floor(coeff_ref)) return std::nullopt;
  double ratio = 1.0;
  for (std::size_t i = 0; i < coeff_ref.size(); ++i) ratio *= std::abs(coeff_t[i] / coeff_ref[i]);
  return ref_magnitude * ratio * (spreading_t / spreading_ref) * std::exp(absorption_ref - absorption_t);
}

std::optional<Path> extrapolate_path(const Path& reference, const PathGeometry& g, const SceneInstant& at) {
  const FieldTrace& ref = reference.trace;
  if (!ref.single_channel || !g.constructed) return std::nullopt;
  const double ref_mag = reference.field_magnitude();
  if (!(ref_mag > 0.0)) return std::nullopt;
  std::optional<FieldTrace> now = single_channel_trace(reference.signature, g.nodes, at, &ref);
  if (!now) return std::nullopt;

  std::vector<Complex> c_ref;
  std::vector<Complex> c_t;
  c_ref.reserve(ref.coefficients.size());
  c_t.reserve(ref.coefficients.size());
  for (std::size_t i = 0; i < ref.coefficients.size(); ++i) {
    c_ref.push_back(ref.coefficients[i].value);
    c_t.push_back(now->coefficients[i].value);
  }
  if (any_below_floor(c_ref)) return std::nullopt;

  const PathSignature& sig = reference.signature;
  const bool diffracted = sig.count(Mechanism::Diffraction) > 0;
  const bool penetrated = sig.count(Mechanism::Penetration) > 0;
  std::optional<double> mag;
  if (!diffracted && !penetrated) {
    mag = extrapolate_field_reflection(ref_mag, product(c_ref), product(c_t), ref.length, now->length);
  } else if (diffracted && !penetrated) {
    mag = extrapolate_field_diffraction(ref_mag, c_ref[0], c_t[0], ref.incident_length, ref.diffracted_length,
                                        now->incident_length, now->diffracted_length);
  } else {
    mag = extrapolate_field_mixed(ref_mag, c_ref, c_t, ref.spreading, now->spreading, ref.absorption_exponent,
                                  now->absorption_exponent);
  }
  if (!mag) return std::nullopt;

  const Scene& scene = at.scene();
  Path p;
  p.signature = sig;
  p.interactions = make_interactions(sig, g);
  p.length = now->length;
  p.delay = p.length / kSpeedOfLight;
  const Complex scale = (*mag / ref_mag) * std::polar(1.0, -scene.wavenumber() * (now->length - ref.length));
  p.field = {reference.field[0] * scale, reference.field[1] * scale};
  p.power_dbm = received_power_dbm(*mag, scene.wavelength());
  p.trace = std::move(*now);
  return p;
}

PredictionRound prepare_round(Snapshot first, Snapshot last, const Scene& scene, const PredictionConfig& config,
                              PredictionStats* stats) {
  PredictionRound r;
  r.start = first.time;
  r.end = last.time;
  r.matched = match_paths(first, last);
  r.first = std::move(first);
  r.last = std::move(last);

  for (const auto& [a, b] : r.matched.common) r.lifetimes.push_back({a, Existence::Common, r.start, r.end, false});
  const std::size_t n_common = r.lifetimes.size();
  for (const auto& p : r.matched.dying) r.lifetimes.push_back({p, Existence::Dying, r.start, r.end, false});
  for (const auto& p : r.matched.born) r.lifetimes.push_back({p, Existence::Born, r.start, r.end, false});

  const auto n = static_cast<std::ptrdiff_t>(r.lifetimes.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(n_common); i < n; ++i) {
    Lifetime& l = r.lifetimes[i];
    if (l.kind == Existence::Dying) {
      const LifetimeEstimate e = death_time(l.path.signature, scene, r.start, r.end, config.dt);
      l.death_time = e.time;
      l.unresolved = !e.resolved;
    } else {
      const LifetimeEstimate e = birth_time(l.path.signature, scene, r.start, r.end, config.dt);
      l.birth_time = e.time;
      l.unresolved = !e.resolved;
    }
  }

  for (const auto& l : r.lifetimes) {
    if (!l.unresolved) continue;
    if (stats) ++stats->unresolved_lifetimes;
    std::fprintf(stderr, "edrt: unresolved %s lifetime for %s in [%g, %g], using fallback\n",
                 existence_name(l.kind), encode_signature(l.path.signature, scene).c_str(), r.start, r.end);
  }
  return r;
}

Snapshot predict_snapshot_edrt(const PredictionRound& round, const Scene& scene, double t, PredictionStats* stats) {
  PredictionStats local;
  const SceneInstant at = scene.at(t);
  Snapshot s;
  s.time = t;
  for (const auto& l : round.lifetimes) {
    if (!alive(l, t)) continue;
    const PathGeometry g = solve_path(l.path.signature, at);
    if (!g.constructed) {
      ++local.dropped_paths;
      continue;
    }
    if (l.kind == Existence::Common && !occlusion_consistent(l.path.signature, g, at)) {
      ++local.blocked_common;
      continue;
    }
    s.paths.push_back(field_for(l, g, at, local));
  }
  sort_paths(s);
  if (stats) *stats += local;
  return s;
}

std::vector<Snapshot> predict_round_edrt(const PredictionRound& round, const Scene& scene,
                                         const std::vector<double>& times, PredictionStats* stats,
                                         StageTiming* timing) {
  const std::size_t nt = times.size();
  const std::size_t nl = round.lifetimes.size();
  if (nt == 0) return {};
  const double t_lo = *std::min_element(times.begin(), times.end());
  const double t_hi = *std::max_element(times.begin(), times.end());

  Stopwatch sw;
  std::vector<SceneInstant> instants;
  instants.reserve(nt);
  for (double t : times) instants.push_back(scene.at(t));

  // keep[l * nt + j]: lifetime l contributes a path at times[j].
  std::vector<PathGeometry> geoms(nl * nt);
  std::vector<char> keep(nl * nt, 0);
  std::vector<PredictionStats> geo_stats(nl);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t li = 0; li < static_cast<std::ptrdiff_t>(nl); ++li) {
    const Lifetime& l = round.lifetimes[li];
    const PathSignature& sig = l.path.signature;
    Aabb box;
    for (std::size_t j = 0; j < nt; ++j) {
      if (!alive(l, times[j])) continue;
      PathGeometry& g = geoms[li * nt + j];
      g = solve_path(sig, instants[j]);
      if (!g.constructed) {
        ++geo_stats[li].dropped_paths;
        continue;
      }
      expand_nodes(box, g);
      keep[li * nt + j] = 1;
    }
    if (l.kind != Existence::Common) continue;
    // The box holds every evaluated node, so these candidates give the same answer as all facets.
    const std::vector<std::uint32_t> candidates = facets_near_swept(box, scene, t_lo, t_hi);
    for (std::size_t j = 0; j < nt; ++j) {
      if (!keep[li * nt + j]) continue;
      if (!occlusion_consistent(sig, geoms[li * nt + j], instants[j], &candidates)) {
        keep[li * nt + j] = 0;
        ++geo_stats[li].blocked_common;
      }
    }
  }
  if (timing) timing->geometry_s += sw.lap();

  std::vector<Snapshot> out(nt);
  std::vector<PredictionStats> field_stats(nt);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(nt); ++j) {
    Snapshot& s = out[j];
    s.time = times[j];
    for (std::size_t li = 0; li < nl; ++li) {
      if (!keep[li * nt + j]) continue;
      s.paths.push_back(field_for(round.lifetimes[li], geoms[li * nt + j], instants[j], field_stats[j]));
    }
    sort_paths(s);
  }
  if (timing) timing->field_s += sw.lap();

  if (stats) {
    for (const auto& s : geo_stats) *stats += s;
    for (const auto& s : field_stats) *stats += s;
  }
  return out;
}

EdrtRun edrt_run(const Scene& scene, const PredictionConfig& config) {
  config.validate();
  Stopwatch total;
  EdrtRun run;
  const int m = config.steps_per_window();

  Snapshot prev = trace_snapshot(scene, config.time_of(0), &run.timing);
  run.rt_times.push_back(prev.time);
  for (int n = 0; n < config.rounds; ++n) {
    Snapshot next = trace_snapshot(scene, config.time_of((n + 1) * m), &run.timing);
    run.rt_times.push_back(next.time);

    Stopwatch sw;
    PredictionRound round = prepare_round(std::move(prev), next, scene, config, &run.stats);
    run.timing.geometry_s += sw.lap();

    std::vector<double> times;
    for (int j = 1; j < m; ++j) times.push_back(config.time_of(n * m + j));
    std::vector<Snapshot> predicted = predict_round_edrt(round, scene, times, &run.stats, &run.timing);

    run.snapshots.push_back(std::move(round.first));
    run.from_rt.push_back(true);
    for (auto& s : predicted) {
      run.snapshots.push_back(std::move(s));
      run.from_rt.push_back(false);
    }
    round.first = Snapshot{};
    round.last = Snapshot{};
    run.rounds.push_back(std::move(round));
    prev = std::move(next);
  }
  if (config.close_last_window) {
    run.snapshots.push_back(std::move(prev));
    run.from_rt.push_back(true);
  }
  run.total_s = total.seconds();
  return run;
}

}  // namespace dynrt
