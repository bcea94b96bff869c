#include "dynrt/rt.hpp"

#include <algorithm>

#include "dynrt/field.hpp"
#include "dynrt/stopwatch.hpp"

namespace dynrt {

namespace {

bool reflection_pair_possible(std::uint32_t f1, std::uint32_t f2, const SceneInstant& at) {
  // Same arithmetic as solve_path, without allocations; a cheap reject for most pairs.
  const Vec3 m1 = mirror_point(at.tx(), at, f1);
  const Vec3 m2 = mirror_point(m1, at, f2);
  const auto p2 = segment_plane_intersection(m2, at.rx(), at, f2);
  if (!p2 || point_in_facet_unchecked(*p2, at, f2).distance < 0.0) return false;
  const auto p1 = segment_plane_intersection(m1, *p2, at, f1);
  return p1 && point_in_facet_unchecked(*p1, at, f1).distance >= 0.0;
}

std::optional<ClassifiedPath> classify(PathSignature base, const SceneInstant& at) {
  PathGeometry g = solve_path(base, at);
  return classify_base_path(base, std::move(g), at);
}

void sort_classified(std::vector<ClassifiedPath>& v) {
  std::sort(v.begin(), v.end(),
            [](const ClassifiedPath& a, const ClassifiedPath& b) { return a.signature < b.signature; });
}

}  // namespace

std::size_t candidate_count(const Scene& scene) {
  const std::size_t f = scene.facets().size();
  return 1 + f + f * f + scene.edges().size();
}

std::optional<ClassifiedPath> trace_candidate(std::size_t index, const SceneInstant& at) {
  const Scene& scene = at.scene();
  const std::size_t nf = scene.facets().size();
  if (index == 0) return classify(PathSignature{}, at);
  index -= 1;

  if (index < nf) {
    const auto f = static_cast<std::uint32_t>(index);
    const auto p = segment_plane_intersection(mirror_point(at.tx(), at, f), at.rx(), at, f);
    if (!p || point_in_facet_unchecked(*p, at, f).distance < 0.0) return std::nullopt;
    return classify(PathSignature{{{Mechanism::Reflection, f}}}, at);
  }
  index -= nf;

  if (index < nf * nf) {
    const auto f1 = static_cast<std::uint32_t>(index / nf);
    const auto f2 = static_cast<std::uint32_t>(index % nf);
    if (f1 == f2 || !reflection_pair_possible(f1, f2, at)) return std::nullopt;
    return classify(PathSignature{{{Mechanism::Reflection, f1}, {Mechanism::Reflection, f2}}}, at);
  }
  index -= nf * nf;

  if (index < scene.edges().size())
    return classify(PathSignature{{{Mechanism::Diffraction, static_cast<std::uint32_t>(index)}}}, at);
  return std::nullopt;
}

std::vector<ClassifiedPath> find_paths(const SceneInstant& at) {
  const auto n = static_cast<std::ptrdiff_t>(candidate_count(at.scene()));
  std::vector<ClassifiedPath> out;
#pragma omp parallel
  {
    std::vector<ClassifiedPath> local;
#pragma omp for schedule(dynamic, 64) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (auto c = trace_candidate(static_cast<std::size_t>(i), at)) local.push_back(std::move(*c));
    }
#pragma omp critical(dynrt_find_paths)
    for (auto& c : local) out.push_back(std::move(c));
  }
  sort_classified(out);
  return out;
}

std::vector<ClassifiedPath> find_paths_serial(const SceneInstant& at) {
  const std::size_t n = candidate_count(at.scene());
  std::vector<ClassifiedPath> out;
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = trace_candidate(i, at)) out.push_back(std::move(*c));
  sort_classified(out);
  return out;
}

Snapshot compute_fields(std::vector<ClassifiedPath> paths, const SceneInstant& at) {
  Snapshot s;
  s.time = at.time();
  s.paths.resize(paths.size());
  const auto n = static_cast<std::ptrdiff_t>(paths.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    s.paths[i] = make_path(paths[i].signature, paths[i].geometry, at);
  return s;
}

Snapshot compute_fields_serial(std::vector<ClassifiedPath> paths, const SceneInstant& at) {
  Snapshot s;
  s.time = at.time();
  s.paths.reserve(paths.size());
  for (const auto& p : paths) s.paths.push_back(make_path(p.signature, p.geometry, at));
  return s;
}

Snapshot trace_snapshot(const Scene& scene, double t, StageTiming* timing) {
  Stopwatch sw;
  const SceneInstant at = scene.at(t);
  auto paths = find_paths(at);
  const double geometry = sw.lap();
  Snapshot s = compute_fields(std::move(paths), at);
  if (timing) {
    timing->geometry_s += geometry;
    timing->field_s += sw.lap();
  }
  return s;
}

Snapshot trace_snapshot_serial(const Scene& scene, double t) {
  const SceneInstant at = scene.at(t);
  return compute_fields_serial(find_paths_serial(at), at);
}

}  // namespace dynrt
