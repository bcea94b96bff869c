#include "dynrt/io.hpp"

#include <cstdio>
#include <string>

namespace dynrt {

namespace {

// Fixed formats keep the files byte-identical across runs.
std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

void write_snapshots_csv(std::ostream& out, const std::vector<Snapshot>& run, const Scene& scene) {
  out << "time_s,path_index,signature,delay_ns,power_dbm,n_interactions\n";
  for (const auto& s : run) {
    for (std::size_t i = 0; i < s.paths.size(); ++i) {
      const Path& p = s.paths[i];
      out << fmt("%.6f", s.time) << ',' << i << ',' << encode_signature(p.signature, scene) << ','
          << fmt("%.6f", p.delay * 1e9) << ',' << fmt("%.6f", p.power_dbm) << ',' << p.signature.steps.size()
          << '\n';
    }
  }
}

void write_lifetimes_csv(std::ostream& out, const std::vector<PredictionRound>& rounds, const Scene& scene) {
  out << "signature,birth_s,death_s,classification\n";
  for (const auto& r : rounds)
    for (const auto& l : r.lifetimes)
      out << encode_signature(l.path.signature, scene) << ',' << fmt("%.6f", l.birth_time) << ','
          << fmt("%.6f", l.death_time) << ',' << existence_name(l.kind) << '\n';
}

void write_pdp_csv(std::ostream& out, const std::vector<Snapshot>& run, const Scene& scene, std::size_t top) {
  out << "position_index,distance_m,delay_ns,power_dbm\n";
  const auto pdp = pdp_extract(run, top);
  for (std::size_t k = 0; k < run.size(); ++k) {
    const SceneInstant at = scene.at(run[k].time);
    const std::string d = fmt("%.4f", distance(at.tx(), at.rx()));
    for (const auto& e : pdp[k])
      out << k << ',' << d << ',' << fmt("%.6f", e.delay_s * 1e9) << ',' << fmt("%.6f", e.power_dbm) << '\n';
  }
}

nlohmann::json error_report_json(const ErrorReport& report, double si) {
  nlohmann::json j;
  j["epsilon_g"] = report.epsilon_g;
  j["epsilon_e"] = report.epsilon_e;
  j["si"] = si;
  j["skipped_empty_positions"] = report.skipped_empty_positions;
  j["skipped_weak_paths"] = report.skipped_weak_paths;
  auto& pos = j["positions"] = nlohmann::json::array();
  for (const auto& p : report.positions)
    pos.push_back({{"position", p.position},
                   {"n_rt", p.n_rt},
                   {"n_matched", p.n_matched},
                   {"field_errors", p.field_errors}});
  return j;
}

nlohmann::json timing_json(const StageTiming& timing, double total_s) {
  return {{"geometry_s", timing.geometry_s}, {"field_s", timing.field_s}, {"total_s", total_s}};
}

}  // namespace dynrt
