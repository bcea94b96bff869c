#include "dynrt/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "dynrt/io.hpp"
#include "dynrt/metrics.hpp"
#include "dynrt/scenario.hpp"
#include "dynrt/scene_io.hpp"
#include "dynrt/stopwatch.hpp"

namespace dynrt {

namespace {

int whole_ratio(double a, double b, const char* what) {
  const double k = a / b;
  const double r = std::round(k);
  if (!(r >= 1.0) || std::abs(k - r) > 1e-9 * k) throw std::invalid_argument(what);
  return static_cast<int>(r);
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

}  // namespace

Mode parse_mode(const std::string& name) {
  if (name == "rt") return Mode::Rt;
  if (name == "drt") return Mode::Drt;
  if (name == "edrt") return Mode::Edrt;
  if (name == "oracle") return Mode::Oracle;
  throw std::invalid_argument("unknown mode '" + name + "' (rt, drt, edrt, oracle)");
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Rt:
      return "rt";
    case Mode::Drt:
      return "drt";
    case Mode::Edrt:
      return "edrt";
    case Mode::Oracle:
      return "oracle";
  }
  return "?";
}

void RunConfig::validate() const {
  if (!(dt > 0.0) || !(t_c > 0.0) || !(duration > 0.0)) throw std::invalid_argument("t_c, dt and duration must be positive");
  whole_ratio(t_c, dt, "t_c must be an integer multiple of dt");
  whole_ratio(duration, t_c, "duration must be an integer multiple of t_c");
  if (mode == Mode::Drt || mode == Mode::Edrt) prediction().validate();
}

PredictionConfig RunConfig::prediction() const {
  PredictionConfig p;
  p.t_c = t_c;
  p.dt = dt;
  p.rounds = whole_ratio(duration, t_c, "duration must be an integer multiple of t_c");
  p.close_last_window = true;
  return p;
}

std::vector<double> position_times(const RunConfig& config) {
  const int refine = config.mode == Mode::Oracle ? kOracleRefinement : 1;
  const int n = whole_ratio(config.duration, config.dt, "duration must be an integer multiple of dt");
  const PredictionConfig p{config.t_c, config.dt, 1, true};
  const double fine = config.dt / refine;
  std::vector<double> t;
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < refine; ++r) t.push_back(r == 0 ? p.time_of(i) : p.time_of(i) + r * fine);
  t.push_back(p.time_of(n));
  return t;
}

RunResult rt_run(const Scene& scene, const std::vector<double>& times) {
  Stopwatch total;
  RunResult r;
  r.snapshots.reserve(times.size());
  for (double t : times) {
    r.snapshots.push_back(trace_snapshot(scene, t, &r.timing));
    r.from_rt.push_back(true);
    r.rt_times.push_back(t);
  }
  r.total_s = total.seconds();
  return r;
}

RunResult execute(const Scene& scene, const RunConfig& config) {
  config.validate();
  RunResult r;
  switch (config.mode) {
    case Mode::Rt:
    case Mode::Oracle:
      r = rt_run(scene, position_times(config));
      break;
    case Mode::Drt: {
      ModeRun m = drt_run(scene, config.prediction());
      r.snapshots = std::move(m.snapshots);
      r.from_rt = std::move(m.from_rt);
      r.rt_times = std::move(m.rt_times);
      r.timing = m.timing;
      r.total_s = m.total_s;
      r.stats = m.stats;
      break;
    }
    case Mode::Edrt: {
      EdrtRun m = edrt_run(scene, config.prediction());
      r.snapshots = std::move(m.snapshots);
      r.from_rt = std::move(m.from_rt);
      r.rt_times = std::move(m.rt_times);
      r.timing = m.timing;
      r.total_s = m.total_s;
      r.stats = m.stats;
      r.rounds = std::move(m.rounds);
      break;
    }
  }
  r.mode = config.mode;
  return r;
}

Scene load_run_scene(const RunConfig& config) {
  if (!config.scene_path.empty()) return load_scene(config.scene_path);
  V2vScenario p;
  p.seed = config.seed;
  return generate_v2v_scenario(p);
}

nlohmann::json run_manifest(const RunResult& result, const RunConfig& config, const Scene& scene) {
  nlohmann::json j;
  j["mode"] = mode_name(result.mode);
  j["config"] = {{"scene", config.scene_path.empty() ? "generated:v2v" : config.scene_path},
                 {"t_c", config.t_c},
                 {"dt", config.dt},
                 {"duration", config.duration},
                 {"seed", config.seed}};
  j["scene"] = {{"facets", scene.facets().size()}, {"edges", scene.edges().size()}};
  j["positions"] = result.snapshots.size();
  j["rt_times"] = result.rt_times;
  j["stats"] = {{"dropped_paths", result.stats.dropped_paths},
                {"fallback_fields", result.stats.fallback_fields},
                {"blocked_common", result.stats.blocked_common},
                {"unresolved_lifetimes", result.stats.unresolved_lifetimes}};
  return j;
}

void write_artifacts(const RunResult& result, const RunConfig& config, const Scene& scene) {
  const std::filesystem::path dir(config.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  {
    auto f = open_out(dir / "snapshots.csv");
    write_snapshots_csv(f, result.snapshots, scene);
  }
  {
    auto f = open_out(dir / "pdp.csv");
    write_pdp_csv(f, result.snapshots, scene);
  }
  open_out(dir / "timing.json") << timing_json(result.timing, result.total_s).dump(2) << '\n';
  open_out(dir / "manifest.json") << run_manifest(result, config, scene).dump(2) << '\n';
  if (result.mode == Mode::Edrt) {
    auto f = open_out(dir / "lifetimes.csv");
    write_lifetimes_csv(f, result.rounds, scene);
  }
  if (result.mode == Mode::Drt || result.mode == Mode::Edrt) {
    std::vector<double> times;
    for (const auto& s : result.snapshots) times.push_back(s.time);
    const RunResult ref = rt_run(scene, times);
    std::vector<bool> predicted;
    for (bool b : result.from_rt) predicted.push_back(!b);
    const ErrorReport rep = evaluate_errors(ref.snapshots, result.snapshots, predicted);
    std::vector<Snapshot> ref_p;
    std::vector<Snapshot> run_p;
    for (std::size_t k = 0; k < predicted.size(); ++k) {
      if (!predicted[k]) continue;
      ref_p.push_back(ref.snapshots[k]);
      run_p.push_back(result.snapshots[k]);
    }
    const double si = similarity_index(ref_p, run_p);
    open_out(dir / "errors.json") << error_report_json(rep, si).dump(2) << '\n';
  }
}

RunResult run(const RunConfig& config) {
  config.validate();
  const Scene scene = load_run_scene(config);
  RunResult r = execute(scene, config);
  write_artifacts(r, config, scene);
  return r;
}

}  // namespace dynrt
