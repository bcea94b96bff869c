#pragma once

#include <ostream>
#include <vector>

#include <json.hpp>

#include "dynrt/edrt.hpp"
#include "dynrt/metrics.hpp"
#include "dynrt/path.hpp"
#include "dynrt/rt.hpp"
#include "dynrt/scene.hpp"

namespace dynrt {

// Snapshot CSV: time_s,path_index,signature,delay_ns,power_dbm,n_interactions. Rows follow
// snapshot order, then the snapshot's signature order; path_index restarts at 0 per snapshot.
void write_snapshots_csv(std::ostream& out, const std::vector<Snapshot>& run, const Scene& scene);

// Lifetimes CSV: signature,birth_s,death_s,classification; rounds in time order, each
// round as stored (common, dying, born).
void write_lifetimes_csv(std::ostream& out, const std::vector<PredictionRound>& rounds, const Scene& scene);

// PDP CSV: position_index,distance_m,delay_ns,power_dbm with the strongest paths first.
// distance_m is the Tx-Rx separation at the snapshot time.
void write_pdp_csv(std::ostream& out, const std::vector<Snapshot>& run, const Scene& scene,
                   std::size_t top = 10);

nlohmann::json error_report_json(const ErrorReport& report, double si);
nlohmann::json timing_json(const StageTiming& timing, double total_s);

}  // namespace dynrt
