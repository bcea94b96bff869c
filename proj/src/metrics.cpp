#include "dynrt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace dynrt {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

ErrorReport evaluate_errors(const std::vector<Snapshot>& reference, const std::vector<Snapshot>& predicted,
                            const std::vector<bool>& evaluate) {
  if (reference.size() != predicted.size()) throw std::invalid_argument("runs cover different positions");
  if (!evaluate.empty() && evaluate.size() != reference.size())
    throw std::invalid_argument("evaluation mask has the wrong length");

  ErrorReport r;
  double g_sum = 0.0;
  std::size_t g_count = 0;
  double e_sum = 0.0;
  std::size_t e_count = 0;
  for (std::size_t k = 0; k < reference.size(); ++k) {
    if (!evaluate.empty() && !evaluate[k]) continue;
    const auto& ref = reference[k].paths;
    const auto& pre = predicted[k].paths;
    if (ref.empty()) {
      ++r.skipped_empty_positions;
      continue;
    }

    PositionError pe;
    pe.position = k;
    pe.n_rt = ref.size();
    // Signatures are unique per snapshot; match through an index sorted by signature.
    std::vector<const Path*> by_sig;
    by_sig.reserve(pre.size());
    for (const auto& p : pre) by_sig.push_back(&p);
    std::sort(by_sig.begin(), by_sig.end(), [](const Path* a, const Path* b) { return a->signature < b->signature; });
    for (const auto& p : ref) {
      auto it = std::lower_bound(by_sig.begin(), by_sig.end(), p.signature,
                                 [](const Path* a, const PathSignature& s) { return a->signature < s; });
      if (it == by_sig.end() || !((*it)->signature == p.signature)) continue;
      ++pe.n_matched;
      const double e_rt = p.field_magnitude();
      if (e_rt < kFieldErrorFloor) {
        ++r.skipped_weak_paths;
        continue;
      }
      pe.field_errors.push_back(std::abs(e_rt - (*it)->field_magnitude()) / e_rt);
    }

    g_sum += static_cast<double>(pe.n_rt - pe.n_matched) / static_cast<double>(pe.n_rt);
    ++g_count;
    if (!pe.field_errors.empty()) {
      double s = 0.0;
      for (double e : pe.field_errors) s += e;
      e_sum += s / static_cast<double>(pe.field_errors.size());
      ++e_count;
    }
    r.positions.push_back(std::move(pe));
  }
  r.epsilon_g = g_count ? g_sum / static_cast<double>(g_count) : 0.0;
  r.epsilon_e = e_count ? e_sum / static_cast<double>(e_count) : 0.0;
  return r;
}

double geometry_error(const std::vector<Snapshot>& reference, const std::vector<Snapshot>& predicted,
                      const std::vector<bool>& evaluate) {
  return evaluate_errors(reference, predicted, evaluate).epsilon_g;
}

double field_error(const std::vector<Snapshot>& reference, const std::vector<Snapshot>& predicted,
                   const std::vector<bool>& evaluate) {
  return evaluate_errors(reference, predicted, evaluate).epsilon_e;
}

namespace {

using Grid = std::map<std::pair<std::size_t, long long>, double>;

Grid power_grid(const std::vector<Snapshot>& run, double bin) {
  Grid g;
  double total = 0.0;
  for (std::size_t k = 0; k < run.size(); ++k) {
    for (const auto& p : run[k].paths) {
      const double w = dbm_to_watts(p.power_dbm);
      g[{k, static_cast<long long>(std::floor(p.delay / bin))}] += w;
      total += w;
    }
  }
  if (!(total > 0.0)) throw std::invalid_argument("run has no received power");
  for (auto& [key, w] : g) w /= total;
  return g;
}

}  // namespace

double similarity_index(const std::vector<Snapshot>& target, const std::vector<Snapshot>& predicted,
                        double delay_bin_s) {
  if (target.size() != predicted.size()) throw std::invalid_argument("runs cover different positions");
  if (!(delay_bin_s > 0.0)) throw std::invalid_argument("delay bin must be positive");
  const Grid a = power_grid(target, delay_bin_s);
  const Grid b = power_grid(predicted, delay_bin_s);

  double l1 = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      l1 += ia->second;
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      l1 += ib->second;
      ++ib;
    } else {
      l1 += std::abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return std::clamp(1.0 - 0.5 * l1, 0.0, 1.0);
}

std::vector<std::vector<PdpEntry>> pdp_extract(const std::vector<Snapshot>& run, std::size_t top) {
  std::vector<std::vector<PdpEntry>> out;
  out.reserve(run.size());
  for (const auto& s : run) {
    std::vector<PdpEntry> e;
    e.reserve(s.paths.size());
    for (const auto& p : s.paths) e.push_back({p.delay, p.power_dbm});
    std::stable_sort(e.begin(), e.end(), [](const PdpEntry& a, const PdpEntry& b) {
      if (a.power_dbm != b.power_dbm) return a.power_dbm > b.power_dbm;
      return a.delay_s < b.delay_s;
    });
    if (e.size() > top) e.resize(top);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace dynrt
