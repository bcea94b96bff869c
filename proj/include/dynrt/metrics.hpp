#pragma once

#include <cstddef>
#include <vector>

#include "dynrt/path.hpp"

namespace dynrt {

// Reference paths weaker than this (V/m) are left out of the field error.
inline constexpr double kFieldErrorFloor = 1e-15;

struct PositionError {
  std::size_t position = 0;  // index into the runs
  std::size_t n_rt = 0;      // reference paths
  std::size_t n_matched = 0; // predicted paths whose signature matches a reference path
  std::vector<double> field_errors;  // relative magnitude error per matched path
};

struct ErrorReport {
  double epsilon_g = 0.0;
  double epsilon_e = 0.0;
  std::vector<PositionError> positions;  // evaluated (predicted) positions only
  std::size_t skipped_empty_positions = 0;  // N_RT = 0
  std::size_t skipped_weak_paths = 0;       // |E_RT| below kFieldErrorFloor
};

// Geometry and field error over the positions where `evaluate` is true (all positions
// if it is empty). Runs must have the same number of positions.
ErrorReport evaluate_errors(const std::vector<Snapshot>& reference, const std::vector<Snapshot>& predicted,
                            const std::vector<bool>& evaluate = {});

double geometry_error(const std::vector<Snapshot>& reference, const std::vector<Snapshot>& predicted,
                      const std::vector<bool>& evaluate = {});
double field_error(const std::vector<Snapshot>& reference, const std::vector<Snapshot>& predicted,
                   const std::vector<bool>& evaluate = {});

// 1 - half the L1 distance between the two runs' power distributions over the joint
// (position, delay bin) grid, each normalized to unit total power. Throws
// std::invalid_argument if either run has no power or the position counts differ.
double similarity_index(const std::vector<Snapshot>& target, const std::vector<Snapshot>& predicted,
                        double delay_bin_s = 1e-9);

struct PdpEntry {
  double delay_s = 0.0;
  double power_dbm = 0.0;
};

// Per position, the strongest paths sorted by decreasing power.
std::vector<std::vector<PdpEntry>> pdp_extract(const std::vector<Snapshot>& run, std::size_t top = 10);

double dbm_to_watts(double dbm);

}  // namespace dynrt
