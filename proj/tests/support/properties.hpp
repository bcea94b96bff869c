#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

struct PropertyResult {
  std::string name;
  bool pass = true;
  std::size_t checks = 0;
  std::string detail;  // first failure, or a summary figure
};

// Reciprocity, image-method angle equality, energy monotonicity, SI scaling invariance
// and the partition property over `scenes` random scenes from random_scene(first_seed + i).
std::vector<PropertyResult> run_property_suite(int scenes = 100, std::uint64_t first_seed = 1);

}  // namespace oracle
