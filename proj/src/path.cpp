#include "dynrt/path.hpp"

#include <algorithm>

namespace dynrt {

char mechanism_code(Mechanism m) {
  switch (m) {
    case Mechanism::Reflection:
      return 'R';
    case Mechanism::Diffraction:
      return 'D';
    case Mechanism::Penetration:
      return 'P';
  }
  return '?';
}

int PathSignature::count(Mechanism m) const {
  return static_cast<int>(
      std::count_if(steps.begin(), steps.end(), [m](const SignatureStep& s) { return s.mechanism == m; }));
}

std::vector<SignatureStep> PathSignature::base_steps() const {
  std::vector<SignatureStep> out;
  for (const auto& s : steps)
    if (s.mechanism != Mechanism::Penetration) out.push_back(s);
  return out;
}

std::string encode_signature(const PathSignature& sig, const Scene& scene) {
  if (sig.is_los()) return "LOS";
  std::string out;
  for (const auto& s : sig.steps) {
    if (!out.empty()) out += '|';
    out += mechanism_code(s.mechanism);
    out += ':';
    out += s.mechanism == Mechanism::Diffraction ? scene.edges()[s.geometry].id
                                                 : scene.facets()[s.geometry].id;
  }
  return out;
}

double Path::field_magnitude() const {
  return std::sqrt(std::norm(field[0]) + std::norm(field[1]));
}

void sort_paths(Snapshot& s) {
  std::sort(s.paths.begin(), s.paths.end(),
            [](const Path& a, const Path& b) { return a.signature < b.signature; });
}

}  // namespace dynrt
