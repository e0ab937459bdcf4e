#include "tsito/path.hpp"

#include <cmath>
#include <stdexcept>

namespace tsito {
namespace {

double snap(double v) { return std::nearbyint(v / kPathLattice) * kPathLattice; }

}  // namespace

PathSample sample_path(const WorkingPartition& partition, const RngConfig& rng) {
  if (partition.times.empty()) throw std::invalid_argument("sample_path: empty partition");
  PathSample path{partition, {}, rng};
  const auto& t = partition.times;
  path.values.resize(t.size());
  path.values[0] = t[0] > 0.0 ? snap(std::sqrt(t[0]) * normal_draw(rng, 0)) : 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double dt = t[i] - t[i - 1];
    path.values[i] = snap(path.values[i - 1] + std::sqrt(dt) * normal_draw(rng, i));
  }
  return path;
}

PathSample restrict_path(const PathSample& fine, const WorkingPartition& coarse) {
  PathSample out{coarse, {}, fine.provenance};
  out.values.reserve(coarse.size());
  std::size_t j = 0;
  for (double t : coarse.times) {
    while (j < fine.times().size() && fine.times()[j] < t) ++j;
    if (j == fine.times().size() || fine.times()[j] != t) {
      throw std::invalid_argument("restrict_path: coarse time " + std::to_string(t) + " missing from fine path");
    }
    out.values.push_back(fine.values[j]);
  }
  return out;
}

}  // namespace tsito
