#pragma once

#include <vector>

#include "tsito/rng.hpp"
#include "tsito/time_scale.hpp"

namespace tsito {

/// Brownian values are stored on a dyadic lattice of this spacing. Lattice
/// values below 2^12 in magnitude subtract and add without rounding, so
/// increments telescope exactly.
inline constexpr double kPathLattice = 0x1.0p-40;

/// A Brownian trajectory observed at the times of a working partition.
/// W(0) = 0 is implicit: when the partition starts after 0, values[0] is a
/// draw from N(0, start).
struct PathSample {
  WorkingPartition partition;
  std::vector<double> values;
  RngConfig provenance;

  const std::vector<double>& times() const { return partition.times; }
  std::size_t size() const { return values.size(); }
  double at(double t) const { return values[partition.index_of(t)]; }
  double increment(std::size_t i) const { return values[i + 1] - values[i]; }
};

/// Increment i (between times[i] and times[i+1]) uses draw i+1; draw 0 is
/// reserved for the initial value, so a path is a pure function of
/// (partition, seed, path_id).
PathSample sample_path(const WorkingPartition& partition, const RngConfig& rng);

/// Observes a fine path at the times of a coarser partition. Every coarse
/// time must be a fine time; the trajectory is the same one.
PathSample restrict_path(const PathSample& fine, const WorkingPartition& coarse);

}  // namespace tsito
