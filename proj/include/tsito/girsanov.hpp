#pragma once

#include <cstdint>
#include <vector>

#include "tsito/expr.hpp"
#include "tsito/harness.hpp"
#include "tsito/path.hpp"
#include "tsito/time_scale.hpp"

namespace tsito {

/// B(s_i) = W(s_i) - int A ds, the drift accumulated from the path's first time.
std::vector<double> shifted_path(const Expr& a, const PathSample& path);

/// exp(int A dW - 1/2 int A^2 ds) over [t0, t].
double girsanov_density(const Expr& a, const PathSample& path, double t0, double t);

struct NovikovValue {
  double exponent = 0.0;  // int_0^t A^2 ds
  double value = 1.0;     // exp(exponent), +inf when overflowing
  bool overflow = false;  // exponent > 700
};

/// exp(int A^2 ds) over the partition. A must not depend on x.
NovikovValue novikov_value(const Expr& a, const WorkingPartition& p, double t);

/// Estimate of a target moment with its standard error.
struct MomentCheck {
  double estimate = 0.0;
  double se = 0.0;
  double target = 0.0;
  bool pass = false;  // |estimate - target| <= 3 se
};

struct IncrementRow {
  double from = 0.0;
  double to = 0.0;
  MomentCheck mean;  // weighted E[dB], target 0
  MomentCheck m2;    // weighted E[dB^2], target to - from
};

struct MeasureChangeConfig {
  Expr a;
  TimeScale scale = TimeScale::canonicalize({piece::Interval{0.0, 1.0}});
  double t0 = 0.0;
  double t_end = 0.0;
  int level = 6;
  std::size_t paths = 100000;
  std::uint64_t seed = 0;
};

struct MeasureChangeReport {
  int level = 0;
  std::size_t paths = 0;
  std::uint64_t seed = 0;
  MomentCheck mean_weight;        // E[G], target 1
  MomentCheck weighted_mean;      // E[G (B(T) - B(t0))], target 0
  MomentCheck weighted_m2;        // E[G (B(T) - B(t0))^2], target T - t0
  MomentCheck unweighted_m2_w;    // E[(W(T) - W(t0))^2], confirms the second-moment target
  MomentCheck unweighted_mean_b;  // negative control: fails when A is not 0
  std::vector<IncrementRow> increments;
  double min_weight = 0.0;
  NovikovValue novikov;
  bool pass = false;  // weighted checks, mean weight and every increment row
};

/// Increments are reported between consecutive structure times of the scale
/// in [t0, T]: t0, T and every segment endpoint.
MeasureChangeReport measure_change_test(const MeasureChangeConfig& config);

}  // namespace tsito
