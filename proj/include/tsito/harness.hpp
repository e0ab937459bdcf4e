#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <thread>
#include <type_traits>
#include <vector>

#include "tsito/expr.hpp"
#include "tsito/path.hpp"
#include "tsito/time_scale.hpp"

namespace tsito {

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double se = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
};

/// Fixed-order compensated reduction; the result depends only on the values.
Summary summarize(std::span<const double> values);

unsigned worker_count();

/// Runs fn(i) for i in [0, n) across worker threads. Results land in slot i,
/// so the output never depends on scheduling.
template <class Fn>
auto parallel_map(std::size_t n, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<R> out(n);
  const std::size_t workers = std::min<std::size_t>(worker_count(), n == 0 ? 1 : n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

/// V_n = sum over dense subintervals of f(s, W_s) [(dW)^2 - ds] on the path's partition.
double lemma2_statistic(const Expr& f, const PathSample& path, double t1, double t2);

enum class StudyTarget { time_integral, stoch_integral, lemma2, ito_residual, exp_error };

StudyTarget parse_target(std::string_view name);
std::string_view to_string(StudyTarget target);

struct StudyConfig {
  StudyTarget target = StudyTarget::ito_residual;
  TimeScale scale = TimeScale::canonicalize({piece::Interval{0.0, 1.0}});
  double t1 = 0.0;
  double t2 = 0.0;
  std::vector<int> levels{6, 8, 10, 12, 14};
  std::size_t paths = 10000;
  std::uint64_t seed = 0;
  Expr f;  // integrand g, Itô test function f, or lemma2 weight
  Expr a;  // exp_error only
  // Exact value for time_integral / stoch_integral errors; the finest level otherwise.
  std::optional<double> reference;
};

struct ConvergenceRow {
  int level = 0;
  double mean = 0.0;
  double rms = 0.0;
  double variance = 0.0;
  std::optional<double> bound;
  std::size_t paths = 0;
};

/// Per-level statistics. time_integral and stoch_integral tabulate the error
/// against the reference, lemma2 tabulates V_n with the variance bound
/// 2^-(n-1) max f^2 sum ds, ito_residual the Itô residual, exp_error the
/// relative gap between Euler recursion and closed form. All levels see the
/// same trajectories: paths are drawn at the finest level and restricted.
struct ConvergenceTable {
  StudyTarget target = StudyTarget::ito_residual;
  std::vector<ConvergenceRow> rows;
};

ConvergenceTable convergence_study(const StudyConfig& config);

}  // namespace tsito
