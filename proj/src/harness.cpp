#include "tsito/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "tsito/delta_calculus.hpp"
#include "tsito/ito.hpp"
#include "tsito/stoch_exp.hpp"
#include "tsito/summation.hpp"

namespace tsito {

Summary summarize(std::span<const double> values) {
  Summary s;
  s.n = values.size();
  if (s.n == 0) return s;
  s.mean = compensated_sum(values) / static_cast<double>(s.n);
  if (s.n > 1) {
    CompensatedSum sq;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.variance = sq.value() / static_cast<double>(s.n - 1);
  }
  s.se = std::sqrt(s.variance / static_cast<double>(s.n));
  s.ci95_low = s.mean - 1.959963984540054 * s.se;
  s.ci95_high = s.mean + 1.959963984540054 * s.se;
  return s;
}

unsigned worker_count() {
  if (const char* env = std::getenv("TSITO_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double lemma2_statistic(const Expr& f, const PathSample& path, double t1, double t2) {
  const auto& p = path.partition;
  const auto first = p.index_of(t1);
  const auto last = p.index_of(t2);
  CompensatedSum acc;
  for (std::size_t i = first; i < last; ++i) {
    if (p.labels[i] != SubintervalClass::dense) continue;
    const double dw = path.increment(i);
    acc += f.eval(p.times[i], path.values[i]) * (dw * dw - (p.times[i + 1] - p.times[i]));
  }
  return acc.value();
}

StudyTarget parse_target(std::string_view name) {
  if (name == "time_integral") return StudyTarget::time_integral;
  if (name == "stoch_integral") return StudyTarget::stoch_integral;
  if (name == "lemma2") return StudyTarget::lemma2;
  if (name == "ito_residual") return StudyTarget::ito_residual;
  if (name == "exp_error") return StudyTarget::exp_error;
  throw std::invalid_argument("unknown convergence target '" + std::string(name) + "'");
}

std::string_view to_string(StudyTarget target) {
  switch (target) {
    case StudyTarget::time_integral: return "time_integral";
    case StudyTarget::stoch_integral: return "stoch_integral";
    case StudyTarget::lemma2: return "lemma2";
    case StudyTarget::ito_residual: return "ito_residual";
    case StudyTarget::exp_error: return "exp_error";
  }
  return "";
}

namespace {

struct PathStats {
  std::vector<double> values;  // one per level
  std::vector<double> max_f2;  // lemma2 only
};

}  // namespace

ConvergenceTable convergence_study(const StudyConfig& config) {
  if (config.levels.empty()) throw std::invalid_argument("convergence study needs at least one level");
  if (!std::is_sorted(config.levels.begin(), config.levels.end()) ||
      std::adjacent_find(config.levels.begin(), config.levels.end()) != config.levels.end()) {
    throw std::invalid_argument("levels must be strictly increasing");
  }
  if (config.paths == 0) throw std::invalid_argument("convergence study needs at least one path");

  std::vector<WorkingPartition> partitions;
  for (int n : config.levels) partitions.push_back(partition(config.scale, config.t1, config.t2, n));
  const auto& finest = partitions.back();
  const FunctionSpec fs = FunctionSpec::from(config.f);
  const std::size_t nlev = partitions.size();

  auto per_path = parallel_map(config.paths, [&](std::size_t id) {
    const PathSample fine = sample_path(finest, {config.seed, id});
    PathStats st;
    st.values.resize(nlev);
    st.max_f2.resize(nlev, 0.0);
    for (std::size_t l = 0; l < nlev; ++l) {
      const PathSample path = l + 1 == nlev ? fine : restrict_path(fine, partitions[l]);
      double v = 0.0;
      switch (config.target) {
        case StudyTarget::time_integral:
          v = delta_time_integral(along_path(config.f, path), path.partition, config.t1, config.t2);
          break;
        case StudyTarget::stoch_integral:
          v = delta_stochastic_integral(along_path(config.f, path), path, config.t1, config.t2);
          break;
        case StudyTarget::lemma2: {
          v = lemma2_statistic(config.f, path, config.t1, config.t2);
          const auto fv = along_path(config.f, path);
          for (std::size_t i = 0; i + 1 < fv.size(); ++i) {
            if (path.partition.labels[i] == SubintervalClass::dense) {
              st.max_f2[l] = std::max(st.max_f2[l], fv[i] * fv[i]);
            }
          }
          break;
        }
        case StudyTarget::ito_residual:
          v = ito_sides(fs, config.scale, path, config.t1, config.t2).residual;
          break;
        case StudyTarget::exp_error: {
          const auto r = exponential_report(config.a, config.scale, path, config.t1, config.t2);
          v = r.rel_error;
          break;
        }
      }
      st.values[l] = v;
    }
    if (config.target == StudyTarget::time_integral || config.target == StudyTarget::stoch_integral) {
      const double ref = config.reference ? *config.reference : st.values.back();
      for (auto& v : st.values) v -= ref;
    }
    return st;
  });

  ConvergenceTable table{config.target, {}};
  std::vector<double> column(config.paths);
  std::vector<double> squares(config.paths);
  for (std::size_t l = 0; l < nlev; ++l) {
    double max_f2 = 0.0;
    for (std::size_t id = 0; id < config.paths; ++id) {
      column[id] = per_path[id].values[l];
      squares[id] = column[id] * column[id];
      max_f2 = std::max(max_f2, per_path[id].max_f2[l]);
    }
    const auto s = summarize(column);
    ConvergenceRow row;
    row.level = config.levels[l];
    row.mean = s.mean;
    row.rms = std::sqrt(compensated_sum(squares) / static_cast<double>(config.paths));
    row.variance = s.variance;
    row.paths = config.paths;
    if (config.target == StudyTarget::lemma2) {
      const auto& p = partitions[l];
      const double dense_length = delta_time_integral(std::vector<double>(p.size(), 1.0), p, config.t1,
                                                      config.t2, Part::dense);
      row.bound = std::ldexp(1.0, -(config.levels[l] - 1)) * max_f2 * dense_length;
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace tsito
