#include "tsito/girsanov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tsito/delta_calculus.hpp"
#include "tsito/summation.hpp"

namespace tsito {
namespace {

MomentCheck check(std::span<const double> samples, double target) {
  const auto s = summarize(samples);
  return {s.mean, s.se, target, std::abs(s.mean - target) <= 3.0 * s.se};
}

std::vector<double> structure_times(const TimeScale& scale, double t0, double t_end) {
  std::vector<double> times{t0, t_end};
  for (const auto& seg : scale.segments()) {
    for (double v : {seg.a, seg.b}) {
      if (v > t0 && v < t_end) times.push_back(v);
    }
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

}  // namespace

std::vector<double> shifted_path(const Expr& a, const PathSample& path) {
  const auto& p = path.partition;
  std::vector<double> b(path.size());
  CompensatedSum drift;
  b[0] = path.values[0];
  for (std::size_t i = 1; i < path.size(); ++i) {
    drift += a.eval(p.times[i - 1], path.values[i - 1]) * (p.times[i] - p.times[i - 1]);
    b[i] = path.values[i] - drift.value();
  }
  return b;
}

double girsanov_density(const Expr& a, const PathSample& path, double t0, double t) {
  const auto av = along_path(a, path);
  std::vector<double> a2(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) a2[i] = av[i] * av[i];
  return std::exp(delta_stochastic_integral(av, path, t0, t) -
                  0.5 * delta_time_integral(a2, path.partition, t0, t));
}

NovikovValue novikov_value(const Expr& a, const WorkingPartition& p, double t) {
  if (a.depends_on(Var::x)) throw std::invalid_argument("novikov_value needs a deterministic A(t)");
  std::vector<double> a2(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double v = a.eval(p.times[i], 0.0);
    a2[i] = v * v;
  }
  NovikovValue nv;
  nv.exponent = delta_time_integral(a2, p, p.start(), t);
  nv.overflow = nv.exponent > 700.0;
  nv.value = nv.overflow ? HUGE_VAL : std::exp(nv.exponent);
  return nv;
}

MeasureChangeReport measure_change_test(const MeasureChangeConfig& config) {
  if (config.paths < 2) throw std::invalid_argument("measure change test needs at least 2 paths");
  const auto p = partition(config.scale, config.t0, config.t_end, config.level);
  const auto marks = structure_times(config.scale, config.t0, config.t_end);
  std::vector<std::size_t> mark_index;
  for (double m : marks) mark_index.push_back(p.index_of(m));
  const std::size_t rows = marks.size() - 1;

  struct PerPath {
    double weight;
    double db_total;
    double dw_total;
    std::vector<double> db;
  };
  const auto per_path = parallel_map(config.paths, [&](std::size_t id) {
    const PathSample path = sample_path(p, {config.seed, id});
    const auto b = shifted_path(config.a, path);
    PerPath r;
    r.weight = girsanov_density(config.a, path, config.t0, config.t_end);
    r.db_total = b.back() - b.front();
    r.dw_total = path.values.back() - path.values.front();
    r.db.resize(rows);
    for (std::size_t k = 0; k < rows; ++k) r.db[k] = b[mark_index[k + 1]] - b[mark_index[k]];
    return r;
  });

  const std::size_t n = config.paths;
  std::vector<double> w(n), wb(n), wb2(n), w2(n), bare(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = per_path[i];
    w[i] = r.weight;
    wb[i] = r.weight * r.db_total;
    wb2[i] = r.weight * r.db_total * r.db_total;
    w2[i] = r.dw_total * r.dw_total;
    bare[i] = r.db_total;
  }
  const double span = config.t_end - config.t0;

  MeasureChangeReport rep;
  rep.level = config.level;
  rep.paths = n;
  rep.seed = config.seed;
  rep.mean_weight = check(w, 1.0);
  rep.weighted_mean = check(wb, 0.0);
  rep.weighted_m2 = check(wb2, span);
  rep.unweighted_m2_w = check(w2, span);
  rep.unweighted_mean_b = check(bare, 0.0);
  rep.min_weight = *std::min_element(w.begin(), w.end());
  if (!config.a.depends_on(Var::x)) rep.novikov = novikov_value(config.a, p, config.t_end);

  bool rows_pass = true;
  for (std::size_t k = 0; k < rows; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& r = per_path[i];
      wb[i] = r.weight * r.db[k];
      wb2[i] = r.weight * r.db[k] * r.db[k];
    }
    IncrementRow row{marks[k], marks[k + 1], check(wb, 0.0), check(wb2, marks[k + 1] - marks[k])};
    rows_pass = rows_pass && row.mean.pass && row.m2.pass;
    rep.increments.push_back(row);
  }
  rep.pass = rep.mean_weight.pass && rep.weighted_mean.pass && rep.weighted_m2.pass && rows_pass;
  return rep;
}

}  // namespace tsito
