#include "tsito/delta_calculus.hpp"

#include <stdexcept>

#include "tsito/summation.hpp"

namespace tsito {
namespace {

struct Range {
  std::size_t first;
  std::size_t last;
};

Range subinterval_range(const WorkingPartition& p, double t1, double t2) {
  if (t1 > t2) throw std::invalid_argument("integration bounds reversed");
  return {p.index_of(t1), p.index_of(t2)};
}

bool visits(const WorkingPartition& p, std::size_t i, Part part) {
  switch (part) {
    case Part::all: return true;
    case Part::dense: return p.labels[i] == SubintervalClass::dense;
    case Part::gaps: return p.labels[i] == SubintervalClass::gap;
  }
  return true;
}

}  // namespace

double extend_value(const TimeScale& scale, const WorkingPartition& p, std::span<const double> g, double t) {
  return g[p.index_of(scale.sup_le(t))];
}

double delta_time_integral(std::span<const double> g, const WorkingPartition& p, double t1, double t2,
                           Part part) {
  if (g.size() != p.size()) throw std::invalid_argument("integrand length does not match the partition");
  const auto r = subinterval_range(p, t1, t2);
  CompensatedSum acc;
  for (std::size_t i = r.first; i < r.last; ++i) {
    if (visits(p, i, part)) acc += g[i] * (p.times[i + 1] - p.times[i]);
  }
  return acc.value();
}

double delta_stochastic_integral(std::span<const double> g, const PathSample& path, double t1, double t2,
                                 Part part) {
  const auto& p = path.partition;
  if (g.size() != p.size()) throw std::invalid_argument("integrand length does not match the path");
  const auto r = subinterval_range(p, t1, t2);
  CompensatedSum acc;
  for (std::size_t i = r.first; i < r.last; ++i) {
    if (visits(p, i, part)) acc += g[i] * path.increment(i);
  }
  return acc.value();
}

double delta_derivative(const FunctionSpec& fs, const TimeScale& scale, double t, double x) {
  const double next = scale.sigma(t);
  if (next > t) return (fs.f.eval(next, x) - fs.f.eval(t, x)) / (next - t);
  return fs.f_t.eval(t, x);
}

std::vector<double> along_path(const Expr& e, const PathSample& path) {
  return along(e, path.partition, path.values);
}

std::vector<double> along(const Expr& e, const WorkingPartition& p, std::span<const double> xs) {
  if (xs.size() != p.size()) throw std::invalid_argument("process length does not match the partition");
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = e.eval(p.times[i], xs[i]);
  return out;
}

}  // namespace tsito
