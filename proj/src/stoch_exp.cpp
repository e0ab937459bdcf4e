#include "tsito/stoch_exp.hpp"

#include <cmath>
#include <string>

#include "tsito/delta_calculus.hpp"
#include "tsito/summation.hpp"

namespace tsito {
namespace {

bool inside(const GapInterval& g, double t0, double t) { return g.s_minus >= t0 && g.s_plus <= t; }

}  // namespace

std::vector<RegressivityEntry> regressivity_check(const Expr& a, const PathSample& path,
                                                  std::span<const GapInterval> gaps) {
  std::vector<RegressivityEntry> out;
  out.reserve(gaps.size());
  for (const auto& g : gaps) {
    const double wm = path.at(g.s_minus);
    const double dw = path.at(g.s_plus) - wm;
    const double av = a.eval(g.s_minus, wm);
    RegressivityEntry e{g, 1.0 + av * dw, (1.0 + av) * dw, true};
    e.pass = std::abs(e.factor) > kRegressivityTolerance;
    out.push_back(e);
  }
  return out;
}

double correction_D(const Expr& a, const PathSample& path, std::span<const GapInterval> gaps, double t0,
                    double t) {
  CompensatedSum jumps;
  CompensatedSum lengths;
  for (const auto& g : gaps) {
    if (!inside(g, t0, t)) continue;
    const double wm = path.at(g.s_minus);
    const double av = a.eval(g.s_minus, wm);
    jumps += av * (path.at(g.s_plus) - wm);
    lengths += (av * av) * (g.s_plus - g.s_minus);
  }
  return jumps.value() - 0.5 * lengths.value();
}

double gap_product_U(const Expr& a, const PathSample& path, std::span<const GapInterval> gaps, double t0,
                     double t) {
  double u = 1.0;
  for (const auto& g : gaps) {
    if (!inside(g, t0, t)) continue;
    const double wm = path.at(g.s_minus);
    const double factor = 1.0 + a.eval(g.s_minus, wm) * (path.at(g.s_plus) - wm);
    if (std::abs(factor) <= kRegressivityTolerance) {
      throw RegressivityError("A is not regressive on the gap (" + std::to_string(g.s_minus) + ", " +
                              std::to_string(g.s_plus) + ")");
    }
    u *= factor;
  }
  return u;
}

double exponential_V(const Expr& a, const TimeScale& scale, const PathSample& path, double t0, double t) {
  const auto av = along_path(a, path);
  std::vector<double> a2(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) a2[i] = av[i] * av[i];
  const double stoch = delta_stochastic_integral(av, path, t0, t);
  const double time = delta_time_integral(a2, path.partition, t0, t);
  const auto gaps = scale.gaps_between(t0, t);
  const double d = correction_D(a, path, gaps, t0, t);
  return std::exp(stoch - 0.5 * time - d);
}

double stoch_exp_closed(const Expr& a, const TimeScale& scale, const PathSample& path, double t0, double t) {
  const auto gaps = scale.gaps_between(t0, t);
  return gap_product_U(a, path, gaps, t0, t) * exponential_V(a, scale, path, t0, t);
}

double stoch_exp_recursive(const Expr& a, const PathSample& path, double t0, double t) {
  const auto& p = path.partition;
  const auto first = p.index_of(t0);
  const auto last = p.index_of(t);
  double x = 1.0;
  for (std::size_t i = first; i < last; ++i) {
    x *= 1.0 + a.eval(p.times[i], path.values[i]) * path.increment(i);
  }
  return x;
}

std::vector<double> stoch_exp_trajectory(const Expr& a, const PathSample& path, double t0, double t) {
  const auto& p = path.partition;
  const auto first = p.index_of(t0);
  const auto last = p.index_of(t);
  // Between partition times V only moves on dense subintervals and U only on gaps.
  std::vector<double> out;
  out.reserve(last - first + 1);
  out.push_back(1.0);
  double u = 1.0;
  CompensatedSum stoch;
  CompensatedSum time;
  for (std::size_t i = first; i < last; ++i) {
    const double av = a.eval(p.times[i], path.values[i]);
    if (p.labels[i] == SubintervalClass::gap) {
      const double factor = 1.0 + av * path.increment(i);
      if (std::abs(factor) <= kRegressivityTolerance) {
        throw RegressivityError("A is not regressive on the gap starting at " + std::to_string(p.times[i]));
      }
      u *= factor;
    } else {
      stoch += av * path.increment(i);
      time += (av * av) * (p.times[i + 1] - p.times[i]);
    }
    out.push_back(u * std::exp(stoch.value() - 0.5 * time.value()));
  }
  return out;
}

double integral_equation_residual(const Expr& a, const PathSample& path, double t0, double t) {
  const auto e = stoch_exp_trajectory(a, path, t0, t);
  const auto& p = path.partition;
  const auto first = p.index_of(t0);
  CompensatedSum acc;
  for (std::size_t k = 0; k + 1 < e.size(); ++k) {
    const std::size_t i = first + k;
    acc += a.eval(p.times[i], path.values[i]) * e[k] * path.increment(i);
  }
  return e.back() - 1.0 - acc.value();
}

ExponentialReport exponential_report(const Expr& a, const TimeScale& scale, const PathSample& path, double t0,
                                     double t) {
  ExponentialReport r;
  const auto gaps = scale.gaps_between(t0, t);
  for (const auto& e : regressivity_check(a, path, gaps)) {
    if (!e.pass) ++r.regressivity_failures;
  }
  r.D = correction_D(a, path, gaps, t0, t);
  r.V = exponential_V(a, scale, path, t0, t);
  r.recursive = stoch_exp_recursive(a, path, t0, t);
  if (r.regressivity_failures > 0) {
    r.U = 0.0;
    r.closed_form = 0.0;
    r.rel_error = std::abs(r.recursive);
    return r;
  }
  r.U = gap_product_U(a, path, gaps, t0, t);
  r.closed_form = r.U * r.V;
  r.rel_error = std::abs(r.closed_form - r.recursive) / std::abs(r.closed_form);
  return r;
}

}  // namespace tsito
