#include "tsito/ito.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tsito/delta_calculus.hpp"
#include "tsito/summation.hpp"

namespace tsito {

double gap_correction(const FunctionSpec& fs, const GapInterval& gap, double w_minus, double w_plus) {
  const double sm = gap.s_minus;
  const double sp = gap.s_plus;
  return fs.f.eval(sp, w_plus) - fs.f.eval(sp, w_minus) - fs.f_x.eval(sm, w_minus) * (w_plus - w_minus) -
         0.5 * fs.f_xx.eval(sm, w_minus) * (sp - sm);
}

double gap_correction(const FunctionSpec& fs, const GapInterval& gap, const PathSample& path) {
  return gap_correction(fs, gap, path.at(gap.s_minus), path.at(gap.s_plus));
}

ItoReport ito_sides(const FunctionSpec& fs, const TimeScale& scale, const PathSample& path, double t1,
                    double t2) {
  const auto& p = path.partition;
  const auto first = p.index_of(t1);
  const auto last = p.index_of(t2);

  CompensatedSum time_acc;
  CompensatedSum stoch_acc;
  CompensatedSum second_acc;
  for (std::size_t i = first; i < last; ++i) {
    const double s = p.times[i];
    const double w = path.values[i];
    const double ds = p.times[i + 1] - s;
    time_acc += delta_derivative(fs, scale, s, w) * ds;
    stoch_acc += fs.f_x.eval(s, w) * path.increment(i);
    second_acc += fs.f_xx.eval(s, w) * ds;
  }

  ItoReport r;
  CompensatedSum corr_acc;
  for (const auto& gap : scale.gaps_between(t1, t2)) {
    const double c = gap_correction(fs, gap, path);
    r.corrections.push_back({gap, c});
    corr_acc += c;
  }
  r.time_integral = time_acc.value();
  r.stochastic_integral = stoch_acc.value();
  r.second_order_integral = 0.5 * second_acc.value();
  r.correction_sum = corr_acc.value();
  r.lhs = fs.f.eval(t2, path.values[last]) - fs.f.eval(t1, path.values[first]);
  r.rhs = r.time_integral + r.stochastic_integral + r.second_order_integral + r.correction_sum;
  r.residual = r.lhs - r.rhs;
  return r;
}

std::vector<double> euler_delta_sde(const SdeSpec& sde, const PathSample& path, double t1, double t2) {
  const auto& p = path.partition;
  const auto first = p.index_of(t1);
  const auto last = p.index_of(t2);
  std::vector<double> xs(p.size(), std::numeric_limits<double>::quiet_NaN());
  xs[first] = sde.x0;
  for (std::size_t i = first; i < last; ++i) {
    const double s = p.times[i];
    const double x = xs[i];
    xs[i + 1] = x + sde.drift.eval(s, x) * (p.times[i + 1] - s) + sde.diffusion.eval(s, x) * path.increment(i);
  }
  return xs;
}

GeneralVariant parse_variant(std::string_view name) {
  if (name == "as_printed") return GeneralVariant::as_printed;
  if (name == "substituted") return GeneralVariant::substituted;
  throw std::invalid_argument("unknown variant '" + std::string(name) + "' (as_printed|substituted)");
}

std::string_view to_string(GeneralVariant v) {
  return v == GeneralVariant::as_printed ? "as_printed" : "substituted";
}

ItoReport general_ito_sides(const FunctionSpec& fs, const SdeSpec& sde, const TimeScale& scale,
                            std::span<const double> xs, const PathSample& path, double t1, double t2,
                            GeneralVariant variant) {
  const auto& p = path.partition;
  if (xs.size() != p.size()) throw std::invalid_argument("X path and W path have different times");
  const auto first = p.index_of(t1);
  const auto last = p.index_of(t2);
  for (std::size_t i = first; i <= last; ++i) {
    if (std::isnan(xs[i])) throw std::invalid_argument("X path is not defined on the whole window");
  }

  CompensatedSum time_acc;
  CompensatedSum stoch_acc;
  CompensatedSum second_acc;
  for (std::size_t i = first; i < last; ++i) {
    const double s = p.times[i];
    const double x = xs[i];
    const double ds = p.times[i + 1] - s;
    const double b = sde.drift.eval(s, x);
    const double sig = sde.diffusion.eval(s, x);
    const double fd = delta_derivative(fs, scale, s, x);
    if (variant == GeneralVariant::as_printed) {
      time_acc += b * fd * ds;
    } else {
      time_acc += (fd + b * fs.f_x.eval(s, x)) * ds;
    }
    stoch_acc += sig * fs.f_x.eval(s, x) * path.increment(i);
    second_acc += sig * sig * fs.f_xx.eval(s, x) * ds;
  }

  ItoReport r;
  CompensatedSum corr_acc;
  for (const auto& gap : scale.gaps_between(t1, t2)) {
    const double sm = gap.s_minus;
    const double sp = gap.s_plus;
    double c = 0.0;
    if (variant == GeneralVariant::as_printed) {
      const double wm = path.at(sm);
      const double wp = path.at(sp);
      const double sig = sde.diffusion.eval(sm, wm);
      c = fs.f.eval(sp, wp) - fs.f.eval(sp, wm) - sig * fs.f_x.eval(sm, wm) * (wp - wm) -
          0.5 * sig * sig * fs.f_xx.eval(sm, wm) * (sp - sm);
    } else {
      const double xm = xs[p.index_of(sm)];
      const double xp = xs[p.index_of(sp)];
      const double sig = sde.diffusion.eval(sm, xm);
      c = fs.f.eval(sp, xp) - fs.f.eval(sp, xm) - fs.f_x.eval(sm, xm) * (xp - xm) -
          0.5 * fs.f_xx.eval(sm, xm) * sig * sig * (sp - sm);
    }
    r.corrections.push_back({gap, c});
    corr_acc += c;
  }
  r.time_integral = time_acc.value();
  r.stochastic_integral = stoch_acc.value();
  r.second_order_integral = 0.5 * second_acc.value();
  r.correction_sum = corr_acc.value();
  r.lhs = fs.f.eval(t2, xs[last]) - fs.f.eval(t1, xs[first]);
  r.rhs = r.time_integral + r.stochastic_integral + r.second_order_integral + r.correction_sum;
  r.residual = r.lhs - r.rhs;
  return r;
}

}  // namespace tsito
