#pragma once

#include <span>
#include <vector>

#include "tsito/expr.hpp"
#include "tsito/path.hpp"
#include "tsito/time_scale.hpp"

namespace tsito {

/// Which subintervals of the working partition a left-endpoint sum visits.
enum class Part { all, dense, gaps };

/// Value of the extension g~(t) = g(sup[0,t]_T).
template <class Fn>
double extend_value(const TimeScale& scale, Fn&& g, double t) {
  return g(scale.sup_le(t));
}

/// Same, for g tabulated at the times of a partition that contains sup[0,t]_T.
double extend_value(const TimeScale& scale, const WorkingPartition& p, std::span<const double> g, double t);

/// Left-endpoint sum of g over the partition between t1 and t2. Exact on gap
/// subintervals, where the extended integrand is constant.
double delta_time_integral(std::span<const double> g, const WorkingPartition& p, double t1, double t2,
                           Part part = Part::all);

/// Left-endpoint Itô sum of g against the path increments between t1 and t2.
double delta_stochastic_integral(std::span<const double> g, const PathSample& path, double t1, double t2,
                                 Part part = Part::all);

/// Hilger derivative in t: the forward difference quotient at right-scattered
/// points and f_t at right-dense ones (including max T, where sigma(t) = t).
double delta_derivative(const FunctionSpec& fs, const TimeScale& scale, double t, double x);

/// e(t_i, W(t_i)) at every path time.
std::vector<double> along_path(const Expr& e, const PathSample& path);

/// e(t_i, X_i) for an arbitrary process tabulated on the path times.
std::vector<double> along(const Expr& e, const WorkingPartition& p, std::span<const double> xs);

}  // namespace tsito
