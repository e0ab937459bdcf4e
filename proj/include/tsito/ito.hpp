#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "tsito/expr.hpp"
#include "tsito/path.hpp"
#include "tsito/time_scale.hpp"

namespace tsito {

/// Delta-SDE  dX = b(t,X) dt + s(t,X) dW  on a time scale, X(t1) = x0.
struct SdeSpec {
  Expr drift;
  Expr diffusion;
  double x0 = 0.0;
};

struct GapTerm {
  GapInterval gap;
  double value = 0.0;
};

/// Both sides of an Itô formula evaluated on one path.
struct ItoReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // lhs - rhs
  double time_integral = 0.0;
  double stochastic_integral = 0.0;
  double second_order_integral = 0.0;  // already halved
  double correction_sum = 0.0;
  std::vector<GapTerm> corrections;
};

/// Jump correction across one gap for f(t, W):
///   f(s+, W+) - f(s+, W-) - f_x(s-, W-) dW - 1/2 f_xx(s-, W-) (s+ - s-)
double gap_correction(const FunctionSpec& fs, const GapInterval& gap, double w_minus, double w_plus);
double gap_correction(const FunctionSpec& fs, const GapInterval& gap, const PathSample& path);

/// Itô formula for f(t, W_t) between two path times.
ItoReport ito_sides(const FunctionSpec& fs, const TimeScale& scale, const PathSample& path, double t1,
                    double t2);

/// Euler stepping of the delta-SDE along the path, frozen-left on every
/// subinterval. Entries outside [t1, t2] are NaN.
std::vector<double> euler_delta_sde(const SdeSpec& sde, const PathSample& path, double t1, double t2);

/// as_printed evaluates the general formula exactly as stated (b * f^Delta
/// drift integrand, gap brackets in W). substituted applies the f(t, W)
/// formula's structure to X (f^Delta + b f_x + s^2 f_xx / 2, brackets in X).
enum class GeneralVariant { as_printed, substituted };

GeneralVariant parse_variant(std::string_view name);
std::string_view to_string(GeneralVariant v);

ItoReport general_ito_sides(const FunctionSpec& fs, const SdeSpec& sde, const TimeScale& scale,
                            std::span<const double> xs, const PathSample& path, double t1, double t2,
                            GeneralVariant variant);

}  // namespace tsito
