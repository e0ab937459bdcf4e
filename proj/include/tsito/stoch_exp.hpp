#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "tsito/expr.hpp"
#include "tsito/path.hpp"
#include "tsito/time_scale.hpp"

namespace tsito {

class RegressivityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A factor 1 + A dW closer to zero than this counts as a regressivity violation.
inline constexpr double kRegressivityTolerance = 1e-12;

struct RegressivityEntry {
  GapInterval gap;
  double factor = 0.0;   // 1 + A(s-) (W(s+) - W(s-)), what the product needs
  double printed = 0.0;  // (1 + A(s-)) (W(s+) - W(s-)), the literal condition
  bool pass = true;
};

// A is evaluated as A(t, W_t); an expression without x is deterministic.

std::vector<RegressivityEntry> regressivity_check(const Expr& a, const PathSample& path,
                                                  std::span<const GapInterval> gaps);

/// sum A(s-) dW_k - 1/2 sum A(s-)^2 (s+ - s-) over the gaps inside (t0, t).
double correction_D(const Expr& a, const PathSample& path, std::span<const GapInterval> gaps, double t0,
                    double t);

/// prod [1 + A(s-) dW_k] over the gaps inside (t0, t). Throws RegressivityError.
double gap_product_U(const Expr& a, const PathSample& path, std::span<const GapInterval> gaps, double t0,
                     double t);

/// exp(int A dW - 1/2 int A^2 ds - D).
double exponential_V(const Expr& a, const TimeScale& scale, const PathSample& path, double t0, double t);

/// Closed form U * V.
double stoch_exp_closed(const Expr& a, const TimeScale& scale, const PathSample& path, double t0, double t);

/// X_i = X_{i-1} (1 + A_{i-1} dW_i), X(t0) = 1.
double stoch_exp_recursive(const Expr& a, const PathSample& path, double t0, double t);

/// Closed form U(s) V(s) at every path time in [t0, t]; index 0 is t0.
std::vector<double> stoch_exp_trajectory(const Expr& a, const PathSample& path, double t0, double t);

/// E(t) - 1 - sum A(s_{i-1}) E(s_{i-1}) dW_i for the closed-form trajectory.
double integral_equation_residual(const Expr& a, const PathSample& path, double t0, double t);

struct ExponentialReport {
  double U = 1.0;
  double D = 0.0;
  double V = 1.0;
  double closed_form = 1.0;
  double recursive = 1.0;
  double rel_error = 0.0;
  std::size_t regressivity_failures = 0;
};

ExponentialReport exponential_report(const Expr& a, const TimeScale& scale, const PathSample& path, double t0,
                                     double t);

}  // namespace tsito
