#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace berezin {

inline constexpr double kUnusedParam = std::numeric_limits<double>::quiet_NaN();

/// Scalar parameters of an inequality instance; NaN marks "not used".
struct Params {
  double alpha = kUnusedParam;
  double r = kUnusedParam;
  double s = kUnusedParam;
};

/// One evaluated display. `part` distinguishes sub-displays that share a
/// catalog id (e.g. "ii", "r1", "+"); empty when the id has a single display.
struct InequalityResult {
  std::string ineq_id;
  std::string part;
  Params params;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  // rhs - lhs
  double tolerance = 0.0;
  bool satisfied = true;
  bool marginal = false;  // re-evaluated at the tight eigensolver tolerance

  /// "<id>" or "<id>.<part>".
  std::string label() const { return part.empty() ? ineq_id : ineq_id + "." + part; }
  /// gap / max(1, rhs), the quantity aggregated in reports.
  double relative_gap() const { return gap / std::max(1.0, rhs); }
};

/// satisfied <=> lhs <= rhs + tol * max(1, rhs).
inline InequalityResult make_result(std::string id, std::string part, const Params& params,
                                    double lhs, double rhs, double tol) {
  InequalityResult res;
  res.ineq_id = std::move(id);
  res.part = std::move(part);
  res.params = params;
  res.lhs = lhs;
  res.rhs = rhs;
  res.gap = rhs - lhs;
  res.tolerance = tol;
  res.satisfied = std::isfinite(lhs) && std::isfinite(rhs) && lhs <= rhs + tol * std::max(1.0, rhs);
  return res;
}

}  // namespace berezin
