#pragma once

#include <optional>
#include <vector>

#include "berezin/matrix.hpp"
#include "berezin/result.hpp"
#include "berezin/rkhs.hpp"

namespace berezin {

struct BerezinEvaluation {
  KernelPoint point;
  cplx value;
};

/// Supremum estimate. On finite models the value is attained by an enumerated
/// point (or pair) and `exact` is true; on continuous models it is a grid plus
/// local-refinement lower bound of the true supremum.
struct SupEstimate {
  double value = 0.0;
  KernelPoint point;                  // argmax (lambda)
  std::optional<KernelPoint> second;  // mu, for the Berezin norm
  bool exact = false;
  int level = 0;
};

/// Number of multistart seeds refined on continuous models.
inline constexpr std::size_t kRefineStarts = 5;
/// Golden-section iterations per coordinate per alternation round.
inline constexpr int kGoldenIterations = 60;
inline constexpr int kRefineRounds = 3;

/// Angular samples used by numerical_radius before golden-section refinement.
inline constexpr std::size_t kRadiusAngles = 256;

BerezinEvaluation berezin_symbol(const KernelModel& model, const ComplexMatrix& a,
                                 const KernelPoint& point);

/// One evaluation per grid point, in grid order. Grid points are evaluated in
/// parallel.
std::vector<BerezinEvaluation> berezin_set_sample(const KernelModel& model, const ComplexMatrix& a,
                                                  const OmegaGrid& grid);

SupEstimate berezin_number(const KernelModel& model, const ComplexMatrix& a, int level = 0);
SupEstimate berezin_norm(const KernelModel& model, const ComplexMatrix& a, int level = 0);

/// w(A) = max over theta in [0, pi) of ||Re(e^{i theta} A)||.
double numerical_radius(const ComplexMatrix& a);

/// Checks ||A||_ber = ber(A) for positive A: lhs = ||A||_ber, rhs = ber(A),
/// satisfied when the difference is within tol * max(1, ber(A)). Throws
/// NotPositive unless is_positive(A, 1e-8).
InequalityResult verify_positive_equality(const KernelModel& model, const ComplexMatrix& a,
                                          double tol = 1e-8, int level = 0);

/// Serial reference versions of the grid kernels; the parallel versions above
/// must agree with them exactly.
namespace reference {

std::vector<BerezinEvaluation> berezin_set_sample(const KernelModel& model, const ComplexMatrix& a,
                                                  const OmegaGrid& grid);
SupEstimate grid_berezin_number(const KernelModel& model, const ComplexMatrix& a,
                                const OmegaGrid& grid);
SupEstimate grid_berezin_norm(const KernelModel& model, const ComplexMatrix& a,
                              const OmegaGrid& grid);

}  // namespace reference

/// Parallel grid maxima (no refinement), exposed for testing and benchmarks.
SupEstimate grid_berezin_number(const KernelModel& model, const ComplexMatrix& a,
                                const OmegaGrid& grid);
SupEstimate grid_berezin_norm(const KernelModel& model, const ComplexMatrix& a,
                              const OmegaGrid& grid);

}  // namespace berezin
