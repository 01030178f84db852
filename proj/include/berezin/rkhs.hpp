#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "berezin/matrix.hpp"

namespace berezin {

enum class ModelKind { FiniteDiagonal, HardyTruncated, BergmanTruncated, FockTruncated };

inline constexpr double kDefaultDiskCap = 0.95;
inline constexpr double kDefaultFockCap = 3.0;
inline constexpr std::size_t kDefaultDegree = 15;

/// A point of the parameter set: a 1-based index for the finite model, a
/// complex coordinate for the function-space models.
struct KernelPoint {
  std::size_t index = 0;
  cplx z{};

  static KernelPoint at_index(std::size_t i) { return {i, {}}; }
  static KernelPoint at(cplx w) { return {0, w}; }

  friend bool operator==(const KernelPoint&, const KernelPoint&) = default;
};

/// Immutable descriptor of a finite-dimensional RKHS model. Coordinates are
/// taken in the monomial orthonormal basis of each space.
class KernelModel {
 public:
  static KernelModel finite(std::size_t n);
  static KernelModel hardy(std::size_t degree = kDefaultDegree, double rho = kDefaultDiskCap);
  static KernelModel bergman(std::size_t degree = kDefaultDegree, double rho = kDefaultDiskCap);
  static KernelModel fock(std::size_t degree = kDefaultDegree, double radius = kDefaultFockCap);

  ModelKind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dimension_; }
  /// Truncation degree N (dimension N+1); 0 for the finite model.
  std::size_t degree() const noexcept { return is_finite() ? 0 : dimension_ - 1; }
  /// Disk radius cap (rho or R); 0 for the finite model.
  double radius_cap() const noexcept { return cap_; }
  bool is_finite() const noexcept { return kind_ == ModelKind::FiniteDiagonal; }

  bool contains(const KernelPoint& p) const noexcept;

  /// Short form used by the CLI, e.g. "finite:4" or "hardy:15:0.95".
  std::string describe() const;

  friend bool operator==(const KernelModel&, const KernelModel&) = default;

 private:
  KernelModel(ModelKind kind, std::size_t dimension, double cap)
      : kind_(kind), dimension_(dimension), cap_(cap) {}

  ModelKind kind_ = ModelKind::FiniteDiagonal;
  std::size_t dimension_ = 1;
  double cap_ = 0.0;
};

struct OmegaGrid {
  std::vector<KernelPoint> points;
  int level = 0;
  std::size_t angles = 0;  // angular divisions (continuous models)
  std::size_t radii = 0;   // radial divisions (continuous models)
};

/// Unit-norm coordinate vector of k_lambda / ||k_lambda||. Throws
/// PointOutOfDomain for points outside the model's parameter set.
CVector normalized_kernel(const KernelModel& model, const KernelPoint& point);

/// Un-normalized kernel coordinates (so <f, k_lambda> = f(lambda)).
CVector kernel_coefficients(const KernelModel& model, const KernelPoint& point);

/// Finite model: the indices 1..n. Continuous models: the origin followed by
/// a polar grid of (8 * 2^level) radii in (0, cap] times (16 * 2^level)
/// angles. Grids are nested across levels.
OmegaGrid default_grid(const KernelModel& model, int level);

/// Grid spacing in radius and angle at a given level.
double grid_radial_step(const KernelModel& model, int level);
double grid_angular_step(int level);

}  // namespace berezin
