#include "berezin/rkhs.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "berezin/error.hpp"

namespace berezin {

namespace {

constexpr std::size_t kBaseAngles = 16;
constexpr std::size_t kBaseRadii = 8;

void require_level(int level) {
  if (level < 0 || level > 12) {
    throw Error(ErrorCode::ParamOutOfRange, "grid level must be in [0, 12]");
  }
}

}  // namespace

KernelModel KernelModel::finite(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::ParamOutOfRange, "finite model needs n >= 1");
  return KernelModel(ModelKind::FiniteDiagonal, n, 0.0);
}

KernelModel KernelModel::hardy(std::size_t degree, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw Error(ErrorCode::ParamOutOfRange, "Hardy disk cap must lie in (0, 1)");
  }
  return KernelModel(ModelKind::HardyTruncated, degree + 1, rho);
}

KernelModel KernelModel::bergman(std::size_t degree, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw Error(ErrorCode::ParamOutOfRange, "Bergman disk cap must lie in (0, 1)");
  }
  return KernelModel(ModelKind::BergmanTruncated, degree + 1, rho);
}

KernelModel KernelModel::fock(std::size_t degree, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::ParamOutOfRange, "Fock radius cap must be positive");
  }
  return KernelModel(ModelKind::FockTruncated, degree + 1, radius);
}

bool KernelModel::contains(const KernelPoint& p) const noexcept {
  if (is_finite()) return p.index >= 1 && p.index <= dimension_;
  return std::isfinite(p.z.real()) && std::isfinite(p.z.imag()) &&
         std::abs(p.z) <= cap_ * (1.0 + 1e-12);
}

std::string KernelModel::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case ModelKind::FiniteDiagonal: os << "finite:" << dimension_; break;
    case ModelKind::HardyTruncated: os << "hardy:" << degree() << ':' << cap_; break;
    case ModelKind::BergmanTruncated: os << "bergman:" << degree() << ':' << cap_; break;
    case ModelKind::FockTruncated: os << "fock:" << degree() << ':' << cap_; break;
  }
  return os.str();
}

CVector kernel_coefficients(const KernelModel& model, const KernelPoint& point) {
  if (!model.contains(point)) {
    std::ostringstream os;
    os << "point " << (model.is_finite() ? std::to_string(point.index) : "")
       << (model.is_finite() ? "" : "(" + std::to_string(point.z.real()) + "," +
                                        std::to_string(point.z.imag()) + ")")
       << " outside " << model.describe();
    throw Error(ErrorCode::PointOutOfDomain, os.str());
  }
  const std::size_t dim = model.dimension();
  CVector c(dim);
  if (model.is_finite()) {
    c[point.index - 1] = 1.0;
    return c;
  }
  const cplx zbar = std::conj(point.z);
  cplx power = 1.0;
  double factorial = 1.0;
  for (std::size_t j = 0; j < dim; ++j) {
    if (j > 0) {
      power *= zbar;
      factorial *= static_cast<double>(j);
    }
    switch (model.kind()) {
      case ModelKind::HardyTruncated: c[j] = power; break;
      case ModelKind::BergmanTruncated: c[j] = std::sqrt(static_cast<double>(j + 1)) * power; break;
      case ModelKind::FockTruncated: c[j] = power / std::sqrt(factorial); break;
      case ModelKind::FiniteDiagonal: break;
    }
  }
  return c;
}

CVector normalized_kernel(const KernelModel& model, const KernelPoint& point) {
  CVector c = kernel_coefficients(model, point);
  const double norm = vector_norm(c);
  for (cplx& z : c) z /= norm;
  return c;
}

double grid_radial_step(const KernelModel& model, int level) {
  return model.radius_cap() / static_cast<double>(kBaseRadii << level);
}

double grid_angular_step(int level) {
  return 2.0 * std::numbers::pi / static_cast<double>(kBaseAngles << level);
}

OmegaGrid default_grid(const KernelModel& model, int level) {
  require_level(level);
  OmegaGrid grid;
  grid.level = level;
  if (model.is_finite()) {
    grid.points.reserve(model.dimension());
    for (std::size_t i = 1; i <= model.dimension(); ++i) {
      grid.points.push_back(KernelPoint::at_index(i));
    }
    return grid;
  }
  grid.angles = kBaseAngles << level;
  grid.radii = kBaseRadii << level;
  grid.points.reserve(grid.angles * grid.radii + 1);
  grid.points.push_back(KernelPoint::at(0.0));
  // cap * i / M and 2*pi*j / K are computed the same way at every level, so a
  // coarse point reappears bit-for-bit in every finer grid.
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 1; i <= grid.radii; ++i) {
    const double r = model.radius_cap() * static_cast<double>(i) / static_cast<double>(grid.radii);
    for (std::size_t j = 0; j < grid.angles; ++j) {
      const double theta = two_pi * static_cast<double>(j) / static_cast<double>(grid.angles);
      grid.points.push_back(KernelPoint::at(std::polar(r, theta)));
    }
  }
  return grid;
}

}  // namespace berezin
