#include "berezin/berezin.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "berezin/error.hpp"
#include "berezin/linalg.hpp"

namespace berezin {

namespace {

// Grids smaller than this are evaluated on the calling thread; the fuzz
// harness already parallelizes over trials.
constexpr std::size_t kParallelGridThreshold = 256;

void require_model_operator(const KernelModel& model, const ComplexMatrix& a) {
  require_square(a, model.dimension(), "operator vs model dimension");
}

// Normalized kernels for every grid point and their images under A.
struct KernelImages {
  std::vector<CVector> kernels;
  std::vector<CVector> images;
};

KernelImages kernel_images(const KernelModel& model, const ComplexMatrix& a,
                           const OmegaGrid& grid, bool parallel) {
  const auto count = static_cast<std::ptrdiff_t>(grid.points.size());
  KernelImages out;
  out.kernels.resize(grid.points.size());
  out.images.resize(grid.points.size());
#pragma omp parallel for schedule(static) if (parallel && grid.points.size() >= kParallelGridThreshold)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    out.kernels[idx] = normalized_kernel(model, grid.points[idx]);
    out.images[idx] = a * std::span<const cplx>(out.kernels[idx]);
  }
  return out;
}

struct Candidate {
  double value;
  std::size_t first;
  std::size_t second;
};

// Strict ordering: larger value first, then earlier grid position.
bool better(const Candidate& x, const Candidate& y) {
  if (x.value != y.value) return x.value > y.value;
  if (x.first != y.first) return x.first < y.first;
  return x.second < y.second;
}

void keep_top(std::vector<Candidate>& top, const Candidate& c, std::size_t k) {
  if (top.size() == k && !better(c, top.back())) return;
  top.insert(std::upper_bound(top.begin(), top.end(), c, better), c);
  if (top.size() > k) top.pop_back();
}

std::vector<double> symbol_moduli(const KernelImages& ki, bool parallel) {
  const auto count = static_cast<std::ptrdiff_t>(ki.kernels.size());
  std::vector<double> values(ki.kernels.size());
#pragma omp parallel for schedule(static) if (parallel && ki.kernels.size() >= kParallelGridThreshold)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    values[idx] = std::abs(inner(ki.images[idx], ki.kernels[idx]));
  }
  return values;
}

std::vector<Candidate> top_points(const std::vector<double>& values, std::size_t k) {
  std::vector<Candidate> top;
  for (std::size_t j = 0; j < values.size(); ++j) keep_top(top, {values[j], j, 0}, k);
  return top;
}

// Per-row top-k pairs, merged serially so the result does not depend on the
// thread schedule.
std::vector<Candidate> top_pairs(const KernelImages& ki, std::size_t k, bool parallel) {
  const std::size_t g = ki.kernels.size();
  std::vector<std::vector<Candidate>> rows(g);
  const auto count = static_cast<std::ptrdiff_t>(g);
#pragma omp parallel for schedule(dynamic, 8) if (parallel && g >= kParallelGridThreshold / 8)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    const auto lam = static_cast<std::size_t>(j);
    std::vector<Candidate> top;
    for (std::size_t mu = 0; mu < g; ++mu) {
      keep_top(top, {std::abs(inner(ki.images[lam], ki.kernels[mu])), lam, mu}, k);
    }
    rows[lam] = std::move(top);
  }
  std::vector<Candidate> merged;
  for (const auto& row : rows)
    for (const Candidate& c : row) keep_top(merged, c, k);
  return merged;
}

struct GoldenResult {
  double x;
  double fx;
};

// Golden-section maximization on [lo, hi]; returns the best point evaluated,
// never worse than the incumbent (x0, f0).
GoldenResult golden_max(const std::function<double(double)>& f, double lo, double hi, double x0,
                        double f0, int iterations) {
  constexpr double inv_phi = 0.6180339887498949;
  GoldenResult best{x0, f0};
  if (!(hi > lo)) return best;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  auto consider = [&](double x, double fx) {
    if (fx > best.fx) best = {x, fx};
  };
  consider(c, fc);
  consider(d, fd);
  for (int it = 0; it < iterations; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
  }
  return best;
}

struct Polar {
  double r;
  double theta;
};

Polar to_polar(cplx z) { return {std::abs(z), std::arg(z)}; }

// Alternating golden-section refinement over the polar coordinates of one or
// two points. Brackets are tied to the grid level that produced the start so
// that the refined value of a given start never changes between calls.
double refine(const KernelModel& model, int start_level, std::vector<Polar>& coords,
              const std::function<double(const std::vector<Polar>&)>& objective) {
  const double dr = grid_radial_step(model, start_level);
  const double dt = grid_angular_step(start_level);
  const double cap = model.radius_cap();
  double best = objective(coords);
  for (int round = 0; round < kRefineRounds; ++round) {
    for (std::size_t k = 0; k < coords.size(); ++k) {
      {
        const double r0 = coords[k].r;
        auto f = [&](double r) {
          std::vector<Polar> trial = coords;
          trial[k].r = r;
          return objective(trial);
        };
        const GoldenResult g = golden_max(f, std::max(0.0, r0 - dr), std::min(cap, r0 + dr), r0,
                                          best, kGoldenIterations);
        coords[k].r = g.x;
        best = g.fx;
      }
      {
        const double t0 = coords[k].theta;
        auto f = [&](double t) {
          std::vector<Polar> trial = coords;
          trial[k].theta = t;
          return objective(trial);
        };
        const GoldenResult g = golden_max(f, t0 - dt, t0 + dt, t0, best, kGoldenIterations);
        coords[k].theta = g.x;
        best = g.fx;
      }
    }
  }
  return best;
}

KernelPoint from_polar(const Polar& p) { return KernelPoint::at(std::polar(p.r, p.theta)); }

double symbol_modulus_at(const KernelModel& model, const ComplexMatrix& a, const Polar& p) {
  const CVector k = normalized_kernel(model, from_polar(p));
  return std::abs(inner(a * std::span<const cplx>(k), k));
}

double pair_modulus_at(const KernelModel& model, const ComplexMatrix& a, const Polar& lam,
                       const Polar& mu) {
  const CVector kl = normalized_kernel(model, from_polar(lam));
  const CVector km = normalized_kernel(model, from_polar(mu));
  return std::abs(inner(a * std::span<const cplx>(kl), km));
}

SupEstimate number_on_grid(const KernelModel& model, const ComplexMatrix& a, const OmegaGrid& grid,
                           bool parallel) {
  const KernelImages ki = kernel_images(model, a, grid, parallel);
  const std::vector<Candidate> top = top_points(symbol_moduli(ki, parallel), 1);
  SupEstimate est;
  est.exact = model.is_finite();
  est.level = grid.level;
  if (!top.empty()) {
    est.value = top.front().value;
    est.point = grid.points[top.front().first];
  }
  return est;
}

SupEstimate norm_on_grid(const KernelModel& model, const ComplexMatrix& a, const OmegaGrid& grid,
                         bool parallel) {
  const KernelImages ki = kernel_images(model, a, grid, parallel);
  const std::vector<Candidate> top = top_pairs(ki, 1, parallel);
  SupEstimate est;
  est.exact = model.is_finite();
  est.level = grid.level;
  if (!top.empty()) {
    est.value = top.front().value;
    est.point = grid.points[top.front().first];
    est.second = grid.points[top.front().second];
  }
  return est;
}

// Largest |eigenvalue| of Re(e^{i theta} A).
double rotated_real_part_norm(const ComplexMatrix& a, double theta) {
  const ComplexMatrix h = hermitian_part(a * std::polar(1.0, theta));
  const std::vector<double> lambda = herm_eigenvalues(h);
  return std::max(std::abs(lambda.front()), std::abs(lambda.back()));
}

}  // namespace

BerezinEvaluation berezin_symbol(const KernelModel& model, const ComplexMatrix& a,
                                 const KernelPoint& point) {
  require_model_operator(model, a);
  const CVector k = normalized_kernel(model, point);
  return {point, inner(a * std::span<const cplx>(k), k)};
}

std::vector<BerezinEvaluation> berezin_set_sample(const KernelModel& model, const ComplexMatrix& a,
                                                  const OmegaGrid& grid) {
  require_model_operator(model, a);
  const KernelImages ki = kernel_images(model, a, grid, true);
  std::vector<BerezinEvaluation> out(grid.points.size());
  const auto count = static_cast<std::ptrdiff_t>(grid.points.size());
#pragma omp parallel for schedule(static) if (grid.points.size() >= kParallelGridThreshold)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    out[idx] = {grid.points[idx], inner(ki.images[idx], ki.kernels[idx])};
  }
  return out;
}

SupEstimate grid_berezin_number(const KernelModel& model, const ComplexMatrix& a,
                                const OmegaGrid& grid) {
  require_model_operator(model, a);
  return number_on_grid(model, a, grid, true);
}

SupEstimate grid_berezin_norm(const KernelModel& model, const ComplexMatrix& a,
                              const OmegaGrid& grid) {
  require_model_operator(model, a);
  return norm_on_grid(model, a, grid, true);
}

SupEstimate berezin_number(const KernelModel& model, const ComplexMatrix& a, int level) {
  require_model_operator(model, a);
  const OmegaGrid grid = default_grid(model, level);
  if (model.is_finite()) return number_on_grid(model, a, grid, true);

  const KernelImages ki = kernel_images(model, a, grid, true);
  const std::vector<double> values = symbol_moduli(ki, true);
  const std::vector<Candidate> top = top_points(values, 1);
  SupEstimate est;
  est.level = level;
  est.value = top.front().value;
  est.point = grid.points[top.front().first];

  auto objective = [&](const std::vector<Polar>& c) { return symbol_modulus_at(model, a, c[0]); };
  // Starts chosen on every coarser grid too, each refined with its own
  // bracket, so the estimate is non-decreasing in the level.
  for (int lvl = 0; lvl <= level; ++lvl) {
    const OmegaGrid coarse = lvl == level ? grid : default_grid(model, lvl);
    const std::vector<double> coarse_values =
        lvl == level ? values : symbol_moduli(kernel_images(model, a, coarse, true), true);
    for (const Candidate& c : top_points(coarse_values, kRefineStarts)) {
      std::vector<Polar> coords{to_polar(coarse.points[c.first].z)};
      const double v = refine(model, lvl, coords, objective);
      if (v > est.value) {
        est.value = v;
        est.point = from_polar(coords[0]);
      }
    }
  }
  return est;
}

SupEstimate berezin_norm(const KernelModel& model, const ComplexMatrix& a, int level) {
  require_model_operator(model, a);
  const OmegaGrid grid = default_grid(model, level);
  if (model.is_finite()) return norm_on_grid(model, a, grid, true);

  SupEstimate est;
  est.level = level;
  auto objective = [&](const std::vector<Polar>& c) {
    return pair_modulus_at(model, a, c[0], c[1]);
  };
  bool first = true;
  for (int lvl = 0; lvl <= level; ++lvl) {
    const OmegaGrid coarse = lvl == level ? grid : default_grid(model, lvl);
    const std::vector<Candidate> top =
        top_pairs(kernel_images(model, a, coarse, true), kRefineStarts, true);
    if (lvl == level && (first || top.front().value > est.value)) {
      est.value = top.front().value;
      est.point = coarse.points[top.front().first];
      est.second = coarse.points[top.front().second];
      first = false;
    }
    for (const Candidate& c : top) {
      std::vector<Polar> coords{to_polar(coarse.points[c.first].z),
                                to_polar(coarse.points[c.second].z)};
      const double v = refine(model, lvl, coords, objective);
      if (first || v > est.value) {
        est.value = v;
        est.point = from_polar(coords[0]);
        est.second = from_polar(coords[1]);
        first = false;
      }
    }
  }
  return est;
}

double numerical_radius(const ComplexMatrix& a) {
  if (!a.is_square()) throw Error(ErrorCode::DimensionMismatch, "numerical_radius: not square");
  if (a.empty()) return 0.0;
  const double step = std::numbers::pi / static_cast<double>(kRadiusAngles);
  std::vector<double> values(kRadiusAngles);
  for (std::size_t k = 0; k < kRadiusAngles; ++k) {
    values[k] = rotated_real_part_norm(a, step * static_cast<double>(k));
  }
  double best = *std::max_element(values.begin(), values.end());
  auto f = [&](double theta) { return rotated_real_part_norm(a, theta); };
  constexpr double inv_phi = 0.6180339887498949;
  // Bracket width 2*step shrinks by inv_phi per iteration; stop below 1e-10.
  const int iterations =
      static_cast<int>(std::ceil(std::log(1e-10 / (2.0 * step)) / std::log(inv_phi)));
  for (const Candidate& c : top_points(values, 4)) {
    const double theta = step * static_cast<double>(c.first);
    best = std::max(best,
                    golden_max(f, theta - step, theta + step, theta, c.value, iterations).fx);
  }
  return best;
}

InequalityResult verify_positive_equality(const KernelModel& model, const ComplexMatrix& a,
                                          double tol, int level) {
  require_model_operator(model, a);
  if (!is_positive(a, 1e-8)) {
    throw Error(ErrorCode::NotPositive, "verify_positive_equality: operator is not positive");
  }
  const double ber = berezin_number(model, a, level).value;
  const double norm = berezin_norm(model, a, level).value;
  InequalityResult res = make_result("prop1", "", Params{}, norm, ber, tol);
  res.satisfied = std::abs(norm - ber) <= tol * std::max(1.0, ber);
  return res;
}

namespace reference {

std::vector<BerezinEvaluation> berezin_set_sample(const KernelModel& model, const ComplexMatrix& a,
                                                  const OmegaGrid& grid) {
  require_model_operator(model, a);
  std::vector<BerezinEvaluation> out;
  out.reserve(grid.points.size());
  for (const KernelPoint& p : grid.points) {
    const CVector k = normalized_kernel(model, p);
    out.push_back({p, inner(a * std::span<const cplx>(k), k)});
  }
  return out;
}

SupEstimate grid_berezin_number(const KernelModel& model, const ComplexMatrix& a,
                                const OmegaGrid& grid) {
  require_model_operator(model, a);
  return number_on_grid(model, a, grid, false);
}

SupEstimate grid_berezin_norm(const KernelModel& model, const ComplexMatrix& a,
                              const OmegaGrid& grid) {
  require_model_operator(model, a);
  return norm_on_grid(model, a, grid, false);
}

}  // namespace reference

}  // namespace berezin
