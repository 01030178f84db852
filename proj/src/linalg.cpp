#include "berezin/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "berezin/error.hpp"

namespace berezin {

namespace {

thread_local double t_jacobi_tolerance = kDefaultJacobiTolerance;

double asymmetry_frobenius(const ComplexMatrix& h) {
  const std::size_t n = h.rows();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += 4.0 * h(i, i).imag() * h(i, i).imag();
    for (std::size_t j = i + 1; j < n; ++j) acc += 2.0 * std::norm(h(i, j) - std::conj(h(j, i)));
  }
  return std::sqrt(acc);
}

// Row-major working copy of (H + H*)/2 diagonalized in place. The complex
// rotation first rotates the phase of a_pq onto the positive real axis, then
// applies the classical real Jacobi rotation.
void jacobi(std::size_t n, std::vector<cplx>& a, std::vector<cplx>* v) {
  auto at = [n](std::vector<cplx>& m, std::size_t i, std::size_t j) -> cplx& {
    return m[i * n + j];
  };
  double fro = 0.0;
  for (const cplx& z : a) fro += std::norm(z);
  fro = std::sqrt(fro);
  const double threshold = ScopedJacobiTolerance::current() * fro;

  for (int sweep = 0; sweep <= kJacobiMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * std::norm(at(a, i, j));
    off = std::sqrt(off);
    if (off <= threshold) return;
    if (sweep == kJacobiMaxSweeps) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = at(a, p, q);
        const double g = std::abs(apq);
        if (g == 0.0) continue;
        const cplx phase = apq / g;
        const double app = at(a, p, p).real();
        const double aqq = at(a, q, q).real();
        const double theta = (aqq - app) / (2.0 * g);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const cplx cphase = std::conj(phase);

        for (std::size_t r = 0; r < n; ++r) {
          const cplx xp = at(a, r, p);
          const cplx xq = at(a, r, q) * cphase;
          at(a, r, p) = c * xp - s * xq;
          at(a, r, q) = s * xp + c * xq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const cplx yp = at(a, p, r);
          const cplx yq = at(a, q, r) * phase;
          at(a, p, r) = c * yp - s * yq;
          at(a, q, r) = s * yp + c * yq;
        }
        at(a, p, q) = 0.0;
        at(a, q, p) = 0.0;
        at(a, p, p) = app - t * g;
        at(a, q, q) = aqq + t * g;

        if (v != nullptr) {
          for (std::size_t r = 0; r < n; ++r) {
            const cplx xp = at(*v, r, p);
            const cplx xq = at(*v, r, q) * cphase;
            at(*v, r, p) = c * xp - s * xq;
            at(*v, r, q) = s * xp + c * xq;
          }
        }
      }
    }
  }
  throw Error(ErrorCode::NoConvergence,
              "Jacobi did not converge in " + std::to_string(kJacobiMaxSweeps) + " sweeps");
}

std::vector<cplx> prepare(const ComplexMatrix& h) {
  if (!h.is_square()) throw Error(ErrorCode::DimensionMismatch, "herm_eig: matrix not square");
  const double asym = asymmetry_frobenius(h);
  const double scale = std::max(1.0, frobenius_norm(h));
  if (asym > 1e-8 * scale) {
    throw Error(ErrorCode::NotHermitian,
                "||H - H*||_F = " + std::to_string(asym) + " exceeds 1e-8 * scale");
  }
  const ComplexMatrix sym = hermitian_part(h);
  return {sym.data().begin(), sym.data().end()};
}

// V diag(f) V* with an exactly Hermitian result.
ComplexMatrix reconstruct(const HermitianEigenSystem& es, const std::vector<double>& f) {
  const std::size_t n = es.eigenvalues.size();
  const ComplexMatrix& v = es.eigenvectors;
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      cplx acc{};
      for (std::size_t k = 0; k < n; ++k) {
        if (f[k] == 0.0) continue;
        acc += f[k] * v(i, k) * std::conj(v(j, k));
      }
      if (i == j) {
        out(i, i) = acc.real();
      } else {
        out(i, j) = acc;
        out(j, i) = std::conj(acc);
      }
    }
  }
  return out;
}

double max_modulus(const std::vector<double>& values) {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::abs(x));
  return m;
}

// Maps eigenvalues of a positive semidefinite matrix through x -> x^exponent,
// clamping round-off negatives and treating exponent 0 as the support
// indicator.
std::vector<double> power_spectrum(const std::vector<double>& lambda, double exponent,
                                   double support_scale) {
  const double cut = kSupportCutoff * std::max(1.0, support_scale);
  std::vector<double> f(lambda.size());
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    const double x = std::max(lambda[k], 0.0);
    if (exponent == 0.0) {
      f[k] = x > cut ? 1.0 : 0.0;
    } else {
      f[k] = std::pow(x, exponent);
    }
  }
  return f;
}

void require_psd_spectrum(const std::vector<double>& lambda, const char* what) {
  const double scale = std::max(1.0, max_modulus(lambda));
  if (!lambda.empty() && lambda.front() < -1e-10 * scale) {
    throw Error(ErrorCode::NotPositive, std::string(what) + ": eigenvalue " +
                                            std::to_string(lambda.front()) +
                                            " below clamp threshold");
  }
}

}  // namespace

ScopedJacobiTolerance::ScopedJacobiTolerance(double tolerance)
    : previous_(t_jacobi_tolerance) {
  t_jacobi_tolerance = tolerance;
}

ScopedJacobiTolerance::~ScopedJacobiTolerance() { t_jacobi_tolerance = previous_; }

double ScopedJacobiTolerance::current() noexcept { return t_jacobi_tolerance; }

HermitianEigenSystem herm_eig(const ComplexMatrix& h) {
  const std::size_t n = h.rows();
  std::vector<cplx> a = prepare(h);
  ComplexMatrix ident = ComplexMatrix::identity(n);
  std::vector<cplx> v(ident.data().begin(), ident.data().end());
  jacobi(n, a, &v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x * n + x].real() < a[y * n + y].real();
  });

  HermitianEigenSystem es;
  es.eigenvalues.resize(n);
  es.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    es.eigenvalues[k] = a[src * n + src].real();
    for (std::size_t r = 0; r < n; ++r) es.eigenvectors(r, k) = v[r * n + src];
  }
  return es;
}

std::vector<double> herm_eigenvalues(const ComplexMatrix& h) {
  const std::size_t n = h.rows();
  std::vector<cplx> a = prepare(h);
  jacobi(n, a, nullptr);
  std::vector<double> lambda(n);
  for (std::size_t k = 0; k < n; ++k) lambda[k] = a[k * n + k].real();
  std::sort(lambda.begin(), lambda.end());
  return lambda;
}

ComplexMatrix abs_power(const ComplexMatrix& a, double p) {
  if (!a.is_square()) throw Error(ErrorCode::DimensionMismatch, "abs_power: matrix not square");
  if (!(p >= 0.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::ParamOutOfRange, "abs_power: exponent must be finite and >= 0");
  }
  const ComplexMatrix gram = hermitian_part(adjoint(a) * a);
  if (p == 2.0) return gram;
  const HermitianEigenSystem es = herm_eig(gram);
  const double top = es.eigenvalues.empty() ? 0.0 : std::max(es.eigenvalues.back(), 0.0);
  return reconstruct(es, power_spectrum(es.eigenvalues, 0.5 * p, top));
}

ComplexMatrix positive_power(const ComplexMatrix& p, double exponent) {
  if (!p.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, "positive_power: matrix not square");
  }
  if (!(exponent >= 0.0) || !std::isfinite(exponent)) {
    throw Error(ErrorCode::ParamOutOfRange, "positive_power: exponent must be finite and >= 0");
  }
  if (exponent == 1.0) {
    (void)prepare(p);
    return hermitian_part(p);
  }
  const HermitianEigenSystem es = herm_eig(p);
  require_psd_spectrum(es.eigenvalues, "positive_power");
  const double top = es.eigenvalues.empty() ? 0.0 : std::max(es.eigenvalues.back(), 0.0);
  return reconstruct(es, power_spectrum(es.eigenvalues, exponent, top));
}

ComplexMatrix positive_sqrt(const ComplexMatrix& p) {
  const HermitianEigenSystem es = herm_eig(p);
  require_psd_spectrum(es.eigenvalues, "positive_sqrt");
  std::vector<double> f(es.eigenvalues.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = std::sqrt(std::max(es.eigenvalues[k], 0.0));
  return reconstruct(es, f);
}

ComplexMatrix re_part(const ComplexMatrix& a) { return hermitian_part(a); }

ComplexMatrix im_part(const ComplexMatrix& a) {
  require_square(a, a.rows(), "im_part");
  const std::size_t n = a.rows();
  ComplexMatrix out(n, n);
  // (A - A*)/(2i): entry (i,j) is (a_ij - conj(a_ji)) / (2i).
  const cplx inv_two_i(0.0, -0.5);
  for (std::size_t i = 0; i < n; ++i) {
    out(i, i) = a(i, i).imag();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v = (a(i, j) - std::conj(a(j, i))) * inv_two_i;
      out(i, j) = v;
      out(j, i) = std::conj(v);
    }
  }
  return out;
}

double operator_norm(const ComplexMatrix& a) {
  if (a.empty()) return 0.0;
  const ComplexMatrix gram = a.rows() >= a.cols() ? hermitian_part(adjoint(a) * a)
                                                  : hermitian_part(a * adjoint(a));
  const std::vector<double> lambda = herm_eigenvalues(gram);
  return std::sqrt(std::max(lambda.back(), 0.0));
}

double spectral_radius(const ComplexMatrix& a) {
  if (!a.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, "spectral_radius: matrix not square");
  }
  const auto n = static_cast<Eigen::Index>(a.rows());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "spectral_radius: eigenvalue iteration failed");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_positive(const ComplexMatrix& p, double tol) {
  if (!p.is_square()) return false;
  if (p.empty()) return true;
  const double asym = asymmetry_frobenius(p);
  const ComplexMatrix sym = hermitian_part(p);
  std::vector<double> lambda;
  try {
    lambda = herm_eigenvalues(sym);
  } catch (const Error&) {
    return false;
  }
  const double scale = std::max(1.0, max_modulus(lambda));
  return asym <= tol * scale && lambda.front() >= -tol * scale;
}

}  // namespace berezin
