#pragma once

#include <vector>

#include "berezin/matrix.hpp"

namespace berezin {

struct HermitianEigenSystem {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // orthonormal columns, same order
};

inline constexpr double kDefaultJacobiTolerance = 1e-12;
inline constexpr double kTightJacobiTolerance = 1e-15;
inline constexpr int kJacobiMaxSweeps = 100;

/// Relative eigenvalue threshold below which a power-0 request treats a
/// direction as outside the support.
inline constexpr double kSupportCutoff = 1e-14;

/// Off-diagonal stopping threshold for the Jacobi solver, relative to the
/// Frobenius norm of the input. Thread-local; restore on scope exit.
class ScopedJacobiTolerance {
 public:
  explicit ScopedJacobiTolerance(double tolerance);
  ~ScopedJacobiTolerance();
  ScopedJacobiTolerance(const ScopedJacobiTolerance&) = delete;
  ScopedJacobiTolerance& operator=(const ScopedJacobiTolerance&) = delete;

  static double current() noexcept;

 private:
  double previous_;
};

/// Cyclic Jacobi on (H + H*)/2. Throws NotHermitian when
/// ||H - H*||_F > 1e-8 max(1, ||H||_F) and NoConvergence after
/// kJacobiMaxSweeps sweeps.
HermitianEigenSystem herm_eig(const ComplexMatrix& h);

/// Eigenvalues only (ascending); skips eigenvector accumulation.
std::vector<double> herm_eigenvalues(const ComplexMatrix& h);

/// |A|^p = (A*A)^{p/2}. p = 0 gives the orthogonal projection onto range(|A|).
ComplexMatrix abs_power(const ComplexMatrix& a, double p);

/// P^p for positive semidefinite P. p = 0 gives the support projection;
/// p = 1 returns P itself (symmetrized).
ComplexMatrix positive_power(const ComplexMatrix& p, double exponent);

ComplexMatrix positive_sqrt(const ComplexMatrix& p);

/// Re(A) = (A + A*)/2 and Im(A) = (A - A*)/(2i), both exactly Hermitian.
ComplexMatrix re_part(const ComplexMatrix& a);
ComplexMatrix im_part(const ComplexMatrix& a);

/// Largest singular value.
double operator_norm(const ComplexMatrix& a);

/// Largest eigenvalue modulus of a general square matrix.
double spectral_radius(const ComplexMatrix& a);

bool is_positive(const ComplexMatrix& p, double tol);

}  // namespace berezin
