#pragma once

// Independent reference computations for the tests, built on Eigen's dense
// solvers instead of the library's own Jacobi code.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "berezin/matrix.hpp"

namespace oracle {

using berezin::ComplexMatrix;
using berezin::cplx;

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline ComplexMatrix from_eigen(const Eigen::MatrixXcd& e) {
  ComplexMatrix m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

// P^p for Hermitian positive semidefinite P, clamping tiny negatives.
inline Eigen::MatrixXcd psd_power(const Eigen::MatrixXcd& p, double exponent) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(p);
  Eigen::VectorXd d = es.eigenvalues();
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::pow(std::max(d(i), 0.0), exponent);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

inline ComplexMatrix abs_power(const ComplexMatrix& a, double p) {
  const Eigen::MatrixXcd e = to_eigen(a);
  return from_eigen(psd_power(e.adjoint() * e, p / 2.0));
}

inline double opnorm(const ComplexMatrix& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a));
  return svd.singularValues()(0);
}

// On the finite model the normalized kernels are the standard basis.
inline double finite_ber(const ComplexMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) m = std::max(m, std::abs(a(i, i)));
  return m;
}

inline double finite_bnorm(const ComplexMatrix& a) {
  double m = 0.0;
  for (const cplx& z : a.data()) m = std::max(m, std::abs(z));
  return m;
}

// Dense theta sweep of max |eig(Re(e^{i t} A))|.
inline double numerical_radius(const ComplexMatrix& a, int samples = 20000) {
  const Eigen::MatrixXcd e = to_eigen(a);
  double best = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = std::numbers::pi * k / samples;
    const Eigen::MatrixXcd r = std::polar(1.0, t) * e;
    const Eigen::MatrixXcd h = (r + r.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    best = std::max({best, std::abs(es.eigenvalues()(0)),
                     std::abs(es.eigenvalues()(es.eigenvalues().size() - 1))});
  }
  return best;
}

}  // namespace oracle
