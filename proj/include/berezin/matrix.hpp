#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace berezin {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Dense row-major complex matrix. Entries are checked for finiteness when a
/// matrix is built from caller-supplied data; arithmetic results are not
/// re-checked.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zero(std::size_t n) { return ComplexMatrix(n, n); }
  static ComplexMatrix diagonal(std::span<const cplx> diag);
  static ComplexMatrix diagonal(std::span<const double> diag);
  /// The n×n matrix with ones on the antidiagonal.
  static ComplexMatrix antidiagonal(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx scale) noexcept;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix m);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(ComplexMatrix m, cplx scale);
ComplexMatrix operator*(cplx scale, ComplexMatrix m);
ComplexMatrix operator*(ComplexMatrix m, double scale);
ComplexMatrix operator*(double scale, ComplexMatrix m);

/// Matrix-vector product.
CVector operator*(const ComplexMatrix& m, std::span<const cplx> x);

/// Conjugate transpose.
ComplexMatrix adjoint(const ComplexMatrix& m);

/// (M + M*)/2, written entrywise so the result is exactly Hermitian.
ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// <x, y> = sum_i x_i conj(y_i); linear in the first slot.
cplx inner(std::span<const cplx> x, std::span<const cplx> y);
double vector_norm(std::span<const cplx> x);

double frobenius_norm(const ComplexMatrix& m);
double max_abs_entry(const ComplexMatrix& m);
/// Largest entrywise modulus of a - b; dimensions must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Throws DimensionMismatch unless m is square with the given size.
void require_square(const ComplexMatrix& m, std::size_t n, const char* what);

}  // namespace berezin
