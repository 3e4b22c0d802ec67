#pragma once

// Dense complex matrices and the index maps used on bipartite gates.
//
// Composite basis convention (used everywhere in the library): a basis state
// |i>|j> of H^N (x) H^N has index i * N + j, where i labels subsystem A and j
// labels subsystem B. Matrices are stored row-major.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gatelab {

using Complex = std::complex<double>;

/// Max-norm tolerance for accepting a matrix as a unitary gate.
inline constexpr double kUnitarityTolerance = 1e-10;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  /// Zero matrix.
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Takes row-major entries; throws ValidationError if the count does not
  /// match or any entry is NaN/Inf.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const Complex> entries() const { return data_; }
  std::span<Complex> entries() { return data_; }

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// A unitary on H^N (x) H^N. Construction validates shape and unitarity; an
/// instance is always a valid gate.
class BipartiteGate {
 public:
  /// Throws ValidationError if `n_local < 2`, the matrix is not N^2 x N^2, or
  /// max|U U^dagger - I| exceeds `tolerance`.
  BipartiteGate(std::size_t n_local, ComplexMatrix matrix,
                double tolerance = kUnitarityTolerance);

  std::size_t n_local() const { return n_local_; }
  std::size_t dim() const { return n_local_ * n_local_; }
  const ComplexMatrix& matrix() const { return matrix_; }

  bool operator==(const BipartiteGate&) const = default;

 private:
  std::size_t n_local_;
  ComplexMatrix matrix_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Throws ShapeError when a.cols() != b.rows().
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix dagger(const ComplexMatrix& a);

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, const ComplexMatrix& a);

/// Gate product a * b, re-validated at `tolerance`.
BipartiteGate compose(const BipartiteGate& a, const BipartiteGate& b,
                      double tolerance = kUnitarityTolerance);

Complex trace(const ComplexMatrix& a);

/// max_{ij} |a_ij - b_ij|. Throws ShapeError on shape mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_{ij} |(A A^dagger - I)_ij|.
double unitarity_defect(const ComplexMatrix& a);

/// Sum of |a_ij|^2.
double frobenius_norm_squared(const ComplexMatrix& a);

/// Reshuffling: <ij|U_R|ab> = <ia|U|jb>, i.e.
/// U_R(i*N + j, a*N + b) = U(i*N + a, j*N + b).
ComplexMatrix reshuffle(const BipartiteGate& u);
ComplexMatrix reshuffle(const ComplexMatrix& m, std::size_t n_local);
/// Inverse of reshuffle.
ComplexMatrix unreshuffle(const ComplexMatrix& m, std::size_t n_local);

/// Transpose on subsystem A: <ja|U_T|ib> = <ia|U|jb>. An involution.
ComplexMatrix partial_transpose_a(const BipartiteGate& u);
ComplexMatrix partial_transpose_a(const ComplexMatrix& m, std::size_t n_local);

/// S |a>|b> = |b>|a>.
BipartiteGate swap_gate(std::size_t n_local);

BipartiteGate identity_gate(std::size_t n_local);

/// Principal square root of a unitary: eigenphases phi in (-pi, pi] are
/// halved, the eigenvectors are shared with u. Certified by the residual
/// |V^2 - u| <= 1e-9; throws DiagnosticsError otherwise.
ComplexMatrix principal_sqrt(const ComplexMatrix& u);
BipartiteGate principal_sqrt(const BipartiteGate& u);

}  // namespace gatelab
