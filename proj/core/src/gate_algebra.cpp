#include "gatelab/gate_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "eigen_bridge.hpp"
#include "gatelab/errors.hpp"

namespace gatelab {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
}

void require_bipartite_square(const ComplexMatrix& m, std::size_t n_local, const char* op) {
  const std::size_t d = n_local * n_local;
  if (m.rows() != d || m.cols() != d) {
    throw ShapeError(std::string(op) + ": expected " + std::to_string(d) + "x" +
                     std::to_string(d) + " matrix for local dimension " +
                     std::to_string(n_local));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw ValidationError("matrix entry count " + std::to_string(data_.size()) +
                          " does not match shape " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
  for (const Complex& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw ValidationError("matrix contains a non-finite entry");
    }
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
  ComplexMatrix out(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out(i, i) = values[i];
  return out;
}

BipartiteGate::BipartiteGate(std::size_t n_local, ComplexMatrix matrix, double tolerance)
    : n_local_(n_local), matrix_(std::move(matrix)) {
  if (n_local_ < 2) {
    throw ValidationError("local dimension must be at least 2, got " + std::to_string(n_local_));
  }
  const std::size_t d = n_local_ * n_local_;
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw ValidationError("gate matrix must be " + std::to_string(d) + "x" + std::to_string(d) +
                          ", got " + std::to_string(matrix_.rows()) + "x" +
                          std::to_string(matrix_.cols()));
  }
  const double defect = unitarity_defect(matrix_);
  if (!(defect <= tolerance)) {
    throw ValidationError("unitarity check failed: max|U U^dagger - I| = " +
                          std::to_string(defect) + " exceeds " + std::to_string(tolerance));
  }
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar) {
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const Complex s = a(ar, ac);
      if (s == Complex{}) continue;
      for (std::size_t br = 0; br < b.rows(); ++br) {
        for (std::size_t bc = 0; bc < b.cols(); ++bc) {
          out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
        }
      }
    }
  }
  return out;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                     std::to_string(b.rows()) + ")");
  }
  ComplexMatrix out(a.rows(), b.cols());
  const std::size_t inner = a.cols();
  const std::size_t cols = b.cols();
  const Complex* bd = b.entries().data();
  Complex* od = out.entries().data();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    Complex* orow = od + r * cols;
    for (std::size_t k = 0; k < inner; ++k) {
      const Complex s = a(r, k);
      if (s == Complex{}) continue;
      const Complex* brow = bd + k * cols;
      for (std::size_t c = 0; c < cols; ++c) orow[c] += s * brow[c];
    }
  }
  return out;
}

ComplexMatrix dagger(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = std::conj(a(r, c));
  }
  return out;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "operator+");
  ComplexMatrix out = a;
  auto o = out.entries();
  auto be = b.entries();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += be[i];
  return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "operator-");
  ComplexMatrix out = a;
  auto o = out.entries();
  auto be = b.entries();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= be[i];
  return out;
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
  ComplexMatrix out = a;
  for (Complex& z : out.entries()) z *= s;
  return out;
}

BipartiteGate compose(const BipartiteGate& a, const BipartiteGate& b, double tolerance) {
  if (a.n_local() != b.n_local()) {
    throw ShapeError("compose: local dimensions differ");
  }
  return BipartiteGate(a.n_local(), matmul(a.matrix(), b.matrix()), tolerance);
}

Complex trace(const ComplexMatrix& a) {
  if (!a.is_square()) throw ShapeError("trace: matrix is not square");
  Complex t{};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  auto ae = a.entries();
  auto be = b.entries();
  for (std::size_t i = 0; i < ae.size(); ++i) m = std::max(m, std::abs(ae[i] - be[i]));
  return m;
}

double unitarity_defect(const ComplexMatrix& a) {
  if (!a.is_square()) return std::numeric_limits<double>::infinity();
  const std::size_t n = a.rows();
  double m = 0.0;
  // (A A^dagger)_{rs} = sum_k A_rk conj(A_sk)
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t s = r; s < n; ++s) {
      Complex acc{};
      for (std::size_t k = 0; k < n; ++k) acc += a(r, k) * std::conj(a(s, k));
      if (r == s) acc -= 1.0;
      m = std::max(m, std::abs(acc));
    }
  }
  return m;
}

double frobenius_norm_squared(const ComplexMatrix& a) {
  double s = 0.0;
  for (const Complex& z : a.entries()) s += std::norm(z);
  return s;
}

ComplexMatrix reshuffle(const ComplexMatrix& m, std::size_t n) {
  require_bipartite_square(m, n, "reshuffle");
  ComplexMatrix out(n * n, n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t b = 0; b < n; ++b) {
          out(i * n + j, a * n + b) = m(i * n + a, j * n + b);
        }
      }
    }
  }
  return out;
}

ComplexMatrix reshuffle(const BipartiteGate& u) { return reshuffle(u.matrix(), u.n_local()); }

ComplexMatrix unreshuffle(const ComplexMatrix& m, std::size_t n) {
  require_bipartite_square(m, n, "unreshuffle");
  ComplexMatrix out(n * n, n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t b = 0; b < n; ++b) {
          out(i * n + a, j * n + b) = m(i * n + j, a * n + b);
        }
      }
    }
  }
  return out;
}

ComplexMatrix partial_transpose_a(const ComplexMatrix& m, std::size_t n) {
  require_bipartite_square(m, n, "partial_transpose_a");
  ComplexMatrix out(n * n, n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t b = 0; b < n; ++b) {
          out(j * n + a, i * n + b) = m(i * n + a, j * n + b);
        }
      }
    }
  }
  return out;
}

ComplexMatrix partial_transpose_a(const BipartiteGate& u) {
  return partial_transpose_a(u.matrix(), u.n_local());
}

BipartiteGate swap_gate(std::size_t n) {
  if (n < 2) throw ValidationError("swap_gate: local dimension must be at least 2");
  ComplexMatrix s(n * n, n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) s(b * n + a, a * n + b) = 1.0;
  }
  return BipartiteGate(n, std::move(s));
}

BipartiteGate identity_gate(std::size_t n) {
  if (n < 2) throw ValidationError("identity_gate: local dimension must be at least 2");
  return BipartiteGate(n, ComplexMatrix::identity(n * n));
}

ComplexMatrix principal_sqrt(const ComplexMatrix& u) {
  if (!u.is_square()) throw ShapeError("principal_sqrt: matrix is not square");
  // A unitary is normal, so its complex Schur form is diagonal and the Schur
  // vectors form an orthonormal eigenbasis, including degenerate clusters.
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(Eigen::MatrixXcd(detail::as_eigen(u)));
  if (schur.info() != Eigen::Success) {
    throw DiagnosticsError("principal_sqrt: Schur decomposition did not converge");
  }
  const Eigen::MatrixXcd& q = schur.matrixU();
  const Eigen::MatrixXcd& t = schur.matrixT();
  Eigen::VectorXcd roots(t.rows());
  for (Eigen::Index k = 0; k < t.rows(); ++k) {
    double phi = std::arg(t(k, k));
    if (phi <= -std::numbers::pi) phi = std::numbers::pi;
    roots(k) = std::polar(1.0, phi / 2.0);
  }
  const Eigen::MatrixXcd v = q * roots.asDiagonal() * q.adjoint();
  ComplexMatrix out = detail::from_eigen(v);
  const double residual = max_abs_diff(matmul(out, out), u);
  if (!(residual <= 1e-9)) {
    throw DiagnosticsError("principal_sqrt: residual |V^2 - U| = " + std::to_string(residual));
  }
  return out;
}

BipartiteGate principal_sqrt(const BipartiteGate& u) {
  return BipartiteGate(u.n_local(), principal_sqrt(u.matrix()));
}

}  // namespace gatelab
