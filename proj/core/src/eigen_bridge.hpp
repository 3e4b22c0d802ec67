#pragma once

#include <Eigen/Dense>

#include "gatelab/gate_algebra.hpp"

namespace gatelab::detail {

using EigenMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Eigen::Map<const EigenMatrix> as_eigen(const ComplexMatrix& m) {
  return {m.entries().data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

template <typename Derived>
ComplexMatrix from_eigen(const Eigen::MatrixBase<Derived>& e) {
  ComplexMatrix out(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (Eigen::Index r = 0; r < e.rows(); ++r) {
    for (Eigen::Index c = 0; c < e.cols(); ++c) {
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = e(r, c);
    }
  }
  return out;
}

}  // namespace gatelab::detail
