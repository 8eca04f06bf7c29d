#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "magrecon/nn/core.hpp"

namespace magrecon::nn {

// Matrices are stored as u32 rows, u32 cols, then float32 values
// column-major, independent of the in-memory scalar type.
template <typename Scalar>
void write_matrix(std::ostream& out, const Matrix<Scalar>& m) {
  const std::uint32_t rows = static_cast<std::uint32_t>(m.rows());
  const std::uint32_t cols = static_cast<std::uint32_t>(m.cols());
  out.write(reinterpret_cast<const char*>(&rows), 4);
  out.write(reinterpret_cast<const char*>(&cols), 4);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const float v = static_cast<float>(m(i, j));
      out.write(reinterpret_cast<const char*>(&v), 4);
    }
}

template <typename Scalar>
Matrix<Scalar> read_matrix(std::istream& in) {
  std::uint32_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char*>(&rows), 4);
  in.read(reinterpret_cast<char*>(&cols), 4);
  if (!in) throw std::runtime_error("truncated matrix header");
  Matrix<Scalar> m(rows, cols);
  for (std::uint32_t j = 0; j < cols; ++j)
    for (std::uint32_t i = 0; i < rows; ++i) {
      float v = 0;
      in.read(reinterpret_cast<char*>(&v), 4);
      m(i, j) = static_cast<Scalar>(v);
    }
  if (!in) throw std::runtime_error("truncated matrix payload");
  return m;
}

}  // namespace magrecon::nn
