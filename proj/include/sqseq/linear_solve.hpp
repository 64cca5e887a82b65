#pragma once

#include <array>
#include <cstddef>
#include <utility>

#include "sqseq/errors.hpp"
#include "sqseq/rational.hpp"

namespace sqseq {

using Vector3 = std::array<Rational, 3>;
using Matrix3 = std::array<Vector3, 3>;

/// Exact Gaussian elimination. Throws SingularSystem when det(matrix) = 0.
inline Vector3 solve_linear_3(Matrix3 m, Vector3 rhs) {
  for (std::size_t col = 0; col < 3; ++col) {
    std::size_t pivot = col;
    while (pivot < 3 && m[pivot][col] == 0) ++pivot;
    if (pivot == 3) throw SingularSystem("3x3 system is singular");
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      std::swap(rhs[pivot], rhs[col]);
    }
    for (std::size_t row = col + 1; row < 3; ++row) {
      if (m[row][col] == 0) continue;
      Rational factor = m[row][col] / m[col][col];
      for (std::size_t k = col; k < 3; ++k) m[row][k] -= factor * m[col][k];
      rhs[row] -= factor * rhs[col];
    }
  }
  Vector3 x;
  for (std::size_t i = 3; i-- > 0;) {
    Rational acc = rhs[i];
    for (std::size_t k = i + 1; k < 3; ++k) acc -= m[i][k] * x[k];
    x[i] = acc / m[i][i];
  }
  return x;
}

inline Rational determinant(const Matrix3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace sqseq
