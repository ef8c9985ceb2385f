#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace rtnsim {

using complexd = std::complex<double>;

// Row-major complex 2x2 matrix; the common currency for propagators and
// density matrices. Entry m12 is row 1, column 2.
struct Mat2 {
  complexd m11{0.0}, m12{0.0}, m21{0.0}, m22{0.0};

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }

  constexpr Mat2 operator*(const Mat2& o) const {
    return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
            m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
  }
  constexpr Mat2 operator+(const Mat2& o) const {
    return {m11 + o.m11, m12 + o.m12, m21 + o.m21, m22 + o.m22};
  }
  constexpr Mat2 operator-(const Mat2& o) const {
    return {m11 - o.m11, m12 - o.m12, m21 - o.m21, m22 - o.m22};
  }
  constexpr Mat2 operator*(complexd s) const {
    return {s * m11, s * m12, s * m21, s * m22};
  }

  Mat2 adjoint() const {
    return {std::conj(m11), std::conj(m21), std::conj(m12), std::conj(m22)};
  }
  constexpr complexd trace() const { return m11 + m22; }
  constexpr complexd det() const { return m11 * m22 - m12 * m21; }
};

using Unitary2 = Mat2;
using DensityMatrix2 = Mat2;

inline double max_abs_entry(const Mat2& m) {
  return std::max(std::max(std::abs(m.m11), std::abs(m.m12)),
                  std::max(std::abs(m.m21), std::abs(m.m22)));
}

inline double max_abs_diff(const Mat2& a, const Mat2& b) {
  return max_abs_entry(a - b);
}

// max-norm of U'U - I
inline double unitarity_defect(const Mat2& u) {
  return max_abs_diff(u.adjoint() * u, Mat2::identity());
}

inline double det_defect(const Mat2& u) { return std::abs(u.det() - 1.0); }

inline bool is_finite(const Mat2& m) {
  const auto ok = [](complexd z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  };
  return ok(m.m11) && ok(m.m12) && ok(m.m21) && ok(m.m22);
}

}  // namespace rtnsim
