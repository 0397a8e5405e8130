#pragma once

// Independent reference computations used only by the tests.

#include "hardy/linalg.hpp"
#include "hardy/symbol.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

using hardy::cplx;
using hardy::Matrix;

/// Fourier coefficient n of a matrix function sampled on m circle points.
inline Matrix dft_coefficient(const std::function<Matrix(cplx)>& f, int n, int m = 512) {
  Matrix acc;
  for (int k = 0; k < m; ++k) {
    const double t = 2.0 * std::numbers::pi * k / m;
    const cplx z = std::polar(1.0, t);
    const Matrix v = f(z) * std::polar(1.0, -n * t);
    acc = k == 0 ? v : Matrix(acc + v);
  }
  return acc / static_cast<double>(m);
}

/// Closed-form scalar Blaschke factor.
inline cplx blaschke(cplx a, cplx z) { return (z - a) / (1.0 - std::conj(a) * z); }

/// Toeplitz matrix built entry by entry from a coefficient function.
inline Matrix toeplitz(const std::function<cplx(int)>& c, int n) {
  Matrix t(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) t(j, k) = c(j - k);
  return t;
}

inline Matrix hankel(const std::function<cplx(int)>& c, int n) {
  Matrix h(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) h(j, k) = c(-j - k - 1);
  return h;
}

/// Orthogonal projector onto the column span via the normal equations.
inline Matrix projector(const Matrix& cols) {
  const Matrix g = cols.adjoint() * cols;
  return cols * g.inverse() * cols.adjoint();
}

/// Rank from a full singular value decomposition with a relative cutoff.
inline int rank(const Matrix& a, double rel = 1e-8) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto s = svd.singularValues();
  const double cut = rel * std::max(1.0, s.size() ? s(0) : 0.0);
  int r = 0;
  for (int i = 0; i < s.size(); ++i) r += s(i) > cut;
  return r;
}

/// Spectral-norm distance between two projectors.
inline double projector_gap(const Matrix& p, const Matrix& q) {
  Eigen::JacobiSVD<Matrix> svd(p - q);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

inline double norm2(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace oracle
