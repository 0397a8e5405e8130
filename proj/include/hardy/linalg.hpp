#pragma once

// Shared dense linear-algebra vocabulary and error types.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hardy {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric argument is outside its admissible range.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Operand shapes (fiber dimensions, orders, ambients) do not agree.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The trusted window is too small to say anything meaningful.
class WindowRefused : public Error {
 public:
  using Error::Error;
};

/// A symbol failed an innerness or purity requirement.
class NotInner : public Error {
 public:
  using Error::Error;
};

// Default tolerances.
inline constexpr double kEpsSym = 1e-12;
inline constexpr double kInnerTol = 1e-8;
inline constexpr double kRankTol = 1e-8;
inline constexpr double kAngleTol = 1e-6;

/// Largest singular value.
double spectral_norm(const Matrix& a);

/// Cheap upper bound on the spectral norm: sqrt(||A||_1 * ||A||_inf).
double norm_bound(const Matrix& a);

struct Svd {
  Eigen::VectorXd s;
  Matrix u;
  Matrix v;
};

/// SVD with BDCSVD, falling back to JacobiSVD when the fast path returns
/// non-finite factors. Throws InvalidParameter on non-finite input.
Svd svd(const Matrix& a, unsigned options);

/// Singular values sorted descending.
Eigen::VectorXd singular_values(const Matrix& a);

/// Number of singular values above rel_tol * max(sigma_max, 1).
int numerical_rank(const Matrix& a, double rel_tol);

}  // namespace hardy
