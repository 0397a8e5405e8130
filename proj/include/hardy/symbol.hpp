#pragma once

// Matrix-valued Laurent symbols on the unit circle.
//
// A symbol is stored as a banded family of Fourier coefficient matrices
// A(n), n_min <= n <= n_max, together with a certified bound on the sup norm
// of the discarded tail. Every operator matrix in the library is assembled
// from these coefficients; grid sampling is used only by oracles and for
// sup-norm estimates.

#include "hardy/linalg.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace hardy {

class LaurentSymbol {
 public:
  /// coeffs[i] is the coefficient of z^(n_min + i). All must be rows x cols.
  LaurentSymbol(int rows, int cols, int n_min, std::vector<Matrix> coeffs,
                double tail_bound = 0.0);

  static LaurentSymbol constant(const Matrix& c);
  static LaurentSymbol identity(int dim);
  /// z^n * I_dim.
  static LaurentSymbol monomial(int n, int dim, cplx scale = 1.0);
  static LaurentSymbol zero(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int n_min() const { return n_min_; }
  int n_max() const { return n_min_ + static_cast<int>(coeffs_.size()) - 1; }
  double tail_bound() const { return tail_bound_; }
  bool is_analytic() const { return n_min_ >= 0; }
  bool is_polynomial() const { return tail_bound_ == 0.0; }

  /// Coefficient of z^n (zero outside the stored band).
  Matrix coefficient(int n) const;
  const std::vector<Matrix>& coefficients() const { return coeffs_; }

  /// Sum over the stored band of A(n) z^n.
  Matrix evaluate(cplx z) const;

  /// Sup over a uniform circle grid of the spectral norm, plus tail_bound.
  double sup_norm(int grid = 256) const;

  /// Largest |n| over the stored band with a nonzero coefficient on that side.
  int analytic_reach() const { return n_max() > 0 ? n_max() : 0; }
  int coanalytic_reach() const { return n_min() < 0 ? -n_min() : 0; }

  /// Drops exactly-zero leading and trailing coefficients.
  LaurentSymbol trimmed() const;

  /// Drops trailing (and leading) coefficients whose summed norms stay below
  /// eps, adding the dropped mass to tail_bound.
  LaurentSymbol compressed(double eps) const;

  bool operator==(const LaurentSymbol& other) const;

 private:
  int rows_;
  int cols_;
  int n_min_;
  std::vector<Matrix> coeffs_;
  double tail_bound_;
};

/// Scalar Blaschke factor (z - a) / (1 - conj(a) z), truncated at a certified
/// geometric tail <= eps_sym.
LaurentSymbol blaschke_factor(cplx a, double eps_sym = kEpsSym);

/// Q(z) = phi_a(z) (I - P) + P for an orthogonal projection P != I.
LaurentSymbol blaschke_potapov_factor(cplx a, const Matrix& proj, double eps_sym = kEpsSym);

/// U * Q_1 * ... * Q_n with a constant unitary U.
LaurentSymbol blaschke_potapov_product(const Matrix& unitary,
                                       const std::vector<std::pair<cplx, Matrix>>& factors,
                                       double eps_sym = kEpsSym);

LaurentSymbol multiply(const LaurentSymbol& a, const LaurentSymbol& b);
LaurentSymbol add(const LaurentSymbol& a, const LaurentSymbol& b);
LaurentSymbol scale(const LaurentSymbol& a, cplx s);

/// tilde(A)(z) = A(conj z)^*: coefficients conjugate-transposed in place.
LaurentSymbol tilde(const LaurentSymbol& a);

/// Pointwise adjoint on the circle, A(z)^*: coefficient n becomes A(-n)^*.
LaurentSymbol adjoint_symbol(const LaurentSymbol& a);

/// Block diagonal symbol.
LaurentSymbol block_diag(const std::vector<LaurentSymbol>& blocks);
/// [A_1 A_2 ...] (equal row counts).
LaurentSymbol hstack(const std::vector<LaurentSymbol>& blocks);
/// [A_1; A_2; ...] (equal column counts).
LaurentSymbol vstack(const std::vector<LaurentSymbol>& blocks);

/// Coefficients of a power-series reciprocal 1/h for scalar analytic h with
/// h(0) != 0, truncated once the observed geometric decay certifies a tail
/// below eps. Throws if no decay is observed within max_terms.
LaurentSymbol series_reciprocal(const LaurentSymbol& h, double eps, int max_terms = 8192);

struct InnerCertificate {
  double left_inner_residual = 0.0;
  std::optional<double> two_sided_residual;
  int unitary_part_rank = 0;
  /// (dim of the pure input part, dim of the pure output part).
  std::pair<int, int> pure_part_dims{0, 0};
  /// Columns span the input directions where Theta(0) is isometric.
  Matrix unitary_direction_basis;
  /// Singular values of Theta(0), descending.
  Eigen::VectorXd singular_values_at_zero;
  /// Singular values within 100*tol of the unitary threshold.
  std::vector<double> near_threshold;

  bool is_inner(double tol) const { return left_inner_residual <= tol; }
  bool is_two_sided(double tol) const {
    return left_inner_residual <= tol && two_sided_residual && *two_sided_residual <= tol;
  }
  bool is_pure() const { return unitary_part_rank == 0; }
};

/// Certifies Theta^* Theta = I coefficientwise and splits Theta(0) into its
/// unitary and purely contractive parts.
InnerCertificate check_inner(const LaurentSymbol& theta, double tol = kInnerTol);

struct HittSarasonPair {
  LaurentSymbol g;
  LaurentSymbol theta;
};

/// For scalar inner phi with |phi(0)| < 1:
///   g = (1 - |phi(0)|^2)^(-1/2) (1 - conj(phi(0)) phi),
///   theta = (phi(0) - phi) / (1 - conj(phi(0)) phi).
HittSarasonPair hitt_sarason_pair(const LaurentSymbol& phi, double eps_sym = kEpsSym);

}  // namespace hardy
