#pragma once

// Truncated Toeplitz, Hankel and shift matrices on H^2 of a finite-dimensional
// fiber, with trust-window bookkeeping.
//
// Basis indexing is coefficient-major: degree k, component i -> k * dim + i.
// An operator maps degrees 0..order_in-1 into degrees 0..order_out-1.
//
// The guard G of an operator is the number of top degrees (on both the input
// and the output side) where the matrix may differ from the compression of the
// exact infinite operator. Leaf operators are exact compressions (G = 0).
// Composition can lose information through the truncated intermediate space.
// Each operator carries degree bands of the exact operator (raise: degree k
// reaches at most k + raise; lower: at least k - lower) and
//   leak_up   = top output rows that read input degrees >= order_in,
//   leak_down = top input columns that write output degrees >= order_out.
// confined_in / confined_out mark operators that neither read nor write
// outside the truncated space (projectors, dense operators defined on it).

#include "hardy/symbol.hpp"

#include <string>
#include <vector>

namespace hardy {

class TruncatedOp {
 public:
  struct Meta {
    int guard = 0;
    double err_bound = 0.0;
    int raise = 0;
    int lower = 0;
    int leak_up = 0;
    int leak_down = 0;
    bool confined_in = false;
    bool confined_out = false;
  };

  TruncatedOp(Matrix matrix, int order_in, int order_out, int dim_in, int dim_out, Meta meta);

  /// Square operator on a truncated space given by an arbitrary matrix; it is
  /// treated as confined to that space.
  static TruncatedOp dense(const Matrix& m, int order, int dim_in, int dim_out);
  static TruncatedOp identity(int order, int dim);
  static TruncatedOp zero(int order_in, int order_out, int dim_in, int dim_out);

  const Matrix& matrix() const { return m_; }
  int order() const { return order_out_; }
  int order_in() const { return order_in_; }
  int order_out() const { return order_out_; }
  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  bool is_square() const { return order_in_ == order_out_ && dim_in_ == dim_out_; }
  int guard() const { return meta_.guard; }
  double err_bound() const { return meta_.err_bound; }
  const Meta& meta() const { return meta_; }
  int leak_up() const { return meta_.leak_up; }
  int leak_down() const { return meta_.leak_down; }

  /// Top-left block on degrees < order - g (input and output).
  Matrix windowed(int g) const;

  TruncatedOp with_guard(int g) const;

 private:
  Matrix m_;
  int order_in_;
  int order_out_;
  int dim_in_;
  int dim_out_;
  Meta meta_;
};

/// Block entry (j, k) = Phi^(j - k). Rectangular when order_out != order_in.
TruncatedOp toeplitz(const LaurentSymbol& phi, int order);
TruncatedOp toeplitz(const LaurentSymbol& phi, int order_in, int order_out);

/// Block entry (j, k) = Phi^(-j - k - 1).
TruncatedOp hankel(const LaurentSymbol& phi, int order);
TruncatedOp hankel(const LaurentSymbol& phi, int order_in, int order_out);

TruncatedOp shift(int order, int dim);
TruncatedOp shift(int order_in, int order_out, int dim);
TruncatedOp backshift(int order, int dim);
TruncatedOp backshift(int order_in, int order_out, int dim);
/// Projection onto the degree-0 block.
TruncatedOp proj_const(int order, int dim);

TruncatedOp compose(const TruncatedOp& a, const TruncatedOp& b);
TruncatedOp compose(const std::vector<TruncatedOp>& ops);
TruncatedOp add(const TruncatedOp& a, const TruncatedOp& b);
TruncatedOp subtract(const TruncatedOp& a, const TruncatedOp& b);
TruncatedOp scale(const TruncatedOp& a, cplx s);
TruncatedOp adjoint(const TruncatedOp& a);

/// Truncation-safe products of Toeplitz/Hankel/shift factors.
struct Factor {
  enum class Kind { Toeplitz, Hankel, Shift, Backshift, ProjConst };
  Kind kind;
  LaurentSymbol symbol = LaurentSymbol::identity(1);
  int dim = 1;          // fiber dimension for Shift/Backshift/ProjConst
  bool adjoint = false;  // use the adjoint of the factor

  static Factor T(const LaurentSymbol& s, bool adj = false) { return {Kind::Toeplitz, s, 0, adj}; }
  static Factor H(const LaurentSymbol& s, bool adj = false) { return {Kind::Hankel, s, 0, adj}; }
  static Factor S(int d) { return {Kind::Shift, LaurentSymbol::identity(1), d, false}; }
  static Factor Sstar(int d) { return {Kind::Backshift, LaurentSymbol::identity(1), d, false}; }
  static Factor P(int d) { return {Kind::ProjConst, LaurentSymbol::identity(1), d, false}; }

  int dim_in() const;
  int dim_out() const;
  /// Largest upward / downward degree displacement of the factor.
  int raise() const;
  int lower() const;
};

/// Product f_1 f_2 ... f_k (f_k acts first) as a square operator at `order`.
/// Intermediate spaces keep every degree on a path from an input degree to an
/// output degree, so the result is an exact compression with guard 0.
TruncatedOp chain_product(const std::vector<Factor>& factors, int order);

struct IdentityReport {
  std::string name;
  int order = 0;
  int guard = 0;
  double residual = 0.0;
  double err = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Identity names: thc, ts, hs, lemma_basic_one, lemma_basic_two,
/// hankel_adjoint. Symbol roles:
///   thc             {Omega, Psi}:  T_{Omega Psi} - T_Omega T_Psi = H*_{Omega^*} H_Psi
///   ts              {Phi}:         S* T_Phi = T_Phi S* + S* T_Phi P
///   hs              {Phi}:         S H_Phi = H_Phi S* - P H_Phi S* + S H_Phi P
///   lemma_basic_one {Phi, Psi}:    S* T_Phi H_Psi - T_Phi H_Psi S = S* T_Phi P H_Psi
///   lemma_basic_two {Phi, Psi}:    S H_Phi T_Psi - H_Phi T_Psi S*
///                                    = H_Phi S* T_Psi P - P H_Phi S* T_Psi + S H_Phi P T_Psi
///   hankel_adjoint  {Phi}:         H_Phi^* = H_{tilde Phi}
/// Passes when residual <= 100 * err + abs_tol.
IdentityReport verify_identity(const std::string& name, const std::vector<LaurentSymbol>& symbols,
                               int order, double abs_tol = 1e-10);

const std::vector<std::string>& identity_names();

}  // namespace hardy
