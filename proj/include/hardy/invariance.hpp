#pragma once

// Almost-invariance defects and the minimal orthogonal defect space.
//
// For a square operator T and a subspace M the defect is the numerical rank of
// (I - P_M) T P_M on the trusted window, and the minimal orthogonal defect
// space is the range of that operator.

#include "hardy/subspace.hpp"

#include <vector>

namespace hardy {

struct DefectReport {
  int defect = 0;
  Subspace defect_space;
  double residual = 0.0;
  int window_guard = 0;
  /// Largest singular value of the windowed defect operator.
  double sigma_max = 0.0;
  /// Largest singular value classified as numerically zero (0 if none).
  double sigma_cut = 0.0;
};

/// Extra top degree dropped from defect windows when T reads or writes past
/// the truncation (0 or 1). Leakage through long, geometrically decaying bands
/// sits below the rank tolerance and is not windowed.
int spill(const TruncatedOp& t);

DefectReport almost_defect(const TruncatedOp& t, const Subspace& m, double tol = kRankTol);

/// Same defect space computed by column-pivoted QR of the defect operator.
Subspace defect_space_qr(const TruncatedOp& t, const Subspace& m, double tol = kRankTol);

/// Nearly S*-invariance: rank of (I - P_M) S* P_{M1}, M1 = M ∩ (degrees >= 1).
DefectReport nearly_defect(const Subspace& m, double tol = kRankTol);

struct DualityReport {
  int defect = 0;       // defect of (T, M)
  int dual_defect = 0;  // defect of (T*, M^perp)
  bool equal = false;
};
DualityReport duality_check(const TruncatedOp& t, const Subspace& m, double tol = kRankTol);

struct EnlargementReport {
  int formula = 0;     // dim(TW) - dim(TW ∩ (W + M))
  int recomputed = 0;  // defect of (T, M + W)
  bool match = false;
  double containment_residual = 0.0;
};
/// W must be a defect space for (T, M): T M ⊆ M + W.
EnlargementReport enlarged_defect(const TruncatedOp& t, const Subspace& m, const Subspace& w,
                                  double tol = kRankTol);

struct ChainStep {
  int dim = 0;
  int defect = 0;
};
/// Defects of M, M + W, M + W + TW, ..., M + W + ... + T^{k-1} W.
std::vector<ChainStep> absorption_chain(const TruncatedOp& t, const Subspace& m, int k,
                                        double tol = kRankTol);
bool nonincreasing(const std::vector<ChainStep>& chain);

/// -(I - P_M) T P_M + P_M W1 + W2 (I - P_M).
TruncatedOp essential_t0(const TruncatedOp& t, const Subspace& m, const TruncatedOp& w1,
                         const TruncatedOp& w2);

}  // namespace hardy
