#pragma once

// Subspaces given by inner functions: model spaces K_Theta, ranges Theta H^2,
// and M = R(T_Phi (I - T_Theta T_Theta^*)), together with the defect formulas
// that describe them.

#include "hardy/invariance.hpp"

#include <functional>
#include <string>
#include <vector>

namespace hardy {

enum class Flavor { RangeOfInner, PhiModel };

const char* flavor_name(Flavor f);
Flavor parse_flavor(const std::string& s);

/// RangeOfInner: M = Theta H^2 (phi is ignored).
/// PhiModel:     M = Phi K_Theta, Phi : E1 -> F analytic, Theta : E -> E1 pure inner.
struct RepSpec {
  LaurentSymbol phi = LaurentSymbol::identity(1);
  LaurentSymbol theta = LaurentSymbol::identity(1);
  int order = 32;
  Flavor flavor = Flavor::PhiModel;

  RepSpec at_order(int n) const {
    RepSpec s = *this;
    s.order = n;
    return s;
  }
};

/// Range of I - T_Theta T_Theta^* on the full window.
Subspace model_space(const LaurentSymbol& theta, int order, double tol = kRankTol);
/// Theta H^2 truncated: range of the compression T_Theta T_Theta^*.
Subspace range_inner(const LaurentSymbol& theta, int order, double tol = kRankTol);

struct PartialIsometryReport {
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct Representation {
  Subspace m;
  PartialIsometryReport pi;
};

/// Validates the spec and builds M. For PhiModel the partial-isometry report
/// compares K^* K with I - T_Theta T_Theta^*, K = T_Phi (I - T_Theta T_Theta^*).
/// require_pure = false skips the purity requirement on Theta.
Representation build_rep(const RepSpec& spec, double tol = kRankTol, bool require_pure = true);

struct TheoremDefect {
  int defect = 0;          // value predicted by the theorem
  int generic_defect = 0;  // rank computation on M
  /// Formula defect space (PhiModel only) and its projection onto M^perp.
  Subspace w;
  Subspace w_orth;
  /// Largest principal angle between w_orth and the generic defect space.
  double angle = 0.0;
  bool match = false;
};

/// Backward shift: RangeOfInner predicts dim E - rank U; PhiModel uses
/// W = R(S* T_Phi P_{E1}) minus its intersection with M.
TheoremDefect defect_thm_main(const RepSpec& spec, double tol = kRankTol);
/// Forward shift: RangeOfInner predicts 0; PhiModel uses
/// W = R(T_Phi T_Theta P_E) minus its intersection with M.
TheoremDefect defect_thm_main2(const RepSpec& spec, double tol = kRankTol);

struct PerpRep {
  Subspace mperp;  // R(T_{Phi Theta}) + K_Phi
  LaurentSymbol phi1;
  LaurentSymbol theta1;
  double angle_direct = 0.0;  // mperp vs orth_complement(M)
  double angle_rep = 0.0;     // build_rep(phi1, theta1) vs orth_complement(M)
  bool passed = false;
};
PerpRep perp_rep(const RepSpec& spec, double tol = kRankTol, double tol_angle = kAngleTol);

struct NearlyReport {
  int rank_at_zero = 0;
  int target = 0;
  bool criterion = false;
  int nearly_defect = 0;
  bool agree = false;
};
NearlyReport nearly_criterion(const RepSpec& spec, double tol = kRankTol);

struct EquivalenceReport {
  int order = 0;
  int star_n = 0, star_2n = 0;
  int shift_n = 0, shift_2n = 0;
  bool star_stable = false;
  bool shift_stable = false;
  bool consistent = false;  // both stable or both unstable
};
EquivalenceReport equivalence_check(const std::function<Subspace(int)>& factory, int order,
                                    double tol = kRankTol);

struct HalfspaceProbe {
  std::vector<int> orders;
  std::vector<int> dims;
  std::string classification;  // "stabilizing" or "growing" (heuristic)
};
HalfspaceProbe halfspace_probe(const RepSpec& spec, const std::vector<int>& orders,
                               double tol = kRankTol);

struct TwoSidedReport {
  double range_angle = 0.0;
  double identity_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};
/// Range of H*_{Theta^*} against K_Theta, and H*_{Theta^*} H_{Theta^*} = I - T_Theta T_Theta^*.
TwoSidedReport two_sided_model_check(const LaurentSymbol& theta, int order, double tol = kRankTol,
                                     double tol_angle = kAngleTol);

/// Rank of P_{E1} (I - T_Theta T_Theta^*).
int constant_block_rank(const LaurentSymbol& theta, int order, double tol = kRankTol);

}  // namespace hardy
