#pragma once

// Finite-rank perturbations that make a given subspace invariant or reducing.

#include "hardy/representations.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hardy {

enum class PerturbationKind { T0General, T0Shift, T1Backshift, T2Reducing };

const char* kind_name(PerturbationKind k);
PerturbationKind parse_kind(const std::string& s);

/// Free rank-one terms x y^* (x in M) and u v^* (v in M^perp). For T2Reducing
/// all of x, y lie in M and all of u, v in M^perp.
struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::T0General;
  std::vector<std::pair<Vector, Vector>> terms_m;
  std::vector<std::pair<Vector, Vector>> terms_perp;
};

/// Raised with the offending term index when a membership constraint fails.
class MembershipError : public InvalidParameter {
 public:
  MembershipError(const std::string& what, int index) : InvalidParameter(what), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

enum class InvarianceMode { Invariant, Reducing };

struct InvarianceReport {
  double residual = 0.0;          // ||(I - P_M) T P_M|| on the window
  double adjoint_residual = 0.0;  // ||(I - P_M) T^* P_M||, reducing mode only
  int window_guard = 0;
  bool passed = false;
};
InvarianceReport verify_invariance(const TruncatedOp& t, const Subspace& m, InvarianceMode mode,
                                   double tol);

/// -(I - P_M) T P_M plus the free terms.
TruncatedOp synth_t0_general(const TruncatedOp& t, const Subspace& m, const PerturbationSpec& spec);

/// Core -T_Phi T_Theta P_E T_Theta^* S (I - T_Theta T_Theta^*) T_Phi^* plus free terms.
TruncatedOp synth_t0_shift(const RepSpec& rep, const PerturbationSpec& spec = {});
/// Core -S^* T_Phi P_{E1} (I - T_Theta T_Theta^*) T_Phi^* plus free terms.
TruncatedOp synth_t1_backshift(const RepSpec& rep, const PerturbationSpec& spec = {});
/// t0 core plus the adjoint of the t1 core, with reducing free terms.
TruncatedOp synth_t2_reducing(const RepSpec& rep, const PerturbationSpec& spec = {});

/// Core terms alone; sign = -1 reproduces the synthesized cores.
TruncatedOp t0_shift_core(const RepSpec& rep);
TruncatedOp t1_backshift_core(const RepSpec& rep);

struct Decomposition {
  TruncatedOp into_m;   // P_M Q
  TruncatedOp on_perp;  // (I - P_M) Q (I - P_M)
  double residual = 0.0;
};
/// Splits Q with (T + Q) M ⊆ M as -(I - P_M) T P_M + P_M Q + (I - P_M) Q (I - P_M).
Decomposition decompose_perturbation(const TruncatedOp& t, const Subspace& m, const TruncatedOp& q);

}  // namespace hardy
