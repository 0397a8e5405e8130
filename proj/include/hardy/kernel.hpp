#pragma once

// Reproducing kernels of M = Phi K_Theta (or Theta H^2) and of its complement.

#include "hardy/representations.hpp"

namespace hardy {

inline constexpr double kMaxKernelRadius = 0.95;

/// Coefficients conj(w)^k c, k < order. Refuses |w| > 0.95 and orders whose
/// relative tail |w|^order exceeds tail_tol.
Vector szego_vector(cplx w, const Vector& c, int order, double tail_tol = 1e-6);

/// Phi(z) (I - Theta(z) Theta(w)^*) Phi(w)^* / (1 - z conj(w)); for the
/// range_of_inner flavor Theta(z) Theta(w)^* / (1 - z conj(w)).
Matrix kernel_m(const RepSpec& spec, cplx z, cplx w);
/// I_F / (1 - z conj(w)) minus kernel_m.
Matrix kernel_mperp(const RepSpec& spec, cplx z, cplx w);

struct KernelConsistency {
  double residual = 0.0;  // relative, on the truncation window
  double tail = 0.0;      // |w|^N / (1 - |w|), reported separately
};

/// Coefficient expansion of kernel_m(., w) c against P_M szego_vector(w, c).
/// complement = true uses kernel_mperp and the projector onto M^perp.
KernelConsistency kernel_consistency(const RepSpec& spec, cplx w, const Vector& c,
                                     bool complement = false, double tol = kRankTol);

}  // namespace hardy
