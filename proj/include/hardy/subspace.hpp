#pragma once

// Subspaces of a truncated Hardy space, kept as orthonormal bases.

#include "hardy/truncated.hpp"

#include <string>
#include <vector>

namespace hardy {

struct Ambient {
  int order = 0;
  int dim = 0;
  long size() const { return static_cast<long>(order) * dim; }
  bool operator==(const Ambient&) const = default;
};

class Subspace {
 public:
  Subspace(Ambient ambient, Matrix basis, double tol, int guard = 0, std::string origin = {});

  static Subspace zero(Ambient ambient);
  static Subspace whole(Ambient ambient);
  /// Span of degrees lo..hi (inclusive, clipped to the ambient).
  static Subspace degrees(Ambient ambient, int lo, int hi);
  /// Orthonormal basis for the column space of `cols` (relative rank tolerance).
  static Subspace from_columns(Ambient ambient, const Matrix& cols, double tol, int guard = 0,
                               std::string origin = {});

  const Ambient& ambient() const { return ambient_; }
  const Matrix& basis() const { return basis_; }
  int rank() const { return static_cast<int>(basis_.cols()); }
  double tol() const { return tol_; }
  int guard() const { return guard_; }
  const std::string& origin() const { return origin_; }

  Subspace with_guard(int g) const;
  Subspace with_origin(std::string origin) const;

 private:
  Ambient ambient_;
  Matrix basis_;
  double tol_;
  int guard_;
  std::string origin_;
};

Subspace from_range(const TruncatedOp& a, double tol = kRankTol);
Subspace kernel(const TruncatedOp& a, double tol = kRankTol);

Subspace sum(const Subspace& m, const Subspace& l);
/// Principal vectors of M at angle below tol_angle to L.
Subspace intersect(const Subspace& m, const Subspace& l, double tol_angle = kAngleTol);
Subspace orth_complement(const Subspace& m);
/// M minus its intersection with L: M ∩ (M ∩ L)^perp.
Subspace rel_complement(const Subspace& m, const Subspace& l, double tol_angle = kAngleTol);

struct Containment {
  bool contained = false;
  double residual = 0.0;
};
/// Whether L ⊆ M, measured by ||(I - P_M) basis_L||.
Containment contains(const Subspace& m, const Subspace& l, double tol = kRankTol);

Matrix projector_matrix(const Subspace& m);
TruncatedOp projector(const Subspace& m);

/// Ascending principal angles (min(rank M, rank L) of them).
std::vector<double> principal_angles(const Subspace& m, const Subspace& l);

/// Equal ranks and largest principal angle below tol_angle.
bool same_subspace(const Subspace& m, const Subspace& l, double tol_angle = kAngleTol);
/// Largest principal angle, or pi/2 when ranks differ.
double subspace_distance(const Subspace& m, const Subspace& l);

/// Image of M under a square operator: column space of A * basis.
Subspace image(const TruncatedOp& a, const Subspace& m, double tol = kRankTol);

}  // namespace hardy
