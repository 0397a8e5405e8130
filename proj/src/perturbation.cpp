#include "hardy/perturbation.hpp"

#include <algorithm>

namespace hardy {

namespace {

constexpr double kMembershipTol = 1e-8;

void require_phi_model(const RepSpec& rep) {
  if (rep.flavor != Flavor::PhiModel)
    throw InvalidParameter("perturbation synthesis needs the phi_model flavor");
}

double off_fraction(const Subspace& s, const Vector& v) {
  const double n = v.norm();
  if (n == 0.0) return 0.0;
  const Vector r = v - s.basis() * (s.basis().adjoint() * v);
  return r.norm() / n;
}

void check_len(const Subspace& m, const Vector& v) {
  if (v.size() != m.ambient().size()) throw DimensionMismatch("free-term vector has wrong length");
}

/// Sum of rank-one terms after checking their membership constraints.
Matrix free_terms(const Subspace& m, const PerturbationSpec& spec, bool reducing) {
  const Subspace perp = orth_complement(m);
  Matrix out = Matrix::Zero(m.ambient().size(), m.ambient().size());
  int idx = 0;
  for (const auto& [x, y] : spec.terms_m) {
    check_len(m, x);
    check_len(m, y);
    if (off_fraction(m, x) > kMembershipTol)
      throw MembershipError("free term " + std::to_string(idx) + ": x is not in M", idx);
    if (reducing && off_fraction(m, y) > kMembershipTol)
      throw MembershipError("free term " + std::to_string(idx) + ": y is not in M", idx);
    out += x * y.adjoint();
    ++idx;
  }
  for (const auto& [u, v] : spec.terms_perp) {
    check_len(m, u);
    check_len(m, v);
    if (off_fraction(perp, v) > kMembershipTol)
      throw MembershipError("free term " + std::to_string(idx) + ": v is not in M^perp", idx);
    if (reducing && off_fraction(perp, u) > kMembershipTol)
      throw MembershipError("free term " + std::to_string(idx) + ": u is not in M^perp", idx);
    out += u * v.adjoint();
    ++idx;
  }
  return out;
}

TruncatedOp with_free(const TruncatedOp& core, const Subspace& m, const PerturbationSpec& spec,
                      bool reducing) {
  const Matrix f = free_terms(m, spec, reducing);
  if (spec.terms_m.empty() && spec.terms_perp.empty()) return core;
  return add(core, TruncatedOp::dense(f, m.ambient().order, m.ambient().dim, m.ambient().dim));
}

double windowed_defect_norm(const TruncatedOp& t, const Subspace& m, int g) {
  const Matrix& q = m.basis();
  const Matrix tq = t.matrix() * q;
  const Matrix d = (tq - q * (q.adjoint() * tq)) * q.adjoint();
  const long w = static_cast<long>(m.ambient().order - g) * m.ambient().dim;
  return spectral_norm(d.topLeftCorner(w, w));
}

}  // namespace

const char* kind_name(PerturbationKind k) {
  switch (k) {
    case PerturbationKind::T0General:
      return "t0_general";
    case PerturbationKind::T0Shift:
      return "t0_shift";
    case PerturbationKind::T1Backshift:
      return "t1_backshift";
    case PerturbationKind::T2Reducing:
      return "t2_reducing";
  }
  return "?";
}

PerturbationKind parse_kind(const std::string& s) {
  for (auto k : {PerturbationKind::T0General, PerturbationKind::T0Shift,
                 PerturbationKind::T1Backshift, PerturbationKind::T2Reducing}) {
    if (s == kind_name(k)) return k;
  }
  throw InvalidParameter("unknown perturbation kind: " + s);
}

InvarianceReport verify_invariance(const TruncatedOp& t, const Subspace& m, InvarianceMode mode,
                                   double tol) {
  if (!t.is_square() || t.order() != m.ambient().order || t.dim_in() != m.ambient().dim)
    throw DimensionMismatch("operator and subspace ambients differ");
  InvarianceReport r;
  r.window_guard = t.guard() + spill(t) + m.guard();
  if (2 * r.window_guard >= m.ambient().order)
    throw WindowRefused("invariance window guard is at least half the order");
  r.residual = windowed_defect_norm(t, m, r.window_guard);
  r.passed = r.residual <= tol;
  if (mode == InvarianceMode::Reducing) {
    r.adjoint_residual = windowed_defect_norm(adjoint(t), m, r.window_guard);
    r.passed = r.passed && r.adjoint_residual <= tol;
  }
  return r;
}

TruncatedOp synth_t0_general(const TruncatedOp& t, const Subspace& m, const PerturbationSpec& spec) {
  const Matrix p = projector_matrix(m);
  const Matrix id = Matrix::Identity(p.rows(), p.cols());
  const TruncatedOp core =
      TruncatedOp::dense(-(id - p) * t.matrix() * p, t.order(), t.dim_in(), t.dim_out());
  return with_free(core, m, spec, false);
}

TruncatedOp t0_shift_core(const RepSpec& rep) {
  require_phi_model(rep);
  const int n = rep.order;
  const int e = rep.theta.cols(), e1 = rep.phi.cols();
  using F = Factor;
  const F phi = F::T(rep.phi), phis = F::T(rep.phi, true);
  const F th = F::T(rep.theta), ths = F::T(rep.theta, true);
  return subtract(chain_product({phi, th, F::P(e), ths, F::S(e1), phis}, n),
                  chain_product({phi, th, F::P(e), ths, F::S(e1), th, ths, phis}, n));
}

TruncatedOp t1_backshift_core(const RepSpec& rep) {
  require_phi_model(rep);
  const int n = rep.order;
  const int f = rep.phi.rows(), e1 = rep.phi.cols();
  using F = Factor;
  const F phi = F::T(rep.phi), phis = F::T(rep.phi, true);
  const F th = F::T(rep.theta), ths = F::T(rep.theta, true);
  return subtract(chain_product({F::Sstar(f), phi, F::P(e1), phis}, n),
                  chain_product({F::Sstar(f), phi, F::P(e1), th, ths, phis}, n));
}

TruncatedOp synth_t0_shift(const RepSpec& rep, const PerturbationSpec& spec) {
  const Subspace m = build_rep(rep).m;
  return with_free(scale(t0_shift_core(rep), -1.0), m, spec, false);
}

TruncatedOp synth_t1_backshift(const RepSpec& rep, const PerturbationSpec& spec) {
  const Subspace m = build_rep(rep).m;
  return with_free(scale(t1_backshift_core(rep), -1.0), m, spec, false);
}

TruncatedOp synth_t2_reducing(const RepSpec& rep, const PerturbationSpec& spec) {
  const Subspace m = build_rep(rep).m;
  const TruncatedOp core = scale(add(t0_shift_core(rep), adjoint(t1_backshift_core(rep))), -1.0);
  return with_free(core, m, spec, true);
}

Decomposition decompose_perturbation(const TruncatedOp& t, const Subspace& m, const TruncatedOp& q) {
  if (!q.is_square() || q.order() != t.order() || q.dim_in() != t.dim_in())
    throw DimensionMismatch("perturbation must act on the same space as T");
  const Matrix p = projector_matrix(m);
  const Matrix id = Matrix::Identity(p.rows(), p.cols());
  const Matrix a = p * q.matrix();
  const Matrix b = (id - p) * q.matrix() * (id - p);
  const Matrix rebuilt = -(id - p) * t.matrix() * p + a + b;
  const int n = t.order(), d = t.dim_in();
  return {TruncatedOp::dense(a, n, d, d), TruncatedOp::dense(b, n, d, d),
          spectral_norm(q.matrix() - rebuilt)};
}

}  // namespace hardy
