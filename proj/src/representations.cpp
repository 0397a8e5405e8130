#include "hardy/representations.hpp"

#include <algorithm>

namespace hardy {

namespace {

InnerCertificate require_inner(const LaurentSymbol& theta, const char* what) {
  if (!theta.is_analytic()) throw NotInner(std::string(what) + " is not analytic");
  InnerCertificate c = check_inner(theta, kInnerTol);
  if (!c.is_inner(kInnerTol))
    throw NotInner(std::string(what) + " fails the inner check (residual " +
                   std::to_string(c.left_inner_residual) + ")");
  return c;
}

/// I - T_Theta T_Theta^* at `order`, exact compression.
TruncatedOp model_projector(const LaurentSymbol& theta, int order) {
  const TruncatedOp tt = chain_product({Factor::T(theta), Factor::T(theta, true)}, order);
  return subtract(TruncatedOp::identity(order, theta.rows()), tt);
}

}  // namespace

const char* flavor_name(Flavor f) {
  return f == Flavor::RangeOfInner ? "range_of_inner" : "phi_model";
}

Flavor parse_flavor(const std::string& s) {
  if (s == "range_of_inner") return Flavor::RangeOfInner;
  if (s == "phi_model") return Flavor::PhiModel;
  throw InvalidParameter("unknown flavor: " + s);
}

Subspace model_space(const LaurentSymbol& theta, int order, double tol) {
  require_inner(theta, "Theta");
  return from_range(model_projector(theta, order), tol).with_origin("model_space");
}

Subspace range_inner(const LaurentSymbol& theta, int order, double tol) {
  require_inner(theta, "Theta");
  const TruncatedOp tt = chain_product({Factor::T(theta), Factor::T(theta, true)}, order);
  return from_range(tt, tol).with_origin("range_inner");
}

Representation build_rep(const RepSpec& spec, double tol, bool require_pure) {
  const int n = spec.order;
  if (spec.flavor == Flavor::RangeOfInner) {
    const Subspace m = range_inner(spec.theta, n, tol);
    const TruncatedOp tx = toeplitz(spec.theta, n, n + spec.theta.analytic_reach() + 1);
    PartialIsometryReport pi;
    pi.residual = spectral_norm(tx.matrix().adjoint() * tx.matrix() -
                                Matrix::Identity(tx.matrix().cols(), tx.matrix().cols()));
    pi.tolerance = 100.0 * tx.err_bound() + 1e-8;
    pi.passed = pi.residual <= pi.tolerance;
    return {m, pi};
  }
  if (!spec.phi.is_analytic()) throw InvalidParameter("Phi must be analytic");
  if (spec.phi.cols() != spec.theta.rows())
    throw DimensionMismatch("Phi columns must equal Theta rows");
  const InnerCertificate cert = require_inner(spec.theta, "Theta");
  if (require_pure && !cert.is_pure())
    throw NotInner("Theta is not pure (unitary part rank " +
                   std::to_string(cert.unitary_part_rank) + ")");
  const TruncatedOp q = model_projector(spec.theta, n);
  const TruncatedOp k =
      subtract(chain_product({Factor::T(spec.phi)}, n),
               chain_product({Factor::T(spec.phi), Factor::T(spec.theta), Factor::T(spec.theta, true)}, n));
  const Subspace m = from_range(k, tol).with_origin("rep");
  // T_Phi with every output degree kept, applied to the compressed projector.
  const TruncatedOp tx = toeplitz(spec.phi, n, n + spec.phi.analytic_reach() + 1);
  const Matrix kx = tx.matrix() * q.matrix();
  PartialIsometryReport pi;
  pi.residual = spectral_norm(kx.adjoint() * kx - q.matrix());
  pi.tolerance = 100.0 * (tx.err_bound() * norm_bound(q.matrix()) + q.err_bound()) + 1e-8;
  pi.passed = pi.residual <= pi.tolerance;
  return {m, pi};
}

namespace {

TheoremDefect formula_defect(const RepSpec& spec, const TruncatedOp& shift_op,
                             const TruncatedOp& generator, double tol) {
  TheoremDefect out{0, 0, Subspace::zero({spec.order, 1}), Subspace::zero({spec.order, 1}), 0.0,
                    false};
  const Subspace m = build_rep(spec, tol).m;
  const DefectReport generic = almost_defect(shift_op, m, tol);
  out.generic_defect = generic.defect;
  const Subspace r = from_range(generator, tol);
  out.w = rel_complement(r, m);
  out.defect = out.w.rank();
  const Matrix& q = m.basis();
  const Matrix proj = out.w.basis() - q * (q.adjoint() * out.w.basis());
  out.w_orth = Subspace::from_columns(m.ambient(), proj, tol, m.guard(), "defect_formula");
  out.angle = subspace_distance(out.w_orth, generic.defect_space);
  out.match = out.defect == out.generic_defect && out.angle <= kAngleTol;
  return out;
}

}  // namespace

TheoremDefect defect_thm_main(const RepSpec& spec, double tol) {
  const int n = spec.order;
  if (spec.flavor == Flavor::RangeOfInner) {
    const InnerCertificate c = require_inner(spec.theta, "Theta");
    const Subspace m = build_rep(spec, tol).m;
    TheoremDefect out{spec.theta.cols() - c.unitary_part_rank, 0, Subspace::zero(m.ambient()),
                      Subspace::zero(m.ambient()), 0.0, false};
    const DefectReport g = almost_defect(backshift(n, spec.theta.rows()), m, tol);
    out.generic_defect = g.defect;
    out.w_orth = g.defect_space;
    out.match = out.defect == out.generic_defect;
    return out;
  }
  const int f = spec.phi.rows(), e1 = spec.phi.cols();
  const TruncatedOp gen =
      chain_product({Factor::Sstar(f), Factor::T(spec.phi), Factor::P(e1)}, n);
  return formula_defect(spec, backshift(n, f), gen, tol);
}

TheoremDefect defect_thm_main2(const RepSpec& spec, double tol) {
  const int n = spec.order;
  if (spec.flavor == Flavor::RangeOfInner) {
    const Subspace m = build_rep(spec, tol).m;
    TheoremDefect out{0, 0, Subspace::zero(m.ambient()), Subspace::zero(m.ambient()), 0.0, false};
    const DefectReport g = almost_defect(shift(n, spec.theta.rows()), m, tol);
    out.generic_defect = g.defect;
    out.w_orth = g.defect_space;
    out.match = out.generic_defect == 0;
    return out;
  }
  const int f = spec.phi.rows(), e = spec.theta.cols();
  const TruncatedOp gen =
      chain_product({Factor::T(spec.phi), Factor::T(spec.theta), Factor::P(e)}, n);
  return formula_defect(spec, shift(n, f), gen, tol);
}

PerpRep perp_rep(const RepSpec& spec, double tol, double tol_angle) {
  if (spec.flavor != Flavor::PhiModel) throw InvalidParameter("perp_rep needs the phi_model flavor");
  require_inner(spec.phi, "Phi");
  const int n = spec.order;
  const int f = spec.phi.rows(), e = spec.theta.cols(), e1 = spec.phi.cols();
  const Subspace m = build_rep(spec, tol).m;
  const Subspace mc = orth_complement(m);
  const LaurentSymbol pt = multiply(spec.phi, spec.theta);
  PerpRep out{sum(range_inner(pt, n, tol), model_space(spec.phi, n, tol)),
              hstack({pt, LaurentSymbol::identity(f)}),
              vstack({LaurentSymbol::zero(e, e1), spec.phi}),
              0.0,
              0.0,
              false};
  out.angle_direct = subspace_distance(out.mperp, mc);
  RepSpec alt{out.phi1, out.theta1, n, Flavor::PhiModel};
  out.angle_rep = subspace_distance(build_rep(alt, tol, false).m, mc);
  out.passed = out.angle_direct <= tol_angle && out.angle_rep <= tol_angle;
  return out;
}

NearlyReport nearly_criterion(const RepSpec& spec, double tol) {
  NearlyReport r;
  const Subspace m = build_rep(spec, tol).m;
  if (spec.flavor == Flavor::RangeOfInner) {
    r.rank_at_zero = numerical_rank(spec.theta.coefficient(0), tol);
    r.target = spec.theta.rows();
  } else {
    r.rank_at_zero = numerical_rank(spec.phi.coefficient(0), tol);
    r.target = spec.phi.cols();
  }
  r.criterion = r.rank_at_zero == r.target;
  r.nearly_defect = nearly_defect(m, tol).defect;
  r.agree = r.criterion == (r.nearly_defect == 0);
  return r;
}

EquivalenceReport equivalence_check(const std::function<Subspace(int)>& factory, int order,
                                    double tol) {
  EquivalenceReport r;
  r.order = order;
  const Subspace a = factory(order);
  const Subspace b = factory(2 * order);
  const int d = a.ambient().dim;
  r.star_n = almost_defect(backshift(order, d), a, tol).defect;
  r.star_2n = almost_defect(backshift(2 * order, d), b, tol).defect;
  r.shift_n = almost_defect(shift(order, d), a, tol).defect;
  r.shift_2n = almost_defect(shift(2 * order, d), b, tol).defect;
  r.star_stable = r.star_n == r.star_2n;
  r.shift_stable = r.shift_n == r.shift_2n;
  r.consistent = r.star_stable == r.shift_stable;
  return r;
}

HalfspaceProbe halfspace_probe(const RepSpec& spec, const std::vector<int>& orders, double tol) {
  if (orders.size() < 2) throw InvalidParameter("halfspace probe needs at least two orders");
  HalfspaceProbe p;
  p.orders = orders;
  for (int n : orders) p.dims.push_back(build_rep(spec.at_order(n), tol).m.rank());
  const std::size_t k = p.dims.size();
  p.classification = p.dims[k - 1] == p.dims[k - 2] ? "stabilizing" : "growing";
  return p;
}

TwoSidedReport two_sided_model_check(const LaurentSymbol& theta, int order, double tol,
                                     double tol_angle) {
  const InnerCertificate c = require_inner(theta, "Theta");
  if (!c.is_two_sided(kInnerTol)) throw NotInner("Theta is not two-sided inner");
  const LaurentSymbol ts = adjoint_symbol(theta);
  const int ext = order + theta.analytic_reach() + 1;
  const TruncatedOp hstar = adjoint(hankel(ts, order, ext));
  TwoSidedReport r;
  r.range_angle = subspace_distance(from_range(hstar, tol), model_space(theta, order, tol));
  const TruncatedOp lhs = chain_product({Factor::H(ts, true), Factor::H(ts)}, order);
  const TruncatedOp rhs = model_projector(theta, order);
  r.identity_residual = spectral_norm(lhs.matrix() - rhs.matrix());
  r.tolerance = 100.0 * (lhs.err_bound() + rhs.err_bound()) + 1e-10;
  r.passed = r.range_angle <= tol_angle && r.identity_residual <= r.tolerance;
  return r;
}

int constant_block_rank(const LaurentSymbol& theta, int order, double tol) {
  const Matrix q = model_projector(theta, order).matrix();
  return numerical_rank(q.topRows(theta.rows()), tol);
}

}  // namespace hardy
