#include "hardy/invariance.hpp"

#include <algorithm>

namespace hardy {

namespace {

void check_square_on(const TruncatedOp& t, const Subspace& m) {
  if (!t.is_square()) throw DimensionMismatch("operator must be square");
  if (t.order() != m.ambient().order || t.dim_out() != m.ambient().dim)
    throw DimensionMismatch("operator and subspace ambients differ");
}

Matrix defect_operator(const TruncatedOp& t, const Subspace& m) {
  const Matrix& q = m.basis();
  const Matrix tq = t.matrix() * q;
  const Matrix out = tq - q * (q.adjoint() * tq);
  return out * q.adjoint();
}

int window_guard(const TruncatedOp& t, const Subspace& m) {
  const int g = t.guard() + spill(t) + m.guard();
  if (2 * g >= m.ambient().order)
    throw WindowRefused("defect window guard " + std::to_string(g) + " is at least half the order");
  return g;
}

DefectReport rank_report(const Matrix& d, const Ambient& amb, int g, double tol) {
  DefectReport rep{0, Subspace::zero(amb), 0.0, g, 0.0, 0.0};
  const long w = static_cast<long>(amb.order - g) * amb.dim;
  const Matrix dw = d.topLeftCorner(w, w);
  const Eigen::VectorXd s = singular_values(dw);
  rep.sigma_max = s.size() ? s(0) : 0.0;
  const double cut = tol * std::max(rep.sigma_max, 1.0);
  rep.defect = static_cast<int>((s.array() > cut).count());
  if (rep.defect < s.size()) rep.sigma_cut = s(rep.defect);
  // Left singular vectors of the full-height column block stay inside M^perp.
  const Matrix cols = d.leftCols(w);
  const Matrix u = svd(cols, Eigen::ComputeThinU).u.leftCols(rep.defect);
  rep.defect_space = Subspace(amb, u, tol, g, "defect");
  rep.residual = spectral_norm(cols - u * (u.adjoint() * cols));
  return rep;
}

}  // namespace

int spill(const TruncatedOp& t) { return std::min(1, std::max(t.leak_up(), t.leak_down())); }

DefectReport almost_defect(const TruncatedOp& t, const Subspace& m, double tol) {
  check_square_on(t, m);
  const int g = window_guard(t, m);
  return rank_report(defect_operator(t, m), m.ambient(), g, tol);
}

Subspace defect_space_qr(const TruncatedOp& t, const Subspace& m, double tol) {
  check_square_on(t, m);
  const int g = window_guard(t, m);
  const long w = static_cast<long>(m.ambient().order - g) * m.ambient().dim;
  const Matrix cols = defect_operator(t, m).leftCols(w);
  Eigen::ColPivHouseholderQR<Matrix> qr(cols);
  const double scale = std::max(qr.maxPivot(), 1.0);
  qr.setThreshold(tol * scale / std::max(qr.maxPivot(), 1e-300));
  const long r = qr.rank();
  const Matrix q = qr.householderQ() * Matrix::Identity(cols.rows(), r);
  return Subspace(m.ambient(), q, tol, g, "defect_qr");
}

DefectReport nearly_defect(const Subspace& m, double tol) {
  const Ambient amb = m.ambient();
  const TruncatedOp sstar = backshift(amb.order, amb.dim);
  const int g = window_guard(sstar, m);
  const Subspace m1 = intersect(m, Subspace::degrees(amb, 1, amb.order - 1));
  const Matrix& q = m.basis();
  const Matrix& q1 = m1.basis();
  const Matrix tq = sstar.matrix() * q1;
  const Matrix d = (tq - q * (q.adjoint() * tq)) * q1.adjoint();
  return rank_report(d, amb, g, tol);
}

DualityReport duality_check(const TruncatedOp& t, const Subspace& m, double tol) {
  if (!t.is_square()) throw DimensionMismatch("duality check needs a square operator");
  DualityReport r;
  r.defect = almost_defect(t, m, tol).defect;
  r.dual_defect = almost_defect(adjoint(t), orth_complement(m), tol).defect;
  r.equal = r.defect == r.dual_defect;
  return r;
}

EnlargementReport enlarged_defect(const TruncatedOp& t, const Subspace& m, const Subspace& w,
                                  double tol) {
  check_square_on(t, m);
  const Subspace mw = sum(m, w);
  EnlargementReport r;
  const Subspace tm = image(t, m, tol);
  const Containment c = contains(mw, tm, 1e3 * tol * std::max(1.0, spectral_norm(t.matrix())));
  r.containment_residual = c.residual;
  if (!c.contained) throw InvalidParameter("W is not a defect space: T M is not inside M + W");
  const Subspace tw = image(t, w, tol);
  r.formula = tw.rank() - intersect(tw, mw).rank();
  r.recomputed = almost_defect(t, mw, tol).defect;
  r.match = r.formula == r.recomputed;
  return r;
}

std::vector<ChainStep> absorption_chain(const TruncatedOp& t, const Subspace& m, int k,
                                        double tol) {
  if (k < 0) throw InvalidParameter("chain length must be nonnegative");
  std::vector<ChainStep> out;
  const DefectReport first = almost_defect(t, m, tol);
  out.push_back({m.rank(), first.defect});
  Subspace acc = m;
  Subspace tw = first.defect_space;
  for (int j = 0; j < k; ++j) {
    acc = sum(acc, tw);
    out.push_back({acc.rank(), almost_defect(t, acc, tol).defect});
    tw = image(t, tw, tol);
  }
  return out;
}

bool nonincreasing(const std::vector<ChainStep>& chain) {
  for (std::size_t i = 1; i < chain.size(); ++i) {
    if (chain[i].defect > chain[i - 1].defect) return false;
  }
  return true;
}

TruncatedOp essential_t0(const TruncatedOp& t, const Subspace& m, const TruncatedOp& w1,
                         const TruncatedOp& w2) {
  check_square_on(t, m);
  if (!w1.is_square() || !w2.is_square() || w1.order() != t.order() || w2.order() != t.order() ||
      w1.dim_in() != t.dim_in() || w2.dim_in() != t.dim_in())
    throw DimensionMismatch("free terms must act on the same space as T");
  const Matrix p = projector_matrix(m);
  const Matrix id = Matrix::Identity(p.rows(), p.cols());
  const Matrix v = -(id - p) * t.matrix() * p + p * w1.matrix() + w2.matrix() * (id - p);
  TruncatedOp out = TruncatedOp::dense(v, t.order(), t.dim_in(), t.dim_out());
  return out;
}

}  // namespace hardy
