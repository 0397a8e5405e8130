#include "hardy/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hardy {

namespace {

void same_ambient(const Subspace& m, const Subspace& l) {
  if (!(m.ambient() == l.ambient())) throw DimensionMismatch("subspaces live in different ambients");
}

Matrix empty_basis(const Ambient& a) { return Matrix(a.size(), 0); }

}  // namespace

Subspace::Subspace(Ambient ambient, Matrix basis, double tol, int guard, std::string origin)
    : ambient_(ambient), basis_(std::move(basis)), tol_(tol), guard_(guard),
      origin_(std::move(origin)) {
  if (ambient_.order < 1 || ambient_.dim < 1) throw InvalidParameter("bad ambient");
  if (basis_.rows() != ambient_.size()) throw DimensionMismatch("basis rows differ from ambient size");
  if (basis_.cols() > basis_.rows()) throw DimensionMismatch("more basis vectors than ambient size");
}

Subspace Subspace::zero(Ambient ambient) { return Subspace(ambient, empty_basis(ambient), 0.0); }

Subspace Subspace::whole(Ambient ambient) {
  return Subspace(ambient, Matrix::Identity(ambient.size(), ambient.size()), 0.0);
}

Subspace Subspace::degrees(Ambient ambient, int lo, int hi) {
  lo = std::max(lo, 0);
  hi = std::min(hi, ambient.order - 1);
  if (hi < lo) return zero(ambient);
  const long n = static_cast<long>(hi - lo + 1) * ambient.dim;
  Matrix b = Matrix::Zero(ambient.size(), n);
  b.block(static_cast<long>(lo) * ambient.dim, 0, n, n).setIdentity();
  return Subspace(ambient, std::move(b), 0.0);
}

Subspace Subspace::from_columns(Ambient ambient, const Matrix& cols, double tol, int guard,
                                std::string origin) {
  if (cols.rows() != ambient.size()) throw DimensionMismatch("columns differ from ambient size");
  if (cols.cols() == 0) return Subspace(ambient, empty_basis(ambient), tol, guard, std::move(origin));
  const Svd d = svd(cols, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = d.s;
  const double cut = tol * std::max(s(0), 1.0);
  const long r = (s.array() > cut).count();
  return Subspace(ambient, d.u.leftCols(r), tol, guard, std::move(origin));
}

Subspace Subspace::with_guard(int g) const {
  return Subspace(ambient_, basis_, tol_, g, origin_);
}

Subspace Subspace::with_origin(std::string origin) const {
  return Subspace(ambient_, basis_, tol_, guard_, std::move(origin));
}

Subspace from_range(const TruncatedOp& a, double tol) {
  return Subspace::from_columns({a.order_out(), a.dim_out()}, a.matrix(), tol, a.guard(), "range");
}

Subspace kernel(const TruncatedOp& a, double tol) {
  const Ambient amb{a.order_in(), a.dim_in()};
  const Matrix& m = a.matrix();
  const Svd d = svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = d.s;
  const double cut = tol * std::max(s.size() ? s(0) : 0.0, 1.0);
  const long r = (s.array() > cut).count();
  return Subspace(amb, d.v.rightCols(amb.size() - r), tol, a.guard(), "kernel");
}

Subspace sum(const Subspace& m, const Subspace& l) {
  same_ambient(m, l);
  Matrix cols(m.ambient().size(), m.rank() + l.rank());
  cols << m.basis(), l.basis();
  return Subspace::from_columns(m.ambient(), cols, std::max(m.tol(), l.tol()),
                                std::max(m.guard(), l.guard()), "sum");
}

namespace {

struct Principal {
  Eigen::VectorXd angles;  // ascending
  Matrix vectors_m;        // principal vectors in M, matching order
};

Principal principal(const Subspace& m, const Subspace& l) {
  Principal p;
  const long k = std::min(m.rank(), l.rank());
  if (k == 0) {
    p.angles = Eigen::VectorXd(0);
    p.vectors_m = Matrix(m.ambient().size(), 0);
    return p;
  }
  const Matrix c = m.basis().adjoint() * l.basis();
  const Svd d = svd(c, Eigen::ComputeFullU);
  const Matrix x = m.basis() * d.u.leftCols(k);
  const Matrix resid = x - l.basis() * (l.basis().adjoint() * x);
  p.angles.resize(k);
  for (long i = 0; i < k; ++i) {
    const double cs = std::min(d.s(i), 1.0);
    const double sn = std::min(resid.col(i).norm(), 1.0);
    p.angles(i) = std::atan2(sn, cs);
  }
  p.vectors_m = x;
  return p;
}

}  // namespace

Subspace intersect(const Subspace& m, const Subspace& l, double tol_angle) {
  same_ambient(m, l);
  const Principal p = principal(m, l);
  const long r = (p.angles.array() < tol_angle).count();
  // Angles are ascending up to rounding; pick by mask to be safe.
  Matrix cols(m.ambient().size(), r);
  long j = 0;
  for (long i = 0; i < p.angles.size(); ++i) {
    if (p.angles(i) < tol_angle) cols.col(j++) = p.vectors_m.col(i);
  }
  return Subspace::from_columns(m.ambient(), cols, std::max(m.tol(), l.tol()),
                                std::max(m.guard(), l.guard()), "intersect");
}

Subspace orth_complement(const Subspace& m) {
  const long n = m.ambient().size();
  if (m.rank() == 0) return Subspace::whole(m.ambient()).with_guard(m.guard());
  Eigen::HouseholderQR<Matrix> qr(m.basis());
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return Subspace(m.ambient(), q.rightCols(n - m.rank()), m.tol(), m.guard(), "complement");
}

Subspace rel_complement(const Subspace& m, const Subspace& l, double tol_angle) {
  const Subspace common = intersect(m, l, tol_angle);
  const Matrix b = m.basis() - common.basis() * (common.basis().adjoint() * m.basis());
  return Subspace::from_columns(m.ambient(), b, std::max(m.tol(), 1e-8),
                                std::max(m.guard(), l.guard()), "rel_complement");
}

Containment contains(const Subspace& m, const Subspace& l, double tol) {
  same_ambient(m, l);
  Containment c;
  if (l.rank() == 0) {
    c.contained = true;
    return c;
  }
  const Matrix r = l.basis() - m.basis() * (m.basis().adjoint() * l.basis());
  c.residual = spectral_norm(r);
  c.contained = c.residual <= tol;
  return c;
}

Matrix projector_matrix(const Subspace& m) { return m.basis() * m.basis().adjoint(); }

TruncatedOp projector(const Subspace& m) {
  TruncatedOp::Meta meta;
  meta.confined_in = meta.confined_out = true;
  meta.raise = meta.lower = m.ambient().order - 1;
  return TruncatedOp(projector_matrix(m), m.ambient().order, m.ambient().order, m.ambient().dim,
                     m.ambient().dim, meta);
}

std::vector<double> principal_angles(const Subspace& m, const Subspace& l) {
  same_ambient(m, l);
  const Principal p = principal(m, l);
  std::vector<double> out(p.angles.data(), p.angles.data() + p.angles.size());
  std::sort(out.begin(), out.end());
  return out;
}

double subspace_distance(const Subspace& m, const Subspace& l) {
  if (m.rank() != l.rank()) return std::numbers::pi / 2;
  const auto a = principal_angles(m, l);
  return a.empty() ? 0.0 : a.back();
}

bool same_subspace(const Subspace& m, const Subspace& l, double tol_angle) {
  return subspace_distance(m, l) <= tol_angle;
}

Subspace image(const TruncatedOp& a, const Subspace& m, double tol) {
  if (a.order_in() != m.ambient().order || a.dim_in() != m.ambient().dim)
    throw DimensionMismatch("image: operator does not act on the subspace ambient");
  return Subspace::from_columns({a.order_out(), a.dim_out()}, a.matrix() * m.basis(), tol,
                                std::max(a.guard(), m.guard()), "image");
}

}  // namespace hardy
