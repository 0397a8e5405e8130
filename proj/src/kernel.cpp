#include "hardy/kernel.hpp"

#include <cmath>

namespace hardy {

namespace {

void check_point(cplx z) {
  if (std::abs(z) > kMaxKernelRadius) throw InvalidParameter("kernel point outside |z| <= 0.95");
}

int fiber(const RepSpec& spec) {
  return spec.flavor == Flavor::PhiModel ? spec.phi.rows() : spec.theta.rows();
}

}  // namespace

Vector szego_vector(cplx w, const Vector& c, int order, double tail_tol) {
  check_point(w);
  if (std::pow(std::abs(w), order) > tail_tol)
    throw WindowRefused("Szego tail |w|^N exceeds the tolerance at this order");
  const long d = c.size();
  Vector out(order * d);
  cplx p = 1.0;
  for (int k = 0; k < order; ++k) {
    out.segment(k * d, d) = p * c;
    p *= std::conj(w);
  }
  return out;
}

Matrix kernel_m(const RepSpec& spec, cplx z, cplx w) {
  check_point(z);
  check_point(w);
  const cplx den = 1.0 - z * std::conj(w);
  if (spec.flavor == Flavor::RangeOfInner)
    return spec.theta.evaluate(z) * spec.theta.evaluate(w).adjoint() / den;
  const Matrix tz = spec.theta.evaluate(z);
  const Matrix tw = spec.theta.evaluate(w);
  const Matrix mid = Matrix::Identity(tz.rows(), tz.rows()) - tz * tw.adjoint();
  return spec.phi.evaluate(z) * mid * spec.phi.evaluate(w).adjoint() / den;
}

Matrix kernel_mperp(const RepSpec& spec, cplx z, cplx w) {
  const int f = fiber(spec);
  const cplx den = 1.0 - z * std::conj(w);
  return Matrix::Identity(f, f) / den - kernel_m(spec, z, w);
}

KernelConsistency kernel_consistency(const RepSpec& spec, cplx w, const Vector& c,
                                     bool complement, double tol) {
  const int n = spec.order;
  const int f = fiber(spec);
  if (c.size() != f) throw DimensionMismatch("kernel vector has wrong fiber dimension");
  const Vector kw = szego_vector(w, c, n);

  // u(z) = numerator of kernel_m(z, w) c, as coefficients.
  std::vector<Vector> u(static_cast<std::size_t>(n), Vector::Zero(f));
  if (spec.flavor == Flavor::RangeOfInner) {
    const Vector s = spec.theta.evaluate(w).adjoint() * c;
    for (int k = 0; k < n; ++k) u[static_cast<std::size_t>(k)] = spec.theta.coefficient(k) * s;
  } else {
    const Vector v = spec.phi.evaluate(w).adjoint() * c;
    const Vector s = spec.theta.evaluate(w).adjoint() * v;
    const LaurentSymbol pt = multiply(spec.phi, spec.theta);
    for (int k = 0; k < n; ++k)
      u[static_cast<std::size_t>(k)] = spec.phi.coefficient(k) * v - pt.coefficient(k) * s;
  }
  // Divide by (1 - z conj(w)).
  Vector y(static_cast<long>(n) * f);
  Vector run = Vector::Zero(f);
  for (int k = 0; k < n; ++k) {
    run = u[static_cast<std::size_t>(k)] + std::conj(w) * run;
    y.segment(static_cast<long>(k) * f, f) = run;
  }
  if (complement) y = kw - y;

  Subspace m = build_rep(spec, tol).m;
  if (complement) m = orth_complement(m);
  const Vector pk = m.basis() * (m.basis().adjoint() * kw);
  KernelConsistency out;
  out.residual = (y - pk).norm() / kw.norm();
  out.tail = std::pow(std::abs(w), n) / (1.0 - std::abs(w));
  return out;
}

}  // namespace hardy
