#include "hardy/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace hardy {

namespace {

template <class Solver>
Svd take(const Solver& d, unsigned options) {
  Svd r{d.singularValues(), Matrix(), Matrix()};
  if (options & (Eigen::ComputeThinU | Eigen::ComputeFullU)) r.u = d.matrixU();
  if (options & (Eigen::ComputeThinV | Eigen::ComputeFullV)) r.v = d.matrixV();
  return r;
}

bool finite(const Svd& r) {
  return r.s.allFinite() && r.u.allFinite() && r.v.allFinite();
}

}  // namespace

Svd svd(const Matrix& a, unsigned options) {
  if (!a.allFinite()) throw InvalidParameter("svd of a non-finite matrix");
  Eigen::BDCSVD<Matrix> d(a, options);
  if (d.info() == Eigen::Success) {
    Svd r = take(d, options);
    if (finite(r)) return r;
  }
  Eigen::JacobiSVD<Matrix> j(a, options);
  return take(j, options);
}

Eigen::VectorXd singular_values(const Matrix& a) {
  if (a.size() == 0) return Eigen::VectorXd(0);
  return svd(a, 0).s;
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)(0);
}

double norm_bound(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const double one = a.cwiseAbs().colwise().sum().maxCoeff();
  const double inf = a.cwiseAbs().rowwise().sum().maxCoeff();
  return std::sqrt(one * inf);
}

int numerical_rank(const Matrix& a, double rel_tol) {
  const Eigen::VectorXd s = singular_values(a);
  if (s.size() == 0) return 0;
  const double cut = rel_tol * std::max(s(0), 1.0);
  return static_cast<int>((s.array() > cut).count());
}

}  // namespace hardy
