#include "hardy/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hardy {

namespace {

int grid_for(const LaurentSymbol& s, int grid) {
  const int width = s.n_max() - s.n_min() + 1;
  return std::max(grid, 4 * width);
}

void require_projection(const Matrix& p) {
  if (p.rows() != p.cols()) throw InvalidParameter("projection must be square");
  const double idem = (p * p - p).cwiseAbs().maxCoeff();
  const double herm = (p - p.adjoint()).cwiseAbs().maxCoeff();
  if (idem > 1e-12 || herm > 1e-12) throw InvalidParameter("not an orthogonal projection");
}

}  // namespace

LaurentSymbol::LaurentSymbol(int rows, int cols, int n_min, std::vector<Matrix> coeffs,
                             double tail_bound)
    : rows_(rows), cols_(cols), n_min_(n_min), coeffs_(std::move(coeffs)),
      tail_bound_(tail_bound) {
  if (rows <= 0 || cols <= 0) throw InvalidParameter("symbol dimensions must be positive");
  if (tail_bound < 0.0 || !std::isfinite(tail_bound))
    throw InvalidParameter("tail bound must be finite and nonnegative");
  if (coeffs_.empty()) {
    coeffs_.push_back(Matrix::Zero(rows, cols));
    n_min_ = 0;
  }
  for (const auto& c : coeffs_) {
    if (c.rows() != rows || c.cols() != cols)
      throw DimensionMismatch("coefficient shape differs from symbol shape");
  }
}

LaurentSymbol LaurentSymbol::constant(const Matrix& c) {
  return LaurentSymbol(static_cast<int>(c.rows()), static_cast<int>(c.cols()), 0, {c});
}

LaurentSymbol LaurentSymbol::identity(int dim) { return constant(Matrix::Identity(dim, dim)); }

LaurentSymbol LaurentSymbol::monomial(int n, int dim, cplx scale) {
  return LaurentSymbol(dim, dim, n, {scale * Matrix::Identity(dim, dim)});
}

LaurentSymbol LaurentSymbol::zero(int rows, int cols) {
  return LaurentSymbol(rows, cols, 0, {Matrix::Zero(rows, cols)});
}

Matrix LaurentSymbol::coefficient(int n) const {
  if (n < n_min() || n > n_max()) return Matrix::Zero(rows_, cols_);
  return coeffs_[static_cast<std::size_t>(n - n_min_)];
}

Matrix LaurentSymbol::evaluate(cplx z) const {
  Matrix out = Matrix::Zero(rows_, cols_);
  if (z == cplx(0.0)) {
    if (n_min_ < 0) {
      for (int n = n_min_; n < 0; ++n) {
        if (coefficient(n).cwiseAbs().maxCoeff() != 0.0)
          throw InvalidParameter("coanalytic symbol evaluated at 0");
      }
    }
    return coefficient(0);
  }
  // Horner in z over the stored band, then scale by z^n_min.
  for (int i = static_cast<int>(coeffs_.size()) - 1; i >= 0; --i) {
    out = out * z + coeffs_[static_cast<std::size_t>(i)];
  }
  return out * std::pow(z, n_min_);
}

double LaurentSymbol::sup_norm(int grid) const {
  const int g = grid_for(*this, grid);
  double best = 0.0;
  for (int t = 0; t < g; ++t) {
    const double th = 2.0 * std::numbers::pi * t / g;
    best = std::max(best, spectral_norm(evaluate(std::polar(1.0, th))));
  }
  return best + tail_bound_;
}

LaurentSymbol LaurentSymbol::trimmed() const {
  auto is_zero = [](const Matrix& m) { return m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0; };
  std::size_t lo = 0;
  std::size_t hi = coeffs_.size();
  while (lo < hi && is_zero(coeffs_[lo])) ++lo;
  while (hi > lo && is_zero(coeffs_[hi - 1])) --hi;
  if (lo == hi) return LaurentSymbol(rows_, cols_, 0, {Matrix::Zero(rows_, cols_)}, tail_bound_);
  std::vector<Matrix> kept(coeffs_.begin() + static_cast<long>(lo),
                           coeffs_.begin() + static_cast<long>(hi));
  return LaurentSymbol(rows_, cols_, n_min_ + static_cast<int>(lo), std::move(kept), tail_bound_);
}

LaurentSymbol LaurentSymbol::compressed(double eps) const {
  LaurentSymbol t = trimmed();
  std::vector<Matrix> c = t.coeffs_;
  int lo_n = t.n_min_;
  double dropped = 0.0;
  while (c.size() > 1) {
    const int hi_n = lo_n + static_cast<int>(c.size()) - 1;
    if (hi_n <= 0) break;
    const double w = spectral_norm(c.back());
    if (dropped + w > eps) break;
    dropped += w;
    c.pop_back();
  }
  while (c.size() > 1 && lo_n < 0) {
    const double w = spectral_norm(c.front());
    if (dropped + w > eps) break;
    dropped += w;
    c.erase(c.begin());
    ++lo_n;
  }
  return LaurentSymbol(rows_, cols_, lo_n, std::move(c), t.tail_bound_ + dropped).trimmed();
}

bool LaurentSymbol::operator==(const LaurentSymbol& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_ || n_min_ != other.n_min_) return false;
  if (coeffs_.size() != other.coeffs_.size() || tail_bound_ != other.tail_bound_) return false;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != other.coeffs_[i]) return false;
  }
  return true;
}

LaurentSymbol blaschke_factor(cplx a, double eps_sym) {
  const double r = std::abs(a);
  if (!(r < 1.0)) throw InvalidParameter("Blaschke parameter must satisfy |a| < 1");
  if (!(eps_sym > 0.0)) throw InvalidParameter("eps_sym must be positive");
  const double w = 1.0 - r * r;
  int n_max = 0;
  double rem = w / (1.0 - r);
  while (rem > eps_sym) {
    ++n_max;
    rem *= r;
  }
  std::vector<Matrix> c(static_cast<std::size_t>(n_max) + 1, Matrix(1, 1));
  c[0](0, 0) = -a;
  cplx p = 1.0;
  for (int k = 1; k <= n_max; ++k) {
    c[static_cast<std::size_t>(k)](0, 0) = w * p;
    p *= std::conj(a);
  }
  return LaurentSymbol(1, 1, 0, std::move(c), rem).trimmed();
}

LaurentSymbol blaschke_potapov_factor(cplx a, const Matrix& proj, double eps_sym) {
  require_projection(proj);
  const int d = static_cast<int>(proj.rows());
  const Matrix comp = Matrix::Identity(d, d) - proj;
  if (comp.cwiseAbs().maxCoeff() <= 1e-12)
    throw InvalidParameter("projection equals the identity");
  const LaurentSymbol phi = blaschke_factor(a, eps_sym);
  std::vector<Matrix> c;
  for (int k = 0; k <= std::max(phi.n_max(), 0); ++k) {
    Matrix m = phi.coefficient(k)(0, 0) * comp;
    if (k == 0) m += proj;
    c.push_back(std::move(m));
  }
  return LaurentSymbol(d, d, 0, std::move(c), phi.tail_bound()).trimmed();
}

LaurentSymbol blaschke_potapov_product(const Matrix& unitary,
                                       const std::vector<std::pair<cplx, Matrix>>& factors,
                                       double eps_sym) {
  const int d = static_cast<int>(unitary.rows());
  if (unitary.cols() != d) throw DimensionMismatch("unitary must be square");
  if ((unitary.adjoint() * unitary - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
    throw InvalidParameter("constant factor is not unitary");
  LaurentSymbol out = LaurentSymbol::constant(unitary);
  for (const auto& [a, p] : factors) {
    if (p.rows() != d) throw DimensionMismatch("factor dimension differs from unitary");
    out = multiply(out, blaschke_potapov_factor(a, p, eps_sym)).compressed(eps_sym);
  }
  return out;
}

LaurentSymbol multiply(const LaurentSymbol& a, const LaurentSymbol& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("multiply: inner dimensions differ");
  const int lo = a.n_min() + b.n_min();
  const int hi = a.n_max() + b.n_max();
  std::vector<Matrix> c(static_cast<std::size_t>(hi - lo + 1), Matrix::Zero(a.rows(), b.cols()));
  const auto& ac = a.coefficients();
  const auto& bc = b.coefficients();
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (ac[i].cwiseAbs().maxCoeff() == 0.0) continue;
    for (std::size_t j = 0; j < bc.size(); ++j) c[i + j].noalias() += ac[i] * bc[j];
  }
  double tail = 0.0;
  if (a.tail_bound() > 0.0 || b.tail_bound() > 0.0) {
    const double na = a.sup_norm() - a.tail_bound();
    const double nb = b.sup_norm() - b.tail_bound();
    tail = na * b.tail_bound() + a.tail_bound() * nb + a.tail_bound() * b.tail_bound();
  }
  return LaurentSymbol(a.rows(), b.cols(), lo, std::move(c), tail).trimmed();
}

LaurentSymbol add(const LaurentSymbol& a, const LaurentSymbol& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("add: shapes differ");
  const int lo = std::min(a.n_min(), b.n_min());
  const int hi = std::max(a.n_max(), b.n_max());
  std::vector<Matrix> c;
  for (int n = lo; n <= hi; ++n) c.push_back(a.coefficient(n) + b.coefficient(n));
  return LaurentSymbol(a.rows(), a.cols(), lo, std::move(c), a.tail_bound() + b.tail_bound())
      .trimmed();
}

LaurentSymbol scale(const LaurentSymbol& a, cplx s) {
  std::vector<Matrix> c;
  for (const auto& m : a.coefficients()) c.push_back(s * m);
  return LaurentSymbol(a.rows(), a.cols(), a.n_min(), std::move(c), std::abs(s) * a.tail_bound())
      .trimmed();
}

LaurentSymbol tilde(const LaurentSymbol& a) {
  std::vector<Matrix> c;
  for (const auto& m : a.coefficients()) c.push_back(m.adjoint());
  return LaurentSymbol(a.cols(), a.rows(), a.n_min(), std::move(c), a.tail_bound());
}

LaurentSymbol adjoint_symbol(const LaurentSymbol& a) {
  std::vector<Matrix> c;
  for (int n = -a.n_max(); n <= -a.n_min(); ++n) c.push_back(a.coefficient(-n).adjoint());
  return LaurentSymbol(a.cols(), a.rows(), -a.n_max(), std::move(c), a.tail_bound());
}

namespace {

enum class Layout { Diag, Horizontal, Vertical };

LaurentSymbol assemble(const std::vector<LaurentSymbol>& blocks, Layout layout) {
  if (blocks.empty()) throw InvalidParameter("no blocks given");
  int rows = 0, cols = 0;
  int lo = blocks[0].n_min(), hi = blocks[0].n_max();
  double tail = 0.0;
  for (const auto& b : blocks) {
    lo = std::min(lo, b.n_min());
    hi = std::max(hi, b.n_max());
    tail = std::max(tail, b.tail_bound());
    switch (layout) {
      case Layout::Diag:
        rows += b.rows();
        cols += b.cols();
        break;
      case Layout::Horizontal:
        if (b.rows() != blocks[0].rows()) throw DimensionMismatch("hstack: row counts differ");
        rows = b.rows();
        cols += b.cols();
        break;
      case Layout::Vertical:
        if (b.cols() != blocks[0].cols()) throw DimensionMismatch("vstack: column counts differ");
        rows += b.rows();
        cols = b.cols();
        break;
    }
  }
  // Disjoint blocks: the tail of the stack is bounded by the sum of block tails.
  double tail_sum = 0.0;
  for (const auto& b : blocks) tail_sum += b.tail_bound();
  if (layout == Layout::Diag) tail_sum = tail;
  std::vector<Matrix> c;
  for (int n = lo; n <= hi; ++n) {
    Matrix m = Matrix::Zero(rows, cols);
    int r = 0, k = 0;
    for (const auto& b : blocks) {
      m.block(r, k, b.rows(), b.cols()) = b.coefficient(n);
      if (layout != Layout::Horizontal) r += b.rows();
      if (layout != Layout::Vertical) k += b.cols();
    }
    c.push_back(std::move(m));
  }
  return LaurentSymbol(rows, cols, lo, std::move(c), tail_sum).trimmed();
}

}  // namespace

LaurentSymbol block_diag(const std::vector<LaurentSymbol>& blocks) {
  return assemble(blocks, Layout::Diag);
}
LaurentSymbol hstack(const std::vector<LaurentSymbol>& blocks) {
  return assemble(blocks, Layout::Horizontal);
}
LaurentSymbol vstack(const std::vector<LaurentSymbol>& blocks) {
  return assemble(blocks, Layout::Vertical);
}

LaurentSymbol series_reciprocal(const LaurentSymbol& h, double eps, int max_terms) {
  if (h.rows() != 1 || h.cols() != 1) throw InvalidParameter("reciprocal needs a scalar symbol");
  if (!h.is_analytic()) throw InvalidParameter("reciprocal needs an analytic symbol");
  const cplx h0 = h.coefficient(0)(0, 0);
  if (std::abs(h0) == 0.0) throw InvalidParameter("reciprocal: h(0) = 0");
  constexpr int kWindow = 16;
  std::vector<cplx> q{1.0 / h0};
  const int hb = h.n_max();
  double tail = 0.0;
  bool done = false;
  for (int n = 1; n < max_terms && !done; ++n) {
    cplx acc = 0.0;
    for (int k = 1; k <= std::min(n, hb); ++k) acc += h.coefficient(k)(0, 0) * q[static_cast<std::size_t>(n - k)];
    q.push_back(-acc / h0);
    if (n + 1 >= 2 * kWindow && n >= hb) {
      double m0 = 0.0, m1 = 0.0;
      for (int i = n - 2 * kWindow + 1; i <= n - kWindow; ++i) m0 = std::max(m0, std::abs(q[static_cast<std::size_t>(i)]));
      for (int i = n - kWindow + 1; i <= n; ++i) m1 = std::max(m1, std::abs(q[static_cast<std::size_t>(i)]));
      if (m1 == 0.0 && m0 == 0.0) {
        tail = 0.0;
        done = true;
        break;
      }
      if (m0 == 0.0) continue;
      const double rho = std::pow(m1 / m0, 1.0 / kWindow);
      if (rho < 1.0) {
        const double est = m1 / (1.0 - rho);
        if (est <= eps) {
          tail = est;
          done = true;
        }
      }
    }
  }
  if (!done) throw InvalidParameter("reciprocal series shows no geometric decay");
  std::vector<Matrix> c;
  for (const cplx v : q) {
    Matrix m(1, 1);
    m(0, 0) = v;
    c.push_back(std::move(m));
  }
  return LaurentSymbol(1, 1, 0, std::move(c), tail).trimmed();
}

InnerCertificate check_inner(const LaurentSymbol& theta, double tol) {
  if (!theta.is_analytic()) throw InvalidParameter("check_inner needs an analytic symbol");
  InnerCertificate cert;
  auto deviation = [](const LaurentSymbol& p) {
    double worst = 0.0;
    for (int n = p.n_min(); n <= p.n_max(); ++n) {
      Matrix c = p.coefficient(n);
      if (n == 0) c -= Matrix::Identity(c.rows(), c.cols());
      worst = std::max(worst, spectral_norm(c));
    }
    if (p.n_min() > 0 || p.n_max() < 0) worst = std::max(worst, 1.0);
    return worst;
  };
  const LaurentSymbol adj = adjoint_symbol(theta);
  // Exact convolutions without tail bookkeeping: the residual is coefficientwise.
  auto bare = [](const LaurentSymbol& s) {
    return LaurentSymbol(s.rows(), s.cols(), s.n_min(), s.coefficients(), 0.0);
  };
  cert.left_inner_residual = deviation(multiply(bare(adj), bare(theta)));
  if (theta.rows() == theta.cols())
    cert.two_sided_residual = deviation(multiply(bare(theta), bare(adj)));

  const Matrix t0 = theta.coefficient(0);
  Eigen::JacobiSVD<Matrix> svd(t0, Eigen::ComputeFullV);
  cert.singular_values_at_zero = svd.singularValues();
  const double cut = 1.0 - tol;
  int u = 0;
  for (int i = 0; i < cert.singular_values_at_zero.size(); ++i) {
    const double s = cert.singular_values_at_zero(i);
    if (s > cut) ++u;
    if (std::abs(s - cut) <= 100.0 * tol) cert.near_threshold.push_back(s);
  }
  cert.unitary_part_rank = u;
  cert.unitary_direction_basis = svd.matrixV().leftCols(u);
  cert.pure_part_dims = {theta.cols() - u, theta.rows() - u};
  return cert;
}

HittSarasonPair hitt_sarason_pair(const LaurentSymbol& phi, double eps_sym) {
  if (phi.rows() != 1 || phi.cols() != 1) throw InvalidParameter("Hitt-Sarason pair needs a scalar symbol");
  if (!phi.is_analytic()) throw InvalidParameter("Hitt-Sarason pair needs an analytic symbol");
  if (!check_inner(phi, 1e-8).is_inner(1e-8)) throw NotInner("symbol is not inner");
  const cplx p0 = phi.coefficient(0)(0, 0);
  if (std::abs(p0) >= 1.0 - 1e-10) throw InvalidParameter("degenerate: |phi(0)| is 1");
  const LaurentSymbol one = LaurentSymbol::identity(1);
  const LaurentSymbol h = add(one, scale(phi, -std::conj(p0)));
  const LaurentSymbol g = scale(h, 1.0 / std::sqrt(1.0 - std::norm(p0)));
  const LaurentSymbol q = series_reciprocal(h, eps_sym);
  const LaurentSymbol num = add(scale(one, p0), scale(phi, -1.0));
  LaurentSymbol theta = multiply(num, q).compressed(eps_sym);
  return {g, theta};
}

}  // namespace hardy
