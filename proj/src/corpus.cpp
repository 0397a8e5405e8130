#include "hardy/corpus.hpp"

#include <cmath>
#include <optional>

namespace hardy {

namespace {

constexpr int kMaxDraws = 10000;

Matrix gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = cplx(n(rng), n(rng));
  return g;
}

/// Geometric decay rate of the trailing coefficients.
double decay_rate(const LaurentSymbol& s) {
  const int hi = s.n_max();
  const int lo = hi / 2;
  if (hi - lo < 4) return 0.0;
  const double a = spectral_norm(s.coefficient(lo));
  const double b = spectral_norm(s.coefficient(hi));
  if (a == 0.0 || b == 0.0) return 0.0;
  return std::pow(b / a, 1.0 / (hi - lo));
}

}  // namespace

Corpus::Corpus(std::uint64_t seed, double max_zero)
    : seed_(seed), max_zero_(max_zero), rng_(seed) {
  if (!(max_zero > 0.0 && max_zero < 1.0)) throw InvalidParameter("zero radius must lie in (0, 1)");
}

int Corpus::uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

double Corpus::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

cplx Corpus::point(double r) {
  const double rad = r * std::sqrt(uniform(0.0, 1.0));
  return std::polar(rad, uniform(0.0, 2.0 * M_PI));
}

cplx Corpus::unimodular() { return std::polar(1.0, uniform(0.0, 2.0 * M_PI)); }

Matrix Corpus::unitary(int d) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(rng_, d, d));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (int i = 0; i < d; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0.0) q.col(i) *= r(i, i) / a;
  }
  return q;
}

Matrix Corpus::isometry(int rows, int cols) {
  if (cols > rows) throw InvalidParameter("isometry needs rows >= cols");
  return unitary(rows).leftCols(cols);
}

Matrix Corpus::projection(int d, int rank) {
  const Matrix q = isometry(d, rank);
  return q * q.adjoint();
}

Vector Corpus::unit_vector(long n) {
  Vector v = gaussian(rng_, static_cast<int>(n), 1).col(0);
  return v / v.norm();
}

LaurentSymbol Corpus::bp_product(int d, int factors, bool random_unitary) {
  std::vector<std::pair<cplx, Matrix>> fs;
  for (int i = 0; i < factors; ++i) fs.emplace_back(point(), projection(d, uniform_int(0, d - 1)));
  const Matrix u = random_unitary ? unitary(d) : Matrix::Identity(d, d);
  return blaschke_potapov_product(u, fs);
}

LaurentSymbol Corpus::pure_inner(int rows, int cols, int factors) {
  if (cols > rows) throw InvalidParameter("inner symbols need rows >= cols");
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    LaurentSymbol b = bp_product(rows, factors);
    if (cols < rows) b = multiply(b, LaurentSymbol::constant(isometry(rows, cols)));
    const InnerCertificate c = check_inner(b);
    // Keep a clear gap below the unitary threshold.
    if (c.is_pure() && c.singular_values_at_zero(0) < 1.0 - 1e-3) return b;
  }
  throw InvalidParameter("no pure inner symbol found");
}

LaurentSymbol Corpus::inner_with_unitary(int rows, int cols, int factors, int unitary_rank) {
  if (unitary_rank < 0 || unitary_rank > cols || cols > rows)
    throw InvalidParameter("invalid unitary rank or shape");
  const Matrix w = unitary(rows);
  const Matrix v = unitary(cols);
  if (unitary_rank == cols) {
    Matrix j = Matrix::Zero(rows, cols);
    j.topRows(cols).setIdentity();
    return LaurentSymbol::constant(w * j * v.adjoint());
  }
  const LaurentSymbol pure = pure_inner(rows - unitary_rank, cols - unitary_rank, factors);
  LaurentSymbol mid = pure;
  if (unitary_rank > 0) mid = block_diag({LaurentSymbol::identity(unitary_rank), pure});
  return multiply(multiply(LaurentSymbol::constant(w), mid), LaurentSymbol::constant(v.adjoint()));
}

LaurentSymbol Corpus::hitt_sarason_phi(double max_at_zero, double max_rate) {
  const int n = uniform_int(1, 3);
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    LaurentSymbol phi = LaurentSymbol::constant(Matrix::Constant(1, 1, unimodular()));
    for (int i = 0; i < n; ++i) phi = multiply(phi, blaschke_factor(point()));
    phi = phi.compressed(kEpsSym);
    if (std::abs(phi.coefficient(0)(0, 0)) > max_at_zero) continue;
    const HittSarasonPair p = hitt_sarason_pair(phi);
    if (decay_rate(p.theta) > max_rate) continue;
    return phi;
  }
  throw InvalidParameter("no admissible Hitt-Sarason symbol found");
}

LaurentSymbol Corpus::mixed_symbol(int d) {
  switch (uniform_int(0, 2)) {
    case 0:
      return bp_product(d, uniform_int(1, 2));
    case 1:
      return adjoint_symbol(bp_product(d, uniform_int(1, 2)));
    default:
      return scale(add(bp_product(d, 1), adjoint_symbol(bp_product(d, 1))), 0.5);
  }
}

std::vector<LaurentSymbol> Corpus::identity_symbols(const std::string& name, int d) {
  // Symbols read by a Hankel operator get a nonzero coanalytic part.
  auto coanalytic = [&]() {
    return uniform_int(0, 1) ? adjoint_symbol(bp_product(d, uniform_int(1, 2)))
                             : scale(add(bp_product(d, 1), adjoint_symbol(bp_product(d, 1))), 0.5);
  };
  if (name == "thc" || name == "lemma_basic_one") return {mixed_symbol(d), coanalytic()};
  if (name == "lemma_basic_two") return {coanalytic(), mixed_symbol(d)};
  if (name == "ts") return {mixed_symbol(d)};
  if (name == "hs" || name == "hankel_adjoint") return {coanalytic()};
  throw InvalidParameter("unknown identity: " + name);
}

RepSpec Corpus::inner_rep(int order, int max_dim) {
  const int e1 = uniform_int(1, std::min(2, max_dim));
  const int e = e1;
  const int f = uniform_int(e1, max_dim);
  const LaurentSymbol phi = inner_with_unitary(f, e1, uniform_int(1, 2), uniform_int(0, e1 - 1));
  const LaurentSymbol theta = pure_inner(e1, e, uniform_int(1, 2));
  return {phi, theta, order, Flavor::PhiModel};
}

TruncatedOp ProductSum::at_order(int order) const {
  std::optional<TruncatedOp> out;
  for (const auto& t : terms) {
    const TruncatedOp p = chain_product(t, order);
    out = out ? add(*out, p) : p;
  }
  if (!out) throw InvalidParameter("empty operator sum");
  return *out;
}

std::string ProductSum::describe() const {
  std::string s;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) s += " + ";
    for (const auto& f : terms[i]) s += f.kind == Factor::Kind::Hankel ? 'H' : 'T';
  }
  return s;
}

ProductSum random_product_sum(Corpus& c, int d, bool even_hankel) {
  ProductSum ps;
  ps.dim = d;
  ps.even_hankel = even_hankel;
  const int k = c.uniform_int(1, 2);
  for (int i = 0; i < k; ++i) {
    const int m = c.uniform_int(2, 3);
    int h = even_hankel ? 2 * c.uniform_int(0, 1) : (m == 3 ? 2 * c.uniform_int(0, 1) + 1 : 1);
    std::vector<bool> is_h(static_cast<std::size_t>(m), false);
    for (int j = 0; j < h; ++j) {
      int pos;
      do pos = c.uniform_int(0, m - 1);
      while (is_h[static_cast<std::size_t>(pos)]);
      is_h[static_cast<std::size_t>(pos)] = true;
    }
    std::vector<Factor> term;
    for (int j = 0; j < m; ++j) {
      if (is_h[static_cast<std::size_t>(j)])
        term.push_back(Factor::H(adjoint_symbol(c.bp_product(d, c.uniform_int(1, 2)))));
      else
        term.push_back(Factor::T(c.mixed_symbol(d)));
    }
    ps.terms.push_back(std::move(term));
  }
  return ps;
}

}  // namespace hardy
