#include "hardy/truncated.hpp"

#include <algorithm>
#include <optional>

namespace hardy {

namespace {

int coanalytic(const LaurentSymbol& s) { return std::max(0, -s.n_min()); }
int analytic(const LaurentSymbol& s) { return std::max(0, s.n_max()); }

void check_window(int guard, int order_in, int order_out) {
  if (guard >= std::min(order_in, order_out))
    throw WindowRefused("guard " + std::to_string(guard) + " leaves no trusted window");
}

void check_order(int order) {
  if (order < 1) throw InvalidParameter("truncation order must be positive");
}

int band_leak_up(const TruncatedOp::Meta& m, int order_in, int order_out) {
  if (m.confined_in) return 0;
  return std::clamp(m.lower - (order_in - order_out), 0, order_out);
}

int band_leak_down(const TruncatedOp::Meta& m, int order_in, int order_out) {
  if (m.confined_out) return 0;
  return std::clamp(m.raise - (order_out - order_in), 0, order_in);
}

/// Leaf operators are exact compressions; their leaks follow from the bands.
TruncatedOp::Meta leaf(TruncatedOp::Meta m, int order_in, int order_out) {
  m.leak_up = band_leak_up(m, order_in, order_out);
  m.leak_down = band_leak_down(m, order_in, order_out);
  return m;
}

}  // namespace

TruncatedOp::TruncatedOp(Matrix matrix, int order_in, int order_out, int dim_in, int dim_out,
                         Meta meta)
    : m_(std::move(matrix)), order_in_(order_in), order_out_(order_out), dim_in_(dim_in),
      dim_out_(dim_out), meta_(meta) {
  check_order(order_in);
  check_order(order_out);
  if (m_.rows() != static_cast<long>(order_out) * dim_out ||
      m_.cols() != static_cast<long>(order_in) * dim_in)
    throw DimensionMismatch("matrix shape disagrees with orders and fiber dimensions");
  check_window(meta_.guard, order_in, order_out);
}


TruncatedOp TruncatedOp::dense(const Matrix& m, int order, int dim_in, int dim_out) {
  Meta meta;
  meta.confined_in = meta.confined_out = true;
  if (m.rows() != static_cast<long>(order) * dim_out || m.cols() != static_cast<long>(order) * dim_in)
    throw DimensionMismatch("dense operator shape disagrees with order");
  for (int j = 0; j < order; ++j) {
    for (int k = 0; k < order; ++k) {
      if (m.block(j * dim_out, k * dim_in, dim_out, dim_in).cwiseAbs().maxCoeff() == 0.0) continue;
      meta.raise = std::max(meta.raise, j - k);
      meta.lower = std::max(meta.lower, k - j);
    }
  }
  return TruncatedOp(m, order, order, dim_in, dim_out, meta);
}

TruncatedOp TruncatedOp::identity(int order, int dim) {
  check_order(order);
  return TruncatedOp(Matrix::Identity(order * dim, order * dim), order, order, dim, dim, Meta{});
}

TruncatedOp TruncatedOp::zero(int order_in, int order_out, int dim_in, int dim_out) {
  Meta meta;
  meta.confined_in = meta.confined_out = true;
  return TruncatedOp(Matrix::Zero(order_out * dim_out, order_in * dim_in), order_in, order_out,
                     dim_in, dim_out, meta);
}

Matrix TruncatedOp::windowed(int g) const {
  check_window(g, order_in_, order_out_);
  return m_.topLeftCorner(static_cast<long>(order_out_ - g) * dim_out_,
                          static_cast<long>(order_in_ - g) * dim_in_);
}

TruncatedOp TruncatedOp::with_guard(int g) const {
  Meta meta = meta_;
  meta.guard = g;
  return TruncatedOp(m_, order_in_, order_out_, dim_in_, dim_out_, meta);
}

TruncatedOp toeplitz(const LaurentSymbol& phi, int order) { return toeplitz(phi, order, order); }

TruncatedOp toeplitz(const LaurentSymbol& phi, int order_in, int order_out) {
  check_order(order_in);
  check_order(order_out);
  const int dout = phi.rows(), din = phi.cols();
  Matrix m = Matrix::Zero(static_cast<long>(order_out) * dout, static_cast<long>(order_in) * din);
  for (int n = phi.n_min(); n <= phi.n_max(); ++n) {
    const Matrix c = phi.coefficient(n);
    if (c.cwiseAbs().maxCoeff() == 0.0) continue;
    for (int k = std::max(0, -n); k < order_in && k + n < order_out; ++k)
      m.block((k + n) * dout, k * din, dout, din) = c;
  }
  TruncatedOp::Meta meta;
  meta.err_bound = phi.tail_bound();
  meta.raise = analytic(phi);
  meta.lower = coanalytic(phi);
  return TruncatedOp(std::move(m), order_in, order_out, din, dout, leaf(meta, order_in, order_out));
}

TruncatedOp hankel(const LaurentSymbol& phi, int order) { return hankel(phi, order, order); }

TruncatedOp hankel(const LaurentSymbol& phi, int order_in, int order_out) {
  check_order(order_in);
  check_order(order_out);
  const int dout = phi.rows(), din = phi.cols();
  Matrix m = Matrix::Zero(static_cast<long>(order_out) * dout, static_cast<long>(order_in) * din);
  const int r = coanalytic(phi);
  for (int s = 0; s < r; ++s) {
    const Matrix c = phi.coefficient(-s - 1);
    for (int j = 0; j <= s && j < order_out; ++j) {
      const int k = s - j;
      if (k < order_in) m.block(j * dout, k * din, dout, din) = c;
    }
  }
  TruncatedOp::Meta meta;
  meta.err_bound = phi.tail_bound();
  meta.raise = meta.lower = std::max(0, r - 1);
  return TruncatedOp(std::move(m), order_in, order_out, din, dout, leaf(meta, order_in, order_out));
}

TruncatedOp shift(int order, int dim) { return shift(order, order, dim); }
TruncatedOp shift(int order_in, int order_out, int dim) {
  return toeplitz(LaurentSymbol::monomial(1, dim), order_in, order_out);
}
TruncatedOp backshift(int order, int dim) { return backshift(order, order, dim); }
TruncatedOp backshift(int order_in, int order_out, int dim) {
  return toeplitz(LaurentSymbol::monomial(-1, dim), order_in, order_out);
}

TruncatedOp proj_const(int order, int dim) {
  check_order(order);
  Matrix m = Matrix::Zero(order * dim, order * dim);
  m.topLeftCorner(dim, dim).setIdentity();
  TruncatedOp::Meta meta;
  meta.confined_in = meta.confined_out = true;
  return TruncatedOp(std::move(m), order, order, dim, dim, meta);
}

TruncatedOp compose(const TruncatedOp& a, const TruncatedOp& b) {
  if (a.order_in() != b.order_out() || a.dim_in() != b.dim_out())
    throw DimensionMismatch("compose: operator shapes are incompatible");
  const auto& ma = a.meta();
  const auto& mb = b.meta();
  TruncatedOp::Meta meta;
  meta.guard = std::max(ma.guard, mb.guard) + std::min(a.leak_up(), b.leak_down());
  meta.err_bound = 0.0;
  if (ma.err_bound > 0.0 || mb.err_bound > 0.0)
    meta.err_bound = norm_bound(a.matrix()) * mb.err_bound + ma.err_bound * norm_bound(b.matrix()) +
                     ma.err_bound * mb.err_bound;
  meta.raise = ma.raise + mb.raise;
  meta.lower = ma.lower + mb.lower;
  meta.confined_in = mb.confined_in || (ma.confined_in && b.leak_up() == 0);
  meta.confined_out = ma.confined_out || (mb.confined_out && a.leak_down() == 0);
  // Two valid bounds: one from the summed bands, one from following the leaks
  // of the factors through the other factor's band.
  const int up_path = std::max(
      a.leak_up(),
      b.leak_up() > 0 ? std::clamp(b.leak_up() + ma.lower - (a.order_in() - a.order_out()), 0,
                                   a.order_out())
                      : 0);
  const int down_path = std::max(
      b.leak_down(),
      a.leak_down() > 0 ? std::clamp(a.leak_down() + mb.raise - (b.order_out() - b.order_in()), 0,
                                     b.order_in())
                        : 0);
  meta.leak_up = meta.confined_in
                     ? 0
                     : std::min(up_path, band_leak_up(meta, b.order_in(), a.order_out()));
  meta.leak_down = meta.confined_out
                       ? 0
                       : std::min(down_path, band_leak_down(meta, b.order_in(), a.order_out()));
  return TruncatedOp(a.matrix() * b.matrix(), b.order_in(), a.order_out(), b.dim_in(),
                     a.dim_out(), meta);
}

TruncatedOp compose(const std::vector<TruncatedOp>& ops) {
  if (ops.empty()) throw InvalidParameter("compose: empty product");
  TruncatedOp out = ops.back();
  for (auto it = ops.rbegin() + 1; it != ops.rend(); ++it) out = compose(*it, out);
  return out;
}

TruncatedOp add(const TruncatedOp& a, const TruncatedOp& b) {
  if (a.order_in() != b.order_in() || a.order_out() != b.order_out() || a.dim_in() != b.dim_in() ||
      a.dim_out() != b.dim_out())
    throw DimensionMismatch("add: operator shapes differ");
  const auto& ma = a.meta();
  const auto& mb = b.meta();
  TruncatedOp::Meta meta;
  meta.guard = std::max(ma.guard, mb.guard);
  meta.err_bound = ma.err_bound + mb.err_bound;
  meta.raise = std::max(ma.raise, mb.raise);
  meta.lower = std::max(ma.lower, mb.lower);
  meta.confined_in = ma.confined_in && mb.confined_in;
  meta.confined_out = ma.confined_out && mb.confined_out;
  meta.leak_up = std::max(ma.leak_up, mb.leak_up);
  meta.leak_down = std::max(ma.leak_down, mb.leak_down);
  return TruncatedOp(a.matrix() + b.matrix(), a.order_in(), a.order_out(), a.dim_in(), a.dim_out(),
                     meta);
}

TruncatedOp subtract(const TruncatedOp& a, const TruncatedOp& b) { return add(a, scale(b, -1.0)); }

TruncatedOp scale(const TruncatedOp& a, cplx s) {
  TruncatedOp::Meta meta = a.meta();
  meta.err_bound *= std::abs(s);
  return TruncatedOp(s * a.matrix(), a.order_in(), a.order_out(), a.dim_in(), a.dim_out(), meta);
}

TruncatedOp adjoint(const TruncatedOp& a) {
  TruncatedOp::Meta meta = a.meta();
  std::swap(meta.raise, meta.lower);
  std::swap(meta.leak_up, meta.leak_down);
  std::swap(meta.confined_in, meta.confined_out);
  return TruncatedOp(a.matrix().adjoint(), a.order_out(), a.order_in(), a.dim_out(), a.dim_in(),
                     meta);
}

int Factor::dim_in() const {
  switch (kind) {
    case Kind::Toeplitz:
    case Kind::Hankel:
      return adjoint ? symbol.rows() : symbol.cols();
    default:
      return dim;
  }
}

int Factor::dim_out() const {
  switch (kind) {
    case Kind::Toeplitz:
    case Kind::Hankel:
      return adjoint ? symbol.cols() : symbol.rows();
    default:
      return dim;
  }
}

int Factor::raise() const {
  switch (kind) {
    case Kind::Toeplitz:
      return adjoint ? coanalytic(symbol) : analytic(symbol);
    case Kind::Hankel:
      return std::max(0, coanalytic(symbol) - 1);
    case Kind::Shift:
      return 1;
    case Kind::Backshift:
    case Kind::ProjConst:
      return 0;
  }
  return 0;
}

int Factor::lower() const {
  switch (kind) {
    case Kind::Toeplitz:
      return adjoint ? analytic(symbol) : coanalytic(symbol);
    case Kind::Hankel:
      return std::max(0, coanalytic(symbol) - 1);
    case Kind::Backshift:
      return 1;
    case Kind::Shift:
    case Kind::ProjConst:
      return 0;
  }
  return 0;
}

namespace {

TruncatedOp build_factor(const Factor& f, int order_in, int order_out) {
  const int oi = f.adjoint ? order_out : order_in;
  const int oo = f.adjoint ? order_in : order_out;
  TruncatedOp op = [&]() {
    switch (f.kind) {
      case Factor::Kind::Toeplitz:
        return toeplitz(f.symbol, oi, oo);
      case Factor::Kind::Hankel:
        return hankel(f.symbol, oi, oo);
      case Factor::Kind::Shift:
        return shift(oi, oo, f.dim);
      case Factor::Kind::Backshift:
        return backshift(oi, oo, f.dim);
      case Factor::Kind::ProjConst:
        break;
    }
    if (oi != oo) {
      Matrix m = Matrix::Zero(static_cast<long>(oo) * f.dim, static_cast<long>(oi) * f.dim);
      m.topLeftCorner(f.dim, f.dim).setIdentity();
      TruncatedOp::Meta meta;
      meta.confined_in = meta.confined_out = true;
      return TruncatedOp(std::move(m), oi, oo, f.dim, f.dim, meta);
    }
    return proj_const(oi, f.dim);
  }();
  return f.adjoint ? adjoint(op) : op;
}

}  // namespace

TruncatedOp chain_product(const std::vector<Factor>& factors, int order) {
  if (factors.empty()) throw InvalidParameter("chain_product: empty product");
  for (std::size_t i = 0; i + 1 < factors.size(); ++i) {
    if (factors[i].dim_in() != factors[i + 1].dim_out())
      throw DimensionMismatch("chain_product: fiber dimensions do not chain");
  }
  if (factors.size() == 1) return build_factor(factors[0], order, order);
  // Intermediate space i (between factors i and i+1) keeps the degrees that
  // are reachable from the input and can still reach an output degree.
  const std::size_t k = factors.size();
  std::vector<int> from_input(k, order), to_output(k, order);
  for (std::size_t i = k - 1; i > 0; --i) {
    const Factor& f = factors[i];
    const int prev = i + 1 == k ? order : from_input[i];
    from_input[i - 1] = f.kind == Factor::Kind::ProjConst ? 1 : prev + f.raise();
  }
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const Factor& f = factors[i];
    const int prev = i == 0 ? order : to_output[i - 1];
    to_output[i] = f.kind == Factor::Kind::ProjConst ? 1 : prev + f.lower();
  }
  TruncatedOp::Meta meta;
  Matrix m;
  for (std::size_t i = k; i-- > 0;) {
    const int out = i == 0 ? order : std::min(from_input[i - 1], to_output[i - 1]);
    const int in = i + 1 == k ? order : std::min(from_input[i], to_output[i]);
    const TruncatedOp op = build_factor(factors[i], in, out);
    if (i + 1 == k) {
      m = op.matrix();
      meta.err_bound = op.err_bound();
    } else {
      if (op.err_bound() > 0.0 || meta.err_bound > 0.0)
        meta.err_bound = norm_bound(op.matrix()) * meta.err_bound +
                         op.err_bound() * norm_bound(m) + op.err_bound() * meta.err_bound;
      m = op.matrix() * m;
    }
    meta.raise += factors[i].raise();
    meta.lower += factors[i].lower();
  }
  // Every path from an input degree to an output degree stays inside the
  // retained intermediate degrees, so the product is an exact compression.
  return TruncatedOp(std::move(m), order, order, factors.back().dim_in(), factors.front().dim_out(),
                     leaf(meta, order, order));
}

const std::vector<std::string>& identity_names() {
  static const std::vector<std::string> names{"thc", "ts", "hs", "lemma_basic_one",
                                              "lemma_basic_two", "hankel_adjoint"};
  return names;
}

IdentityReport verify_identity(const std::string& name, const std::vector<LaurentSymbol>& symbols,
                               int order, double abs_tol) {
  auto need = [&](std::size_t n) {
    if (symbols.size() != n)
      throw InvalidParameter(name + " expects " + std::to_string(n) + " symbol(s)");
  };
  using F = Factor;
  std::optional<TruncatedOp> lhs, rhs;
  if (name == "thc") {
    need(2);
    const auto& om = symbols[0];
    const auto& ps = symbols[1];
    if (om.cols() != ps.rows()) throw DimensionMismatch("thc: Omega and Psi do not chain");
    lhs = subtract(toeplitz(multiply(om, ps), order), chain_product({F::T(om), F::T(ps)}, order));
    rhs = chain_product({F::H(adjoint_symbol(om), true), F::H(ps)}, order);
  } else if (name == "ts") {
    need(1);
    const auto& ph = symbols[0];
    const int f = ph.rows(), e1 = ph.cols();
    lhs = chain_product({F::Sstar(f), F::T(ph)}, order);
    rhs = add(chain_product({F::T(ph), F::Sstar(e1)}, order),
              chain_product({F::Sstar(f), F::T(ph), F::P(e1)}, order));
  } else if (name == "hs") {
    need(1);
    const auto& ph = symbols[0];
    const int f = ph.rows(), e1 = ph.cols();
    lhs = chain_product({F::S(f), F::H(ph)}, order);
    rhs = add(subtract(chain_product({F::H(ph), F::Sstar(e1)}, order),
                       chain_product({F::P(f), F::H(ph), F::Sstar(e1)}, order)),
              chain_product({F::S(f), F::H(ph), F::P(e1)}, order));
  } else if (name == "lemma_basic_one") {
    need(2);
    const auto& ph = symbols[0];
    const auto& ps = symbols[1];
    if (ph.cols() != ps.rows()) throw DimensionMismatch("lemma_basic_one: Phi and Psi do not chain");
    const int f = ph.rows(), e1 = ph.cols(), e = ps.cols();
    lhs = subtract(chain_product({F::Sstar(f), F::T(ph), F::H(ps)}, order),
                   chain_product({F::T(ph), F::H(ps), F::S(e)}, order));
    rhs = chain_product({F::Sstar(f), F::T(ph), F::P(e1), F::H(ps)}, order);
  } else if (name == "lemma_basic_two") {
    need(2);
    const auto& ph = symbols[0];
    const auto& ps = symbols[1];
    if (ph.cols() != ps.rows()) throw DimensionMismatch("lemma_basic_two: Phi and Psi do not chain");
    const int f = ph.rows(), e1 = ph.cols(), e = ps.cols();
    lhs = subtract(chain_product({F::S(f), F::H(ph), F::T(ps)}, order),
                   chain_product({F::H(ph), F::T(ps), F::Sstar(e)}, order));
    rhs = add(subtract(chain_product({F::H(ph), F::Sstar(e1), F::T(ps), F::P(e)}, order),
                       chain_product({F::P(f), F::H(ph), F::Sstar(e1), F::T(ps)}, order)),
              chain_product({F::S(f), F::H(ph), F::P(e1), F::T(ps)}, order));
  } else if (name == "hankel_adjoint") {
    need(1);
    lhs = adjoint(hankel(symbols[0], order));
    rhs = hankel(tilde(symbols[0]), order);
  } else {
    throw InvalidParameter("unknown identity: " + name);
  }
  IdentityReport rep;
  rep.name = name;
  rep.order = order;
  rep.guard = std::max(lhs->guard(), rhs->guard());
  rep.err = lhs->err_bound() + rhs->err_bound();
  rep.residual = spectral_norm(lhs->windowed(rep.guard) - rhs->windowed(rep.guard));
  rep.tolerance = 100.0 * rep.err + abs_tol;
  rep.passed = rep.residual <= rep.tolerance;
  return rep;
}

}  // namespace hardy
