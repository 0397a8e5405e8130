#include "hardy/scenario.hpp"

#include "hardy/kernel.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace hardy {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

struct Ctx {
  const Scenario& s;
  Tolerances tol;
  int order;
  int compare;
  std::uint64_t seed;
  bool allow_guard_mismatch;
};

using Handler = std::function<void(const json&, const Ctx&, CheckRecord&)>;

void verdict(CheckRecord& r, bool ok) { r.status = ok ? Status::Pass : Status::Fail; }

int order_of(const json& c, const Ctx& x) { return c.value("order", x.order); }

Subspace sub(const json& c, const Ctx& x, int order) {
  return subspace_from_json(need(c, "subspace"), x.s.symbols, order, x.tol.rank);
}

TruncatedOp op_on(const json& c, const Ctx& x, const Subspace& m) {
  return operator_from_json(need(c, "operator"), x.s.symbols, m.ambient().order, m.ambient().dim);
}

RepSpec rep(const json& c, const Ctx& x) {
  return rep_from_json(need(c, "rep"), x.s.symbols, order_of(c, x));
}

LaurentSymbol sym(const json& c, const Ctx& x, const char* key = "symbol") {
  return symbol_from_json(need(c, key), x.s.symbols).symbol;
}

void expect_int(const json& c, CheckRecord& r, int got, bool& ok) {
  if (!c.contains("expect")) return;
  r.expected = c.at("expect");
  ok = ok && got == c.at("expect").get<int>();
}

/// Refuses comparisons of defects taken under different window guards.
bool guards_comparable(const Ctx& x, CheckRecord& r, int g1, int g2) {
  r.details["guards"] = {g1, g2};
  if (g1 == g2 || x.allow_guard_mismatch) return true;
  r.status = Status::Refused;
  r.message = "defects computed under different window guards (" + std::to_string(g1) + " vs " +
              std::to_string(g2) + "); pass --allow-guard-mismatch to compare";
  return false;
}

// ---- checks ----

void check_identity(const json& c, const Ctx& x, CheckRecord& r) {
  const std::string name = need(c, "identity").get<std::string>();
  std::vector<LaurentSymbol> syms;
  for (const auto& s : need(c, "symbols")) syms.push_back(symbol_from_json(s, x.s.symbols).symbol);
  std::vector<int> orders{x.order};
  if (c.contains("orders")) orders = c.at("orders").get<std::vector<int>>();
  bool ok = true;
  double worst = 0.0, tol = 0.0;
  for (int n : orders) {
    const IdentityReport ir = verify_identity(name, syms, n, x.tol.identity);
    ok = ok && ir.passed;
    if (ir.residual >= worst) {
      worst = ir.residual;
      tol = ir.tolerance;
    }
    r.guard = ir.guard;
    r.details["orders"].push_back({{"order", n}, {"residual", ir.residual}, {"tolerance", ir.tolerance}});
  }
  r.residual = worst;
  r.tolerance = tol;
  verdict(r, ok);
}

void check_identity_corpus(const json& c, const Ctx& x, CheckRecord& r) {
  const int count = c.value("count", 50);
  const int max_dim = c.value("max_dim", 2);
  std::vector<int> orders{32, 64};
  if (c.contains("orders")) orders = c.at("orders").get<std::vector<int>>();
  Corpus corpus(x.seed + static_cast<std::uint64_t>(r.index));
  const auto& names = identity_names();
  int failures = 0;
  double worst_ratio = 0.0;
  for (int i = 0; i < count; ++i) {
    const std::string& name = names[static_cast<std::size_t>(i) % names.size()];
    const auto syms = corpus.identity_symbols(name, corpus.uniform_int(1, max_dim));
    for (int n : orders) {
      const IdentityReport ir = verify_identity(name, syms, n, x.tol.identity);
      if (!ir.passed) ++failures;
      worst_ratio = std::max(worst_ratio, ir.residual / ir.tolerance);
    }
  }
  r.details = {{"tuples", count}, {"orders", orders}, {"failures", failures},
               {"worst_residual_over_tolerance", worst_ratio}};
  r.residual = worst_ratio;
  r.tolerance = 1.0;
  verdict(r, failures == 0);
}

void check_inner(const json& c, const Ctx& x, CheckRecord& r) {
  const InnerCertificate cert = hardy::check_inner(sym(c, x), kInnerTol);
  r.residual = cert.left_inner_residual;
  r.tolerance = kInnerTol;
  bool ok = cert.is_inner(kInnerTol);
  r.details["unitary_part_rank"] = cert.unitary_part_rank;
  r.details["pure_part_dims"] = {cert.pure_part_dims.first, cert.pure_part_dims.second};
  if (cert.two_sided_residual) r.details["two_sided_residual"] = *cert.two_sided_residual;
  if (c.contains("expect_unitary_rank")) {
    r.expected = c.at("expect_unitary_rank");
    ok = ok && cert.unitary_part_rank == c.at("expect_unitary_rank").get<int>();
  }
  verdict(r, ok);
}

void check_symbol_value(const json& c, const Ctx& x, CheckRecord& r) {
  const LaurentSymbol s = sym(c, x);
  Matrix got;
  if (c.contains("z")) {
    got = s.evaluate(complex_from_json(c.at("z")));
  } else {
    got = s.coefficient(need(c, "n").get<int>());
  }
  const json& e = need(c, "expect");
  const Matrix want = e.is_array() && !e.empty() && e[0].is_array() && e[0].size() != 2
                          ? matrix_from_json(e)
                          : Matrix::Constant(1, 1, complex_from_json(e));
  r.expected = e;
  if (want.rows() != got.rows() || want.cols() != got.cols()) {
    r.message = "shape mismatch";
    verdict(r, false);
    return;
  }
  r.residual = spectral_norm(got - want);
  r.tolerance = c.value("tol", 1e-10);
  r.details["value"] = matrix_to_json(got);
  verdict(r, *r.residual <= *r.tolerance);
}

void check_defect(const json& c, const Ctx& x, CheckRecord& r) {
  const int n = order_of(c, x);
  const Subspace m = sub(c, x, n);
  const DefectReport d = almost_defect(op_on(c, x, m), m, x.tol.rank);
  r.defect = d.defect;
  r.guard = d.window_guard;
  r.residual = d.residual;
  r.details["sigma_max"] = d.sigma_max;
  r.details["sigma_cut"] = d.sigma_cut;
  r.details["subspace_rank"] = m.rank();
  bool ok = true;
  expect_int(c, r, d.defect, ok);
  if (c.value("stable", false)) {
    const Subspace m2 = sub(c, x, x.compare);
    const DefectReport d2 = almost_defect(op_on(c, x, m2), m2, x.tol.rank);
    r.details["compare_order"] = x.compare;
    r.details["compare_defect"] = d2.defect;
    if (!guards_comparable(x, r, d.window_guard, d2.window_guard)) return;
    ok = ok && d2.defect == d.defect;
  }
  verdict(r, ok);
}

void check_nearly_defect(const json& c, const Ctx& x, CheckRecord& r) {
  const Subspace m = sub(c, x, order_of(c, x));
  const DefectReport d = nearly_defect(m, x.tol.rank);
  r.defect = d.defect;
  r.guard = d.window_guard;
  bool ok = true;
  expect_int(c, r, d.defect, ok);
  verdict(r, ok);
}

void check_duality(const json& c, const Ctx& x, CheckRecord& r) {
  const Subspace m = sub(c, x, order_of(c, x));
  const DualityReport d = duality_check(op_on(c, x, m), m, x.tol.rank);
  r.defect = d.defect;
  r.details["dual_defect"] = d.dual_defect;
  bool ok = d.equal;
  expect_int(c, r, d.defect, ok);
  verdict(r, ok);
}

void check_enlargement(const json& c, const Ctx& x, CheckRecord& r) {
  const Subspace m = sub(c, x, order_of(c, x));
  const TruncatedOp t = op_on(c, x, m);
  const DefectReport d = almost_defect(t, m, x.tol.rank);
  const EnlargementReport e = enlarged_defect(t, m, d.defect_space, x.tol.rank);
  r.defect = e.recomputed;
  r.residual = e.containment_residual;
  r.details = {{"formula", e.formula}, {"recomputed", e.recomputed}, {"defect", d.defect}};
  verdict(r, e.match);
}

void check_absorption(const json& c, const Ctx& x, CheckRecord& r) {
  const Subspace m = sub(c, x, order_of(c, x));
  const auto chain = absorption_chain(op_on(c, x, m), m, c.value("steps", 3), x.tol.rank);
  json steps = json::array();
  std::vector<int> defects;
  for (const auto& s : chain) {
    steps.push_back({{"dim", s.dim}, {"defect", s.defect}});
    defects.push_back(s.defect);
  }
  r.details["chain"] = steps;
  bool ok = nonincreasing(chain);
  if (c.contains("expect")) {
    r.expected = c.at("expect");
    ok = ok && defects == c.at("expect").get<std::vector<int>>();
  }
  verdict(r, ok);
}

void check_subspace_rank(const json& c, const Ctx& x, CheckRecord& r) {
  const Subspace m = sub(c, x, order_of(c, x));
  r.details["rank"] = m.rank();
  bool ok = true;
  expect_int(c, r, m.rank(), ok);
  verdict(r, ok);
}

void check_represent(const json& c, const Ctx& x, CheckRecord& r) {
  const RepSpec spec = rep(c, x);
  const Representation rp = build_rep(spec, x.tol.rank, c.value("require_pure", true));
  r.residual = rp.pi.residual;
  r.tolerance = rp.pi.tolerance;
  r.details["dim"] = rp.m.rank();
  bool ok = rp.pi.passed;
  if (c.contains("expect_dim")) {
    r.expected = c.at("expect_dim");
    ok = ok && rp.m.rank() == c.at("expect_dim").get<int>();
  }
  if (c.contains("compare")) {
    const Subspace other = subspace_from_json(c.at("compare"), x.s.symbols, spec.order, x.tol.rank);
    const double angle = subspace_distance(rp.m, other);
    r.details["angle"] = angle;
    ok = ok && angle <= x.tol.angle;
  }
  verdict(r, ok);
}

void check_theorem_defect(const json& c, const Ctx& x, CheckRecord& r) {
  const RepSpec spec = rep(c, x);
  const std::string dir = c.value("shift", std::string("backward"));
  if (dir != "backward" && dir != "forward") fail("shift must be \"backward\" or \"forward\"");
  const TheoremDefect t =
      dir == "backward" ? defect_thm_main(spec, x.tol.rank) : defect_thm_main2(spec, x.tol.rank);
  r.defect = t.generic_defect;
  r.residual = t.angle;
  r.tolerance = x.tol.angle;
  r.details = {{"theorem_defect", t.defect}, {"generic_defect", t.generic_defect}, {"angle", t.angle}};
  bool ok = t.match;
  expect_int(c, r, t.generic_defect, ok);
  verdict(r, ok);
}

void check_perp_rep(const json& c, const Ctx& x, CheckRecord& r) {
  const PerpRep p = perp_rep(rep(c, x), x.tol.rank, x.tol.angle);
  r.residual = std::max(p.angle_direct, p.angle_rep);
  r.tolerance = x.tol.angle;
  r.details = {{"angle_direct", p.angle_direct}, {"angle_rep", p.angle_rep}, {"dim", p.mperp.rank()}};
  verdict(r, p.passed);
}

void check_nearly(const json& c, const Ctx& x, CheckRecord& r) {
  const NearlyReport n = nearly_criterion(rep(c, x), x.tol.rank);
  r.defect = n.nearly_defect;
  r.details = {{"rank_at_zero", n.rank_at_zero}, {"target", n.target}, {"criterion", n.criterion}};
  bool ok = n.agree;
  if (c.contains("expect")) {
    r.expected = c.at("expect");
    ok = ok && n.criterion == c.at("expect").get<bool>();
  }
  verdict(r, ok);
}

void check_equivalence(const json& c, const Ctx& x, CheckRecord& r) {
  const json& sj = need(c, "subspace");
  auto factory = [&](int n) { return subspace_from_json(sj, x.s.symbols, n, x.tol.rank); };
  const int n = order_of(c, x);
  const Subspace a = factory(n), b = factory(2 * n);
  const int d = a.ambient().dim;
  const int g1 = almost_defect(shift(n, d), a, x.tol.rank).window_guard;
  const int g2 = almost_defect(shift(2 * n, d), b, x.tol.rank).window_guard;
  if (!guards_comparable(x, r, g1, g2)) return;
  const EquivalenceReport e = equivalence_check(factory, n, x.tol.rank);
  r.details = {{"star", {e.star_n, e.star_2n}}, {"shift", {e.shift_n, e.shift_2n}},
               {"star_stable", e.star_stable}, {"shift_stable", e.shift_stable}};
  bool ok = e.consistent;
  if (c.contains("expect")) {
    r.expected = c.at("expect");
    const auto want = c.at("expect").get<std::vector<int>>();
    ok = ok && want.size() == 2 && e.star_n == want[0] && e.shift_n == want[1] && e.star_stable &&
         e.shift_stable;
  }
  verdict(r, ok);
}

void check_halfspace(const json& c, const Ctx& x, CheckRecord& r) {
  const auto orders = need(c, "orders").get<std::vector<int>>();
  const HalfspaceProbe p = halfspace_probe(rep(c, x), orders, x.tol.rank);
  r.details = {{"orders", p.orders}, {"dims", p.dims}, {"classification", p.classification},
               {"note", "heuristic: rank growth across orders"}};
  bool ok = true;
  if (c.contains("expect")) {
    r.expected = c.at("expect");
    ok = p.classification == c.at("expect").get<std::string>();
  }
  if (c.contains("expect_dims")) ok = ok && p.dims == c.at("expect_dims").get<std::vector<int>>();
  verdict(r, ok);
}

void check_two_sided(const json& c, const Ctx& x, CheckRecord& r) {
  const TwoSidedReport t = two_sided_model_check(sym(c, x), order_of(c, x), x.tol.rank, x.tol.angle);
  r.residual = t.identity_residual;
  r.tolerance = t.tolerance;
  r.details["range_angle"] = t.range_angle;
  verdict(r, t.passed);
}

void check_hitt_sarason(const json& c, const Ctx& x, CheckRecord& r) {
  const LaurentSymbol phi = sym(c, x, "phi");
  const int n = order_of(c, x);
  const HittSarasonPair p = hitt_sarason_pair(phi);
  const Representation rp = build_rep({p.g, p.theta, n, Flavor::PhiModel}, x.tol.rank);
  const double angle = subspace_distance(rp.m, model_space(phi, n, x.tol.rank));
  const double theta0 = std::abs(p.theta.coefficient(0)(0, 0));
  r.residual = rp.pi.residual;
  r.tolerance = rp.pi.tolerance;
  r.details = {{"angle", angle}, {"theta_at_zero", theta0}, {"g_at_zero", complex_to_json(p.g.evaluate(0.0)(0, 0))}};
  bool ok = rp.pi.passed && angle <= x.tol.angle && theta0 <= 1e-10;
  if (c.contains("expect_g0")) {
    r.expected = c.at("expect_g0");
    ok = ok && std::abs(p.g.evaluate(0.0)(0, 0) - complex_from_json(c.at("expect_g0"))) <= 1e-10;
  }
  verdict(r, ok);
}

void check_perturb(const json& c, const Ctx& x, CheckRecord& r) {
  PerturbationSpec ps;
  if (c.contains("terms")) ps = perturbation_from_json(c.at("terms"));
  ps.kind = parse_kind(need(c, "kind").get<std::string>());
  const bool negate = c.value("negate", false);
  TruncatedOp base = TruncatedOp::identity(1, 1);
  TruncatedOp t0 = base;
  std::optional<Subspace> m;
  std::optional<int> core_rank, rank_bound;
  if (ps.kind == PerturbationKind::T0General) {
    m = sub(c, x, order_of(c, x));
    base = op_on(c, x, *m);
    t0 = synth_t0_general(base, *m, ps);
  } else {
    const RepSpec spec = rep(c, x);
    m = build_rep(spec, x.tol.rank).m;
    const int f = spec.phi.rows();
    const bool back = ps.kind == PerturbationKind::T1Backshift;
    base = back ? backshift(spec.order, f) : shift(spec.order, f);
    if (ps.kind == PerturbationKind::T0Shift) {
      t0 = synth_t0_shift(spec, ps);
      core_rank = numerical_rank(t0_shift_core(spec).matrix(), x.tol.rank);
      rank_bound = spec.theta.cols();
    } else if (back) {
      t0 = synth_t1_backshift(spec, ps);
      core_rank = numerical_rank(t1_backshift_core(spec).matrix(), x.tol.rank);
      rank_bound = spec.phi.cols();
    } else {
      t0 = synth_t2_reducing(spec, ps);
    }
  }
  const InvarianceMode mode =
      ps.kind == PerturbationKind::T2Reducing ? InvarianceMode::Reducing : InvarianceMode::Invariant;
  const TruncatedOp total = negate ? subtract(base, t0) : add(base, t0);
  const InvarianceReport ir = verify_invariance(total, *m, mode, x.tol.invariance);
  const double res = std::max(ir.residual, ir.adjoint_residual);
  r.residual = res;
  r.guard = ir.window_guard;
  r.details["residual"] = ir.residual;
  if (mode == InvarianceMode::Reducing) r.details["adjoint_residual"] = ir.adjoint_residual;
  bool ok;
  if (negate) {
    r.tolerance = 1e-3;
    r.details["negative_control"] = true;
    ok = res >= 1e-3;
  } else {
    r.tolerance = x.tol.invariance;
    ok = ir.passed;
  }
  if (core_rank) {
    r.details["core_rank"] = *core_rank;
    r.details["core_rank_bound"] = *rank_bound;
    ok = ok && *core_rank <= *rank_bound;
  }
  verdict(r, ok);
}

void check_kernel(const json& c, const Ctx& x, CheckRecord& r) {
  const RepSpec spec = rep(c, x);
  const cplx w = complex_from_json(need(c, "w"));
  const int f = spec.flavor == Flavor::RangeOfInner ? spec.theta.rows() : spec.phi.rows();
  Vector cv = Vector::Zero(f);
  if (c.contains("c"))
    cv = vector_from_json(c.at("c"));
  else
    cv(0) = 1.0;
  const KernelConsistency k = kernel_consistency(spec, w, cv, c.value("complement", false), x.tol.rank);
  r.residual = k.residual;
  r.tolerance = x.tol.kernel;
  r.details["tail"] = k.tail;
  verdict(r, k.residual <= x.tol.kernel);
}

void check_kernel_value(const json& c, const Ctx& x, CheckRecord& r) {
  const RepSpec spec = rep(c, x);
  const cplx z = complex_from_json(need(c, "z"));
  const cplx w = complex_from_json(need(c, "w"));
  const Matrix got = c.value("complement", false) ? kernel_mperp(spec, z, w) : kernel_m(spec, z, w);
  const json& e = need(c, "expect");
  const Matrix want = e.is_array() && !e.empty() && e[0].is_array() && e[0].size() != 2
                          ? matrix_from_json(e)
                          : Matrix::Constant(1, 1, complex_from_json(e));
  r.expected = e;
  r.details["value"] = matrix_to_json(got);
  r.residual = spectral_norm(got - want);
  r.tolerance = c.value("tol", 1e-10);
  verdict(r, want.rows() == got.rows() && *r.residual <= *r.tolerance);
}

void check_kernel_complement(const json& c, const Ctx& x, CheckRecord& r) {
  const RepSpec spec = rep(c, x);
  Corpus corpus(x.seed + static_cast<std::uint64_t>(r.index));
  const int points = c.value("points", 10);
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const cplx z = corpus.point(0.8), w = corpus.point(0.8);
    const Matrix sum = kernel_m(spec, z, w) + kernel_mperp(spec, z, w);
    const int f = static_cast<int>(sum.rows());
    const Matrix szego = Matrix::Identity(f, f) / (1.0 - z * std::conj(w));
    worst = std::max(worst, spectral_norm(sum - szego));
  }
  r.residual = worst;
  r.tolerance = 1e-9;
  verdict(r, worst <= 1e-9);
}

void check_model_dim(const json& c, const Ctx& x, CheckRecord& r) {
  const LaurentSymbol theta = sym(c, x);
  std::vector<int> orders{x.order};
  if (c.contains("orders")) orders = c.at("orders").get<std::vector<int>>();
  std::vector<int> dims;
  for (int n : orders) dims.push_back(model_space(theta, n, x.tol.rank).rank());
  r.details["dims"] = dims;
  bool ok = true;
  for (int d : dims) expect_int(c, r, d, ok);
  verdict(r, ok);
}

void check_defect_corpus(const json& c, const Ctx& x, CheckRecord& r) {
  const int count = c.value("count", 20);
  const int n = order_of(c, x);
  Corpus corpus(x.seed + static_cast<std::uint64_t>(r.index));
  int failures = 0;
  json bad = json::array();
  for (int i = 0; i < count; ++i) {
    const RepSpec spec = corpus.inner_rep(n);
    const int f = spec.phi.rows();
    const int e = spec.theta.cols();
    const int want_star = spec.phi.cols() - hardy::check_inner(spec.phi).unitary_part_rank;
    bool ok = true;
    for (int order : {n, x.compare}) {
      const Subspace m = build_rep(spec.at_order(order), x.tol.rank).m;
      const int ds = almost_defect(shift(order, f), m, x.tol.rank).defect;
      const int db = almost_defect(backshift(order, f), m, x.tol.rank).defect;
      ok = ok && ds == e && db == want_star;
    }
    if (!ok) {
      ++failures;
      bad.push_back(i);
    }
  }
  r.details = {{"specs", count}, {"failures", failures}, {"failed_indices", bad}};
  verdict(r, failures == 0);
}

const std::map<std::string, std::pair<Handler, CheckInfo>>& registry() {
  static const std::map<std::string, std::pair<Handler, CheckInfo>> table = [] {
    std::map<std::string, std::pair<Handler, CheckInfo>> t;
    auto reg = [&](const std::string& name, Handler h, std::string fields, std::string summary) {
      t[name] = {std::move(h), CheckInfo{name, std::move(fields), std::move(summary)}};
    };
    reg("identity", check_identity, "identity, symbols, orders?",
        "operator identity on the trusted window (thc, ts, hs, lemma_basic_one, lemma_basic_two, "
        "hankel_adjoint)");
    reg("identity_corpus", check_identity_corpus, "count?, max_dim?, orders?",
        "all catalogued identities over seeded random Blaschke-Potapov tuples");
    reg("inner", check_inner, "symbol, expect_unitary_rank?", "inner certificate of a symbol");
    reg("symbol_value", check_symbol_value, "symbol, z | n, expect, tol?",
        "symbol value at a point or a Fourier coefficient");
    reg("defect", check_defect, "operator, subspace, expect?, stable?, order?",
        "almost-invariance defect; stable compares with the comparison order");
    reg("nearly_defect", check_nearly_defect, "subspace, expect?", "nearly S*-invariance defect");
    reg("duality", check_duality, "operator, subspace, expect?", "defect of (T, M) vs (T*, M^perp)");
    reg("enlargement", check_enlargement, "operator, subspace",
        "defect of M + W from the enlargement formula vs recomputed");
    reg("absorption", check_absorption, "operator, subspace, steps?, expect?",
        "defects along M, M + W, M + W + TW, ...");
    reg("subspace_rank", check_subspace_rank, "subspace, expect?", "dimension of a subspace");
    reg("represent", check_represent, "rep, expect_dim?, compare?, require_pure?",
        "builds M = Phi K_Theta and certifies the partial isometry");
    reg("theorem_defect", check_theorem_defect, "rep, shift (backward|forward), expect?",
        "theorem defect space vs generic rank computation");
    reg("perp_rep", check_perp_rep, "rep", "M^perp = R(T_{Phi Theta}) + K_Phi and its representation");
    reg("nearly", check_nearly, "rep, expect?", "rank Phi(0) criterion vs nearly defect");
    reg("equivalence", check_equivalence, "subspace, expect? [star, shift]",
        "S and S* defects both stable across N and 2N");
    reg("halfspace", check_halfspace, "rep, orders, expect?, expect_dims?",
        "dimension growth across orders (heuristic)");
    reg("two_sided", check_two_sided, "symbol", "range of H*_{Theta*} and I - T_Theta T_Theta* = H*_{Theta*} H_{Theta*}");
    reg("hitt_sarason", check_hitt_sarason, "phi, expect_g0?",
        "partial isometry of the (g, theta) pair and T_g K_theta = K_phi");
    reg("perturb", check_perturb, "kind, rep | (operator, subspace), terms?, negate?",
        "finite-rank perturbation makes M invariant or reducing");
    reg("kernel", check_kernel, "rep, w, c?, complement?",
        "kernel expansion vs projected Szego vector");
    reg("kernel_value", check_kernel_value, "rep, z, w, expect, complement?, tol?",
        "reproducing kernel value");
    reg("kernel_complement", check_kernel_complement, "rep, points?",
        "kernel of M plus kernel of M^perp equals the Szego kernel");
    reg("model_dim", check_model_dim, "symbol, expect?, orders?", "dimension of the model space");
    reg("defect_corpus", check_defect_corpus, "count?, order?",
        "defect values on seeded random inner specs, stable across orders");
    return t;
  }();
  return table;
}

void validate_zero_counts(const Scenario& s) {
  for (const auto& [name, e] : s.symbols) {
    if (e.zeros > s.order)
      throw InvalidParameter("construction error: symbol \"" + name + "\" has " + std::to_string(e.zeros) +
                       " zeros, more than the truncation order " + std::to_string(s.order));
  }
}

const std::set<std::string>& symbol_keys() {
  static const std::set<std::string> keys{"symbol", "phi",      "theta", "model_space", "range_inner",
                                          "toeplitz", "hankel", "T",     "H"};
  return keys;
}

/// Resolves every symbol literal in a check so that dangling references
/// surface as parse errors.
void resolve_refs(const json& j, const SymbolTable& t) {
  if (j.is_array()) {
    for (const auto& e : j) resolve_refs(e, t);
    return;
  }
  if (!j.is_object()) return;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const bool sym_list = it.key() == "symbols" && it.value().is_array();
    if (symbol_keys().count(it.key()) || sym_list) {
      for (const auto& v : sym_list ? it.value() : json::array({it.value()})) {
        try {
          symbol_from_json(v, t);
        } catch (const ParseError&) {
          throw;
        } catch (const Error&) {
          // Construction problems are reported when the check runs.
        }
      }
    } else {
      resolve_refs(it.value(), t);
    }
  }
}

}  // namespace

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Refused:
      return "refused";
    case Status::Error:
      return "error";
  }
  return "?";
}

int Report::count(Status s) const {
  int n = 0;
  for (const auto& r : records) n += r.status == s;
  return n;
}

Subspace subspace_from_json(const json& j, const SymbolTable& t, int order, double tol) {
  if (!j.is_object() || j.empty()) fail("a subspace is an object, got " + j.dump());
  if (j.contains("model_space"))
    return model_space(symbol_from_json(j.at("model_space"), t).symbol, order, tol);
  if (j.contains("range_inner"))
    return range_inner(symbol_from_json(j.at("range_inner"), t).symbol, order, tol);
  if (j.contains("rep")) return build_rep(rep_from_json(j.at("rep"), t, order).at_order(order), tol).m;
  if (j.contains("degrees")) {
    const auto lh = j.at("degrees").get<std::vector<int>>();
    if (lh.size() != 2) fail("degrees is [lo, hi]");
    return Subspace::degrees({order, j.value("dim", 1)}, lh[0], lh[1]);
  }
  if (j.contains("span")) {
    const int d = j.value("dim", 1);
    const Ambient a{order, d};
    const json& vs = j.at("span");
    Matrix cols = Matrix::Zero(a.size(), static_cast<long>(vs.size()));
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const Vector v = vector_from_json(vs[i]);
      if (v.size() > a.size()) fail("span vector longer than the ambient space");
      cols.col(static_cast<long>(i)).head(v.size()) = v;
    }
    return Subspace::from_columns(a, cols, tol, 0, "span");
  }
  if (j.contains("range")) {
    const json& o = j.at("range");
    return from_range(operator_from_json(o, t, order, j.value("dim", 1)), tol);
  }
  if (j.contains("kernel")) return kernel(operator_from_json(j.at("kernel"), t, order, j.value("dim", 1)), tol);
  if (j.contains("complement")) return orth_complement(subspace_from_json(j.at("complement"), t, order, tol));
  if (j.contains("file")) {
    Subspace s = read_subspace(j.at("file").get<std::string>());
    if (s.ambient().order != order)
      throw InvalidParameter("subspace file has order " + std::to_string(s.ambient().order) +
                             ", expected " + std::to_string(order));
    return s;
  }
  fail("unknown subspace form " + j.dump());
}

TruncatedOp operator_from_json(const json& j, const SymbolTable& t, int order, int dim) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "shift") return shift(order, dim);
    if (s == "backshift") return backshift(order, dim);
    if (s == "proj_const") return proj_const(order, dim);
    fail("unknown operator \"" + s + "\"");
  }
  if (!j.is_object() || j.size() != 1) fail("an operator is a string or a single-key object");
  const std::string key = j.begin().key();
  const json& v = j.begin().value();
  if (key == "shift") return shift(order, v.get<int>());
  if (key == "backshift") return backshift(order, v.get<int>());
  if (key == "proj_const") return proj_const(order, v.get<int>());
  if (key == "toeplitz") return toeplitz(symbol_from_json(v, t).symbol, order);
  if (key == "hankel") return hankel(symbol_from_json(v, t).symbol, order);
  if (key == "adjoint") return adjoint(operator_from_json(v, t, order, dim));
  if (key == "sum") {
    if (!v.is_array() || v.empty()) fail("sum needs operators");
    TruncatedOp out = operator_from_json(v[0], t, order, dim);
    for (std::size_t i = 1; i < v.size(); ++i) out = add(out, operator_from_json(v[i], t, order, dim));
    return out;
  }
  if (key == "product") {
    std::vector<Factor> fs;
    for (const auto& f : v) {
      if (!f.is_object()) fail("a factor is an object");
      const bool adj = f.value("adjoint", false);
      if (f.contains("T"))
        fs.push_back(Factor::T(symbol_from_json(f.at("T"), t).symbol, adj));
      else if (f.contains("H"))
        fs.push_back(Factor::H(symbol_from_json(f.at("H"), t).symbol, adj));
      else if (f.contains("S"))
        fs.push_back(Factor::S(f.at("S").get<int>()));
      else if (f.contains("Sstar"))
        fs.push_back(Factor::Sstar(f.at("Sstar").get<int>()));
      else if (f.contains("P"))
        fs.push_back(Factor::P(f.at("P").get<int>()));
      else
        fail("unknown factor " + f.dump());
    }
    return chain_product(fs, order);
  }
  if (key == "file") {
    TruncatedOp op = read_operator(v.get<std::string>());
    if (op.order() != order) throw InvalidParameter("operator file has a different order");
    return op;
  }
  fail("unknown operator form \"" + key + "\"");
}

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) fail("scenario must be a JSON object");
  if (j.contains("schema") && j.at("schema") != kScenarioSchema)
    fail("unsupported schema " + j.at("schema").dump());
  Scenario s;
  try {
    s.name = need(j, "name").get<std::string>();
    s.order = need(j, "order").get<int>();
    s.compare_order = j.value("compare_order", 0);
    s.seed = j.value("seed", std::uint64_t{0});
    s.output = j.value("output", std::string());
    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      s.tol.rank = t.value("rank", s.tol.rank);
      s.tol.identity = t.value("identity", s.tol.identity);
      s.tol.angle = t.value("angle", s.tol.angle);
      s.tol.invariance = t.value("invariance", s.tol.invariance);
      s.tol.kernel = t.value("kernel", s.tol.kernel);
    }
  } catch (const json::exception& e) {
    fail(std::string("bad top-level field: ") + e.what());
  }
  for (double v : {s.tol.rank, s.tol.identity, s.tol.angle, s.tol.invariance, s.tol.kernel})
    if (!(v > 0.0)) fail("tolerances must be positive");
  if (j.contains("symbols")) {
    // Symbols may refer to earlier entries; declaration order is kept by
    // accepting either an object or a list of {"name", "symbol"} pairs.
    const json& sy = j.at("symbols");
    auto add_symbol = [&](const std::string& name, const json& body) {
      try {
        s.symbols.insert_or_assign(name, symbol_from_json(body, s.symbols));
      } catch (const ParseError& e) {
        fail("symbol \"" + name + "\": " + e.what());
      } catch (const Error& e) {
        fail("symbol \"" + name + "\": construction error: " + e.what());
      }
    };
    if (sy.is_array()) {
      for (const auto& e : sy) add_symbol(need(e, "name").get<std::string>(), need(e, "symbol"));
    } else {
      for (auto it = sy.begin(); it != sy.end(); ++it) add_symbol(it.key(), it.value());
    }
  }
  validate_zero_counts(s);
  if (s.order < 8) fail("order must be at least 8");
  const json& checks = need(j, "checks");
  if (!checks.is_array()) fail("checks must be a list");
  const auto& reg = registry();
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const json& c = checks[i];
    if (!c.is_object() || !c.contains("type"))
      fail("check " + std::to_string(i) + ": missing field \"type\"");
    const std::string type = c.at("type").get<std::string>();
    if (!reg.count(type)) fail("check " + std::to_string(i) + ": unknown type \"" + type + "\"");
    try {
      resolve_refs(c, s.symbols);
    } catch (const ParseError& e) {
      fail("check " + std::to_string(i) + ": " + e.what());
    }
    s.checks.push_back(c);
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open scenario " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return parse_scenario(j);
}

Report run_scenario(const Scenario& s, const RunOptions& opt) {
  Ctx x{s, s.tol, opt.order.value_or(s.order), 0, opt.seed.value_or(s.seed), opt.allow_guard_mismatch};
  if (opt.tol_rank) x.tol.rank = *opt.tol_rank;
  if (opt.tol_identity) x.tol.identity = *opt.tol_identity;
  x.compare = opt.order ? 2 * *opt.order : s.comparison_order();
  Report rep;
  rep.scenario = s.name;
  rep.seed = x.seed;
  rep.order = x.order;
  rep.compare_order = x.compare;
  const auto& reg = registry();
  for (std::size_t i = 0; i < s.checks.size(); ++i) {
    const json& c = s.checks[i];
    CheckRecord r;
    r.index = static_cast<int>(i);
    r.type = c.at("type").get<std::string>();
    r.label = c.value("label", r.type + "#" + std::to_string(i));
    const auto start = std::chrono::steady_clock::now();
    try {
      reg.at(r.type).first(c, x, r);
    } catch (const WindowRefused& e) {
      r.status = Status::Refused;
      r.message = e.what();
    } catch (const std::exception& e) {
      r.status = Status::Error;
      r.message = e.what();
    }
    r.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rep.records.push_back(std::move(r));
  }
  return rep;
}

json report_to_json(const Report& r, bool timings) {
  json recs = json::array();
  for (const auto& c : r.records) {
    json o = {{"index", c.index}, {"type", c.type}, {"label", c.label}, {"status", status_name(c.status)},
              {"passed", c.status == Status::Pass}};
    o["residual"] = c.residual ? json(*c.residual) : json(nullptr);
    o["tolerance"] = c.tolerance ? json(*c.tolerance) : json(nullptr);
    o["defect"] = c.defect ? json(*c.defect) : json(nullptr);
    o["guard"] = c.guard ? json(*c.guard) : json(nullptr);
    o["expected"] = c.expected;
    o["details"] = c.details;
    if (!c.message.empty()) o["message"] = c.message;
    if (timings) o["time_ms"] = c.time_ms;
    recs.push_back(std::move(o));
  }
  json env = {{"library", "hardylab 1.0.0"},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                            "." + std::to_string(EIGEN_MINOR_VERSION)},
              {"compiler", __VERSION__},
              {"finite_truncation_note",
               "at finite order every operator is finite rank, so compact and finite-rank notions coincide"}};
  return {{"schema", kReportSchema},
          {"scenario", r.scenario},
          {"seed", r.seed},
          {"order", r.order},
          {"compare_order", r.compare_order},
          {"summary",
           {{"checks", r.records.size()},
            {"passed", r.count(Status::Pass)},
            {"failed", r.count(Status::Fail)},
            {"refused", r.count(Status::Refused)},
            {"errors", r.count(Status::Error)}}},
          {"records", recs},
          {"environment", env}};
}

std::string report_to_csv(const Report& r) {
  std::ostringstream os;
  os.precision(17);
  os << "index,type,label,status,residual,tolerance,defect,guard,time_ms\n";
  for (const auto& c : r.records) {
    os << c.index << "," << c.type << "," << c.label << "," << status_name(c.status) << ",";
    if (c.residual) os << *c.residual;
    os << ",";
    if (c.tolerance) os << *c.tolerance;
    os << ",";
    if (c.defect) os << *c.defect;
    os << ",";
    if (c.guard) os << *c.guard;
    os << "," << c.time_ms << "\n";
  }
  return os.str();
}

int exit_code(const Report& r) {
  if (r.count(Status::Fail) || r.count(Status::Error)) return 1;
  if (r.count(Status::Refused)) return 3;
  return 0;
}

const std::vector<CheckInfo>& check_catalogue() {
  static const std::vector<CheckInfo> list = [] {
    std::vector<CheckInfo> out;
    for (const auto& [name, entry] : registry()) out.push_back(entry.second);
    return out;
  }();
  return list;
}

}  // namespace hardy
