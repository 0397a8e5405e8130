// hardylab command-line front end.

#include "hardy/kernel.hpp"
#include "hardy/scenario.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace hardy;

namespace {

constexpr int kExitParse = 2;

struct Flags {
  std::optional<int> order;
  std::optional<double> tol_rank;
  std::optional<double> tol_identity;
  std::optional<std::uint64_t> seed;
  std::string report;
  std::string format = "json";
  bool allow_guard_mismatch = false;
  bool no_timings = false;
};

/// A JSON argument given inline or as a path to a file.
json json_arg(const std::string& arg) {
  std::string text = arg;
  if (std::filesystem::is_regular_file(arg)) {
    std::ifstream is(arg);
    std::stringstream ss;
    ss << is.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Bare words such as "shift" are accepted as JSON strings.
    if (!text.empty() && std::isalpha(static_cast<unsigned char>(text[0]))) return json(text);
    throw ParseError("cannot parse JSON argument: " + std::string(e.what()));
  }
}

int order_or(const Flags& f, int fallback) { return f.order.value_or(fallback); }
double tol_rank(const Flags& f) { return f.tol_rank.value_or(kRankTol); }

void emit(const Flags& f, const json& out, const std::string& csv = {}) {
  std::string text = f.format == "csv" && !csv.empty() ? csv : out.dump(2) + "\n";
  if (f.report.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(f.report);
    if (!os) throw Error("cannot write " + f.report);
    os << text;
  }
}

RepSpec rep_arg(const std::string& arg, const Flags& f) {
  RepSpec spec = rep_from_json(json_arg(arg), {}, order_or(f, 32));
  if (f.order) spec.order = *f.order;
  return spec;
}

int cmd_run(const std::string& path, const Flags& f) {
  const Scenario s = load_scenario(path);
  RunOptions opt;
  opt.order = f.order;
  opt.tol_rank = f.tol_rank;
  opt.tol_identity = f.tol_identity;
  opt.seed = f.seed;
  opt.allow_guard_mismatch = f.allow_guard_mismatch;
  const Report r = run_scenario(s, opt);
  Flags g = f;
  if (g.report.empty()) g.report = s.output;
  emit(g, report_to_json(r, !f.no_timings), report_to_csv(r));
  std::fprintf(stderr, "%s: %d passed, %d failed, %d refused, %d errors\n", s.name.c_str(),
               r.count(Status::Pass), r.count(Status::Fail), r.count(Status::Refused),
               r.count(Status::Error));
  for (const auto& c : r.records)
    if (c.status != Status::Pass)
      std::fprintf(stderr, "  [%s] %s: %s\n", status_name(c.status), c.label.c_str(), c.message.c_str());
  return exit_code(r);
}

int cmd_list() {
  for (const auto& c : check_catalogue())
    std::cout << c.type << "\n    fields: " << c.fields << "\n    " << c.summary << "\n";
  return 0;
}

int cmd_defect(const std::string& op_arg, const std::string& sub_path, const Flags& f) {
  const Subspace m = read_subspace(sub_path);
  const TruncatedOp t = operator_from_json(json_arg(op_arg), {}, m.ambient().order, m.ambient().dim);
  const DefectReport d = almost_defect(t, m, tol_rank(f));
  json out = {{"defect", d.defect},     {"residual", d.residual}, {"guard", d.window_guard},
              {"sigma_max", d.sigma_max}, {"sigma_cut", d.sigma_cut}, {"basis_file", sub_path},
              {"order", m.ambient().order}, {"subspace_rank", m.rank()}};
  emit(f, out);
  return 0;
}

int cmd_represent(const std::string& arg, const std::string& save, const Flags& f) {
  const RepSpec spec = rep_arg(arg, f);
  const Representation r = build_rep(spec, tol_rank(f));
  json out = {{"flavor", flavor_name(spec.flavor)}, {"order", spec.order}, {"dim", r.m.rank()},
              {"partial_isometry", {{"residual", r.pi.residual}, {"tolerance", r.pi.tolerance},
                                    {"passed", r.pi.passed}}}};
  if (!save.empty()) {
    write_subspace(r.m, save);
    out["basis_file"] = save;
  }
  emit(f, out);
  return r.pi.passed ? 0 : 1;
}

int cmd_perturb(const std::string& kind, const std::string& arg, const Flags& f) {
  json scen = {{"name", "perturb"},
               {"order", order_or(f, 32)},
               {"checks", {{{"type", "perturb"}, {"kind", kind}, {"rep", json_arg(arg)}}}}};
  if (f.tol_rank) scen["tolerances"] = {{"rank", *f.tol_rank}};
  const Report r = run_scenario(parse_scenario(scen));
  emit(f, report_to_json(r, !f.no_timings), report_to_csv(r));
  return exit_code(r);
}

int cmd_kernel(const std::string& arg, const std::string& w_arg, const std::string& grid, const Flags& f) {
  const RepSpec spec = rep_arg(arg, f);
  const cplx w = complex_from_json(json_arg(w_arg));
  const int dim = spec.flavor == Flavor::RangeOfInner ? spec.theta.rows() : spec.phi.rows();
  Vector c = Vector::Zero(dim);
  c(0) = 1.0;
  const KernelConsistency k = kernel_consistency(spec, w, c, false, tol_rank(f));
  const KernelConsistency kp = kernel_consistency(spec, w, c, true, tol_rank(f));
  json out = {{"w", complex_to_json(w)},
              {"residual", k.residual},
              {"complement_residual", kp.residual},
              {"tail", k.tail},
              {"passed", k.residual <= 1e-6 && kp.residual <= 1e-6}};
  if (!grid.empty()) {
    // Real-axis grid of z and w in [-0.8, 0.8], entry (0, 0).
    std::ofstream os(grid);
    if (!os) throw Error("cannot write " + grid);
    os.precision(17);
    const int n = 9;
    os << "z_re,w_re,k_re,k_im\n";
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double z = -0.8 + 1.6 * i / (n - 1), ww = -0.8 + 1.6 * j / (n - 1);
        const cplx v = kernel_m(spec, z, ww)(0, 0);
        os << z << "," << ww << "," << v.real() << "," << v.imag() << "\n";
      }
    out["grid_file"] = grid;
  }
  emit(f, out);
  return out["passed"].get<bool>() ? 0 : 1;
}

int cmd_halfspace(const std::string& arg, const std::string& orders_arg, const Flags& f) {
  const RepSpec spec = rep_arg(arg, f);
  std::vector<int> orders;
  std::stringstream ss(orders_arg);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      orders.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw ParseError("orders must be a comma-separated list of integers");
    }
  }
  const HalfspaceProbe p = halfspace_probe(spec, orders, tol_rank(f));
  emit(f, {{"orders", p.orders}, {"dims", p.dims}, {"classification", p.classification},
           {"note", "heuristic: rank growth across orders"}});
  return 0;
}

int cmd_export(const std::string& what, const std::string& arg, const std::string& path, const Flags& f) {
  const int n = order_or(f, 32);
  const json j = json_arg(arg);
  const FileFormat fmt = f.format == "csv" ? FileFormat::Csv : format_for_path(path);
  if (what == "subspace") {
    write_subspace(subspace_from_json(j, {}, n, tol_rank(f)), path, fmt);
  } else if (what == "operator") {
    write_operator(operator_from_json(j, {}, n, 1), path, fmt);
  } else {
    throw ParseError("export kind must be subspace or operator");
  }
  std::cout << json{{"written", path}, {"kind", what}}.dump() << "\n";
  return 0;
}

int cmd_import(const std::string& path, const std::string& out, const Flags& f) {
  const std::string kind = file_kind(path);
  json info = {{"kind", kind}, {"file", path}};
  if (kind == "subspace") {
    const Subspace s = read_subspace(path);
    info.update({{"order", s.ambient().order}, {"dim", s.ambient().dim}, {"rank", s.rank()},
                 {"tol", s.tol()}, {"guard", s.guard()}, {"origin", s.origin()}});
    if (!out.empty()) write_subspace(s, out);
  } else {
    const TruncatedOp t = read_operator(path);
    info.update({{"order_in", t.order_in()}, {"order_out", t.order_out()}, {"dim_in", t.dim_in()},
                 {"dim_out", t.dim_out()}, {"guard", t.guard()}, {"err_bound", t.err_bound()},
                 {"norm", spectral_norm(t.matrix())}});
    if (!out.empty()) write_operator(t, out);
  }
  if (!out.empty()) info["rewritten"] = out;
  emit(f, info);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hardylab: truncated Toeplitz/Hankel verification toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  int order = 0;
  double tr = 0.0, ti = 0.0;
  std::uint64_t seed = 0;
  auto* o_order = app.add_option("--order", order, "truncation order N")->check(CLI::PositiveNumber);
  auto* o_tr = app.add_option("--tol-rank", tr, "relative rank tolerance")->check(CLI::PositiveNumber);
  auto* o_ti = app.add_option("--tol-identity", ti, "identity tolerance")->check(CLI::PositiveNumber);
  auto* o_seed = app.add_option("--seed", seed, "seed for randomized corpora");
  app.add_option("--report", f.report, "output path (default stdout)");
  app.add_option("--format", f.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--allow-guard-mismatch", f.allow_guard_mismatch,
               "compare defects computed under different window guards");
  app.add_flag("--no-timings", f.no_timings, "omit timings from reports");

  std::string a1, a2, a3;
  std::function<int()> action;

  auto* run = app.add_subcommand("run", "execute a scenario file");
  run->add_option("file", a1)->required();
  run->callback([&] { action = [&] { return cmd_run(a1, f); }; });

  app.add_subcommand("list-checks", "print the check catalogue")->callback([&] {
    action = [] { return cmd_list(); };
  });

  auto* def = app.add_subcommand("defect", "almost-invariance defect of an operator on a stored subspace");
  def->add_option("op-spec", a1, "operator literal or JSON file")->required();
  def->add_option("subspace-file", a2)->required();
  def->callback([&] { action = [&] { return cmd_defect(a1, a2, f); }; });

  auto* rep = app.add_subcommand("represent", "build M from a representation spec");
  rep->add_option("rep-spec", a1)->required();
  rep->add_option("--save", a3, "write the basis to this file");
  rep->callback([&] { action = [&] { return cmd_represent(a1, a3, f); }; });

  auto* per = app.add_subcommand("perturb", "synthesize a finite-rank perturbation and verify it");
  per->add_option("kind", a1, "t0_general | t0_shift | t1_backshift | t2_reducing")->required();
  per->add_option("rep-spec", a2)->required();
  per->callback([&] { action = [&] { return cmd_perturb(a1, a2, f); }; });

  auto* ker = app.add_subcommand("kernel-check", "kernel expansion vs projected Szego vectors");
  ker->add_option("rep-spec", a1)->required();
  ker->add_option("w", a2, "point, real or [re, im]")->required();
  ker->add_option("--grid", a3, "write a kernel grid CSV");
  ker->callback([&] { action = [&] { return cmd_kernel(a1, a2, a3, f); }; });

  auto* hs = app.add_subcommand("probe-halfspace", "dimension growth of M across orders");
  hs->add_option("rep-spec", a1)->required();
  hs->add_option("orders", a2, "comma-separated orders")->required();
  hs->callback([&] { action = [&] { return cmd_halfspace(a1, a2, f); }; });

  auto* ex = app.add_subcommand("export", "write a subspace or operator literal to a file");
  ex->add_option("kind", a1, "subspace | operator")->required();
  ex->add_option("spec", a2)->required();
  ex->add_option("path", a3)->required();
  ex->callback([&] { action = [&] { return cmd_export(a1, a2, a3, f); }; });

  auto* im = app.add_subcommand("import", "read a stored file and describe it");
  im->add_option("path", a1)->required();
  im->add_option("--rewrite", a3, "write the object back out to this path");
  im->callback([&] { action = [&] { return cmd_import(a1, a3, f); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }
  if (*o_order) f.order = order;
  if (*o_tr) f.tol_rank = tr;
  if (*o_ti) f.tol_identity = ti;
  if (*o_seed) f.seed = seed;

  try {
    return action();
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitParse;
  } catch (const WindowRefused& e) {
    std::fprintf(stderr, "refused: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
