#include "hardy/scenario.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

using namespace hardy;

namespace {

std::string tmp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("hardylab_test_" + name)).string();
}

json minimal(int order = 32) {
  return {{"name", "t"},
          {"order", order},
          {"symbols", {{"th", {{"blaschke", 0.5}}}}},
          {"checks", json::array({{{"type", "model_dim"}, {"symbol", "th"}, {"expect", 1}}})}};
}

}  // namespace

TEST(Json, ComplexAndMatrixForms) {
  EXPECT_EQ(complex_from_json(json(0.5)), cplx(0.5, 0.0));
  EXPECT_EQ(complex_from_json(json::array({1.0, -2.0})), cplx(1.0, -2.0));
  const Matrix m = matrix_from_json(json::parse("[[1, [0, 1]], [2, 3]]"));
  EXPECT_EQ(m(0, 1), cplx(0, 1));
  EXPECT_EQ(matrix_from_json(matrix_to_json(m)), m);
  EXPECT_THROW(matrix_from_json(json::parse("[[1, 2], [3]]")), ParseError);
}

TEST(Json, SymbolForms) {
  const SymbolEntry b = symbol_from_json(json::parse(R"({"blaschke": [0.5, 0]})"));
  EXPECT_EQ(b.zeros, 1);
  EXPECT_TRUE(b.symbol == blaschke_factor(0.5));
  const SymbolEntry p = symbol_from_json(json::parse(R"({"product": [{"blaschke": 0.1}, {"blaschke": 0.2}]})"));
  EXPECT_EQ(p.zeros, 2);
  SymbolTable t;
  t.insert_or_assign("b", b);
  EXPECT_TRUE(symbol_from_json(json("b"), t).symbol == b.symbol);
  EXPECT_THROW(symbol_from_json(json("missing"), t), ParseError);
  EXPECT_THROW(symbol_from_json(json::parse(R"({"nonsense": 1})")), ParseError);
  const LaurentSymbol back = symbol_from_json(symbol_to_json(b.symbol)).symbol;
  EXPECT_TRUE(back == b.symbol);
}

TEST(Files, SubspaceRoundTripIsBitExact) {
  const Subspace m = model_space(multiply(blaschke_factor(cplx(0.3, 0.2)), blaschke_factor(-0.4)), 24);
  for (const std::string ext : {"bin", "csv"}) {
    const std::string path = tmp("sub." + ext);
    write_subspace(m, path);
    const Subspace r = read_subspace(path);
    EXPECT_EQ(r.ambient(), m.ambient());
    EXPECT_EQ(r.basis(), m.basis()) << ext;
    EXPECT_EQ(r.tol(), m.tol());
    EXPECT_EQ(r.origin(), m.origin());
    EXPECT_EQ(file_kind(path), "subspace");
    std::remove(path.c_str());
  }
}

TEST(Files, OperatorRoundTripIsBitExact) {
  const TruncatedOp t = chain_product({Factor::T(blaschke_factor(cplx(0.1, 0.6))), Factor::S(1)}, 20);
  for (const std::string ext : {"bin", "csv"}) {
    const std::string path = tmp("op." + ext);
    write_operator(t, path);
    const TruncatedOp r = read_operator(path);
    EXPECT_EQ(r.matrix(), t.matrix()) << ext;
    EXPECT_EQ(r.guard(), t.guard());
    EXPECT_EQ(r.err_bound(), t.err_bound());
    EXPECT_EQ(file_kind(path), "operator");
    std::remove(path.c_str());
  }
}

TEST(Files, CorruptInputRejected) {
  const std::string path = tmp("bad.bin");
  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    std::fputs("HLSUB001garbage", f);
    std::fclose(f);
  }
  EXPECT_THROW(read_subspace(path), Error);
  std::remove(path.c_str());
}

TEST(Scenario, Validation) {
  EXPECT_NO_THROW(parse_scenario(minimal()));
  EXPECT_THROW(parse_scenario(minimal(4)), ParseError);
  json bad_ref = minimal();
  bad_ref["checks"][0]["symbol"] = "nope";
  EXPECT_THROW(parse_scenario(bad_ref), ParseError);
  json bad_type = minimal();
  bad_type["checks"][0]["type"] = "nope";
  EXPECT_THROW(parse_scenario(bad_type), ParseError);
  json bad_tol = minimal();
  bad_tol["tolerances"] = {{"rank", -1.0}};
  EXPECT_THROW(parse_scenario(bad_tol), ParseError);
  json no_name = minimal();
  no_name.erase("name");
  EXPECT_THROW(parse_scenario(no_name), ParseError);
}

TEST(Scenario, TooManyZerosIsConstructionError) {
  json s = minimal(8);
  json fs = json::array();
  for (int k = 0; k < 9; ++k) fs.push_back({{"blaschke", 0.1 * (k % 5)}});
  s["symbols"]["big"] = {{"product", fs}};
  EXPECT_THROW(parse_scenario(s), InvalidParameter);
}

TEST(Scenario, ReportCompleteness) {
  const Scenario s = load_scenario(std::string(HARDYLAB_SOURCE_DIR) + "/scenarios/reference_suite.json");
  const Report r = run_scenario(s);
  EXPECT_EQ(r.records.size(), s.checks.size());
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    EXPECT_EQ(r.records[i].index, static_cast<int>(i));
    EXPECT_EQ(r.records[i].status, Status::Pass) << r.records[i].label << ": " << r.records[i].message;
  }
  EXPECT_EQ(exit_code(r), 0);
}

TEST(Scenario, DeterministicWithSeed) {
  json s = {{"name", "det"},
            {"order", 32},
            {"seed", 7},
            {"checks", json::array({{{"type", "identity_corpus"}, {"count", 6}},
                                    {{"type", "kernel_complement"},
                                     {"rep", {{"theta", {{"blaschke", 0.5}}}}},
                                     {"points", 4}}})}};
  const Scenario sc = parse_scenario(s);
  const std::string a = report_to_json(run_scenario(sc), false).dump();
  const std::string b = report_to_json(run_scenario(sc), false).dump();
  EXPECT_EQ(a, b);
  RunOptions other;
  other.seed = 8;
  EXPECT_NE(report_to_json(run_scenario(sc, other), false).dump(), a);
}

TEST(Scenario, GuardMismatchIsRefused) {
  // A long band shifts the defect window between N and 2N.
  json s = {{"name", "g"},
            {"order", 16},
            {"checks", json::array({{{"type", "defect"},
                                     {"operator", {{"toeplitz", {{"monomial", {{"n", 9}}}}}}},
                                     {"subspace", {{"degrees", {0, 3}}}},
                                     {"stable", true}}})}};
  const Report r = run_scenario(parse_scenario(s));
  ASSERT_EQ(r.records.size(), 1u);
  if (r.records[0].status == Status::Refused) {
    EXPECT_EQ(exit_code(r), 3);
    RunOptions allow;
    allow.allow_guard_mismatch = true;
    EXPECT_NE(run_scenario(parse_scenario(s), allow).records[0].status, Status::Refused);
  } else {
    const auto& g = r.records[0].details.at("guards");
    EXPECT_EQ(g[0], g[1]);
  }
}

TEST(Scenario, ExitCodes) {
  Report r;
  r.records.resize(2);
  r.records[0].status = Status::Pass;
  r.records[1].status = Status::Pass;
  EXPECT_EQ(exit_code(r), 0);
  r.records[1].status = Status::Refused;
  EXPECT_EQ(exit_code(r), 3);
  r.records[0].status = Status::Fail;
  EXPECT_EQ(exit_code(r), 1);
}

TEST(Scenario, CatalogueCoversRegisteredChecks) {
  const auto& cat = check_catalogue();
  EXPECT_GE(cat.size(), 20u);
  for (const auto& c : cat) {
    json s = minimal();
    s["checks"] = json::array({{{"type", c.type}}});
    // Known types parse; missing fields surface when the check runs.
    EXPECT_NO_THROW(parse_scenario(s)) << c.type;
  }
}
