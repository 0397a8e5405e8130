#pragma once

// Declarative scenarios: named symbols, a truncation order, tolerances and a
// list of checks. Running a scenario produces one record per check.

#include "hardy/io.hpp"

#include <optional>

namespace hardy {

inline constexpr const char* kScenarioSchema = "hardylab.scenario/1";
inline constexpr const char* kReportSchema = "hardylab.report/1";

struct Tolerances {
  double rank = kRankTol;
  double identity = 1e-10;
  double angle = kAngleTol;
  double invariance = 1e-8;
  double kernel = 1e-6;
};

struct Scenario {
  std::string name;
  int order = 32;
  int compare_order = 0;  // 0 means 2 * order
  std::uint64_t seed = 0;
  Tolerances tol;
  SymbolTable symbols;
  std::vector<json> checks;
  std::string output;
  int comparison_order() const { return compare_order > 0 ? compare_order : 2 * order; }
};

/// Throws ParseError with the offending field.
Scenario parse_scenario(const json& j);
Scenario load_scenario(const std::string& path);

struct RunOptions {
  std::optional<int> order;
  std::optional<double> tol_rank;
  std::optional<double> tol_identity;
  std::optional<std::uint64_t> seed;
  bool allow_guard_mismatch = false;
};

enum class Status { Pass, Fail, Refused, Error };
const char* status_name(Status s);

struct CheckRecord {
  int index = 0;
  std::string type;
  std::string label;
  Status status = Status::Error;
  std::optional<double> residual;
  std::optional<double> tolerance;
  std::optional<int> defect;
  json expected;
  std::optional<int> guard;
  json details = json::object();
  std::string message;
  double time_ms = 0.0;
};

struct Report {
  std::string scenario;
  std::uint64_t seed = 0;
  int order = 0;
  int compare_order = 0;
  std::vector<CheckRecord> records;
  int count(Status s) const;
  bool all_passed() const { return count(Status::Pass) == static_cast<int>(records.size()); }
};

Report run_scenario(const Scenario& s, const RunOptions& opt = {});

json report_to_json(const Report& r, bool timings = true);
/// One line per record.
std::string report_to_csv(const Report& r);
/// 0 all passed, 1 any failure or error, 3 refusals only.
int exit_code(const Report& r);

struct CheckInfo {
  std::string type;
  std::string fields;
  std::string summary;
};
const std::vector<CheckInfo>& check_catalogue();

/// Subspace literals: {"model_space": s}, {"range_inner": s}, {"rep": r},
/// {"degrees": [lo, hi], "dim": d}, {"span": [v...], "dim": d},
/// {"range": op}, {"kernel": op}, {"complement": sub}, {"file": path}.
Subspace subspace_from_json(const json& j, const SymbolTable& t, int order, double tol);
/// Operator literals: "shift", "backshift", "proj_const", {"shift": d},
/// {"backshift": d}, {"proj_const": d}, {"toeplitz": s}, {"hankel": s},
/// {"adjoint": op}, {"sum": [op...]}, {"product": [factor...]}, {"file": path}.
/// Factors: {"T": s, "adjoint": b}, {"H": s, "adjoint": b}, {"S": d},
/// {"Sstar": d}, {"P": d}. dim is the fiber used by the string forms.
TruncatedOp operator_from_json(const json& j, const SymbolTable& t, int order, int dim);

}  // namespace hardy
