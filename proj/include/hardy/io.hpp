#pragma once

// JSON literals for symbols and specs, and file formats for subspace bases and
// truncated operators.
//
// Binary layout (little-endian):
//   magic[8] = "HLSUB001" or "HLOPR001"
//   subspace: int32 order, dim, rank, guard; float64 tol
//   operator: int32 order_in, order_out, dim_in, dim_out, guard, raise, lower,
//             leak_up, leak_down, confined_in, confined_out; float64 err_bound
//   uint32 length + UTF-8 origin (subspaces only)
//   matrix entries column-major as (float64 re, float64 im)
// The CSV variant carries the same header as "# key=value" comment lines and
// one matrix row per line as re,im pairs printed with 17 significant digits.

#include "hardy/corpus.hpp"
#include "hardy/perturbation.hpp"

#include "json.hpp"

#include <map>
#include <string>

namespace hardy {

using json = nlohmann::json;

class ParseError : public Error {
 public:
  using Error::Error;
};

cplx complex_from_json(const json& j);
json complex_to_json(cplx z);
Matrix matrix_from_json(const json& j);
json matrix_to_json(const Matrix& m);
Vector vector_from_json(const json& j);
json vector_to_json(const Vector& v);

/// Named symbols of a scenario, with the number of Blaschke zeros when the
/// symbol comes from product constructors (-1 when unknown).
struct SymbolEntry {
  LaurentSymbol symbol;
  int zeros = -1;
};
using SymbolTable = std::map<std::string, SymbolEntry>;

/// Accepted forms: {"blaschke": a}, {"potapov": {"a", "proj"}},
/// {"product": [...]}, {"diag": [...]}, {"hstack": [...]}, {"vstack": [...]},
/// {"sum": [...]}, {"scale": {"by", "symbol"}}, {"tilde": s}, {"adjoint": s},
/// {"constant": matrix}, {"identity": d}, {"monomial": {"n", "dim"}},
/// {"coeffs": {"n_min", "values": [matrix...], "tail_bound"}},
/// {"hitt_sarason_g": s}, {"hitt_sarason_theta": s}, {"ref": name}.
/// Complex numbers are either reals or [re, im] pairs.
SymbolEntry symbol_from_json(const json& j, const SymbolTable& table = {});
json symbol_to_json(const LaurentSymbol& s);

/// {"phi", "theta", "flavor", "order"}; phi defaults to the identity.
RepSpec rep_from_json(const json& j, const SymbolTable& table, int default_order);
json rep_to_json(const RepSpec& r);

/// {"kind", "terms_m": [[x, y], ...], "terms_perp": [[u, v], ...]}.
PerturbationSpec perturbation_from_json(const json& j);

enum class FileFormat { Binary, Csv };
/// Csv for a .csv extension, Binary otherwise.
FileFormat format_for_path(const std::string& path);

void write_subspace(const Subspace& s, const std::string& path, FileFormat f);
void write_subspace(const Subspace& s, const std::string& path);
void write_operator(const TruncatedOp& t, const std::string& path, FileFormat f);
void write_operator(const TruncatedOp& t, const std::string& path);

/// Both read functions detect the format from the file contents.
Subspace read_subspace(const std::string& path);
TruncatedOp read_operator(const std::string& path);
/// "subspace" or "operator".
std::string file_kind(const std::string& path);

}  // namespace hardy
