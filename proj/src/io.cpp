#include "hardy/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace hardy {

namespace {

constexpr char kSubMagic[8] = {'H', 'L', 'S', 'U', 'B', '0', '0', '1'};
constexpr char kOpMagic[8] = {'H', 'L', 'O', 'P', 'R', '0', '0', '1'};

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int count_zeros(const std::vector<SymbolEntry>& parts) {
  int z = 0;
  for (const auto& p : parts) {
    if (p.zeros < 0) return -1;
    z += p.zeros;
  }
  return z;
}

std::vector<SymbolEntry> parse_list(const json& j, const SymbolTable& table) {
  if (!j.is_array() || j.empty()) fail("expected a nonempty list of symbols");
  std::vector<SymbolEntry> out;
  for (const auto& e : j) out.push_back(symbol_from_json(e, table));
  return out;
}

std::vector<LaurentSymbol> symbols_of(const std::vector<SymbolEntry>& es) {
  std::vector<LaurentSymbol> out;
  for (const auto& e : es) out.push_back(e.symbol);
  return out;
}

// Binary helpers.
template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) fail("unexpected end of file");
  return v;
}

void put_matrix(std::ostream& os, const Matrix& m) {
  for (long j = 0; j < m.cols(); ++j)
    for (long i = 0; i < m.rows(); ++i) {
      put<double>(os, m(i, j).real());
      put<double>(os, m(i, j).imag());
    }
}

Matrix get_matrix(std::istream& is, long rows, long cols) {
  Matrix m(rows, cols);
  for (long j = 0; j < cols; ++j)
    for (long i = 0; i < rows; ++i) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      m(i, j) = cplx(re, im);
    }
  return m;
}

// CSV helpers.
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const std::string& path, const std::string& kind,
               const std::vector<std::pair<std::string, std::string>>& header, const Matrix& m) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  os << "# hardylab " << kind << "\n";
  for (const auto& [k, v] : header) os << "# " << k << "=" << v << "\n";
  for (long i = 0; i < m.rows(); ++i) {
    for (long j = 0; j < m.cols(); ++j) {
      if (j) os << ",";
      os << fmt(m(i, j).real()) << "," << fmt(m(i, j).imag());
    }
    os << "\n";
  }
  if (!os) throw Error("write failed for " + path);
}

struct CsvFile {
  std::string kind;
  std::map<std::string, std::string> header;
  std::vector<std::vector<double>> rows;

  const std::string& at(const std::string& k) const {
    auto it = header.find(k);
    if (it == header.end()) fail("CSV header lacks " + k);
    return it->second;
  }
  int integer(const std::string& k) const { return std::stoi(at(k)); }
  double real(const std::string& k) const { return std::strtod(at(k).c_str(), nullptr); }

  Matrix matrix(long rows_expected, long cols_expected) const {
    if (static_cast<long>(rows.size()) != rows_expected) fail("CSV row count mismatch");
    Matrix m(rows_expected, cols_expected);
    for (long i = 0; i < rows_expected; ++i) {
      const auto& r = rows[static_cast<std::size_t>(i)];
      if (static_cast<long>(r.size()) != 2 * cols_expected) fail("CSV column count mismatch");
      for (long j = 0; j < cols_expected; ++j)
        m(i, j) = cplx(r[static_cast<std::size_t>(2 * j)], r[static_cast<std::size_t>(2 * j + 1)]);
    }
    return m;
  }
};

CsvFile read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  CsvFile f;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = line.substr(line.find_first_not_of("# "));
      if (body.rfind("hardylab ", 0) == 0) {
        f.kind = body.substr(9);
        continue;
      }
      const auto eq = body.find('=');
      if (eq != std::string::npos) f.header[body.substr(0, eq)] = body.substr(eq + 1);
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) fail(path + ":" + std::to_string(lineno) + ": not a number");
      row.push_back(v);
    }
    f.rows.push_back(std::move(row));
  }
  if (f.kind.empty()) fail(path + ": missing '# hardylab' header");
  return f;
}

bool has_magic(const std::string& path, const char* magic) {
  std::ifstream is(path, std::ios::binary);
  char buf[8] = {};
  is.read(buf, 8);
  return is && std::memcmp(buf, magic, 8) == 0;
}

}  // namespace

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail("expected a number or an [re, im] pair, got " + j.dump());
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) fail("a matrix is a list of rows");
  const long rows = static_cast<long>(j.size());
  const long cols = static_cast<long>(j[0].size());
  Matrix m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    const json& r = j[static_cast<std::size_t>(i)];
    if (!r.is_array() || static_cast<long>(r.size()) != cols) fail("matrix rows differ in length");
    for (long k = 0; k < cols; ++k) m(i, k) = complex_from_json(r[static_cast<std::size_t>(k)]);
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (long i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (long k = 0; k < m.cols(); ++k) r.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(r));
  }
  return rows;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) fail("a vector is a nonempty list");
  Vector v(static_cast<long>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<long>(i)) = complex_from_json(j[i]);
  return v;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (long i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

SymbolEntry symbol_from_json(const json& j, const SymbolTable& table) {
  if (j.is_string()) return symbol_from_json(json{{"ref", j}}, table);
  if (!j.is_object() || j.size() != 1) fail("a symbol is a single-key object, got " + j.dump());
  const std::string key = j.begin().key();
  const json& v = j.begin().value();
  try {
    if (key == "ref") {
      auto it = table.find(v.get<std::string>());
      if (it == table.end()) fail("unresolved symbol reference \"" + v.get<std::string>() + "\"");
      return it->second;
    }
    if (key == "blaschke") return {blaschke_factor(complex_from_json(v)), 1};
    if (key == "potapov") {
      const Matrix p = matrix_from_json(field(v, "proj"));
      const int d = static_cast<int>(p.rows());
      return {blaschke_potapov_factor(complex_from_json(field(v, "a")), p),
              d - numerical_rank(p, 1e-10)};
    }
    if (key == "product") {
      const auto parts = parse_list(v, table);
      LaurentSymbol s = parts[0].symbol;
      for (std::size_t i = 1; i < parts.size(); ++i) s = multiply(s, parts[i].symbol);
      return {s.compressed(kEpsSym), count_zeros(parts)};
    }
    if (key == "diag") {
      const auto parts = parse_list(v, table);
      return {block_diag(symbols_of(parts)), count_zeros(parts)};
    }
    if (key == "hstack") return {hstack(symbols_of(parse_list(v, table))), -1};
    if (key == "vstack") return {vstack(symbols_of(parse_list(v, table))), -1};
    if (key == "sum") {
      const auto parts = parse_list(v, table);
      LaurentSymbol s = parts[0].symbol;
      for (std::size_t i = 1; i < parts.size(); ++i) s = add(s, parts[i].symbol);
      return {s, -1};
    }
    if (key == "scale") {
      const SymbolEntry inner = symbol_from_json(field(v, "symbol"), table);
      const cplx by = complex_from_json(field(v, "by"));
      return {scale(inner.symbol, by), std::abs(std::abs(by) - 1.0) < 1e-14 ? inner.zeros : -1};
    }
    if (key == "tilde") return {tilde(symbol_from_json(v, table).symbol), -1};
    if (key == "adjoint") return {adjoint_symbol(symbol_from_json(v, table).symbol), -1};
    if (key == "constant") return {LaurentSymbol::constant(matrix_from_json(v)), 0};
    if (key == "identity") return {LaurentSymbol::identity(v.get<int>()), 0};
    if (key == "monomial") {
      const int n = field(v, "n").get<int>();
      const int d = v.value("dim", 1);
      return {LaurentSymbol::monomial(n, d, complex_from_json(v.value("scale", json(1.0)))),
              n >= 0 ? n * d : -1};
    }
    if (key == "coeffs") {
      std::vector<Matrix> cs;
      for (const auto& m : field(v, "values")) cs.push_back(matrix_from_json(m));
      if (cs.empty()) fail("coeffs needs at least one value");
      return {LaurentSymbol(static_cast<int>(cs[0].rows()), static_cast<int>(cs[0].cols()),
                            field(v, "n_min").get<int>(), cs, v.value("tail_bound", 0.0)),
              -1};
    }
    if (key == "hitt_sarason_g") return {hitt_sarason_pair(symbol_from_json(v, table).symbol).g, -1};
    if (key == "hitt_sarason_theta")
      return {hitt_sarason_pair(symbol_from_json(v, table).symbol).theta, -1};
  } catch (const json::exception& e) {
    fail("in \"" + key + "\": " + e.what());
  }
  fail("unknown symbol constructor \"" + key + "\"");
}

json symbol_to_json(const LaurentSymbol& s) {
  json values = json::array();
  for (const auto& c : s.coefficients()) values.push_back(matrix_to_json(c));
  return {{"coeffs", {{"n_min", s.n_min()}, {"values", values}, {"tail_bound", s.tail_bound()}}}};
}

RepSpec rep_from_json(const json& j, const SymbolTable& table, int default_order) {
  if (!j.is_object()) fail("a rep spec is an object");
  RepSpec r;
  r.theta = symbol_from_json(field(j, "theta"), table).symbol;
  r.phi = j.contains("phi") ? symbol_from_json(j.at("phi"), table).symbol
                            : LaurentSymbol::identity(r.theta.rows());
  r.flavor = parse_flavor(j.value("flavor", std::string("phi_model")));
  r.order = j.value("order", default_order);
  return r;
}

json rep_to_json(const RepSpec& r) {
  return {{"phi", symbol_to_json(r.phi)},
          {"theta", symbol_to_json(r.theta)},
          {"flavor", flavor_name(r.flavor)},
          {"order", r.order}};
}

PerturbationSpec perturbation_from_json(const json& j) {
  PerturbationSpec p;
  p.kind = parse_kind(field(j, "kind").get<std::string>());
  auto pairs = [&](const char* key, std::vector<std::pair<Vector, Vector>>& out) {
    if (!j.contains(key)) return;
    for (const auto& t : j.at(key)) {
      if (!t.is_array() || t.size() != 2) fail(std::string(key) + " entries are [vector, vector]");
      out.emplace_back(vector_from_json(t[0]), vector_from_json(t[1]));
    }
  };
  pairs("terms_m", p.terms_m);
  pairs("terms_perp", p.terms_perp);
  return p;
}

FileFormat format_for_path(const std::string& path) {
  const auto n = path.size();
  return n >= 4 && path.compare(n - 4, 4, ".csv") == 0 ? FileFormat::Csv : FileFormat::Binary;
}

void write_subspace(const Subspace& s, const std::string& path) {
  write_subspace(s, path, format_for_path(path));
}

void write_subspace(const Subspace& s, const std::string& path, FileFormat f) {
  const Ambient a = s.ambient();
  if (f == FileFormat::Csv) {
    write_csv(path, "subspace",
              {{"order", std::to_string(a.order)},
               {"dim", std::to_string(a.dim)},
               {"rank", std::to_string(s.rank())},
               {"guard", std::to_string(s.guard())},
               {"tol", fmt(s.tol())},
               {"origin", s.origin()}},
              s.basis());
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  os.write(kSubMagic, 8);
  put<std::int32_t>(os, a.order);
  put<std::int32_t>(os, a.dim);
  put<std::int32_t>(os, s.rank());
  put<std::int32_t>(os, s.guard());
  put<double>(os, s.tol());
  put<std::uint32_t>(os, static_cast<std::uint32_t>(s.origin().size()));
  os.write(s.origin().data(), static_cast<std::streamsize>(s.origin().size()));
  put_matrix(os, s.basis());
  if (!os) throw Error("write failed for " + path);
}

void write_operator(const TruncatedOp& t, const std::string& path) {
  write_operator(t, path, format_for_path(path));
}

void write_operator(const TruncatedOp& t, const std::string& path, FileFormat f) {
  const auto& m = t.meta();
  if (f == FileFormat::Csv) {
    write_csv(path, "operator",
              {{"order_in", std::to_string(t.order_in())},
               {"order_out", std::to_string(t.order_out())},
               {"dim_in", std::to_string(t.dim_in())},
               {"dim_out", std::to_string(t.dim_out())},
               {"guard", std::to_string(m.guard)},
               {"raise", std::to_string(m.raise)},
               {"lower", std::to_string(m.lower)},
               {"leak_up", std::to_string(m.leak_up)},
               {"leak_down", std::to_string(m.leak_down)},
               {"confined_in", std::to_string(m.confined_in)},
               {"confined_out", std::to_string(m.confined_out)},
               {"err_bound", fmt(m.err_bound)}},
              t.matrix());
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  os.write(kOpMagic, 8);
  for (int v : {t.order_in(), t.order_out(), t.dim_in(), t.dim_out(), m.guard, m.raise, m.lower,
                m.leak_up, m.leak_down, static_cast<int>(m.confined_in),
                static_cast<int>(m.confined_out)})
    put<std::int32_t>(os, v);
  put<double>(os, m.err_bound);
  put_matrix(os, t.matrix());
  if (!os) throw Error("write failed for " + path);
}

std::string file_kind(const std::string& path) {
  if (has_magic(path, kSubMagic)) return "subspace";
  if (has_magic(path, kOpMagic)) return "operator";
  return read_csv(path).kind;
}

Subspace read_subspace(const std::string& path) {
  if (has_magic(path, kSubMagic)) {
    std::ifstream is(path, std::ios::binary);
    is.seekg(8);
    const int order = get<std::int32_t>(is);
    const int dim = get<std::int32_t>(is);
    const int rank = get<std::int32_t>(is);
    const int guard = get<std::int32_t>(is);
    const double tol = get<double>(is);
    const auto len = get<std::uint32_t>(is);
    std::string origin(len, '\0');
    is.read(origin.data(), len);
    if (order < 1 || dim < 1 || rank < 0) fail(path + ": bad subspace header");
    const Matrix b = get_matrix(is, static_cast<long>(order) * dim, rank);
    return Subspace({order, dim}, b, tol, guard, origin);
  }
  const CsvFile f = read_csv(path);
  if (f.kind != "subspace") fail(path + ": not a subspace file");
  const int order = f.integer("order"), dim = f.integer("dim"), rank = f.integer("rank");
  const Matrix b = f.matrix(static_cast<long>(order) * dim, rank);
  const auto it = f.header.find("origin");
  return Subspace({order, dim}, b, f.real("tol"), f.integer("guard"),
                  it == f.header.end() ? std::string() : it->second);
}

TruncatedOp read_operator(const std::string& path) {
  int v[11];
  TruncatedOp::Meta m;
  Matrix mat;
  if (has_magic(path, kOpMagic)) {
    std::ifstream is(path, std::ios::binary);
    is.seekg(8);
    for (int& x : v) x = get<std::int32_t>(is);
    m.err_bound = get<double>(is);
    if (v[0] < 1 || v[1] < 1 || v[2] < 1 || v[3] < 1) fail(path + ": bad operator header");
    mat = get_matrix(is, static_cast<long>(v[1]) * v[3], static_cast<long>(v[0]) * v[2]);
  } else {
    const CsvFile f = read_csv(path);
    if (f.kind != "operator") fail(path + ": not an operator file");
    const char* keys[11] = {"order_in", "order_out", "dim_in",  "dim_out",     "guard",       "raise",
                            "lower",    "leak_up",   "leak_down", "confined_in", "confined_out"};
    for (int i = 0; i < 11; ++i) v[i] = f.integer(keys[i]);
    m.err_bound = f.real("err_bound");
    mat = f.matrix(static_cast<long>(v[1]) * v[3], static_cast<long>(v[0]) * v[2]);
  }
  m.guard = v[4];
  m.raise = v[5];
  m.lower = v[6];
  m.leak_up = v[7];
  m.leak_down = v[8];
  m.confined_in = v[9] != 0;
  m.confined_out = v[10] != 0;
  return TruncatedOp(std::move(mat), v[0], v[1], v[2], v[3], m);
}

}  // namespace hardy
