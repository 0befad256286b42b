#include "odofock/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace odofock {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Index int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw InputError(std::string("field \"") + key + "\" must be an integer");
  return v.get<Index>();
}

void expect_kind(const Json& j, const std::string& kind) {
  const Json& k = field(j, "kind");
  if (!k.is_string() || k.get<std::string>() != kind) throw InputError("expected kind \"" + kind + "\"");
}

double finite_number(const Json& v) {
  if (!v.is_number()) throw InputError("expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InputError("non-finite number in input");
  return x;
}

int checked_int(Index v, const char* what) {
  if (v < 0 || v > 1'000'000) throw InputError(std::string(what) + " out of range");
  return static_cast<int>(v);
}

FockSpace space_from_json(const Json& j) {
  return FockSpace(checked_int(int_field(j, "n"), "n"), checked_int(int_field(j, "max_level"), "max_level"),
                   checked_int(int_field(j, "coeff_dim"), "coeff_dim"));
}

void put_space(Json& j, const FockSpace& s) {
  j["n"] = s.alphabet();
  j["max_level"] = s.max_level();
  j["coeff_dim"] = s.coeff_dim();
}

struct RawEntry {
  Index row;
  Index col;
  Complex value;
};

std::vector<RawEntry> entries_from_json(const Json& j, Index rows, Index cols) {
  const Json& list = field(j, "entries");
  if (!list.is_array()) throw InputError("\"entries\" must be an array");
  std::vector<RawEntry> out;
  out.reserve(list.size());
  for (const Json& e : list) {
    if (!e.is_array() || e.size() != 4 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw InputError("each entry must be [row, col, re, im]");
    }
    const auto row = e[0].get<Index>();
    const auto col = e[1].get<Index>();
    if (row < 0 || row >= rows || col < 0 || col >= cols) throw InputError("entry index out of range");
    out.push_back({row, col, Complex(finite_number(e[2]), finite_number(e[3]))});
  }
  return out;
}

Json sparse_entries(const Matrix& m) {
  Json list = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      const Complex z = m(r, c);
      if (z != Complex(0.0, 0.0)) list.push_back(Json::array({r, c, z.real(), z.imag()}));
    }
  }
  return list;
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json dense_to_json(const Matrix& m) {
  Json list = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) list.push_back(complex_to_json(m(r, c)));
  }
  return list;
}

Matrix dense_from_json(const Json& j, Index rows, Index cols) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows * cols) {
    throw InputError("dense matrix must list rows·cols [re, im] pairs");
  }
  Matrix m(rows, cols);
  for (Index k = 0; k < rows * cols; ++k) {
    const Json& z = j[static_cast<std::size_t>(k)];
    if (!z.is_array() || z.size() != 2) throw InputError("dense entries must be [re, im]");
    m(k / cols, k % cols) = Complex(finite_number(z[0]), finite_number(z[1]));
  }
  return m;
}

Json operator_to_json(const Operator& op) {
  Json j;
  j["kind"] = "operator";
  put_space(j, op.space);
  j["exact_below"] = op.exact_below;
  j["entries"] = sparse_entries(op.matrix);
  return j;
}

Operator operator_from_json(const Json& j) {
  expect_kind(j, "operator");
  FockSpace space = space_from_json(j);
  space.require_dense();
  Matrix m = Matrix::Zero(space.dim(), space.dim());
  for (const auto& e : entries_from_json(j, space.dim(), space.dim())) m(e.row, e.col) = e.value;
  int window = space.max_level() + 1;
  if (j.contains("exact_below")) {
    const Index w = int_field(j, "exact_below");
    if (w < 0 || w > space.max_level() + 1) throw InputError("exact_below out of range");
    window = static_cast<int>(w);
  }
  return Operator(space, std::move(m), window);
}

Json symbol_to_json(const Symbol& l) {
  Json j;
  j["kind"] = "symbol";
  put_space(j, l.space());
  Json list = Json::array();
  for (const auto& e : l.entries()) list.push_back(Json::array({e.row, e.col, e.value.real(), e.value.imag()}));
  j["entries"] = std::move(list);
  return j;
}

Symbol symbol_from_json(const Json& j) {
  expect_kind(j, "symbol");
  FockSpace space = space_from_json(j);
  std::vector<SymbolEntry> entries;
  for (const auto& e : entries_from_json(j, space.dim(), space.coeff_dim())) {
    entries.push_back({e.row, static_cast<int>(e.col), e.value});
  }
  return Symbol(space, std::move(entries));
}

Json pair_to_json(int n, const std::vector<Matrix>& t, const Matrix& w) {
  Json j;
  j["kind"] = "pair";
  j["n"] = n;
  j["dim"] = w.rows();
  Json tuple = Json::array();
  for (const Matrix& m : t) tuple.push_back(dense_to_json(m));
  j["t"] = std::move(tuple);
  j["w"] = dense_to_json(w);
  return j;
}

Json pair_to_json(const ContractivePair& p) { return pair_to_json(p.t.arity(), p.t.tuple(), p.w); }

ContractivePair pair_from_json(const Json& j) {
  expect_kind(j, "pair");
  const int n = checked_int(int_field(j, "n"), "n");
  const Index dim = int_field(j, "dim");
  if (dim < 1 || dim > kMaxDenseDim) throw InputError("pair dimension out of range");
  const Json& tuple = j.contains("t") ? j.at("t") : field(j, "tuples");
  if (!tuple.is_array() || static_cast<int>(tuple.size()) != n) throw InputError("pair needs n tuple matrices");
  std::vector<Matrix> t;
  for (const Json& m : tuple) t.push_back(dense_from_json(m, dim, dim));
  Matrix w = dense_from_json(field(j, "w"), dim, dim);
  return ContractivePair{RowContraction(n, std::move(t)), std::move(w)};
}

Json subspace_to_json(const InvariantSubspace& s) {
  Json j;
  j["kind"] = "subspace";
  put_space(j, s.ambient);
  j["rank"] = s.rank();
  j["entries"] = sparse_entries(s.basis);
  return j;
}

InvariantSubspace subspace_from_json(const Json& j, double tol) {
  expect_kind(j, "subspace");
  FockSpace space = space_from_json(j);
  space.require_dense();
  const Index rank = int_field(j, "rank");
  if (rank < 0 || rank > space.dim()) throw InputError("subspace rank out of range");
  Matrix cols = Matrix::Zero(space.dim(), rank);
  for (const auto& e : entries_from_json(j, space.dim(), rank)) cols(e.row, e.col) = e.value;
  return InvariantSubspace::from_columns(space, cols, tol);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << dump(j) << '\n';
}

std::string dump(const Json& j) { return j.dump(2); }

Report::Report(std::string command) : command_(std::move(command)) {}

void Report::param(const std::string& key, Json value) { params_[key] = std::move(value); }

void Report::check(const std::string& name, bool passed, double residual, double tolerance) {
  checks_.push_back({{"name", name}, {"passed", passed}, {"residual", residual}, {"tolerance", tolerance}});
  passed_ = passed_ && passed;
}

void Report::check(const std::string& name, double residual, double tolerance) {
  check(name, residual <= tolerance, residual, tolerance);
}

void Report::window(const std::string& name, int level) { windows_[name] = level; }

void Report::value(const std::string& key, Json value) { values_[key] = std::move(value); }

void Report::error(const std::string& message) {
  error_ = message;
  passed_ = false;
}

Json Report::to_json(bool with_time) const {
  Json j;
  j["command"] = command_;
  j["parameters"] = params_;
  j["checks"] = checks_;
  j["windows"] = windows_;
  j["values"] = values_;
  if (!error_.empty()) j["error"] = error_;
  j["passed"] = passed_;
  if (with_time) j["wall_time_seconds"] = wall_time_;
  return j;
}

}  // namespace odofock
