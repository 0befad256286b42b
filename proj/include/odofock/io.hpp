#pragma once

// JSON formats for operators, symbols, contractive pairs and subspaces, plus
// the verdict report every CLI command prints.

#include <string>

#include <json.hpp>

#include "odofock/dilation.hpp"
#include "odofock/factorization.hpp"
#include "odofock/odometer.hpp"

namespace odofock {

using Json = nlohmann::ordered_json;

Json operator_to_json(const Operator& op);
Operator operator_from_json(const Json& j);

Json symbol_to_json(const Symbol& l);
Symbol symbol_from_json(const Json& j);

/// {"kind":"pair","n","dim","t":[matrix…],"w":matrix}; "tuples" is accepted for "t".
Json pair_to_json(int n, const std::vector<Matrix>& t, const Matrix& w);
Json pair_to_json(const ContractivePair& p);
ContractivePair pair_from_json(const Json& j);

Json subspace_to_json(const InvariantSubspace& s);
InvariantSubspace subspace_from_json(const Json& j, double tol = kDefaultTol);

/// Row-major [[re, im], …].
Json dense_to_json(const Matrix& m);
Matrix dense_from_json(const Json& j, Index rows, Index cols);

Json complex_to_json(Complex z);

/// Parse errors and missing files become InputError.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);
std::string dump(const Json& j);

class Report {
public:
  explicit Report(std::string command);

  void param(const std::string& key, Json value);
  void check(const std::string& name, bool passed, double residual, double tolerance);
  /// Residual compared against tol.
  void check(const std::string& name, double residual, double tolerance);
  void window(const std::string& name, int level);
  void value(const std::string& key, Json value);
  void error(const std::string& message);
  void wall_time(double seconds) { wall_time_ = seconds; }

  bool passed() const noexcept { return passed_; }
  Json to_json(bool with_time = true) const;

private:
  std::string command_;
  Json params_ = Json::object();
  Json checks_ = Json::array();
  Json windows_ = Json::object();
  Json values_ = Json::object();
  std::string error_;
  bool passed_ = true;
  double wall_time_ = 0.0;
};

}  // namespace odofock
