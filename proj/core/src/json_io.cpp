// Copyright 2026 The coarse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coarse/json_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "coarse/error.hpp"

namespace coarse {

namespace {

using Index = Eigen::Index;

[[noreturn]] void malformed(const std::string& what) { throw InvalidInput("malformed JSON: " + what); }

const Json& field(const Json& j, const char* key, const char* what) {
  if (!j.is_object()) malformed(std::string(what) + " must be an object");
  const auto it = j.find(key);
  if (it == j.end()) malformed(std::string(what) + " lacks \"" + key + "\"");
  return *it;
}

std::size_t count_of(const Json& j, const char* what) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) malformed(std::string(what) + " must be an integer");
  const auto v = j.get<long long>();
  if (v < 0) malformed(std::string(what) + " must be non-negative");
  return static_cast<std::size_t>(v);
}

double number_of(const Json& j, const char* what) {
  if (!j.is_number()) malformed(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<std::size_t> index_list(const Json& j, const char* what) {
  if (!j.is_array()) malformed(std::string(what) + " must be an array");
  std::vector<std::size_t> out;
  out.reserve(j.size());
  for (const Json& v : j) out.push_back(count_of(v, what));
  return out;
}

std::vector<std::vector<std::size_t>> index_lists(const Json& j, const char* what) {
  if (!j.is_array()) malformed(std::string(what) + " must be an array of arrays");
  std::vector<std::vector<std::size_t>> out;
  for (const Json& v : j) out.push_back(index_list(v, what));
  return out;
}

Json number(double v) {
  if (!std::isfinite(v)) throw InvalidInput("cannot serialize a non-finite value");
  return v;
}

}  // namespace

Json to_json(const Mat& m) {
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index k = 0; k < m.cols(); ++k) data.push_back(Json::array({number(m(i, k).real()), number(m(i, k).imag())}));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Json to_json(const RealMat& m) {
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index k = 0; k < m.cols(); ++k) data.push_back(number(m(i, k)));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Mat matrix_from_json(const Json& j) {
  const std::size_t rows = count_of(field(j, "rows", "matrix"), "rows");
  const std::size_t cols = count_of(field(j, "cols", "matrix"), "cols");
  const Json& data = field(j, "data", "matrix");
  if (!data.is_array() || data.size() != rows * cols) {
    malformed("matrix data must hold rows*cols = " + std::to_string(rows * cols) + " entries");
  }
  Mat m(static_cast<Index>(rows), static_cast<Index>(cols));
  std::size_t n = 0;
  for (const Json& e : data) {
    Complex v;
    if (e.is_number()) {
      v = e.get<double>();
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      v = {e[0].get<double>(), e[1].get<double>()};
    } else {
      malformed("matrix entry " + std::to_string(n) + " must be a number or [re, im]");
    }
    m(static_cast<Index>(n / cols), static_cast<Index>(n % cols)) = v;
    ++n;
  }
  return m;
}

RealMat real_matrix_from_json(const Json& j) {
  const Mat m = matrix_from_json(j);
  if (m.imag().cwiseAbs().maxCoeff() > 0.0 && m.size() > 0) malformed("expected a real matrix");
  return m.real();
}

Json to_json(const Partition& p) { return {{"n", p.n_states()}, {"blocks", p.blocks()}}; }

Partition partition_from_json(const Json& j) {
  return Partition(count_of(field(j, "n", "partition"), "n"),
                   index_lists(field(j, "blocks", "partition"), "partition blocks"));
}

Json to_json(const PermRep& rep) { return {{"n", rep.n_states}, {"generators", rep.generators}}; }

PermRep perm_rep_from_json(const Json& j) {
  PermRep rep{count_of(field(j, "n", "perm_rep"), "n"),
              index_lists(field(j, "generators", "perm_rep"), "perm_rep generators")};
  rep.validate();
  return rep;
}

Json to_json(const UnitaryRep& rep) {
  Json gens = Json::array();
  for (const Mat& g : rep.generators()) gens.push_back(to_json(g));
  return {{"dim", rep.dim()}, {"generators", std::move(gens)}};
}

UnitaryRep unitary_rep_from_json(const Json& j) {
  const std::size_t dim = count_of(field(j, "dim", "group"), "dim");
  if (j.contains("perm_generators")) {
    return UnitaryRep::from_permutations(dim, index_lists(j["perm_generators"], "perm_generators"));
  }
  const Json& gens = field(j, "generators", "group");
  if (!gens.is_array()) malformed("group generators must be an array");
  std::vector<Mat> out;
  for (const Json& g : gens) out.push_back(matrix_from_json(g));
  return UnitaryRep(dim, std::move(out));
}

Json to_json(const BipartitionTable& t) {
  Json blocks = Json::array();
  for (const TableBlock& b : t.blocks()) blocks.push_back({{"columns", b.columns}});
  return {{"dim", t.dim()}, {"basis", t.basis() ? to_json(*t.basis()) : Json(nullptr)}, {"blocks", std::move(blocks)}};
}

BipartitionTable table_from_json(const Json& j) {
  const std::size_t dim = count_of(field(j, "dim", "table"), "dim");
  std::optional<Mat> basis;
  if (j.contains("basis") && !j["basis"].is_null()) basis = matrix_from_json(j["basis"]);
  const Json& blocks = field(j, "blocks", "table");
  if (!blocks.is_array()) malformed("table blocks must be an array");
  std::vector<TableBlock> out;
  for (const Json& b : blocks) out.push_back({index_lists(field(b, "columns", "table block"), "table columns")});
  return BipartitionTable(dim, std::move(basis), std::move(out));
}

Json to_json(const Superoperator& l) {
  Json j = to_json(l.mat);
  j["dim"] = l.dim;
  return j;
}

Superoperator superoperator_from_json(const Json& j) {
  return Superoperator::from_matrix(count_of(field(j, "dim", "superoperator"), "dim"), matrix_from_json(j));
}

std::vector<double> times_from_json(const Json& j) {
  if (!j.is_array()) malformed("times must be an array of numbers");
  std::vector<double> out;
  for (const Json& t : j) out.push_back(number_of(t, "time"));
  return out;
}

RealVec real_vector_from_json(const Json& j) {
  if (!j.is_array()) malformed("vector must be an array of numbers");
  RealVec v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = number_of(j[i], "vector entry");
  return v;
}

Json to_json(const RealVec& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trajectory_csv(const std::vector<double>& times, const std::vector<Mat>& states) {
  if (times.size() != states.size()) throw InvalidInput("trajectory_csv: times and states differ in length");
  std::ostringstream os;
  os << "time";
  const Index d = states.empty() ? 0 : states.front().rows();
  for (const char* part : {"re", "im"}) {
    for (Index i = 0; i < d; ++i) {
      for (Index k = 0; k < d; ++k) os << ',' << part << '_' << i << '_' << k;
    }
  }
  os << '\n';
  for (std::size_t t = 0; t < times.size(); ++t) {
    os << format_double(times[t]);
    for (Index i = 0; i < d; ++i) {
      for (Index k = 0; k < d; ++k) os << ',' << format_double(states[t](i, k).real());
    }
    for (Index i = 0; i < d; ++i) {
      for (Index k = 0; k < d; ++k) os << ',' << format_double(states[t](i, k).imag());
    }
    os << '\n';
  }
  return os.str();
}

std::string trajectory_csv(const std::vector<double>& times, const std::vector<RealVec>& states) {
  if (times.size() != states.size()) throw InvalidInput("trajectory_csv: times and states differ in length");
  std::ostringstream os;
  os << "time";
  const Index n = states.empty() ? 0 : states.front().size();
  for (Index i = 0; i < n; ++i) os << ",p_" << i;
  os << '\n';
  for (std::size_t t = 0; t < times.size(); ++t) {
    os << format_double(times[t]);
    for (Index i = 0; i < n; ++i) os << ',' << format_double(states[t](i));
    os << '\n';
  }
  return os.str();
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(source + ": " + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
}

}  // namespace coarse
