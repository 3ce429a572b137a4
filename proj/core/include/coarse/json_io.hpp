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

#pragma once

// JSON and CSV interchange for matrices, partitions, groups, tables and
// superoperators. Readers throw InvalidInput with a description of what is
// malformed. Doubles are written in shortest round-trip form, so write
// followed by read reproduces every value bit for bit.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coarse/dynamics.hpp"
#include "coarse/linalg.hpp"
#include "coarse/quantum_cg.hpp"
#include "coarse/stochastic.hpp"
#include "coarse/symmetry.hpp"

namespace coarse {

using Json = nlohmann::json;

/// {"rows", "cols", "data"}, row-major; complex entries as [re, im].
Json to_json(const Mat& m);
/// Real matrices use bare numbers.
Json to_json(const RealMat& m);
/// Accepts [re, im] pairs and bare numbers.
Mat matrix_from_json(const Json& j);
/// Rejects entries with a nonzero imaginary part.
RealMat real_matrix_from_json(const Json& j);

Json to_json(const Partition& p);
Partition partition_from_json(const Json& j);

Json to_json(const PermRep& rep);
PermRep perm_rep_from_json(const Json& j);

Json to_json(const UnitaryRep& rep);
/// {"dim", "generators"} or the permutation shorthand {"dim", "perm_generators"}.
UnitaryRep unitary_rep_from_json(const Json& j);

Json to_json(const BipartitionTable& t);
BipartitionTable table_from_json(const Json& j);

/// Matrix JSON plus "dim".
Json to_json(const Superoperator& l);
Superoperator superoperator_from_json(const Json& j);

std::vector<double> times_from_json(const Json& j);
RealVec real_vector_from_json(const Json& j);
Json to_json(const RealVec& v);

/// Header "time,re_i_j...,im_i_j..." with (i, j) in row-major order.
std::string trajectory_csv(const std::vector<double>& times, const std::vector<Mat>& states);
/// Header "time,p_0,p_1,...".
std::string trajectory_csv(const std::vector<double>& times, const std::vector<RealVec>& states);

Json read_json_file(const std::filesystem::path& path);
Json parse_json(const std::string& text, const std::string& source);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

}  // namespace coarse
