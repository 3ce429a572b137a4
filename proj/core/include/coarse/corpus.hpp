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

// Constructors and golden data for the worked examples: the six-vertex walk,
// the Glauber-Ising ring, the spin-1/2 special-case tables and the
// continuous-time quantum walk on a binary tree.
//
// Vertex numbering is 0-based throughout. For the tree, vertex v_i of the
// usual 1-based drawing is index i - 1 (root 0, children 1 and 2, leaves
// 3..6). Spin states use up = 0 with the first spin most significant.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarse/linalg.hpp"
#include "coarse/quantum_cg.hpp"
#include "coarse/stochastic.hpp"
#include "coarse/symmetry.hpp"

namespace coarse {

// --- Six-vertex walk -----------------------------------------------------------

struct WalkParams {
  double a = 1.0;
  double b = 2.0;
  double c = 1.0;
  double d = 1.0;
  double e = 1.0;
  double delta = 0.3;
  double epsilon = -0.2;
  /// Replaces the v1 <-> v2 rate.
  std::optional<double> a_tilde;
};

/// Throws InvalidInput unless a..e > 0 and |delta|, |epsilon| <= c/2.
RateMatrix build_six_state_walk(const WalkParams& p);
/// {v1}, {v2, v3}, {v4, v5, v6}.
Partition walk_column_partition();
/// {v1, v2, v3}, {v4, v5, v6}.
Partition walk_split_partition();

// --- Glauber-Ising ring ----------------------------------------------------------

struct IsingConfig {
  std::size_t n = 3;
  double gamma = 0.0;

  /// gamma = tanh(2J/T).
  static IsingConfig from_coupling(std::size_t n, double j, double t);
  /// 1 <= n <= 12 and 0 <= gamma < 1.
  void validate() const;
};

/// Number of unequal neighbouring pairs on the ring; the energy is
/// J (walls - n) so it orders states by energy for J > 0.
std::size_t domain_walls(std::size_t state, std::size_t n);

/// Single-flip rates: 1 - gamma when the energy rises, 1 when it is unchanged,
/// 1 + gamma when it falls.
RateMatrix build_glauber_ising(const IsingConfig& cfg);

/// Generators: translation by one site, global flip.
PermRep ising_symmetry_group(std::size_t n);

/// States grouped by energy level, lowest first.
Partition ising_energy_partition(std::size_t n);

struct Equilibrium {
  RealVec stationary;
  /// -1 / Re(lambda_1), lambda_1 the slowest decaying nonzero eigenvalue. Zero
  /// for a single state.
  double relaxation_time = 0.0;
};

/// Throws InvalidInput when the stationary distribution is not unique.
Equilibrium equilibrium_analysis(const RateMatrix& qr);

// --- Binary tree walk ----------------------------------------------------------

struct TreeConfig {
  /// Levels below the root, 1..4. The usual instance has depth 2 (7 vertices).
  std::size_t depth = 2;
  std::vector<std::pair<std::size_t, std::size_t>> extra_edges;
  /// Adds the edge (3, 4).
  bool broken = false;
};

struct TreeWalk {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  /// Graph Laplacian, -sum Pi_(ij) + |E| I.
  Mat hamiltonian;
  UnitaryRep group;
};

/// The group is generated by a = (3 4) and b = (1 2)(3 6)(4 5) for depth 2,
/// and by the subtree swaps at every internal vertex otherwise.
TreeWalk build_ctqw_tree(const TreeConfig& cfg = {});

/// Columns u1..u7 of the irrep-adapted basis for the depth-2 tree.
Mat tree_irrep_basis();

/// Blocks 1x3 {u1, u2, u3}, 1x2 {u4, u5} and 2x1 {u6, u7} over tree_irrep_basis().
BipartitionTable tree_symmetrization_table();

/// As above but {u6, u7} form a 1x2 row, so the last sector keeps its
/// internal dynamics.
BipartitionTable tree_sector_table();

struct TreeBlocks {
  Mat h1;
  Mat h2;
  Mat h3;
};

/// Hamiltonian blocks in the u basis; `broken` gives the edge (3, 4) variant.
TreeBlocks tree_golden_blocks(bool broken);

// --- Spin-1/2 special cases ------------------------------------------------------

/// Total spin components J_x, J_y, J_z on n spin-1/2 particles.
std::vector<Mat> total_spin_operators(std::size_t n);

struct SpecialCase {
  std::string name;
  BipartitionTable table;
  /// Expected S operators in BipartitionOperators entry order.
  std::vector<Mat> golden_operators;
};

/// total_spin_basis, sz_measurement, partial_trace, repetition_code, rf_three_spins.
std::vector<SpecialCase> special_case_tables();

}  // namespace coarse
