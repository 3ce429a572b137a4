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

// Classical coarse-graining of continuous-time Markov processes.
//
// Convention: Q(i, j) is the rate of the transition j -> i, so columns sum
// to zero and probability vectors evolve as dp/dt = Q p.

#include <cstddef>
#include <string>
#include <vector>

#include "coarse/linalg.hpp"

namespace coarse {

/// Disjoint, nonempty blocks covering {0, ..., n_states - 1}. Indices are
/// sorted inside each block; the block order is the caller's.
class Partition {
 public:
  Partition() = default;
  Partition(std::size_t n_states, std::vector<std::vector<std::size_t>> blocks);

  static Partition identity(std::size_t n);
  static Partition single_block(std::size_t n);

  std::size_t n_states() const noexcept { return n_states_; }
  std::size_t size() const noexcept { return blocks_.size(); }
  const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }
  const std::vector<std::size_t>& block(std::size_t k) const { return blocks_.at(k); }
  /// Index of the block containing state i.
  std::size_t block_of(std::size_t i) const { return owner_.at(i); }

  /// Same blocks, reordered by smallest contained index.
  Partition canonical() const;
  /// True when every block of *this lies inside a block of `coarser`.
  bool refines(const Partition& coarser) const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.n_states_ == b.n_states_ && a.blocks_ == b.blocks_;
  }

 private:
  std::size_t n_states_ = 0;
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::size_t> owner_;
};

/// Transition-rate matrix: off-diagonals >= -abs tol, columns summing to 0.
class RateMatrix {
 public:
  RateMatrix() = default;
  explicit RateMatrix(RealMat q, const Tolerance& tol = {});
  /// Accepts complex input whose imaginary parts vanish within tol.abs.
  static RateMatrix from_complex(const Mat& q, const Tolerance& tol = {});
  /// Builds Q from off-diagonal rates; the diagonal is overwritten with the
  /// negative column sums.
  static RateMatrix from_offdiagonal(RealMat rates);

  std::size_t n() const noexcept { return static_cast<std::size_t>(q_.rows()); }
  const RealMat& matrix() const noexcept { return q_; }
  bool is_symmetric(double tol = 1e-12) const;

 private:
  RealMat q_;
};

/// Permutation group given by generators; generator[g][i] = g(i).
struct PermRep {
  std::size_t n_states = 0;
  std::vector<std::vector<std::size_t>> generators;

  void validate() const;
};

RealMat cg_matrix(const Partition& p);
RealMat cg_pseudoinverse(const Partition& p);
RealMat cg_projection(const Partition& p);

/// Lumpability test: residual = |PQ - PQP|_F / max(1, |Q|_F).
CheckResult check_stochastic_compatibility(const RateMatrix& q, const Partition& p,
                                           const Tolerance& tol = {});

struct ReducedRates {
  RateMatrix rates;
  CheckResult check;
  std::vector<std::string> warnings;
};

/// Q~ = M Q M+. Throws IncompatibleReduction unless compatible or `force`.
ReducedRates reduced_rate_matrix(const RateMatrix& q, const Partition& p, bool force = false,
                                 const Tolerance& tol = {});

/// Total rates r(i -> block k') for every state i of block k.
struct RateUniformityEntry {
  std::size_t from_block = 0;
  std::size_t to_block = 0;
  std::vector<double> rates;  // one per state of from_block, in block order
  double min = 0.0;
  double max = 0.0;
  double spread() const { return max - min; }
};

struct RateUniformityReport {
  std::vector<RateUniformityEntry> entries;  // row-major over (from, to)
  double max_spread = 0.0;
  /// Equal to the lumpability residual: sqrt(sum_k' sum_i (r_i - mean)^2 / |b_k'|),
  /// normalized like check_stochastic_compatibility.
  double residual = 0.0;
  bool uniform = false;

  const RateUniformityEntry& at(std::size_t from, std::size_t to) const;
};

RateUniformityReport rate_uniformity_report(const RateMatrix& q, const Partition& p,
                                            const Tolerance& tol = {});

/// Coarsest equitable partition refining `seed`, returned with blocks
/// ordered by smallest index. Signatures are compared entrywise with
/// `signature_tol`.
Partition coarsest_equitable_refinement(const RateMatrix& q, const Partition& seed,
                                        double signature_tol = 1e-9);

/// p(t) = exp(tQ) p0 for each requested time.
std::vector<RealVec> evolve_stochastic(const RateMatrix& q, const RealVec& p0,
                                       const std::vector<double>& times);

/// Orbits of the generated group (union-find over generators).
Partition orbit_partition(const PermRep& rep);

/// All group elements generated by `rep`. Throws NumericalFailure past `cap`.
std::vector<std::vector<std::size_t>> permutation_closure(const PermRep& rep,
                                                          std::size_t cap = 1'000'000);

RealMat permutation_matrix(const std::vector<std::size_t>& g);

/// |G|^-1 sum_g D(g).
RealMat symmetrizer(const PermRep& rep, std::size_t cap = 1'000'000);

struct GroupCheck {
  bool compatible = false;
  double residual = 0.0;
  bool symmetric_shortcut_used = false;
  std::size_t group_order = 0;
};

/// Group-averaged commutator test. The residual is |G|^-1 |(P) sum_g [D(g), Q]|_F / max(1, |Q|_F),
/// without P when Q is symmetric.
GroupCheck check_group_compatibility(const RateMatrix& q, const PermRep& rep,
                                     const Tolerance& tol = {}, std::size_t cap = 1'000'000);

}  // namespace coarse
