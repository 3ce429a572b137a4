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

// Finite unitary groups: closure, twirl, commutant and bicommutant, the
// symmetrization compatibility test and the numerical decomposition
// H = (+)_q M_q (x) N_q that feeds a symmetrization table.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "coarse/linalg.hpp"
#include "coarse/quantum_cg.hpp"

namespace coarse {

inline constexpr std::size_t kDefaultClosureCap = 4096;
inline constexpr double kClosureDedupe = 1e-8;
inline constexpr std::uint64_t kDefaultSeed = 0x5eed'c0a5'e000'0001ULL;

class UnitaryRep {
 public:
  UnitaryRep() = default;
  /// Throws InvalidInput unless every generator is d x d and unitary within tol.
  UnitaryRep(std::size_t dim, std::vector<Mat> generators, double tol = 1e-9);

  /// 0/1 matrices with U[g(i)][i] = 1.
  static UnitaryRep from_permutations(std::size_t dim,
                                      const std::vector<std::vector<std::size_t>>& perms);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Mat>& generators() const noexcept { return generators_; }
  const std::optional<std::vector<Mat>>& cached_closure() const noexcept { return closure_; }

  /// Copy carrying the computed closure.
  UnitaryRep with_closure(std::size_t cap = kDefaultClosureCap) const;
  /// Cached closure, or a freshly computed one.
  std::vector<Mat> elements(std::size_t cap = kDefaultClosureCap) const;

 private:
  std::size_t dim_ = 0;
  std::vector<Mat> generators_;
  std::optional<std::vector<Mat>> closure_;
};

/// Breadth-first product closure starting at the identity. Elements within
/// Frobenius distance 1e-8 are identified. Throws NumericalFailure past `cap`.
std::vector<Mat> closure(const UnitaryRep& rep, std::size_t cap = kDefaultClosureCap);

/// |G|^-1 sum_g U(g) O U(g)^dagger.
Mat twirl(const Mat& o, const UnitaryRep& rep);
Mat twirl(const Mat& o, std::span<const Mat> elements);

/// Orthonormal basis of {B : [B, A] = 0 for all A in ops} on C^{dim x dim}.
OperatorSubspace commutant_of(std::span<const Mat> ops, std::size_t dim);
OperatorSubspace commutant(const UnitaryRep& rep);
OperatorSubspace bicommutant(const UnitaryRep& rep);

struct SymmetryCheck {
  bool compatible = false;
  /// Worst residual over generators and, when checked, the closure.
  double residual = 0.0;
  std::vector<double> generator_residuals;
  std::optional<double> closure_residual;
  std::size_t group_order = 0;
};

/// Residual of [U(g), H] outside the bicommutant, relative to max(1, |H|_F).
/// The closure is also checked when it has at most `closure_limit` elements.
SymmetryCheck check_symmetrization_compatibility(const Mat& h, const UnitaryRep& rep,
                                                 double tol = 1e-9,
                                                 std::size_t closure_limit = 1000);

struct HamiltonianSplit {
  Mat a;  // in the bicommutant
  Mat b;  // in the commutant, twirl(H)
  double a_residual = 0.0;
  double b_residual = 0.0;
};

/// H = A + B. Throws IncompatibleReduction when H fails the symmetrization check.
HamiltonianSplit split_hamiltonian(const Mat& h, const UnitaryRep& rep, double tol = 1e-9);

struct Sector {
  std::size_t irrep_dim = 0;
  std::size_t multiplicity = 0;
  /// d x (irrep_dim * multiplicity); column k * irrep_dim + m is irrep
  /// vector m of copy k.
  Mat isometry;
};

struct BlockStructure {
  std::size_t dim = 0;
  std::vector<Sector> sectors;
  /// max over generators of the deviation from (+)_q I (x) U_q(g) in the block basis.
  double residual = 0.0;

  /// Concatenated isometries, a d x d unitary.
  Mat basis() const;
};

/// Sectors ordered by irrep_dim ascending, then multiplicity descending.
/// Throws NumericalFailure when random sampling fails to split after 5 tries
/// or the result does not block-diagonalize the generators.
BlockStructure block_structure(const UnitaryRep& rep, std::uint64_t seed = kDefaultSeed,
                               double tol = 1e-8);

/// One table block per sector: irrep_dim rows, multiplicity columns.
BipartitionTable symmetrization_table(const BlockStructure& bs);

struct LieCheck {
  bool sufficient = false;
  double residual = 0.0;
  std::size_t algebra_dim = 0;
};

/// Tests [L_a, H] in Alg{I, L_b}. A negative answer is inconclusive.
LieCheck lie_sufficient_check(const Mat& h, const std::vector<Mat>& lie_generators,
                              std::size_t max_algebra_dim = 0, double tol = 1e-9);

}  // namespace coarse
