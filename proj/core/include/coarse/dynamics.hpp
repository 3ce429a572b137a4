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

// Superoperator form of quantum dynamics and its reduction through a
// bipartition table: P L = P L P, the commutator test for Hamiltonian
// generators, the reduced generator tr_(A) o L o tr_(A)^+ and trajectory checks.

#include <cstddef>
#include <string>
#include <vector>

#include "coarse/linalg.hpp"
#include "coarse/quantum_cg.hpp"

namespace coarse {

/// d^2 x d^2 matrix acting on column-major vectorized d x d operators.
struct Superoperator {
  std::size_t dim = 0;
  Mat mat;

  /// Checks shape and finiteness.
  static Superoperator from_matrix(std::size_t dim, Mat mat);

  Mat apply(const Mat& rho) const;
};

/// -i[H, .], so that apply(rho) == -i (H rho - rho H).
Superoperator hamiltonian_generator(const Mat& h, double tol = 1e-9);

/// The projection onto span{S_kl} as a superoperator.
Superoperator projection_superoperator(const BipartitionTable& table);

/// |P L - P L P|_F / max(1, |L|_F). Valid for any generator.
CheckResult check_superop_compatibility(const Superoperator& l, const BipartitionTable& table,
                                        double tol = 1e-9);

struct OperatorResidual {
  std::size_t block = 0;
  std::size_t k = 0;
  std::size_t l = 0;
  double residual = 0.0;
};

struct HamiltonianCheck {
  bool compatible = false;
  double worst_residual = 0.0;
  std::vector<OperatorResidual> per_operator;
};

/// For each normalized S_kl, the part of [H, S_kl] outside span{S}, relative
/// to max(1, |-i[H,.]|_F). Presumes Hamiltonian dynamics. The root sum of
/// squares of the per-operator residuals equals the superoperator residual.
HamiltonianCheck check_hamiltonian_compatibility(const Mat& h, const BipartitionTable& table,
                                                 double tol = 1e-9);

struct ReducedGenerator {
  Superoperator generator;
  CheckResult check;
  std::vector<std::string> warnings;
};

/// tr_(A) o L o tr_(A)^+ on the reduced matrix units. Incompatible inputs
/// throw IncompatibleReduction unless `force` is set.
ReducedGenerator reduced_generator(const Superoperator& l, const BipartitionTable& table,
                                   bool force = false, double tol = 1e-9);

/// devec(exp(t L) vec(rho0)) for each t.
std::vector<Mat> evolve_quantum(const Superoperator& l, const Mat& rho0,
                                const std::vector<double>& times);

/// max_t |tr_(A)(e^{tL} rho0) - e^{t L~} tr_(A)(rho0)|_F. The reduced
/// generator is built with force, so incompatible inputs yield a defect.
double verify_reduction_by_trajectory(const Superoperator& l, const BipartitionTable& table,
                                      const Mat& rho0, const std::vector<double>& times);

}  // namespace coarse
