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


#include <benchmark/benchmark.h>

#include <random>

#include "coarse/corpus.hpp"
#include "coarse/dynamics.hpp"
#include "coarse/stochastic.hpp"
#include "coarse/symmetry.hpp"

using namespace coarse;

namespace {

Mat random_hermitian(Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  Mat a(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) a(i, j) = Complex(n(rng), n(rng));
  }
  return 0.5 * (a + a.adjoint());
}

void BM_MatrixExp(benchmark::State& state) {
  const Mat h = random_hermitian(state.range(0), 1);
  const Mat a = Complex(0, -1) * h;
  for (auto _ : state) benchmark::DoNotOptimize(matrix_exp(a, 1.0));
}
BENCHMARK(BM_MatrixExp)->RangeMultiplier(2)->Range(8, 128);

void BM_IsingLumpability(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const RateMatrix q = build_glauber_ising({n, 0.4});
  const Partition p = orbit_partition(ising_symmetry_group(n));
  for (auto _ : state) benchmark::DoNotOptimize(check_stochastic_compatibility(q, p));
}
BENCHMARK(BM_IsingLumpability)->DenseRange(4, 10, 2);

void BM_EquitableRefinement(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const RateMatrix q = build_glauber_ising({n, 0.4});
  const Partition seed = ising_energy_partition(n);
  for (auto _ : state) benchmark::DoNotOptimize(coarsest_equitable_refinement(q, seed));
}
BENCHMARK(BM_EquitableRefinement)->DenseRange(4, 10, 2);

void BM_TreeCommutant(benchmark::State& state) {
  const UnitaryRep g = build_ctqw_tree({static_cast<std::size_t>(state.range(0)), {}, false}).group;
  for (auto _ : state) benchmark::DoNotOptimize(commutant(g));
}
BENCHMARK(BM_TreeCommutant)->DenseRange(1, 3);

void BM_BlockStructure(benchmark::State& state) {
  const UnitaryRep g = build_ctqw_tree().group;
  for (auto _ : state) benchmark::DoNotOptimize(block_structure(g));
}
BENCHMARK(BM_BlockStructure);

void BM_SuperopCompatibility(benchmark::State& state) {
  const TreeWalk tree = build_ctqw_tree();
  const Superoperator l = hamiltonian_generator(tree.hamiltonian);
  const BipartitionTable t = tree_symmetrization_table();
  for (auto _ : state) benchmark::DoNotOptimize(check_superop_compatibility(l, t));
}
BENCHMARK(BM_SuperopCompatibility);

void BM_HamiltonianCompatibility(benchmark::State& state) {
  const TreeWalk tree = build_ctqw_tree();
  const BipartitionTable t = tree_symmetrization_table();
  for (auto _ : state) benchmark::DoNotOptimize(check_hamiltonian_compatibility(tree.hamiltonian, t));
}
BENCHMARK(BM_HamiltonianCompatibility);

}  // namespace

BENCHMARK_MAIN();
