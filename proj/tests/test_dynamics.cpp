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


#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "coarse/corpus.hpp"
#include "coarse/dynamics.hpp"
#include "coarse/error.hpp"
#include "coarse/symmetry.hpp"
#include "support/oracles.hpp"

using namespace coarse;
namespace ct = coarse::testing;
using Index = Eigen::Index;

namespace {

Mat pauli(char c) {
  Mat m(2, 2);
  const Complex i(0, 1);
  switch (c) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, -i, i, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

Mat unit(Index d, Index i, Index j) {
  Mat m = Mat::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

Mat block_diag(const std::vector<Mat>& blocks) {
  Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  Mat out = Mat::Zero(n, n);
  Index at = 0;
  for (const auto& b : blocks) {
    out.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return out;
}

Mat p45() {
  Mat p = Mat::Identity(7, 7);
  p(3, 3) = p(4, 4) = 0.0;
  p(3, 4) = p(4, 3) = 1.0;
  return p;
}

}  // namespace

TEST_CASE("hamiltonian generator") {
  CHECK(hamiltonian_generator(Mat::Zero(3, 3)).mat.norm() == 0.0);
  const auto l = hamiltonian_generator(pauli('z'));
  CHECK((l.apply(pauli('x')) - 2.0 * pauli('y')).norm() < 1e-15);

  ct::Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = Index(ct::pick(rng, 1, 6));
    const Mat h = ct::random_hermitian(d, rng);
    const Mat r = ct::random_complex(d, d, rng);
    const auto g = hamiltonian_generator(h);
    CHECK((g.apply(r) - Complex(0, -1) * commutator(h, r)).norm() < 1e-12 * (1 + r.norm() * h.norm()));
    CHECK((g.mat + g.mat.adjoint()).norm() < 1e-12);
  }

  const TreeWalk tree = build_ctqw_tree();
  const auto lt = hamiltonian_generator(tree.hamiltonian);
  const auto comm = commutant(tree.group);
  for (const auto& k : comm.basis()) {
    if (commutator(k, tree.hamiltonian).norm() < 1e-12) CHECK(lt.apply(k).norm() < 1e-12);
  }
  CHECK_THROWS_AS(hamiltonian_generator(Complex(0, 1) * pauli('x')), InvalidInput);
}

TEST_CASE("superoperator validation") {
  CHECK_THROWS_AS(Superoperator::from_matrix(2, Mat::Zero(3, 3)), InvalidInput);
  Mat nan = Mat::Zero(4, 4);
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(Superoperator::from_matrix(2, nan), InvalidInput);
}

TEST_CASE("projection superoperator is an orthogonal projection") {
  ct::Rng rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = ct::random_table(ct::pick(rng, 1, 7), rng);
    const Mat p = projection_superoperator(t).mat;
    CHECK((p * p - p).norm() < 1e-10);
    CHECK((p - p.adjoint()).norm() < 1e-10);
  }
}

TEST_CASE("superoperator compatibility") {
  ct::Rng rng(53);
  const Mat h = ct::random_hermitian(4, rng);
  const auto row = BipartitionTable::from_columns(4, {{0}, {1}, {2}, {3}});
  CHECK(check_superop_compatibility(hamiltonian_generator(h), row).compatible);
  const auto any = Superoperator::from_matrix(4, ct::random_complex(16, 16, rng));
  CHECK(check_superop_compatibility(any, row).compatible);

  const TreeWalk tree = build_ctqw_tree();
  const auto table = symmetrization_table(block_structure(tree.group));
  CHECK(check_superop_compatibility(hamiltonian_generator(tree.hamiltonian), table).compatible);
  const TreeWalk bad = build_ctqw_tree({2, {{4, 5}}, false});
  const auto no = check_superop_compatibility(hamiltonian_generator(bad.hamiltonian), table);
  CHECK_FALSE(no.compatible);
  CHECK(no.residual > 1e-2);
  CHECK_THROWS_AS(check_superop_compatibility(hamiltonian_generator(h), table), InvalidInput);
}

TEST_CASE("commutator test examples") {
  Mat h = Mat::Zero(3, 3);
  h(0, 0) = 1.0;
  h(1, 1) = h(2, 2) = -2.0;
  const BipartitionTable eig(3, std::nullopt, {TableBlock{{{0}}}, TableBlock{{{1, 2}}}});
  CHECK(check_hamiltonian_compatibility(h, eig).compatible);

  const TreeWalk tree = build_ctqw_tree();
  const auto ok = check_hamiltonian_compatibility(tree.hamiltonian, tree_symmetrization_table());
  CHECK(ok.compatible);
  CHECK(ok.worst_residual < 1e-14);
  CHECK(ok.per_operator.size() == 9 + 4 + 1);
  CHECK(check_hamiltonian_compatibility(tree.hamiltonian - p45(), tree_symmetrization_table()).compatible);

  const TreeWalk bad = build_ctqw_tree({2, {{4, 5}}, false});
  const auto no = check_hamiltonian_compatibility(bad.hamiltonian, tree_symmetrization_table());
  CHECK_FALSE(no.compatible);
  double rss = 0.0;
  for (const auto& r : no.per_operator) rss += r.residual * r.residual;
  const auto sup = check_superop_compatibility(hamiltonian_generator(bad.hamiltonian), tree_symmetrization_table());
  CHECK(std::sqrt(rss) == doctest::Approx(sup.residual).epsilon(1e-9));
}

TEST_CASE("reduced generator examples") {
  ct::Rng rng(54);
  const Mat u = ct::random_unitary(3, rng);
  const Mat h = ct::random_hermitian(3, rng);
  const BipartitionTable row(3, u, {TableBlock{{{0}, {1}, {2}}}});
  const auto red = reduced_generator(hamiltonian_generator(h), row);
  const auto expect = hamiltonian_generator(u.adjoint() * h * u);
  CHECK((red.generator.mat - expect.mat).norm() < 1e-12);

  const TreeWalk tree = build_ctqw_tree();
  const TreeBlocks gold = tree_golden_blocks(false);
  const auto tr = reduced_generator(hamiltonian_generator(tree.hamiltonian), tree_symmetrization_table());
  for (Index k = 0; k < 3; ++k) {
    for (Index l = 0; l < 3; ++l) {
      const Mat e = unit(6, k, l);
      const Mat want = Complex(0, -1) * commutator(block_diag({gold.h1, Mat::Zero(3, 3)}), e);
      CHECK((tr.generator.apply(e).topLeftCorner(3, 3) - want.topLeftCorner(3, 3)).norm() < 1e-12);
    }
  }

  const TreeBlocks gb = tree_golden_blocks(true);
  const Mat hd = block_diag({gb.h1, gb.h2, gb.h3});
  const auto sr = reduced_generator(hamiltonian_generator(build_ctqw_tree({2, {}, true}).hamiltonian), tree_sector_table());
  CHECK(sr.check.compatible);
  const std::vector<std::pair<Index, Index>> blocks{{0, 3}, {3, 5}, {5, 7}};
  for (const auto& [lo, hi] : blocks) {
    for (Index k = lo; k < hi; ++k) {
      for (Index l = lo; l < hi; ++l) {
        const Mat e = unit(7, k, l);
        CHECK((sr.generator.apply(e) - Complex(0, -1) * commutator(hd, e)).norm() < 1e-12);
      }
    }
  }

  const TreeWalk bad = build_ctqw_tree({2, {{4, 5}}, false});
  CHECK_THROWS_AS(reduced_generator(hamiltonian_generator(bad.hamiltonian), tree_symmetrization_table()),
                  IncompatibleReduction);
  const auto forced = reduced_generator(hamiltonian_generator(bad.hamiltonian), tree_symmetrization_table(), true);
  CHECK_FALSE(forced.warnings.empty());
}

TEST_CASE("reduced generator is trace-free when compatible") {
  ct::Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = ct::random_table(ct::pick(rng, 2, 7), rng);
    const Mat h = ct::compatible_hamiltonian(t, rng);
    const auto red = reduced_generator(hamiltonian_generator(h), t);
    const Mat rb = qcg_apply(t, ct::random_density(Index(t.dim()), rng));
    CHECK(std::abs(red.generator.apply(rb).trace()) < 1e-12);
  }
}

TEST_CASE("evolve_quantum") {
  const auto zero = Superoperator::from_matrix(2, Mat::Zero(4, 4));
  const Mat plus = Mat::Constant(2, 2, 0.5);
  for (const auto& r : evolve_quantum(zero, plus, {0.0, 1.0, 5.0})) CHECK((r - plus).norm() == 0.0);

  const auto lz = hamiltonian_generator(pauli('z'));
  const Mat r = evolve_quantum(lz, plus, {std::numbers::pi / 2})[0];
  CHECK((r * pauli('x')).trace().real() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(r(0, 1) - 0.5 * std::exp(Complex(0, -std::numbers::pi))) < 1e-12);

  ct::Rng rng(56);
  const Mat h = ct::random_hermitian(5, rng);
  const Mat r0 = ct::random_density(5, rng);
  for (const auto& rt : evolve_quantum(hamiltonian_generator(h), r0, {0.3, 2.0, 7.0})) {
    CHECK(std::abs(rt.trace() - 1.0) < 1e-10);
    CHECK((rt - rt.adjoint()).norm() < 1e-10);
  }
  CHECK_THROWS_AS(evolve_quantum(lz, Mat::Identity(3, 3), {1.0}), InvalidInput);
}

TEST_CASE("quantum walk on the tree spreads faster than the classical walk") {
  const TreeWalk tree = build_ctqw_tree();
  const Mat u = tree_irrep_basis();
  const Mat rho0 = u.col(2) * u.col(2).adjoint();
  const auto lq = hamiltonian_generator(tree.hamiltonian);
  RealMat lap = -tree.hamiltonian.real();
  const RateMatrix q = RateMatrix::from_offdiagonal(RealMat(lap - RealMat(lap.diagonal().asDiagonal())));
  RealVec p0 = RealVec::Zero(7);
  for (Index i = 3; i < 7; ++i) p0(i) = 0.25;

  std::vector<double> times;
  for (int i = 1; i <= 400; ++i) times.push_back(0.01 * i);
  const auto qt = evolve_quantum(lq, rho0, times);
  const auto ct_traj = evolve_stochastic(q, p0, times);
  auto first = [&](auto pop) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (pop(i) >= 0.5) return times[i];
    }
    return std::numeric_limits<double>::infinity();
  };
  // population of the root, the far end of the walk
  const double tq = first([&](std::size_t i) { return qt[i](0, 0).real(); });
  const double tc = first([&](std::size_t i) { return ct_traj[i](0); });
  CHECK(tq < tc);
}

TEST_CASE("trajectory verification") {
  const TreeWalk tree = build_ctqw_tree();
  const Mat u = tree_irrep_basis();
  const Mat rho0 = u.col(2) * u.col(2).adjoint();
  const auto l = hamiltonian_generator(tree.hamiltonian);
  CHECK(verify_reduction_by_trajectory(l, tree_symmetrization_table(), rho0, {0.5, 1, 2, 5}) <= 1e-8);
  CHECK(verify_reduction_by_trajectory(l, tree_symmetrization_table(), rho0, {0.0}) < 1e-14);

  const TreeWalk bad = build_ctqw_tree({2, {{4, 5}}, false});
  CVec psi = CVec::Zero(7);
  psi(5) = 1.0;
  psi(6) = Complex(0, 1);
  const Mat coherent = ct::pure_state(psi);
  const double defect = verify_reduction_by_trajectory(hamiltonian_generator(bad.hamiltonian),
                                                       tree_symmetrization_table(), coherent,
                                                       {0.5, 1, 2, 3, 4, 5});
  CHECK(defect > 1e-3);
}

TEST_CASE("equivariance on compatible random tables") {
  ct::Rng rng(57);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = ct::random_table(ct::pick(rng, 2, 6), rng);
    const Mat h = ct::compatible_hamiltonian(t, rng);
    CHECK(check_hamiltonian_compatibility(h, t).compatible);
    const Mat r0 = ct::random_density(Index(t.dim()), rng);
    CHECK(verify_reduction_by_trajectory(hamiltonian_generator(h), t, r0, {0.5, 2.0, 10.0}) <= 1e-8);
  }
}
