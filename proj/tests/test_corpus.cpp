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

#include <bit>
#include <cmath>

#include "coarse/corpus.hpp"
#include "coarse/error.hpp"
#include "coarse/symmetry.hpp"
#include "support/oracles.hpp"

using namespace coarse;
namespace ct = coarse::testing;
using Index = Eigen::Index;

namespace {

const SpecialCase& special(const std::string& name) {
  static const std::vector<SpecialCase> cases = special_case_tables();
  for (const auto& c : cases) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("no special case " + name);
}

Mat flip(std::size_t n, std::size_t site) {
  const Index d = Index(1) << n;
  Mat x = Mat::Zero(d, d);
  const std::size_t bit = std::size_t{1} << (n - 1 - site);
  for (Index s = 0; s < d; ++s) x(Index(std::size_t(s) ^ bit), s) = 1.0;
  return x;
}

}  // namespace

TEST_CASE("six-state walk matrix") {
  const WalkParams p;
  const RealMat q = build_six_state_walk(p).matrix();
  for (Index j = 0; j < 6; ++j) CHECK(std::abs(q.col(j).sum()) < 1e-15);
  CHECK(q(1, 0) == doctest::Approx(p.a));  // v1 -> v2
  CHECK(q(0, 1) == doctest::Approx(p.a));

  WalkParams s;
  s.delta = s.epsilon = 0.0;
  const RealMat qs = build_six_state_walk(s).matrix();
  // the middle and right columns look alike from every state of the other
  CHECK(std::abs(qs(3, 1) - qs(3, 2)) < 1e-15);
  CHECK(std::abs(qs(1, 3) - qs(2, 3)) < 1e-15);

  WalkParams t;
  t.a_tilde = 1.5;
  const auto bad = check_stochastic_compatibility(build_six_state_walk(t), walk_column_partition());
  CHECK_FALSE(bad.compatible);
  CHECK(bad.residual > 1e-2);

  WalkParams neg;
  neg.a = 0.0;
  CHECK_THROWS_AS(build_six_state_walk(neg), InvalidInput);
  WalkParams wide;
  wide.delta = 0.6;
  CHECK_THROWS_AS(build_six_state_walk(wide), InvalidInput);
}

TEST_CASE("domain walls and energy levels") {
  CHECK(domain_walls(0, 3) == 0);
  CHECK(domain_walls(0b001, 3) == 2);
  CHECK(domain_walls(0b0101, 4) == 4);
  CHECK(domain_walls(0b0011, 4) == 2);
  const Partition lv = ising_energy_partition(4);
  REQUIRE(lv.size() == 3);
  CHECK(lv.block(0) == std::vector<std::size_t>{0, 15});
  CHECK(lv.block(1).size() == 12);
  CHECK(lv.block(2) == std::vector<std::size_t>{5, 10});
}

TEST_CASE("Glauber-Ising rates for three sites") {
  const double g = 0.4;
  const RealMat q = build_glauber_ising({3, g}).matrix();
  CHECK(q(1, 0) == doctest::Approx(1 - g));   // ground -> excited
  CHECK(q(0, 1) == doctest::Approx(1 + g));   // excited -> ground
  CHECK(q(3, 1) == doctest::Approx(1.0));     // 001 -> 011, both one wall pair
  CHECK(q(3, 0) == 0.0);                      // two flips apart
  for (Index i = 0; i < 8; ++i) {
    for (Index j = 0; j < 8; ++j) {
      if (i != j && q(i, j) != 0.0) CHECK(std::popcount(std::size_t(i ^ j)) == 1);
    }
  }
  CHECK_THROWS_AS(build_glauber_ising({3, 1.0}), InvalidInput);
  CHECK_THROWS_AS(build_glauber_ising({13, 0.1}), InvalidInput);
}

TEST_CASE("Ising orbit reduction for three sites") {
  for (double g : {0.0, 0.3, 0.8}) {
    const RateMatrix q = build_glauber_ising({3, g});
    const Partition orb = orbit_partition(ising_symmetry_group(3)).canonical();
    const auto red = reduced_rate_matrix(q, orb);
    RealMat want(2, 2);
    want << -3 * (1 - g), 1 + g, 3 * (1 - g), -1 - g;
    CHECK((red.rates.matrix() - want).norm() < 1e-12);
  }
}

TEST_CASE("Ising symmetry") {
  for (std::size_t n = 2; n <= 8; ++n) {
    const PermRep rep = ising_symmetry_group(n);
    const RealMat q = build_glauber_ising({n, 0.35}).matrix();
    for (const auto& g : rep.generators) {
      const RealMat d = permutation_matrix(g);
      CHECK((d * q - q * d).norm() < 1e-12);
    }
  }
  const Partition o2 = orbit_partition(ising_symmetry_group(2)).canonical();
  CHECK(o2 == Partition(4, {{0, 3}, {1, 2}}));
  std::vector<std::size_t> sizes;
  const auto orbits = orbit_partition(ising_symmetry_group(4)).canonical();
  for (const auto& b : orbits.blocks()) sizes.push_back(b.size());
  CHECK(sizes == std::vector<std::size_t>{2, 8, 4, 2});
}

TEST_CASE("Ising four sites: energy levels too coarse, orbits fine") {
  const RateMatrix q = build_glauber_ising({4, 0.5});
  CHECK(check_stochastic_compatibility(q, ising_energy_partition(4)).residual > 1e-3);
  const Partition orb = orbit_partition(ising_symmetry_group(4)).canonical();
  CHECK(check_stochastic_compatibility(q, orb).residual <= 1e-12);
  // {3, 6, 9, 12} only reaches the odd-weight orbit in one flip
  const auto rep = rate_uniformity_report(q, orb);
  CHECK(rep.at(2, 0).max == 0.0);
  CHECK(rep.at(2, 3).max == 0.0);
  CHECK(rep.at(2, 1).min > 0.0);
}

TEST_CASE("equilibrium analysis") {
  const IsingConfig cfg = IsingConfig::from_coupling(3, 1.0, 2.0);
  CHECK(cfg.gamma == doctest::Approx(std::tanh(1.0)));
  const RateMatrix q = build_glauber_ising(cfg);
  const auto red = reduced_rate_matrix(q, orbit_partition(ising_symmetry_group(3)).canonical());
  const auto eq = equilibrium_analysis(red.rates);
  const double e2 = std::exp(2.0);
  CHECK(eq.stationary(1) == doctest::Approx(3 / (3 + e2)).epsilon(1e-12));
  CHECK(eq.relaxation_time == doctest::Approx(0.5 * (1 + e2) / (3 + e2)).epsilon(1e-12));

  RealMat two(2, 2);
  two << -1, 1, 1, -1;
  const auto t = equilibrium_analysis(RateMatrix(two));
  CHECK(t.stationary(0) == doctest::Approx(0.5));
  CHECK(t.relaxation_time == doctest::Approx(0.5));

  CHECK_THROWS_AS(equilibrium_analysis(RateMatrix(RealMat::Zero(2, 2))), InvalidInput);
}

TEST_CASE("tree Hamiltonian and its blocks") {
  const TreeWalk tree = build_ctqw_tree();
  CHECK(tree.edges.size() == 6);
  CHECK(tree.hamiltonian(0, 0) == Complex(2));
  CHECK(tree.hamiltonian(1, 1) == Complex(3));
  CHECK(tree.hamiltonian(3, 3) == Complex(1));
  CHECK(tree.hamiltonian(0, 1) == Complex(-1));

  const Mat u = tree_irrep_basis();
  CHECK((u.adjoint() * u - Mat::Identity(7, 7)).norm() < 1e-14);
  CHECK(std::abs(u(1, 1) - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(u(2, 1) - 1 / std::sqrt(2.0)) < 1e-15);
  // u5 alternates over v4, v6 against v5, v7 in the usual numbering
  CHECK(std::abs(u(3, 4) - 0.5) < 1e-15);
  CHECK(std::abs(u(5, 4) + 0.5) < 1e-15);
  CHECK(std::abs(u(4, 4) - 0.5) < 1e-15);
  CHECK(std::abs(u(6, 4) + 0.5) < 1e-15);

  auto check_blocks = [&](const Mat& h, bool broken) {
    const TreeBlocks g = tree_golden_blocks(broken);
    const Mat c = u.adjoint() * h * u;
    CHECK((c.block(0, 0, 3, 3) - g.h1).norm() < 1e-12);
    CHECK((c.block(3, 3, 2, 2) - g.h2).norm() < 1e-12);
    CHECK((c.block(5, 5, 2, 2) - g.h3).norm() < 1e-12);
    Mat off = c;
    off.block(0, 0, 3, 3).setZero();
    off.block(3, 3, 2, 2).setZero();
    off.block(5, 5, 2, 2).setZero();
    CHECK(off.norm() < 1e-12);
  };
  check_blocks(tree.hamiltonian, false);
  const TreeWalk broken = build_ctqw_tree({2, {}, true});
  check_blocks(broken.hamiltonian, true);

  const Mat pa = tree.group.generators()[0], pb = tree.group.generators()[1];
  CHECK((commutator(pb, broken.hamiltonian) - commutator(pa, pb)).norm() < 1e-12);

  CHECK_THROWS_AS(build_ctqw_tree({2, {{0, 9}}, false}), InvalidInput);
  CHECK_THROWS_AS(build_ctqw_tree({2, {{0, 1}}, false}), InvalidInput);
  CHECK_THROWS_AS(build_ctqw_tree({5, {}, false}), InvalidInput);
}

TEST_CASE("trees of other depths") {
  const std::vector<std::pair<std::size_t, std::size_t>> orders{{1, 2}, {2, 8}, {3, 128}};
  for (const auto& [depth, order] : orders) {
    const TreeWalk t = build_ctqw_tree({depth, {}, false});
    const auto els = closure(t.group);
    CHECK(els.size() == order);
    CHECK(check_symmetrization_compatibility(t.hamiltonian, t.group).compatible);
  }
}

TEST_CASE("tree tables") {
  const auto t = tree_symmetrization_table();
  CHECK(t.reduced_dim() == 6);
  CHECK(tree_sector_table().reduced_dim() == 7);
  const auto comm = commutant(build_ctqw_tree().group);
  const auto ops = BipartitionOperators(t).operators();
  CHECK(span_orthonormalize(ops).dimension() == comm.dimension());
  for (const auto& s : ops) CHECK(in_span(s, comm));
}

TEST_CASE("special-case tables match their golden operators") {
  const auto cases = special_case_tables();
  CHECK(cases.size() == 5);
  const std::vector<std::size_t> dims{4, 4, 4, 8, 8};
  for (std::size_t c = 0; c < cases.size(); ++c) {
    CHECK(cases[c].table.dim() == dims[c]);
    const BipartitionOperators ops(cases[c].table);
    REQUIRE(ops.count() == cases[c].golden_operators.size());
    for (std::size_t i = 0; i < ops.count(); ++i) {
      CHECK((ops.entries()[i].op - cases[c].golden_operators[i]).norm() < 1e-12);
    }
  }
}

TEST_CASE("total spin operators") {
  const auto j = total_spin_operators(2);
  CHECK((commutator(j[0], j[1]) - Complex(0, 1) * j[2]).norm() < 1e-14);
  const Mat j2 = j[0] * j[0] + j[1] * j[1] + j[2] * j[2];
  // singlet (|ud> - |du>)/sqrt2 has J^2 = 0
  CVec s = CVec::Zero(4);
  s(1) = 1 / std::sqrt(2.0);
  s(2) = -1 / std::sqrt(2.0);
  CHECK((j2 * s).norm() < 1e-14);
}

TEST_CASE("measurement table") {
  Mat ud = Mat::Zero(4, 4);
  ud(1, 1) = 1.0;
  Mat want = Mat::Zero(3, 3);
  want(1, 1) = 1.0;
  CHECK((qcg_apply(special("sz_measurement").table, ud) - want).norm() < 1e-15);
}

TEST_CASE("repetition code hides single flips") {
  const auto& t = special("repetition_code").table;
  ct::Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    CVec psi = CVec::Zero(8);
    psi(0) = ct::gaussian(rng);
    psi(7) = ct::gaussian(rng);
    const Mat rho = ct::pure_state(psi);
    const Mat ref = qcg_apply(t, rho);
    for (std::size_t site = 0; site < 3; ++site) {
      const Mat x = flip(3, site);
      CHECK((qcg_apply(t, x * rho * x) - ref).norm() < 1e-12);
    }
  }
}

TEST_CASE("reference-frame table spans the rotation commutant") {
  const auto& t = special("rf_three_spins").table;
  const auto j = total_spin_operators(3);
  std::vector<Mat> gens;
  for (const auto& ja : j) gens.push_back(matrix_exp(Mat(Complex(0, -1) * ja), 0.3));
  const auto comm = commutant_of(gens, 8);
  CHECK(comm.dimension() == 5);
  const auto ops = BipartitionOperators(t).operators();
  CHECK(span_orthonormalize(ops).dimension() == 5);
  for (const auto& s : ops) CHECK(in_span(s, comm));
}

TEST_CASE("total spin basis table is a change of basis") {
  const auto& t = special("total_spin_basis").table;
  CHECK(t.reduced_dim() == 4);
  ct::Rng rng(62);
  const Mat rho = ct::random_density(4, rng);
  const Mat out = qcg_apply(t, rho);
  CHECK(std::abs(out.trace() - 1.0) < 1e-14);
  CHECK(std::abs(out.norm() - rho.norm()) < 1e-12);
}
