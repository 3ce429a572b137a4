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

#include "coarse/corpus.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <map>
#include <set>

#include <Eigen/Eigenvalues>

#include "coarse/error.hpp"

namespace coarse {

namespace {

using Index = Eigen::Index;

Index ix(std::size_t i) { return static_cast<Index>(i); }

Mat basis_vector(std::size_t d, std::initializer_list<std::pair<std::size_t, double>> entries) {
  Mat v = Mat::Zero(ix(d), 1);
  for (const auto& [i, c] : entries) v(ix(i), 0) = c;
  return v;
}

Mat outer(const Mat& a, const Mat& b) { return a * b.adjoint(); }

Mat columns_to_matrix(const std::vector<Mat>& cols) {
  Mat m(cols.front().rows(), ix(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) m.col(ix(j)) = cols[j].col(0);
  return m;
}

// Operators in BipartitionOperators entry order, from columns of basis vectors.
std::vector<Mat> golden_from_vectors(const std::vector<std::vector<std::vector<Mat>>>& blocks) {
  std::vector<Mat> out;
  for (const auto& cols : blocks) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      for (std::size_t l = 0; l < cols.size(); ++l) {
        const std::size_t m = std::min(cols[k].size(), cols[l].size());
        Mat s = Mat::Zero(cols[k][0].rows(), cols[k][0].rows());
        for (std::size_t i = 0; i < m; ++i) s += outer(cols[k][i], cols[l][i]);
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

}  // namespace

// --- Six-vertex walk -----------------------------------------------------------

RateMatrix build_six_state_walk(const WalkParams& p) {
  for (double v : {p.a, p.b, p.c, p.d, p.e}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("build_six_state_walk: a, b, c, d, e must be positive");
  }
  if (!(std::abs(p.delta) <= p.c / 2) || !(std::abs(p.epsilon) <= p.c / 2)) {
    throw InvalidInput("build_six_state_walk: |delta| and |epsilon| must not exceed c/2");
  }
  if (p.a_tilde && !(*p.a_tilde >= 0.0 && std::isfinite(*p.a_tilde))) {
    throw InvalidInput("build_six_state_walk: a_tilde must be non-negative");
  }
  const double c = p.c, dl = p.delta, ep = p.epsilon;
  RealMat r(6, 6);
  // clang-format off
  r << 0,   p.a,       p.a,       0,       0,      0,
       p.a, 0,         p.b,       c - dl,  c - ep, c + dl + ep,
       p.a, p.b,       0,         c + dl,  c + ep, c - dl - ep,
       0,   c - dl,    c + dl,    0,       p.d,    0,
       0,   c - ep,    c + ep,    p.d,     0,      p.e,
       0,   c + dl + ep, c - dl - ep, 0,   p.e,    0;
  // clang-format on
  if (p.a_tilde) r(1, 0) = r(0, 1) = *p.a_tilde;
  return RateMatrix::from_offdiagonal(r);
}

Partition walk_column_partition() { return Partition(6, {{0}, {1, 2}, {3, 4, 5}}); }

Partition walk_split_partition() { return Partition(6, {{0, 1, 2}, {3, 4, 5}}); }

// --- Glauber-Ising ring ----------------------------------------------------------

IsingConfig IsingConfig::from_coupling(std::size_t n, double j, double t) {
  if (!(t > 0.0) || !std::isfinite(j) || !std::isfinite(t)) {
    throw InvalidInput("IsingConfig: temperature must be positive and the coupling finite");
  }
  IsingConfig cfg{n, std::tanh(2.0 * j / t)};
  cfg.validate();
  return cfg;
}

void IsingConfig::validate() const {
  if (n < 1 || n > 12) throw InvalidInput("IsingConfig: n must lie in [1, 12]");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidInput("IsingConfig: gamma must lie in [0, 1)");
}

std::size_t domain_walls(std::size_t state, std::size_t n) {
  if (n < 2) return 0;
  const std::size_t mask = (std::size_t{1} << n) - 1;
  const std::size_t rotated = ((state << 1) | (state >> (n - 1))) & mask;
  const std::size_t walls = static_cast<std::size_t>(std::popcount((state ^ rotated) & mask));
  return walls;
}

RateMatrix build_glauber_ising(const IsingConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.n;
  const std::size_t states = std::size_t{1} << n;
  RealMat r = RealMat::Zero(ix(states), ix(states));
  for (std::size_t s = 0; s < states; ++s) {
    const std::size_t w = domain_walls(s, n);
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t t = s ^ (std::size_t{1} << x);
      const std::size_t wt = domain_walls(t, n);
      const double rate = wt > w ? 1.0 - cfg.gamma : (wt < w ? 1.0 + cfg.gamma : 1.0);
      r(ix(t), ix(s)) = rate;
    }
  }
  return RateMatrix::from_offdiagonal(r);
}

PermRep ising_symmetry_group(std::size_t n) {
  IsingConfig{n, 0.0}.validate();
  const std::size_t states = std::size_t{1} << n;
  const std::size_t mask = states - 1;
  PermRep rep{states, {std::vector<std::size_t>(states), std::vector<std::size_t>(states)}};
  for (std::size_t s = 0; s < states; ++s) {
    // site x moves to site x + 1
    rep.generators[0][s] = ((s << 1) | (s >> (n - 1))) & mask;
    rep.generators[1][s] = s ^ mask;
  }
  return rep;
}

Partition ising_energy_partition(std::size_t n) {
  IsingConfig{n, 0.0}.validate();
  std::map<std::size_t, std::vector<std::size_t>> levels;
  for (std::size_t s = 0; s < (std::size_t{1} << n); ++s) levels[domain_walls(s, n)].push_back(s);
  std::vector<std::vector<std::size_t>> blocks;
  for (auto& [w, states] : levels) blocks.push_back(std::move(states));
  return Partition(std::size_t{1} << n, std::move(blocks));
}

Equilibrium equilibrium_analysis(const RateMatrix& qr) {
  const RealMat& q = qr.matrix();
  const Index n = q.rows();
  Equilibrium out;
  if (n == 0) throw InvalidInput("equilibrium_analysis: empty rate matrix");
  Eigen::EigenSolver<RealMat> es(q);
  if (es.info() != Eigen::Success) throw NumericalFailure("equilibrium_analysis: eigensolver failed");
  const auto& ev = es.eigenvalues();
  const double zero_tol = 1e-9 * std::max(1.0, q.norm());
  Index zero = -1;
  double slowest = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    if (std::abs(ev(i)) <= zero_tol) {
      if (zero >= 0) throw InvalidInput("equilibrium_analysis: stationary distribution is not unique");
      zero = i;
    } else {
      slowest = std::max(slowest, ev(i).real());
    }
  }
  if (zero < 0) throw NumericalFailure("equilibrium_analysis: no zero eigenvalue found");
  RealVec v = es.eigenvectors().col(zero).real();
  v /= v.sum();
  out.stationary = v;
  out.relaxation_time = n > 1 ? -1.0 / slowest : 0.0;
  return out;
}

// --- Binary tree walk ----------------------------------------------------------

TreeWalk build_ctqw_tree(const TreeConfig& cfg) {
  if (cfg.depth < 1 || cfg.depth > 4) throw InvalidInput("build_ctqw_tree: depth must lie in [1, 4]");
  const std::size_t n = (std::size_t{1} << (cfg.depth + 1)) - 1;
  TreeWalk out;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  auto add_edge = [&](std::size_t i, std::size_t j) {
    if (i >= n || j >= n || i == j) {
      throw InvalidInput("build_ctqw_tree: invalid edge (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")");
    }
    const auto key = std::minmax(i, j);
    if (!seen.insert(key).second) {
      throw InvalidInput("build_ctqw_tree: duplicate edge (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")");
    }
    out.edges.emplace_back(key.first, key.second);
  };
  for (std::size_t v = 1; v < n; ++v) add_edge((v - 1) / 2, v);
  if (cfg.broken) {
    if (cfg.depth != 2) throw InvalidInput("build_ctqw_tree: the broken variant needs depth 2");
    add_edge(3, 4);
  }
  for (const auto& [i, j] : cfg.extra_edges) add_edge(i, j);

  out.hamiltonian = Mat::Zero(ix(n), ix(n));
  for (const auto& [i, j] : out.edges) {
    out.hamiltonian(ix(i), ix(i)) += 1.0;
    out.hamiltonian(ix(j), ix(j)) += 1.0;
    out.hamiltonian(ix(i), ix(j)) -= 1.0;
    out.hamiltonian(ix(j), ix(i)) -= 1.0;
  }

  std::vector<std::vector<std::size_t>> perms;
  if (cfg.depth == 2) {
    perms = {{0, 1, 2, 4, 3, 5, 6}, {0, 2, 1, 6, 5, 4, 3}};
  } else {
    for (std::size_t v = 0; 2 * v + 2 < n; ++v) {
      std::vector<std::size_t> g(n);
      for (std::size_t i = 0; i < n; ++i) g[i] = i;
      std::vector<std::pair<std::size_t, std::size_t>> pending{{2 * v + 1, 2 * v + 2}};
      while (!pending.empty()) {
        const auto [l, r] = pending.back();
        pending.pop_back();
        g[l] = r;
        g[r] = l;
        if (2 * l + 2 < n) {
          pending.emplace_back(2 * l + 1, 2 * r + 1);
          pending.emplace_back(2 * l + 2, 2 * r + 2);
        }
      }
      perms.push_back(std::move(g));
    }
  }
  out.group = UnitaryRep::from_permutations(n, perms);
  return out;
}

Mat tree_irrep_basis() {
  const double r2 = 1.0 / std::sqrt(2.0);
  const std::vector<Mat> u = {
      basis_vector(7, {{0, 1.0}}),
      basis_vector(7, {{1, r2}, {2, r2}}),
      basis_vector(7, {{3, 0.5}, {4, 0.5}, {5, 0.5}, {6, 0.5}}),
      basis_vector(7, {{1, r2}, {2, -r2}}),
      basis_vector(7, {{3, 0.5}, {5, -0.5}, {4, 0.5}, {6, -0.5}}),
      basis_vector(7, {{3, 0.5}, {4, -0.5}, {5, 0.5}, {6, -0.5}}),
      basis_vector(7, {{4, 0.5}, {3, -0.5}, {5, 0.5}, {6, -0.5}}),
  };
  return columns_to_matrix(u);
}

BipartitionTable tree_symmetrization_table() {
  return BipartitionTable(7, tree_irrep_basis(),
                          {TableBlock{{{0}, {1}, {2}}}, TableBlock{{{3}, {4}}}, TableBlock{{{5, 6}}}});
}

BipartitionTable tree_sector_table() {
  return BipartitionTable(7, tree_irrep_basis(),
                          {TableBlock{{{0}, {1}, {2}}}, TableBlock{{{3}, {4}}}, TableBlock{{{5}, {6}}}});
}

TreeBlocks tree_golden_blocks(bool broken) {
  const double s = std::sqrt(2.0);
  TreeBlocks b;
  b.h1.resize(3, 3);
  b.h1 << 2, -s, 0, -s, 3, -s, 0, -s, 1;
  b.h2.resize(2, 2);
  b.h2 << 3, -s, -s, 1;
  b.h3.resize(2, 2);
  if (broken) {
    b.h3 << 2, -1, -1, 2;
  } else {
    b.h3 << 1, 0, 0, 1;
  }
  return b;
}

// --- Spin-1/2 special cases ------------------------------------------------------

std::vector<Mat> total_spin_operators(std::size_t n) {
  if (n < 1 || n > 12) throw InvalidInput("total_spin_operators: n must lie in [1, 12]");
  Mat sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 0.5, 0.5, 0;
  sy << 0, Complex(0, -0.5), Complex(0, 0.5), 0;
  sz << 0.5, 0, 0, -0.5;
  std::vector<Mat> out;
  for (const Mat* s : {&sx, &sy, &sz}) {
    const Index dim = Index{1} << n;
    Mat j = Mat::Zero(dim, dim);
    for (std::size_t site = 0; site < n; ++site) {
      Mat term = Mat::Identity(1, 1);
      for (std::size_t k = 0; k < n; ++k) term = kron(term, k == site ? *s : Mat(Mat::Identity(2, 2)));
      j += term;
    }
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<SpecialCase> special_case_tables() {
  const double r2 = 1.0 / std::sqrt(2.0);
  const double r6 = 1.0 / std::sqrt(6.0);
  const double r3 = 1.0 / std::sqrt(3.0);
  const double t23 = std::sqrt(2.0 / 3.0);
  std::vector<SpecialCase> out;

  {  // |1,1>, |1,0>, |1,-1>, |0,0>
    const std::vector<Mat> v = {basis_vector(4, {{0, 1.0}}), basis_vector(4, {{1, r2}, {2, r2}}),
                                basis_vector(4, {{3, 1.0}}), basis_vector(4, {{1, r2}, {2, -r2}})};
    BipartitionTable t(4, columns_to_matrix(v), {TableBlock{{{0}, {1}, {2}, {3}}}});
    std::vector<Mat> golden;
    for (const Mat& a : v) {
      for (const Mat& b : v) golden.push_back(outer(a, b));
    }
    out.push_back({"total_spin_basis", std::move(t), std::move(golden)});
  }
  {
    BipartitionTable t(4, std::nullopt, {TableBlock{{{0}}}, TableBlock{{{1, 2}}}, TableBlock{{{3}}}});
    std::vector<Mat> golden(3, Mat::Zero(4, 4));
    golden[0](0, 0) = 1.0;
    golden[1](1, 1) = golden[1](2, 2) = 1.0;
    golden[2](3, 3) = 1.0;
    out.push_back({"sz_measurement", std::move(t), std::move(golden)});
  }
  {
    BipartitionTable t = BipartitionTable::from_columns(4, {{0, 2}, {1, 3}});
    std::vector<Mat> golden;
    for (Index k = 0; k < 2; ++k) {
      for (Index l = 0; l < 2; ++l) {
        Mat e = Mat::Zero(2, 2);
        e(k, l) = 1.0;
        golden.push_back(kron(Mat::Identity(2, 2), e));
      }
    }
    out.push_back({"partial_trace", std::move(t), std::move(golden)});
  }
  {
    BipartitionTable t = BipartitionTable::from_columns(8, {{0, 4, 2, 1}, {7, 3, 5, 6}});
    Mat p0 = Mat::Zero(8, 8), p1 = Mat::Zero(8, 8), x3 = Mat::Zero(8, 8);
    for (Index i : {0, 4, 2, 1}) p0(i, i) = 1.0;
    for (Index i : {7, 3, 5, 6}) p1(i, i) = 1.0;
    for (Index i = 0; i < 8; ++i) x3(7 - i, i) = 1.0;
    // The columns are exchanged by the logical X = X (x) X (x) X.
    out.push_back({"repetition_code", std::move(t), {p0, p0 * x3, p1 * x3, p1}});
  }
  {
    const std::vector<Mat> v = {
        basis_vector(8, {{0, 1.0}}),
        basis_vector(8, {{1, r3}, {2, r3}, {4, r3}}),
        basis_vector(8, {{3, r3}, {5, r3}, {6, r3}}),
        basis_vector(8, {{7, 1.0}}),
        basis_vector(8, {{2, r2}, {4, -r2}}),
        basis_vector(8, {{3, r2}, {5, -r2}}),
        basis_vector(8, {{1, t23}, {2, -r6}, {4, -r6}}),
        basis_vector(8, {{3, r6}, {5, r6}, {6, -t23}}),
    };
    BipartitionTable t(8, columns_to_matrix(v),
                       {TableBlock{{{0, 1, 2, 3}}}, TableBlock{{{4, 5}, {6, 7}}}});
    // Spin-3/2 projector (J^2 - 3/4) / 3 is fixed independently of the basis.
    const std::vector<Mat> j = total_spin_operators(3);
    const Mat j2 = j[0] * j[0] + j[1] * j[1] + j[2] * j[2];
    std::vector<Mat> golden{(j2 - 0.75 * Mat::Identity(8, 8)) / 3.0};
    const auto half = golden_from_vectors({{{v[4], v[5]}, {v[6], v[7]}}});
    golden.insert(golden.end(), half.begin(), half.end());
    out.push_back({"rf_three_spins", std::move(t), std::move(golden)});
  }
  return out;
}

}  // namespace coarse
