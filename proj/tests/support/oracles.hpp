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

// Random instance generators and reference implementations that do not go
// through the library code paths they are used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "coarse/linalg.hpp"
#include "coarse/quantum_cg.hpp"
#include "coarse/stochastic.hpp"

namespace coarse::testing {

using Index = Eigen::Index;
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Complex gaussian(Rng& rng) {
  std::normal_distribution<double> n;
  const double re = n(rng);
  return {re, n(rng)};
}

inline Mat random_complex(Index rows, Index cols, Rng& rng) {
  Mat m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = gaussian(rng);
  }
  return m;
}

inline RealMat random_real(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> n;
  RealMat m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = n(rng);
  }
  return m;
}

inline Mat random_hermitian(Index d, Rng& rng) {
  const Mat a = random_complex(d, d, rng);
  return 0.5 * (a + a.adjoint());
}

inline Mat random_unitary(Index d, Rng& rng) {
  Eigen::HouseholderQR<Mat> qr(random_complex(d, d, rng));
  Mat q = qr.householderQ();
  // fix column phases so the distribution does not depend on the QR sign convention
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

inline Mat random_density(Index d, Rng& rng, Index rank = 0) {
  const Index r = rank > 0 ? rank : d;
  const Mat a = random_complex(d, r, rng);
  Mat rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline Mat pure_state(const CVec& v) {
  const CVec n = v / v.norm();
  return n * n.adjoint();
}

// --- Stochastic ------------------------------------------------------------------

inline Partition random_partition(std::size_t n, Rng& rng) {
  const std::size_t k = pick(rng, 1, n);
  std::vector<std::vector<std::size_t>> blocks(k);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < k; ++i) blocks[i].push_back(order[i]);
  for (std::size_t i = k; i < n; ++i) blocks[pick(rng, 0, k - 1)].push_back(order[i]);
  return Partition(n, blocks);
}

/// Off-diagonal rates uniform in [0, 1) with the given density.
inline RateMatrix random_rate_matrix(std::size_t n, Rng& rng, double density = 0.7) {
  RealMat r = RealMat::Zero(Index(n), Index(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i != j && uniform(rng) < density) r(Index(i), Index(j)) = uniform(rng);
    }
  }
  return RateMatrix::from_offdiagonal(r);
}

/// Rates whose total from each state of block k into block k' is the same
/// for every state of block k.
inline RateMatrix lumpable_rate_matrix(const Partition& p, Rng& rng) {
  const std::size_t n = p.n_states();
  RealMat r = RealMat::Zero(Index(n), Index(n));
  for (std::size_t k = 0; k < p.size(); ++k) {
    for (std::size_t kk = 0; kk < p.size(); ++kk) {
      const auto& target = p.block(kk);
      const double total = uniform(rng) < 0.25 ? 0.0 : uniform(rng, 0.1, 2.0);
      for (std::size_t i : p.block(k)) {
        std::vector<std::size_t> dest;
        for (std::size_t j : target) {
          if (j != i) dest.push_back(j);
        }
        if (dest.empty()) continue;
        std::vector<double> w(dest.size());
        for (double& x : w) x = uniform(rng, 0.05, 1.0);
        const double s = std::accumulate(w.begin(), w.end(), 0.0);
        // inside a block only the relative rates matter; any values work there
        const double scale = kk == k ? uniform(rng, 0.0, 2.0) : total;
        for (std::size_t m = 0; m < dest.size(); ++m) r(Index(dest[m]), Index(i)) = scale * w[m] / s;
      }
    }
  }
  return RateMatrix::from_offdiagonal(r);
}

/// Direct rate-sum test: every state of a block sends the same total rate
/// into every other block.
inline double rate_sum_spread(const RateMatrix& q, const Partition& p) {
  double worst = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    for (std::size_t kk = 0; kk < p.size(); ++kk) {
      double lo = INFINITY, hi = -INFINITY;
      for (std::size_t i : p.block(k)) {
        double s = 0.0;
        for (std::size_t j : p.block(kk)) s += q.matrix()(Index(j), Index(i));
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      worst = std::max(worst, hi - lo);
    }
  }
  return worst;
}

/// All set partitions of {0..n-1}, via restricted growth strings.
inline std::vector<Partition> all_partitions(std::size_t n) {
  std::vector<Partition> out;
  std::vector<std::size_t> a(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      std::vector<std::vector<std::size_t>> blocks(used);
      for (std::size_t s = 0; s < n; ++s) blocks[a[s]].push_back(s);
      out.emplace_back(n, blocks);
      return;
    }
    for (std::size_t b = 0; b <= used && b < n; ++b) {
      a[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  if (n > 0) rec(0, 0);
  return out;
}

// --- Matrix exponential by scaled Taylor series -------------------------------

template <class M>
M taylor_exp(const M& a, double t) {
  const double norm = (a * t).cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (std::ldexp(norm, -s) > 0.25) ++s;
  const M x = a * (t / std::ldexp(1.0, s));
  M term = M::Identity(a.rows(), a.cols());
  M sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * x / double(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

// --- Quantum ---------------------------------------------------------------------

inline std::vector<std::size_t> random_composition(std::size_t total, Rng& rng) {
  std::vector<std::size_t> parts;
  std::size_t left = total;
  while (left > 0) {
    const std::size_t h = pick(rng, 1, left);
    parts.push_back(h);
    left -= h;
  }
  std::sort(parts.rbegin(), parts.rend());
  return parts;
}

/// Random hybrid table on d states: 1-3 blocks, random column heights, an
/// optional random unitary basis.
inline BipartitionTable random_table(std::size_t d, Rng& rng, bool with_basis = true) {
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t nblocks = pick(rng, 1, std::min<std::size_t>(3, d));
  std::vector<std::size_t> sizes(nblocks, 1);
  for (std::size_t i = nblocks; i < d; ++i) ++sizes[pick(rng, 0, nblocks - 1)];
  std::vector<TableBlock> blocks;
  std::size_t pos = 0;
  for (std::size_t s : sizes) {
    TableBlock b;
    for (std::size_t h : random_composition(s, rng)) {
      b.columns.emplace_back(order.begin() + long(pos), order.begin() + long(pos + h));
      pos += h;
    }
    blocks.push_back(std::move(b));
  }
  std::optional<Mat> basis;
  if (with_basis && uniform(rng) < 0.5) basis = random_unitary(Index(d), rng);
  return BipartitionTable(d, basis, blocks);
}

/// Reduced state by summing matrix elements: |gamma_{i,k}><gamma_{j,l}| goes
/// to delta_ij |beta_k><beta_l| when both labels sit in the same block.
inline Mat elementwise_qcg(const BipartitionTable& t, const Mat& rho) {
  struct Label {
    std::size_t block, row, col;
  };
  std::vector<Label> label(t.dim());
  std::vector<std::size_t> offset;
  std::size_t off = 0;
  for (std::size_t q = 0; q < t.blocks().size(); ++q) {
    offset.push_back(off);
    const auto& cols = t.blocks()[q].columns;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      for (std::size_t i = 0; i < cols[k].size(); ++i) label[cols[k][i]] = {q, i, k};
    }
    off += cols.size();
  }
  const Mat b = t.basis_matrix();
  Mat out = Mat::Zero(Index(off), Index(off));
  for (std::size_t a = 0; a < t.dim(); ++a) {
    for (std::size_t c = 0; c < t.dim(); ++c) {
      if (label[a].block != label[c].block || label[a].row != label[c].row) continue;
      Complex e = 0.0;
      for (Index x = 0; x < b.rows(); ++x) {
        for (Index y = 0; y < b.rows(); ++y) e += std::conj(b(x, Index(a))) * rho(x, y) * b(y, Index(c));
      }
      out(Index(offset[label[a].block] + label[a].col), Index(offset[label[c].block] + label[c].col)) += e;
    }
  }
  return out;
}

/// The coarse-graining channel as an r^2 x d^2 matrix on column-major vectors.
inline Mat channel_matrix(const BipartitionTable& t) {
  const Index d = Index(t.dim());
  const Index r = Index(t.reduced_dim());
  Mat m(r * r, d * d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      Mat e = Mat::Zero(d, d);
      e(i, j) = 1.0;
      m.col(j * d + i) = vectorize(qcg_map(t, e));
    }
  }
  return m;
}

/// Hermitian H that commutes with the channel structure: a per-row potential
/// in each block plus, for rectangular blocks, a Hamiltonian on the columns.
inline Mat compatible_hamiltonian(const BipartitionTable& t, Rng& rng) {
  const Index d = Index(t.dim());
  Mat h = Mat::Zero(d, d);
  for (const auto& block : t.blocks()) {
    const auto& cols = block.columns;
    const std::size_t rows = cols.front().size();
    for (std::size_t i = 0; i < rows; ++i) {
      const double v = uniform(rng, -1.0, 1.0);
      for (const auto& c : cols) {
        if (c.size() > i) h(Index(c[i]), Index(c[i])) += v;
      }
    }
    const bool rectangular = std::all_of(cols.begin(), cols.end(), [&](const auto& c) { return c.size() == rows; });
    if (rectangular && cols.size() > 1) {
      const Mat x = random_hermitian(Index(cols.size()), rng);
      for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = 0; k < cols.size(); ++k) {
          for (std::size_t l = 0; l < cols.size(); ++l) h(Index(cols[k][i]), Index(cols[l][i])) += x(Index(k), Index(l));
        }
      }
    }
  }
  const Mat b = t.basis_matrix();
  const Mat out = b * h * b.adjoint();
  return 0.5 * (out + out.adjoint());
}

// --- Permutation groups ----------------------------------------------------------

inline std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// A permutation made of a few random disjoint transpositions and 3-cycles,
/// so generated groups stay small.
inline std::vector<std::size_t> small_order_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> order(n), g(n);
  std::iota(order.begin(), order.end(), 0);
  std::iota(g.begin(), g.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t i = 0;
  while (i + 1 < n && uniform(rng) < 0.7) {
    if (i + 2 < n && uniform(rng) < 0.3) {
      g[order[i]] = order[i + 1];
      g[order[i + 1]] = order[i + 2];
      g[order[i + 2]] = order[i];
      i += 3;
    } else {
      std::swap(g[order[i]], g[order[i + 1]]);
      i += 2;
    }
  }
  return g;
}

}  // namespace coarse::testing
