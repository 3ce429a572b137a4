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

#include "coarse/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "coarse/error.hpp"

namespace coarse {

namespace {

double scale_of(const RateMatrix& q) { return std::max(1.0, q.matrix().norm()); }

void require_same_size(const RateMatrix& q, const Partition& p, const char* what) {
  if (q.n() != p.n_states()) {
    throw InvalidInput(std::string(what) + ": rate matrix has " + std::to_string(q.n()) +
                       " states, partition has " + std::to_string(p.n_states()));
  }
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// r(i -> block k) for all states i and blocks k: R = M Q, shape |B| x n.
RealMat block_rates(const RateMatrix& q, const Partition& p) {
  return cg_matrix(p) * q.matrix();
}

}  // namespace

// --- Partition ---------------------------------------------------------------

Partition::Partition(std::size_t n_states, std::vector<std::vector<std::size_t>> blocks)
    : n_states_(n_states), blocks_(std::move(blocks)), owner_(n_states, n_states) {
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    auto& b = blocks_[k];
    if (b.empty()) throw InvalidInput("Partition: block " + std::to_string(k) + " is empty");
    std::sort(b.begin(), b.end());
    for (std::size_t i : b) {
      if (i >= n_states_) {
        throw InvalidInput("Partition: index " + std::to_string(i) + " out of range");
      }
      if (owner_[i] != n_states_) {
        throw InvalidInput("Partition: index " + std::to_string(i) + " appears twice");
      }
      owner_[i] = k;
    }
  }
  for (std::size_t i = 0; i < n_states_; ++i) {
    if (owner_[i] == n_states_) {
      throw InvalidInput("Partition: index " + std::to_string(i) + " is not covered");
    }
  }
}

Partition Partition::identity(std::size_t n) {
  std::vector<std::vector<std::size_t>> blocks(n);
  for (std::size_t i = 0; i < n; ++i) blocks[i] = {i};
  return Partition(n, std::move(blocks));
}

Partition Partition::single_block(std::size_t n) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  if (n == 0) return Partition(0, {});
  return Partition(n, {std::move(all)});
}

Partition Partition::canonical() const {
  auto blocks = blocks_;
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return Partition(n_states_, std::move(blocks));
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.n_states() != n_states_) return false;
  for (const auto& b : blocks_) {
    const std::size_t home = coarser.block_of(b.front());
    for (std::size_t i : b) {
      if (coarser.block_of(i) != home) return false;
    }
  }
  return true;
}

// --- RateMatrix --------------------------------------------------------------

RateMatrix::RateMatrix(RealMat q, const Tolerance& tol) : q_(std::move(q)) {
  if (q_.rows() != q_.cols()) throw InvalidInput("RateMatrix: matrix is not square");
  require_finite(q_, "RateMatrix");
  const Eigen::Index n = q_.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    double abs_sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      abs_sum += std::abs(q_(i, j));
      if (i != j && q_(i, j) < -tol.abs) {
        throw InvalidInput("RateMatrix: negative off-diagonal rate at (" + std::to_string(i) +
                           ", " + std::to_string(j) + ")");
      }
    }
    const double col = q_.col(j).sum();
    if (std::abs(col) > tol.abs * std::max(1.0, abs_sum)) {
      throw InvalidInput("RateMatrix: column " + std::to_string(j) + " sums to " +
                         std::to_string(col) + ", expected 0");
    }
  }
}

RateMatrix RateMatrix::from_complex(const Mat& q, const Tolerance& tol) {
  require_finite(q, "RateMatrix");
  if (q.imag().cwiseAbs().maxCoeff() > tol.abs) {
    throw InvalidInput("RateMatrix: entries must be real");
  }
  return RateMatrix(q.real(), tol);
}

RateMatrix RateMatrix::from_offdiagonal(RealMat rates) {
  if (rates.rows() != rates.cols()) throw InvalidInput("RateMatrix: matrix is not square");
  for (Eigen::Index j = 0; j < rates.cols(); ++j) {
    rates(j, j) = 0.0;
    rates(j, j) = -rates.col(j).sum();
  }
  return RateMatrix(std::move(rates));
}

bool RateMatrix::is_symmetric(double tol) const {
  return (q_ - q_.transpose()).norm() <= tol * std::max(1.0, q_.norm());
}

void PermRep::validate() const {
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const auto& perm = generators[g];
    if (perm.size() != n_states) {
      throw InvalidInput("PermRep: generator " + std::to_string(g) + " has length " +
                         std::to_string(perm.size()) + ", expected " + std::to_string(n_states));
    }
    std::vector<bool> seen(n_states, false);
    for (std::size_t v : perm) {
      if (v >= n_states || seen[v]) {
        throw InvalidInput("PermRep: generator " + std::to_string(g) + " is not a bijection");
      }
      seen[v] = true;
    }
  }
}

// --- CG matrices ---------------------------------------------------------------

RealMat cg_matrix(const Partition& p) {
  RealMat m = RealMat::Zero(static_cast<Eigen::Index>(p.size()),
                            static_cast<Eigen::Index>(p.n_states()));
  for (std::size_t k = 0; k < p.size(); ++k) {
    for (std::size_t i : p.block(k)) m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = 1.0;
  }
  return m;
}

RealMat cg_pseudoinverse(const Partition& p) {
  RealMat m = RealMat::Zero(static_cast<Eigen::Index>(p.n_states()),
                            static_cast<Eigen::Index>(p.size()));
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double w = 1.0 / static_cast<double>(p.block(k).size());
    for (std::size_t i : p.block(k)) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = w;
  }
  return m;
}

RealMat cg_projection(const Partition& p) {
  const auto n = static_cast<Eigen::Index>(p.n_states());
  RealMat out = RealMat::Zero(n, n);
  for (const auto& b : p.blocks()) {
    const double w = 1.0 / static_cast<double>(b.size());
    for (std::size_t i : b) {
      for (std::size_t j : b) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w;
    }
  }
  return out;
}

CheckResult check_stochastic_compatibility(const RateMatrix& q, const Partition& p,
                                           const Tolerance& tol) {
  require_same_size(q, p, "check_stochastic_compatibility");
  const RealMat proj = cg_projection(p);
  const RealMat pq = proj * q.matrix();
  const double residual = (pq - pq * proj).norm() / scale_of(q);
  return {residual <= tol.rel, residual};
}

ReducedRates reduced_rate_matrix(const RateMatrix& q, const Partition& p, bool force,
                                 const Tolerance& tol) {
  const CheckResult check = check_stochastic_compatibility(q, p, tol);
  ReducedRates out;
  out.check = check;
  if (!check.compatible) {
    if (!force) {
      throw IncompatibleReduction(
          "reduced_rate_matrix: partition is not compatible with the dynamics (residual " +
              std::to_string(check.residual) + ")",
          check.residual);
    }
    out.warnings.push_back("partition is not compatible (residual " + std::to_string(check.residual) +
                           "); M Q M+ does not generate the coarse-grained dynamics");
  }
  RealMat reduced = cg_matrix(p) * q.matrix() * cg_pseudoinverse(p);
  // column sums of M Q M+ vanish identically; clean the rounding
  for (Eigen::Index j = 0; j < reduced.cols(); ++j) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < reduced.rows(); ++i) off += i == j ? 0.0 : reduced(i, j);
    if (std::abs(reduced(j, j) + off) <= 1e-12 * std::max(1.0, std::abs(off))) reduced(j, j) = -off;
  }
  out.rates = RateMatrix(std::move(reduced), tol);
  return out;
}

const RateUniformityEntry& RateUniformityReport::at(std::size_t from, std::size_t to) const {
  for (const auto& e : entries) {
    if (e.from_block == from && e.to_block == to) return e;
  }
  throw InvalidInput("RateUniformityReport: no entry for the requested block pair");
}

RateUniformityReport rate_uniformity_report(const RateMatrix& q, const Partition& p,
                                            const Tolerance& tol) {
  require_same_size(q, p, "rate_uniformity_report");
  const RealMat r = block_rates(q, p);
  RateUniformityReport report;
  double sq = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto& from = p.block(k);
    for (std::size_t kp = 0; kp < p.size(); ++kp) {
      RateUniformityEntry e;
      e.from_block = k;
      e.to_block = kp;
      for (std::size_t i : from) e.rates.push_back(r(static_cast<Eigen::Index>(kp), static_cast<Eigen::Index>(i)));
      const auto [lo, hi] = std::minmax_element(e.rates.begin(), e.rates.end());
      e.min = *lo;
      e.max = *hi;
      const double mean = std::accumulate(e.rates.begin(), e.rates.end(), 0.0) /
                          static_cast<double>(e.rates.size());
      for (double v : e.rates) sq += (v - mean) * (v - mean) / static_cast<double>(p.block(kp).size());
      report.max_spread = std::max(report.max_spread, e.spread());
      report.entries.push_back(std::move(e));
    }
  }
  report.residual = std::sqrt(sq) / scale_of(q);
  report.uniform = report.max_spread <= tol.bound(q.matrix().norm());
  return report;
}

Partition coarsest_equitable_refinement(const RateMatrix& q, const Partition& seed,
                                        double signature_tol) {
  require_same_size(q, seed, "coarsest_equitable_refinement");
  Partition current = seed.canonical();
  for (std::size_t round = 0; round <= q.n(); ++round) {
    const RealMat r = block_rates(q, current);
    std::vector<std::vector<std::size_t>> next;
    for (const auto& block : current.blocks()) {
      // greedy grouping against each group's first member
      std::vector<std::vector<std::size_t>> groups;
      for (std::size_t i : block) {
        bool placed = false;
        for (auto& g : groups) {
          const auto a = static_cast<Eigen::Index>(g.front());
          const auto b = static_cast<Eigen::Index>(i);
          if ((r.col(a) - r.col(b)).cwiseAbs().maxCoeff() <= signature_tol) {
            g.push_back(i);
            placed = true;
            break;
          }
        }
        if (!placed) groups.push_back({i});
      }
      for (auto& g : groups) next.push_back(std::move(g));
    }
    Partition refined = Partition(q.n(), std::move(next)).canonical();
    if (refined.size() == current.size()) return refined;
    current = std::move(refined);
  }
  return current;
}

std::vector<RealVec> evolve_stochastic(const RateMatrix& q, const RealVec& p0,
                                       const std::vector<double>& times) {
  if (static_cast<std::size_t>(p0.size()) != q.n()) {
    throw InvalidInput("evolve_stochastic: initial distribution has wrong length");
  }
  if (!p0.allFinite() || p0.minCoeff() < -1e-12 || std::abs(p0.sum() - 1.0) > 1e-9) {
    throw InvalidInput("evolve_stochastic: initial vector is not a probability distribution");
  }
  std::vector<RealVec> out;
  out.reserve(times.size());
  for (double t : times) {
    if (t < 0.0) throw InvalidInput("evolve_stochastic: negative time");
    out.emplace_back(matrix_exp(q.matrix(), t) * p0);
  }
  return out;
}

Partition orbit_partition(const PermRep& rep) {
  rep.validate();
  UnionFind uf(rep.n_states);
  for (const auto& g : rep.generators) {
    for (std::size_t i = 0; i < rep.n_states; ++i) uf.unite(i, g[i]);
  }
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::size_t> slot(rep.n_states, rep.n_states);
  for (std::size_t i = 0; i < rep.n_states; ++i) {
    const std::size_t root = uf.find(i);
    if (slot[root] == rep.n_states) {
      slot[root] = blocks.size();
      blocks.emplace_back();
    }
    blocks[slot[root]].push_back(i);
  }
  return Partition(rep.n_states, std::move(blocks));
}

std::vector<std::vector<std::size_t>> permutation_closure(const PermRep& rep, std::size_t cap) {
  rep.validate();
  std::vector<std::size_t> id(rep.n_states);
  std::iota(id.begin(), id.end(), 0);
  std::set<std::vector<std::size_t>> seen{id};
  std::vector<std::vector<std::size_t>> elements{id};
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const auto& g : rep.generators) {
      std::vector<std::size_t> prod(rep.n_states);
      const auto& h = elements[head];
      for (std::size_t i = 0; i < rep.n_states; ++i) prod[i] = g[h[i]];
      if (seen.insert(prod).second) {
        if (elements.size() >= cap) {
          throw NumericalFailure("permutation_closure: group order exceeds cap " + std::to_string(cap));
        }
        elements.push_back(std::move(prod));
      }
    }
  }
  return elements;
}

RealMat permutation_matrix(const std::vector<std::size_t>& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  RealMat d = RealMat::Zero(n, n);
  for (std::size_t i = 0; i < g.size(); ++i) d(static_cast<Eigen::Index>(g[i]), static_cast<Eigen::Index>(i)) = 1.0;
  return d;
}

RealMat symmetrizer(const PermRep& rep, std::size_t cap) {
  const auto elements = permutation_closure(rep, cap);
  const auto n = static_cast<Eigen::Index>(rep.n_states);
  RealMat sum = RealMat::Zero(n, n);
  for (const auto& g : elements) {
    for (std::size_t i = 0; i < g.size(); ++i) sum(static_cast<Eigen::Index>(g[i]), static_cast<Eigen::Index>(i)) += 1.0;
  }
  return sum / static_cast<double>(elements.size());
}

GroupCheck check_group_compatibility(const RateMatrix& q, const PermRep& rep, const Tolerance& tol,
                                     std::size_t cap) {
  if (q.n() != rep.n_states) throw InvalidInput("check_group_compatibility: dimension mismatch");
  const auto elements = permutation_closure(rep, cap);
  const RealMat& qm = q.matrix();
  const auto n = static_cast<Eigen::Index>(q.n());
  RealMat comm_sum = RealMat::Zero(n, n);
  RealMat dsum = RealMat::Zero(n, n);
  for (const auto& g : elements) {
    const RealMat d = permutation_matrix(g);
    comm_sum += d * qm - qm * d;
    dsum += d;
  }
  const double order = static_cast<double>(elements.size());
  GroupCheck out;
  out.group_order = elements.size();
  out.symmetric_shortcut_used = q.is_symmetric();
  const RealMat tested = out.symmetric_shortcut_used ? comm_sum : RealMat((dsum / order) * comm_sum);
  out.residual = tested.norm() / order / scale_of(q);
  out.compatible = out.residual <= tol.rel;
  return out;
}

}  // namespace coarse
