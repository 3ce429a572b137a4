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

#include "coarse/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "coarse/error.hpp"

namespace coarse {

namespace {

using Index = Eigen::Index;

Index ix(std::size_t i) { return static_cast<Index>(i); }

constexpr double kClusterGap = 1e-7;
constexpr int kSplitRetries = 5;

Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  return {re, n(rng)};
}

Mat random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  Mat m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = random_complex(rng);
  }
  return m;
}

// Linear functional used to bucket group elements during closure.
class Signature {
 public:
  explicit Signature(Index d) : re_(d, d), im_(d, d) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (Index j = 0; j < d; ++j) {
      for (Index i = 0; i < d; ++i) {
        re_(i, j) = u(rng);
        im_(i, j) = u(rng);
      }
    }
    window_ = kClosureDedupe * std::sqrt(re_.squaredNorm() + im_.squaredNorm());
  }
  double operator()(const Mat& m) const {
    return (re_.cwiseProduct(m.real())).sum() + (im_.cwiseProduct(m.imag())).sum();
  }
  double window() const { return window_; }

 private:
  RealMat re_, im_;
  double window_ = 0.0;
};

std::size_t first_significant_row(const Mat& w) {
  const Eigen::VectorXd weight = w.rowwise().squaredNorm();
  for (Index i = 0; i < weight.size(); ++i) {
    if (weight(i) > 1e-8) return static_cast<std::size_t>(i);
  }
  return static_cast<std::size_t>(weight.size());
}

void split_invariant(const std::vector<Mat>& gens, const Mat& w, std::mt19937_64& rng,
                     std::vector<Mat>& out) {
  const Index m = w.cols();
  if (m == 1) {
    out.push_back(w);
    return;
  }
  std::vector<Mat> restricted;
  restricted.reserve(gens.size());
  for (const Mat& g : gens) restricted.push_back(w.adjoint() * g * w);
  const OperatorSubspace c = commutant_of(restricted, static_cast<std::size_t>(m));
  if (c.dimension() <= 1) {
    out.push_back(w);
    return;
  }
  for (int attempt = 0; attempt < kSplitRetries; ++attempt) {
    Mat r = Mat::Zero(m, m);
    for (const Mat& b : c.basis()) r += random_complex(rng) * b;
    r = 0.5 * (r + r.adjoint());
    const double nr = r.norm();
    if (nr == 0.0) continue;
    r /= nr;
    Eigen::SelfAdjointEigenSolver<Mat> es(r);
    const auto& ev = es.eigenvalues();
    std::vector<std::pair<Index, Index>> clusters;  // [begin, end)
    Index begin = 0;
    for (Index i = 1; i <= ev.size(); ++i) {
      if (i == ev.size() || ev(i) - ev(i - 1) > kClusterGap) {
        clusters.emplace_back(begin, i);
        begin = i;
      }
    }
    if (clusters.size() < 2) continue;
    for (const auto& [b, e] : clusters) {
      split_invariant(gens, w * es.eigenvectors().middleCols(b, e - b), rng, out);
    }
    return;
  }
  throw NumericalFailure("block_structure: " + std::to_string(kSplitRetries) +
                         " random commutant samples failed to split an invariant subspace of "
                         "dimension " + std::to_string(m) + " (commutant dimension " +
                         std::to_string(c.dimension()) + ")");
}

// |G|^-1 sum_g U_ref(g) X U_copy(g)^dagger restricted to the two subspaces.
Mat intertwiner(const std::vector<Mat>& elems, const Mat& w_ref, const Mat& w_copy, const Mat& x) {
  Mat t = Mat::Zero(w_ref.cols(), w_copy.cols());
  for (const Mat& g : elems) {
    t += (w_ref.adjoint() * g * w_ref) * x * (w_copy.adjoint() * g * w_copy).adjoint();
  }
  return t / static_cast<double>(elems.size());
}

}  // namespace

// --- UnitaryRep ------------------------------------------------------------------

UnitaryRep::UnitaryRep(std::size_t dim, std::vector<Mat> generators, double tol)
    : dim_(dim), generators_(std::move(generators)) {
  if (dim_ == 0) throw InvalidInput("UnitaryRep: dimension must be positive");
  const auto d = ix(dim_);
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const Mat& g = generators_[i];
    if (g.rows() != d || g.cols() != d) {
      throw InvalidInput("UnitaryRep: generator " + std::to_string(i) + " is not " +
                         std::to_string(dim_) + "x" + std::to_string(dim_));
    }
    require_finite(g, "UnitaryRep generator");
    const double err = (g.adjoint() * g - Mat::Identity(d, d)).norm();
    if (err > tol * std::max(1.0, static_cast<double>(dim_))) {
      throw InvalidInput("UnitaryRep: generator " + std::to_string(i) +
                         " is not unitary (deviation " + std::to_string(err) + ")");
    }
  }
}

UnitaryRep UnitaryRep::from_permutations(std::size_t dim,
                                         const std::vector<std::vector<std::size_t>>& perms) {
  std::vector<Mat> gens;
  for (const auto& p : perms) {
    if (p.size() != dim) throw InvalidInput("UnitaryRep: permutation length differs from dimension");
    std::vector<bool> hit(dim, false);
    Mat u = Mat::Zero(ix(dim), ix(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      if (p[i] >= dim || hit[p[i]]) throw InvalidInput("UnitaryRep: generator is not a permutation");
      hit[p[i]] = true;
      u(ix(p[i]), ix(i)) = 1.0;
    }
    gens.push_back(std::move(u));
  }
  return UnitaryRep(dim, std::move(gens));
}

UnitaryRep UnitaryRep::with_closure(std::size_t cap) const {
  UnitaryRep out = *this;
  out.closure_ = closure(*this, cap);
  return out;
}

std::vector<Mat> UnitaryRep::elements(std::size_t cap) const {
  if (closure_) return *closure_;
  return closure(*this, cap);
}

std::vector<Mat> closure(const UnitaryRep& rep, std::size_t cap) {
  const auto d = ix(rep.dim());
  const Signature sig(d);
  std::vector<Mat> elems{Mat::Identity(d, d)};
  std::multimap<double, std::size_t> index{{sig(elems[0]), 0}};
  auto known = [&](const Mat& m, double s) {
    const auto lo = index.lower_bound(s - sig.window());
    const auto hi = index.upper_bound(s + sig.window());
    for (auto it = lo; it != hi; ++it) {
      if ((elems[it->second] - m).norm() <= kClosureDedupe) return true;
    }
    return false;
  };
  for (std::size_t next = 0; next < elems.size(); ++next) {
    for (const Mat& g : rep.generators()) {
      Mat p = g * elems[next];
      const double s = sig(p);
      if (known(p, s)) continue;
      if (elems.size() >= cap) {
        throw NumericalFailure("closure: more than " + std::to_string(cap) +
                               " elements; the group is infinite or too large");
      }
      index.emplace(s, elems.size());
      elems.push_back(std::move(p));
    }
  }
  return elems;
}

Mat twirl(const Mat& o, std::span<const Mat> elements) {
  if (elements.empty()) throw InvalidInput("twirl: empty group");
  const Index d = elements.front().rows();
  if (o.rows() != d || o.cols() != d) throw InvalidInput("twirl: operator dimension mismatch");
  Mat acc = Mat::Zero(d, d);
  for (const Mat& u : elements) acc += u * o * u.adjoint();
  return acc / static_cast<double>(elements.size());
}

Mat twirl(const Mat& o, const UnitaryRep& rep) {
  const std::vector<Mat> elems = rep.elements();
  return twirl(o, std::span<const Mat>(elems));
}

// --- Commutants ----------------------------------------------------------------

OperatorSubspace commutant_of(std::span<const Mat> ops, std::size_t dim) {
  const auto d = ix(dim);
  const Index d2 = d * d;
  std::vector<const Mat*> active;
  for (const Mat& a : ops) {
    if (a.rows() != d || a.cols() != d) throw InvalidInput("commutant: operator dimension mismatch");
    if (a.norm() > 0.0) active.push_back(&a);
  }
  std::vector<Mat> basis;
  if (active.empty()) {
    for (Index j = 0; j < d; ++j) {
      for (Index i = 0; i < d; ++i) {
        Mat e = Mat::Zero(d, d);
        e(i, j) = 1.0;
        basis.push_back(std::move(e));
      }
    }
    return OperatorSubspace(dim, std::move(basis));
  }
  const Mat id = Mat::Identity(d, d);
  Mat stacked(d2 * ix(active.size()), d2);
  double scale = 0.0;
  for (std::size_t k = 0; k < active.size(); ++k) {
    const Mat& a = *active[k];
    scale = std::max(scale, a.norm());
    // vec(AB - BA) = (I (x) A - A^T (x) I) vec(B)
    stacked.middleRows(ix(k) * d2, d2) = kron(id, a) - kron(a.transpose(), id);
  }
  for (const CVec& v : nullspace(stacked, kRankThreshold, scale)) basis.push_back(unvectorize(v, d, d));
  return OperatorSubspace(dim, std::move(basis));
}

OperatorSubspace commutant(const UnitaryRep& rep) {
  return commutant_of(rep.generators(), rep.dim());
}

OperatorSubspace bicommutant(const UnitaryRep& rep) {
  const OperatorSubspace c = commutant(rep);
  return commutant_of(c.basis(), rep.dim());
}

// --- Compatibility ---------------------------------------------------------------

SymmetryCheck check_symmetrization_compatibility(const Mat& h, const UnitaryRep& rep, double tol,
                                                 std::size_t closure_limit) {
  const auto d = ix(rep.dim());
  if (h.rows() != d || h.cols() != d) {
    throw InvalidInput("check_symmetrization_compatibility: Hamiltonian is not " +
                       std::to_string(d) + "x" + std::to_string(d));
  }
  require_finite(h, "Hamiltonian");
  if (!is_hermitian(h, tol)) throw InvalidInput("check_symmetrization_compatibility: Hamiltonian is not Hermitian");
  const OperatorSubspace bi = bicommutant(rep);
  const double scale = std::max(1.0, h.norm());
  auto residual_of = [&](const Mat& u) {
    return project_to_span(commutator(u, h), bi).residual_norm / scale;
  };
  SymmetryCheck out;
  for (const Mat& g : rep.generators()) {
    out.generator_residuals.push_back(residual_of(g));
    out.residual = std::max(out.residual, out.generator_residuals.back());
  }
  try {
    const std::vector<Mat> elems = rep.elements(closure_limit + 1);
    out.group_order = elems.size();
    if (elems.size() <= closure_limit) {
      double worst = 0.0;
      for (const Mat& g : elems) worst = std::max(worst, residual_of(g));
      out.closure_residual = worst;
      out.residual = std::max(out.residual, worst);
    }
  } catch (const NumericalFailure&) {
    // group too large to enumerate; generators only
  }
  out.compatible = out.residual <= tol;
  return out;
}

HamiltonianSplit split_hamiltonian(const Mat& h, const UnitaryRep& rep, double tol) {
  const SymmetryCheck check = check_symmetrization_compatibility(h, rep, tol);
  if (!check.compatible) {
    throw IncompatibleReduction("split_hamiltonian: Hamiltonian is not compatible with the group",
                                check.residual);
  }
  HamiltonianSplit s;
  s.b = twirl(h, rep);
  s.a = h - s.b;
  const double scale = std::max(1.0, h.norm());
  s.a_residual = project_to_span(s.a, bicommutant(rep)).residual_norm / scale;
  for (const Mat& g : rep.generators()) {
    s.b_residual = std::max(s.b_residual, commutator(g, s.b).norm() / scale);
  }
  if (s.a_residual > tol || s.b_residual > tol) {
    throw NumericalFailure("split_hamiltonian: parts leave their algebras (A " +
                           std::to_string(s.a_residual) + ", B " + std::to_string(s.b_residual) + ")");
  }
  return s;
}

// --- Block structure -------------------------------------------------------------

Mat BlockStructure::basis() const {
  Mat b(ix(dim), ix(dim));
  Index col = 0;
  for (const Sector& s : sectors) {
    b.middleCols(col, s.isometry.cols()) = s.isometry;
    col += s.isometry.cols();
  }
  return b;
}

BlockStructure block_structure(const UnitaryRep& rep, std::uint64_t seed, double tol) {
  const auto d = ix(rep.dim());
  std::mt19937_64 rng(seed);
  std::vector<Mat> irreducible;
  split_invariant(rep.generators(), Mat::Identity(d, d), rng, irreducible);

  const std::vector<Mat> elems = rep.elements();
  struct Class {
    Mat ref;
    std::vector<Mat> copies;
  };
  std::vector<Class> classes;
  for (const Mat& w : irreducible) {
    bool placed = false;
    for (Class& c : classes) {
      if (c.ref.cols() != w.cols()) continue;
      const Index n = w.cols();
      for (int attempt = 0; attempt < 2 && !placed; ++attempt) {
        const Mat x = random_matrix(n, n, rng);
        const Mat t = intertwiner(elems, c.ref, w, x);
        const double tn = t.norm();
        if (tn <= 1e-6 * x.norm()) continue;
        const Mat tu = t * (std::sqrt(static_cast<double>(n)) / tn);
        const double dev = (tu.adjoint() * tu - Mat::Identity(n, n)).norm();
        if (dev > 1e-6) {
          throw NumericalFailure("block_structure: intertwiner is not unitary (deviation " +
                                 std::to_string(dev) + ")");
        }
        c.copies.push_back(w * tu.adjoint());
        placed = true;
      }
      if (placed) break;
    }
    if (!placed) classes.push_back({w, {w}});
  }

  for (Class& c : classes) {
    std::stable_sort(c.copies.begin(), c.copies.end(), [](const Mat& a, const Mat& b) {
      return first_significant_row(a) < first_significant_row(b);
    });
  }
  auto sector_key = [](const Class& c) {
    std::size_t first = std::numeric_limits<std::size_t>::max();
    for (const Mat& w : c.copies) first = std::min(first, first_significant_row(w));
    return std::make_tuple(c.ref.cols(), -static_cast<long>(c.copies.size()), first);
  };
  std::stable_sort(classes.begin(), classes.end(),
                   [&](const Class& a, const Class& b) { return sector_key(a) < sector_key(b); });

  BlockStructure bs;
  bs.dim = rep.dim();
  for (const Class& c : classes) {
    Sector s;
    s.irrep_dim = static_cast<std::size_t>(c.ref.cols());
    s.multiplicity = c.copies.size();
    s.isometry.resize(d, ix(s.irrep_dim * s.multiplicity));
    for (std::size_t k = 0; k < c.copies.size(); ++k) {
      s.isometry.middleCols(ix(k * s.irrep_dim), ix(s.irrep_dim)) = c.copies[k];
    }
    bs.sectors.push_back(std::move(s));
  }

  const Mat b = bs.basis();
  double worst = (b.adjoint() * b - Mat::Identity(d, d)).norm();
  for (const Mat& g : rep.generators()) {
    const Mat m = b.adjoint() * g * b;
    Mat expected = Mat::Zero(d, d);
    Index off = 0;
    for (const Sector& s : bs.sectors) {
      const auto n = ix(s.irrep_dim);
      const Mat irrep = m.block(off, off, n, n);
      for (std::size_t k = 0; k < s.multiplicity; ++k) {
        expected.block(off + ix(k) * n, off + ix(k) * n, n, n) = irrep;
      }
      off += n * ix(s.multiplicity);
    }
    worst = std::max(worst, (m - expected).norm());
  }
  bs.residual = worst;
  if (worst > tol * std::max(1.0, static_cast<double>(d))) {
    throw NumericalFailure("block_structure: decomposition residual " + std::to_string(worst) +
                           " exceeds tolerance");
  }
  return bs;
}

BipartitionTable symmetrization_table(const BlockStructure& bs) {
  std::vector<TableBlock> blocks;
  std::size_t off = 0;
  for (const Sector& s : bs.sectors) {
    TableBlock tb;
    for (std::size_t k = 0; k < s.multiplicity; ++k) {
      std::vector<std::size_t> col(s.irrep_dim);
      std::iota(col.begin(), col.end(), off + k * s.irrep_dim);
      tb.columns.push_back(std::move(col));
    }
    blocks.push_back(std::move(tb));
    off += s.irrep_dim * s.multiplicity;
  }
  return BipartitionTable(bs.dim, bs.basis(), std::move(blocks), 1e-8);
}

// --- Lie condition -------------------------------------------------------------

LieCheck lie_sufficient_check(const Mat& h, const std::vector<Mat>& lie_generators,
                              std::size_t max_algebra_dim, double tol) {
  require_square(h, "lie_sufficient_check");
  require_finite(h, "lie_sufficient_check");
  const Index d = h.rows();
  const std::size_t cap = max_algebra_dim == 0 ? static_cast<std::size_t>(d * d) : max_algebra_dim;
  for (const Mat& l : lie_generators) {
    if (l.rows() != d || l.cols() != d) throw InvalidInput("lie_sufficient_check: generator dimension mismatch");
    if (!is_hermitian(l, tol)) throw InvalidInput("lie_sufficient_check: generator is not Hermitian");
  }
  // Grow span{words in L} by left multiplication until it stabilizes.
  std::vector<Mat> seeds{Mat::Identity(d, d)};
  seeds.insert(seeds.end(), lie_generators.begin(), lie_generators.end());
  std::vector<Mat> basis = span_orthonormalize(seeds).basis();
  for (std::size_t next = 0; next < basis.size(); ++next) {
    for (const Mat& l : lie_generators) {
      Mat r = l * basis[next];
      const double rn0 = r.norm();
      for (int pass = 0; pass < 2; ++pass) {
        for (const Mat& b : basis) r -= hs_inner(b, r) * b;
      }
      const double rn = r.norm();
      if (rn <= 1e-10 * std::max(1.0, rn0)) continue;
      basis.push_back(r / rn);
      if (basis.size() > cap) {
        throw NumericalFailure("lie_sufficient_check: algebra exceeds " + std::to_string(cap) +
                               " dimensions");
      }
    }
  }
  const OperatorSubspace alg(static_cast<std::size_t>(d), basis);
  LieCheck out;
  out.algebra_dim = alg.dimension();
  for (const Mat& l : lie_generators) {
    const double scale = std::max(1.0, l.norm() * h.norm());
    out.residual = std::max(out.residual, project_to_span(commutator(l, h), alg).residual_norm / scale);
  }
  out.sufficient = out.residual <= tol;
  return out;
}

}  // namespace coarse
