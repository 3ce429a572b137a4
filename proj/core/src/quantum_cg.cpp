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

#include "coarse/quantum_cg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "coarse/error.hpp"

namespace coarse {

namespace {

using Index = Eigen::Index;

Index ix(std::size_t i) { return static_cast<Index>(i); }

// Runs fn(q, k, l, overlap, column_k, column_l) over every column pair.
template <class Fn>
void for_each_pair(const BipartitionTable& table, Fn&& fn) {
  const auto& blocks = table.blocks();
  for (std::size_t q = 0; q < blocks.size(); ++q) {
    const auto& cols = blocks[q].columns;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      for (std::size_t l = 0; l < cols.size(); ++l) {
        fn(q, k, l, std::min(cols[k].size(), cols[l].size()), cols[k], cols[l]);
      }
    }
  }
}

Mat to_table_basis(const BipartitionTable& table, const Mat& o) {
  if (!table.basis()) return o;
  const Mat& b = *table.basis();
  return b.adjoint() * o * b;
}

Mat to_ambient(const BipartitionTable& table, const Mat& o) {
  if (!table.basis()) return o;
  const Mat& b = *table.basis();
  return b * o * b.adjoint();
}

void require_operator(const BipartitionTable& table, const Mat& o, const char* what) {
  const auto d = ix(table.dim());
  if (o.rows() != d || o.cols() != d) {
    throw InvalidInput(std::string(what) + ": operator must be " + std::to_string(d) + "x" +
                       std::to_string(d));
  }
  require_finite(o, what);
}

void require_reduced(const BipartitionTable& table, const Mat& o, const char* what) {
  const auto r = ix(table.reduced_dim());
  if (o.rows() != r || o.cols() != r) {
    throw InvalidInput(std::string(what) + ": reduced operator must be " + std::to_string(r) + "x" +
                       std::to_string(r));
  }
  require_finite(o, what);
}

}  // namespace

// --- BipartitionTable ----------------------------------------------------------

BipartitionTable::BipartitionTable(std::size_t dim, std::optional<Mat> basis,
                                   std::vector<TableBlock> blocks, double tol)
    : dim_(dim), basis_(std::move(basis)), blocks_(std::move(blocks)) {
  if (basis_) {
    const auto d = ix(dim_);
    if (basis_->rows() != d || basis_->cols() != d) {
      throw InvalidInput("BipartitionTable: basis must be " + std::to_string(dim_) + "x" +
                         std::to_string(dim_));
    }
    require_finite(*basis_, "BipartitionTable basis");
    const double err = (basis_->adjoint() * *basis_ - Mat::Identity(d, d)).norm();
    if (err > tol * std::max(1.0, static_cast<double>(dim_))) {
      throw InvalidInput("BipartitionTable: basis columns are not orthonormal (deviation " +
                         std::to_string(err) + ")");
    }
  }
  std::vector<int> seen(dim_, 0);
  for (std::size_t q = 0; q < blocks_.size(); ++q) {
    auto& cols = blocks_[q].columns;
    if (cols.empty()) throw InvalidInput("BipartitionTable: block " + std::to_string(q) + " has no columns");
    for (const auto& c : cols) {
      if (c.empty()) throw InvalidInput("BipartitionTable: empty column in block " + std::to_string(q));
      for (std::size_t idx : c) {
        if (idx >= dim_) throw InvalidInput("BipartitionTable: index " + std::to_string(idx) + " out of range");
        if (seen[idx]++ != 0) throw InvalidInput("BipartitionTable: index " + std::to_string(idx) + " appears twice");
      }
    }
    const bool sorted = std::is_sorted(cols.begin(), cols.end(), [](const auto& a, const auto& b) {
      return a.size() > b.size();
    });
    if (!sorted) {
      std::stable_sort(cols.begin(), cols.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
      warnings_.push_back("block " + std::to_string(q) +
                          ": columns reordered by non-increasing height");
    }
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    if (seen[i] == 0) throw InvalidInput("BipartitionTable: index " + std::to_string(i) + " is missing");
  }
  for (const auto& b : blocks_) {
    offsets_.push_back(reduced_dim_);
    reduced_dim_ += b.width();
  }
}

BipartitionTable BipartitionTable::from_columns(std::size_t dim,
                                                std::vector<std::vector<std::size_t>> columns) {
  return BipartitionTable(dim, std::nullopt, {TableBlock{std::move(columns)}});
}

std::size_t BipartitionTable::reduced_index(std::size_t q, std::size_t k) const {
  if (q >= blocks_.size() || k >= blocks_[q].width()) {
    throw InvalidInput("BipartitionTable: column index out of range");
  }
  return offsets_[q] + k;
}

CVec BipartitionTable::basis_vector(std::size_t idx) const {
  if (basis_) return basis_->col(ix(idx));
  CVec e = CVec::Zero(ix(dim_));
  e(ix(idx)) = 1.0;
  return e;
}

Mat BipartitionTable::basis_matrix() const {
  return basis_ ? *basis_ : Mat(Mat::Identity(ix(dim_), ix(dim_)));
}

// --- Bipartition operators -----------------------------------------------------

BipartitionOperators::BipartitionOperators(const BipartitionTable& table)
    : reduced_dim_(table.reduced_dim()) {
  const auto d = ix(table.dim());
  for (const auto& b : table.blocks()) {
    block_start_.push_back(entries_.size());
    block_width_.push_back(b.width());
    entries_.reserve(entries_.size() + b.width() * b.width());
    for (std::size_t k = 0; k < b.width(); ++k) {
      for (std::size_t l = 0; l < b.width(); ++l) {
        entries_.push_back({block_start_.size() - 1, k, l, 0, Mat()});
      }
    }
  }
  for (Entry& e : entries_) {
    const auto& cols = table.blocks()[e.block].columns;
    e.overlap = std::min(cols[e.k].size(), cols[e.l].size());
    Mat s = Mat::Zero(d, d);
    for (std::size_t i = 0; i < e.overlap; ++i) s(ix(cols[e.k][i]), ix(cols[e.l][i])) = 1.0;
    e.op = to_ambient(table, s);
  }
}

const Mat& BipartitionOperators::at(std::size_t block, std::size_t k, std::size_t l) const {
  if (block >= block_start_.size() || k >= block_width_[block] || l >= block_width_[block]) {
    throw InvalidInput("BipartitionOperators: index out of range");
  }
  return entries_[block_start_[block] + k * block_width_[block] + l].op;
}

std::vector<Mat> BipartitionOperators::operators() const {
  std::vector<Mat> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.op);
  return out;
}

BipartitionOperators bipartition_operators(const BipartitionTable& table) {
  return BipartitionOperators(table);
}

// --- Channel -------------------------------------------------------------------

std::string StateValidation::describe() const {
  std::ostringstream os;
  os << "hermiticity residual " << hermiticity << ", trace error " << trace_error
     << ", smallest eigenvalue " << min_eigenvalue;
  return os.str();
}

StateValidation validate_density_matrix(const Mat& rho, double tol) {
  StateValidation v;
  if (rho.rows() != rho.cols() || !rho.allFinite()) {
    v.hermiticity = v.trace_error = std::numeric_limits<double>::infinity();
    return v;
  }
  v.hermiticity = (rho - rho.adjoint()).norm();
  v.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  const Mat herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> eig(herm, Eigen::EigenvaluesOnly);
  v.min_eigenvalue = rho.size() ? eig.eigenvalues().minCoeff() : 0.0;
  v.valid = v.hermiticity <= tol && v.trace_error <= tol && v.min_eigenvalue >= -tol;
  return v;
}

Mat qcg_map(const BipartitionTable& table, const Mat& o) {
  require_operator(table, o, "qcg_map");
  const Mat t = to_table_basis(table, o);
  const auto r = ix(table.reduced_dim());
  Mat out = Mat::Zero(r, r);
  for_each_pair(table, [&](std::size_t q, std::size_t k, std::size_t l, std::size_t overlap,
                           const auto& ck, const auto& cl) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < overlap; ++i) acc += t(ix(cl[i]), ix(ck[i]));
    out(ix(table.reduced_index(q, l)), ix(table.reduced_index(q, k))) = acc;
  });
  return out;
}

Mat qcg_apply(const BipartitionTable& table, const Mat& rho, bool force) {
  require_operator(table, rho, "qcg_apply");
  const StateValidation v = validate_density_matrix(rho);
  if (!v.valid && !force) throw InvalidInput("qcg_apply: not a density matrix (" + v.describe() + ")");
  return qcg_map(table, rho);
}

Mat qcg_apply_basis_element(const BipartitionTable& table, std::size_t a, std::size_t b) {
  if (a >= table.dim() || b >= table.dim()) throw InvalidInput("qcg_apply_basis_element: index out of range");
  struct Slot {
    std::size_t q, i, k;
  };
  auto locate = [&](std::size_t idx) -> Slot {
    const auto& blocks = table.blocks();
    for (std::size_t q = 0; q < blocks.size(); ++q) {
      const auto& cols = blocks[q].columns;
      for (std::size_t k = 0; k < cols.size(); ++k) {
        const auto it = std::find(cols[k].begin(), cols[k].end(), idx);
        if (it != cols[k].end()) return {q, static_cast<std::size_t>(it - cols[k].begin()), k};
      }
    }
    throw InvalidInput("qcg_apply_basis_element: index not in table");
  };
  const Slot sa = locate(a);
  const Slot sb = locate(b);
  const auto r = ix(table.reduced_dim());
  Mat out = Mat::Zero(r, r);
  if (sa.q == sb.q && sa.i == sb.i) {
    out(ix(table.reduced_index(sa.q, sa.k)), ix(table.reduced_index(sb.q, sb.k))) = 1.0;
  }
  return out;
}

Mat qcg_adjoint(const BipartitionTable& table, const Mat& o_reduced) {
  require_reduced(table, o_reduced, "qcg_adjoint");
  const auto d = ix(table.dim());
  Mat t = Mat::Zero(d, d);
  for_each_pair(table, [&](std::size_t q, std::size_t k, std::size_t l, std::size_t overlap,
                           const auto& ck, const auto& cl) {
    const Complex c = o_reduced(ix(table.reduced_index(q, k)), ix(table.reduced_index(q, l)));
    for (std::size_t i = 0; i < overlap; ++i) t(ix(ck[i]), ix(cl[i])) += c;
  });
  return to_ambient(table, t);
}

Mat qcg_pseudoinverse(const BipartitionTable& table, const Mat& o_reduced) {
  require_reduced(table, o_reduced, "qcg_pseudoinverse");
  const auto d = ix(table.dim());
  Mat t = Mat::Zero(d, d);
  for_each_pair(table, [&](std::size_t q, std::size_t k, std::size_t l, std::size_t overlap,
                           const auto& ck, const auto& cl) {
    const Complex c = o_reduced(ix(table.reduced_index(q, k)), ix(table.reduced_index(q, l))) /
                      static_cast<double>(overlap);
    for (std::size_t i = 0; i < overlap; ++i) t(ix(ck[i]), ix(cl[i])) += c;
  });
  return to_ambient(table, t);
}

Mat qcg_projection(const BipartitionTable& table, const Mat& o) {
  require_operator(table, o, "qcg_projection");
  const Mat src = to_table_basis(table, o);
  const auto d = ix(table.dim());
  Mat t = Mat::Zero(d, d);
  for_each_pair(table, [&](std::size_t, std::size_t, std::size_t, std::size_t overlap,
                           const auto& ck, const auto& cl) {
    Complex tr = 0.0;
    for (std::size_t i = 0; i < overlap; ++i) tr += src(ix(cl[i]), ix(ck[i]));
    tr /= static_cast<double>(overlap);
    for (std::size_t i = 0; i < overlap; ++i) t(ix(cl[i]), ix(ck[i])) += tr;
  });
  return to_ambient(table, t);
}

Mat classical_cg_density(const std::vector<Mat>& projections, const Mat& rho, double tol) {
  if (projections.empty()) throw InvalidInput("classical_cg_density: no projections");
  const Index d = rho.rows();
  require_square(rho, "classical_cg_density");
  Mat sum = Mat::Zero(d, d);
  for (const Mat& p : projections) {
    if (p.rows() != d || p.cols() != d) throw InvalidInput("classical_cg_density: projection shape mismatch");
    if ((p * p - p).norm() > tol * std::max(1.0, p.norm()) || !is_hermitian(p, tol)) {
      throw InvalidInput("classical_cg_density: operator is not an orthogonal projection");
    }
    sum += p;
  }
  if ((sum - Mat::Identity(d, d)).norm() > tol * std::max<double>(1.0, static_cast<double>(d))) {
    throw InvalidInput("classical_cg_density: projections do not sum to the identity");
  }
  const auto m = ix(projections.size());
  Mat out = Mat::Zero(m, m);
  for (Index k = 0; k < m; ++k) out(k, k) = (projections[static_cast<std::size_t>(k)] * rho).trace();
  return out;
}

std::vector<Mat> kraus_operators(const BipartitionTable& table) {
  const auto d = ix(table.dim());
  const auto r = ix(table.reduced_dim());
  const Mat basis = table.basis_matrix();
  std::vector<Mat> out;
  const auto& blocks = table.blocks();
  for (std::size_t q = 0; q < blocks.size(); ++q) {
    const auto& cols = blocks[q].columns;
    const std::size_t rows = cols.front().size();  // tallest column first
    for (std::size_t i = 0; i < rows; ++i) {
      Mat v = Mat::Zero(r, d);
      for (std::size_t k = 0; k < cols.size() && cols[k].size() > i; ++k) {
        v(ix(table.reduced_index(q, k)), ix(cols[k][i])) = 1.0;
      }
      out.push_back(v * basis.adjoint());
    }
  }
  Mat completeness = Mat::Zero(d, d);
  for (const Mat& v : out) completeness += v.adjoint() * v;
  const double err = (completeness - Mat::Identity(d, d)).norm();
  if (err > 1e-10 * std::max<double>(1.0, static_cast<double>(d))) {
    throw NumericalFailure("kraus_operators: completeness violated by " + std::to_string(err));
  }
  return out;
}

BipartitionTable table_transpose(const BipartitionTable& table) {
  if (table.blocks().size() != 1) throw InvalidInput("table_transpose: table must have a single block");
  const auto& cols = table.blocks().front().columns;
  const std::size_t h = cols.front().size();
  for (const auto& c : cols) {
    if (c.size() != h) throw InvalidInput("table_transpose: block is not rectangular");
  }
  std::vector<std::vector<std::size_t>> rows(h, std::vector<std::size_t>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    for (std::size_t i = 0; i < h; ++i) rows[i][k] = cols[k][i];
  }
  return BipartitionTable(table.dim(), table.basis(), {TableBlock{std::move(rows)}});
}

}  // namespace coarse
