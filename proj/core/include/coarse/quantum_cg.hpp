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

// Bipartition tables and the quantum coarse-graining channel tr_(A).
//
// A table arranges an orthonormal basis |gamma> into one or more
// left-justified blocks. Columns are the reduced (macro) states |beta>,
// rows the traced-out partial subsystem. Reduced indices are block-major:
// block 0's columns first, then block 1's, and so on.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "coarse/linalg.hpp"

namespace coarse {

struct TableBlock {
  /// columns[k] lists basis indices top-to-bottom.
  std::vector<std::vector<std::size_t>> columns;

  std::size_t width() const noexcept { return columns.size(); }
  std::size_t height(std::size_t k) const { return columns.at(k).size(); }
};

class BipartitionTable {
 public:
  BipartitionTable() = default;
  /// Validates coverage and the basis. Columns that are not ordered by
  /// non-increasing height are stably re-sorted and a warning is recorded.
  BipartitionTable(std::size_t dim, std::optional<Mat> basis, std::vector<TableBlock> blocks,
                   double tol = 1e-9);

  /// Single block given column by column, computational basis.
  static BipartitionTable from_columns(std::size_t dim, std::vector<std::vector<std::size_t>> columns);

  std::size_t dim() const noexcept { return dim_; }
  const std::optional<Mat>& basis() const noexcept { return basis_; }
  const std::vector<TableBlock>& blocks() const noexcept { return blocks_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  /// Total number of columns across blocks.
  std::size_t reduced_dim() const noexcept { return reduced_dim_; }
  /// Reduced index of column k in block q.
  std::size_t reduced_index(std::size_t q, std::size_t k) const;
  /// Ambient vector |gamma_idx>.
  CVec basis_vector(std::size_t idx) const;
  /// Basis matrix, identity when absent.
  Mat basis_matrix() const;

 private:
  std::size_t dim_ = 0;
  std::optional<Mat> basis_;
  std::vector<TableBlock> blocks_;
  std::vector<std::size_t> offsets_;
  std::size_t reduced_dim_ = 0;
  std::vector<std::string> warnings_;
};

/// S_{q,kl} = sum_{i < min(h_k, h_l)} |gamma_{i,k}><gamma_{i,l}| in the ambient basis.
class BipartitionOperators {
 public:
  struct Entry {
    std::size_t block = 0;
    std::size_t k = 0;
    std::size_t l = 0;
    std::size_t overlap = 0;  // min(h_k, h_l)
    Mat op;
  };

  explicit BipartitionOperators(const BipartitionTable& table);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const Mat& at(std::size_t block, std::size_t k, std::size_t l) const;
  std::size_t reduced_dim() const noexcept { return reduced_dim_; }
  std::size_t count() const noexcept { return entries_.size(); }
  std::vector<Mat> operators() const;

 private:
  std::vector<Entry> entries_;
  std::vector<std::size_t> block_start_;
  std::vector<std::size_t> block_width_;
  std::size_t reduced_dim_ = 0;
};

BipartitionOperators bipartition_operators(const BipartitionTable& table);

/// Residuals of the density-matrix conditions; valid when all are within tol.
struct StateValidation {
  double hermiticity = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
  bool valid = false;
  std::string describe() const;
};

/// PSD threshold: smallest eigenvalue >= -1e-9.
StateValidation validate_density_matrix(const Mat& rho, double tol = 1e-9);

/// The linear map sum_{q,k,l} tr(S_{q,kl} O) |beta_{q,l}><beta_{q,k}| on any
/// d x d operator, no state checks.
Mat qcg_map(const BipartitionTable& table, const Mat& o);

/// qcg_map on a validated density matrix. Invalid states throw InvalidInput
/// unless `force` is set.
Mat qcg_apply(const BipartitionTable& table, const Mat& rho, bool force = false);

/// tr_(A)(|gamma_a><gamma_b|): delta_ij |beta_k><beta_l| when a = gamma_{i,k}
/// and b = gamma_{j,l} sit in the same block, zero otherwise.
Mat qcg_apply_basis_element(const BipartitionTable& table, std::size_t a, std::size_t b);

/// HS adjoint: sum_{kl} S_kl <beta_k|O_B|beta_l>.
Mat qcg_adjoint(const BipartitionTable& table, const Mat& o_reduced);

/// Right inverse: sum_{kl} <beta_k|O_B|beta_l> / min(h_k, h_l) S_kl.
Mat qcg_pseudoinverse(const BipartitionTable& table, const Mat& o_reduced);

/// Orthogonal projection onto span{S_kl}: sum tr(S_kl O)/min(h_k,h_l) S_lk.
Mat qcg_projection(const BipartitionTable& table, const Mat& o);

/// diag(tr(Pi_k rho)) for orthogonal projections summing to the identity.
Mat classical_cg_density(const std::vector<Mat>& projections, const Mat& rho, double tol = 1e-9);

/// Row Kraus operators V_{q,i} = sum_k |beta_{q,k}><gamma_{q,i,k}|, ambient
/// basis. Throws NumericalFailure if sum V^dagger V deviates from I.
std::vector<Mat> kraus_operators(const BipartitionTable& table);

/// Rows <-> columns of a single rectangular block.
BipartitionTable table_transpose(const BipartitionTable& table);

}  // namespace coarse
