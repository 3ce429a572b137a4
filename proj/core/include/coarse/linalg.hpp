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

// Dense complex linear algebra shared by every coarse-graining module:
// exponentials, SVD-based pseudo-inverse/rank/nullspace and the
// Hilbert-Schmidt geometry of operator subspaces.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace coarse {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RealMat = Eigen::MatrixXd;
using RealVec = Eigen::VectorXd;

/// Singular values at or below this fraction of the largest one count as zero.
inline constexpr double kRankThreshold = 1e-10;

/// Tolerances for compatibility checks. Residuals are reported relative to
/// `max(1, scale)` where scale is the Frobenius norm of the generator.
struct Tolerance {
  double rel = 1e-9;
  double abs = 1e-12;

  double bound(double scale) const { return rel * (scale > 1.0 ? scale : 1.0); }
};

/// Verdict of a compatibility test. The residual is always filled in.
struct CheckResult {
  bool compatible = false;
  double residual = 0.0;
};

void require_finite(const Mat& a, std::string_view what);
void require_finite(const RealMat& a, std::string_view what);
void require_square(const Mat& a, std::string_view what);

/// exp(t A). Normal matrices go through a Schur (unitary) diagonalization,
/// everything else through Pade scaling-and-squaring.
Mat matrix_exp(const Mat& a, double t);
RealMat matrix_exp(const RealMat& a, double t);

/// Moore-Penrose inverse; singular values <= tol * sigma_max are dropped.
Mat pseudo_inverse(const Mat& a, double tol = kRankThreshold);
RealMat pseudo_inverse(const RealMat& a, double tol = kRankThreshold);

std::size_t numerical_rank(const Mat& a, double tol = kRankThreshold);

/// Orthonormal basis of {x : |Ax| <= tol max(|A|, scale)}. A zero matrix
/// yields the full standard basis. Pass `scale` when A is built from larger
/// operators and may itself be pure roundoff.
std::vector<CVec> nullspace(const Mat& a, double tol = kRankThreshold, double scale = 0.0);

/// <A, B> = tr(A^dagger B).
Complex hs_inner(const Mat& a, const Mat& b);
Mat commutator(const Mat& a, const Mat& b);

/// Kronecker product a (x) b.
Mat kron(const Mat& a, const Mat& b);
bool is_hermitian(const Mat& a, double tol);
bool is_normal(const Mat& a, double tol);

/// Column-major stacking, the convention used for every superoperator.
CVec vectorize(const Mat& a);
Mat unvectorize(const CVec& v, Eigen::Index rows, Eigen::Index cols);

/// Span of d x d operators held as an HS-orthonormal basis.
class OperatorSubspace {
 public:
  OperatorSubspace() = default;
  /// Takes ownership of an already-orthonormal basis; checks the shapes and
  /// the Gram matrix against `tol`.
  OperatorSubspace(std::size_t ambient_dim, std::vector<Mat> basis, double tol = 1e-8);

  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  std::size_t dimension() const noexcept { return basis_.size(); }
  bool empty() const noexcept { return basis_.empty(); }
  const std::vector<Mat>& basis() const noexcept { return basis_; }

  /// d^2 x k matrix whose columns are vec(B_i).
  Mat stacked() const;

 private:
  std::size_t ambient_dim_ = 0;
  std::vector<Mat> basis_;
};

/// Gram-Schmidt under the HS inner product. Inputs whose residual after
/// projection is <= tol * |input| are dropped as dependent.
OperatorSubspace span_orthonormalize(std::span<const Mat> ops, double tol = kRankThreshold);

struct SpanProjection {
  Mat projection;
  double residual_norm = 0.0;
};

SpanProjection project_to_span(const Mat& o, const OperatorSubspace& s);

/// O lies in the span iff residual <= tol * max(1, |O|_F).
bool in_span(const Mat& o, const OperatorSubspace& s, double tol = 1e-9);

}  // namespace coarse
