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

#include "coarse/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "coarse/error.hpp"

namespace coarse {

namespace {

std::string shape(const Mat& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

// Tall stacks (commutation constraints) are first reduced by QR: R has the
// same singular values and right singular vectors as the stack.
Mat reduce_rows(const Mat& a) {
  if (a.rows() <= 2 * a.cols()) return a;
  Eigen::HouseholderQR<Mat> qr(a);
  return qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
}

}  // namespace

void require_finite(const Mat& a, std::string_view what) {
  if (!a.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entries");
}

void require_finite(const RealMat& a, std::string_view what) {
  if (!a.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entries");
}

void require_square(const Mat& a, std::string_view what) {
  if (a.rows() != a.cols()) {
    throw InvalidInput(std::string(what) + ": expected a square matrix, got " + shape(a));
  }
}

Mat matrix_exp(const Mat& a, double t) {
  require_square(a, "matrix_exp");
  require_finite(a, "matrix_exp");
  if (!std::isfinite(t)) throw InvalidInput("matrix_exp: non-finite time");
  if (a.size() == 0) return a;
  const Mat ta = t * a;
  const double norm = ta.norm();
  if (norm == 0.0) return Mat::Identity(a.rows(), a.cols());
  if (is_normal(ta, 1e-13)) {
    Eigen::ComplexSchur<Mat> schur(ta);
    const Mat& u = schur.matrixU();
    const CVec d = schur.matrixT().diagonal().array().exp();
    return u * d.asDiagonal() * u.adjoint();
  }
  return ta.exp();
}

RealMat matrix_exp(const RealMat& a, double t) {
  if (a.rows() != a.cols()) throw InvalidInput("matrix_exp: expected a square matrix");
  require_finite(a, "matrix_exp");
  if (!std::isfinite(t)) throw InvalidInput("matrix_exp: non-finite time");
  if (a.size() == 0) return a;
  const RealMat ta = t * a;
  if (ta.norm() == 0.0) return RealMat::Identity(a.rows(), a.cols());
  if ((ta - ta.transpose()).norm() <= 1e-14 * ta.norm()) {
    Eigen::SelfAdjointEigenSolver<RealMat> eig(0.5 * (ta + ta.transpose()));
    const RealMat& v = eig.eigenvectors();
    return v * eig.eigenvalues().array().exp().matrix().asDiagonal() * v.transpose();
  }
  return ta.exp();
}

Mat pseudo_inverse(const Mat& a, double tol) {
  require_finite(a, "pseudo_inverse");
  if (a.size() == 0) return Mat(a.cols(), a.rows());
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cut = tol * (s.size() > 0 ? s(0) : 0.0);
  RealVec inv(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) inv(i) = (s(i) > cut && s(i) > 0.0) ? 1.0 / s(i) : 0.0;
  return svd.matrixV() * inv.cast<Complex>().asDiagonal() * svd.matrixU().adjoint();
}

RealMat pseudo_inverse(const RealMat& a, double tol) {
  require_finite(a, "pseudo_inverse");
  if (a.size() == 0) return RealMat(a.cols(), a.rows());
  Eigen::JacobiSVD<RealMat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cut = tol * (s.size() > 0 ? s(0) : 0.0);
  RealVec inv(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) inv(i) = (s(i) > cut && s(i) > 0.0) ? 1.0 / s(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

std::size_t numerical_rank(const Mat& a, double tol) {
  require_finite(a, "numerical_rank");
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(reduce_rows(a));
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > tol * s(0) ? 1 : 0;
  return r;
}

std::vector<CVec> nullspace(const Mat& a, double tol, double scale) {
  require_finite(a, "nullspace");
  const Eigen::Index n = a.cols();
  std::vector<CVec> out;
  if (n == 0) return out;
  const Mat reduced = reduce_rows(a);
  Eigen::JacobiSVD<Mat> svd(reduced, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = std::max(s.size() > 0 ? s(0) : 0.0, scale);
  Eigen::Index rank = 0;
  if (smax > 0.0) {
    for (Eigen::Index i = 0; i < s.size(); ++i) rank += s(i) > tol * smax ? 1 : 0;
  }
  const Mat& v = svd.matrixV();
  for (Eigen::Index j = rank; j < n; ++j) out.emplace_back(v.col(j));
  return out;
}

Complex hs_inner(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidInput("hs_inner: shape mismatch " + shape(a) + " vs " + shape(b));
  }
  return (a.conjugate().cwiseProduct(b)).sum();
}

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

bool is_hermitian(const Mat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).norm() <= tol * std::max(1.0, a.norm());
}

bool is_normal(const Mat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double n = a.norm();
  return (a * a.adjoint() - a.adjoint() * a).norm() <= tol * std::max(1.0, n * n);
}

CVec vectorize(const Mat& a) { return Eigen::Map<const CVec>(a.data(), a.size()); }

Mat unvectorize(const CVec& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw InvalidInput("unvectorize: length does not match shape");
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

OperatorSubspace::OperatorSubspace(std::size_t ambient_dim, std::vector<Mat> basis, double tol)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)) {
  const auto d = static_cast<Eigen::Index>(ambient_dim_);
  for (const Mat& b : basis_) {
    if (b.rows() != d || b.cols() != d) {
      throw InvalidInput("OperatorSubspace: basis element has shape " + shape(b));
    }
  }
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    for (std::size_t j = i; j < basis_.size(); ++j) {
      const double target = i == j ? 1.0 : 0.0;
      if (std::abs(hs_inner(basis_[i], basis_[j]) - target) > tol) {
        throw InvalidInput("OperatorSubspace: basis is not HS-orthonormal");
      }
    }
  }
}

Mat OperatorSubspace::stacked() const {
  const auto d2 = static_cast<Eigen::Index>(ambient_dim_ * ambient_dim_);
  Mat out(d2, static_cast<Eigen::Index>(basis_.size()));
  for (std::size_t i = 0; i < basis_.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = vectorize(basis_[i]);
  return out;
}

OperatorSubspace span_orthonormalize(std::span<const Mat> ops, double tol) {
  if (ops.empty()) return {};
  const Mat& first = ops.front();
  require_square(first, "span_orthonormalize");
  std::vector<Mat> basis;
  for (const Mat& op : ops) {
    if (op.rows() != first.rows() || op.cols() != first.cols()) {
      throw InvalidInput("span_orthonormalize: operators differ in shape");
    }
    require_finite(op, "span_orthonormalize");
    const double norm = op.norm();
    if (norm == 0.0) continue;
    Mat r = op;
    // two passes of modified Gram-Schmidt
    for (int pass = 0; pass < 2; ++pass) {
      for (const Mat& b : basis) r -= hs_inner(b, r) * b;
    }
    const double rn = r.norm();
    if (rn <= tol * norm) continue;
    basis.push_back(r / rn);
  }
  return OperatorSubspace(static_cast<std::size_t>(first.rows()), std::move(basis));
}

SpanProjection project_to_span(const Mat& o, const OperatorSubspace& s) {
  const auto d = static_cast<Eigen::Index>(s.ambient_dim());
  if (s.empty()) {
    return {Mat::Zero(o.rows(), o.cols()), o.norm()};
  }
  if (o.rows() != d || o.cols() != d) {
    throw InvalidInput("project_to_span: operator shape " + shape(o) + " does not match subspace");
  }
  Mat p = Mat::Zero(d, d);
  for (const Mat& b : s.basis()) p += hs_inner(b, o) * b;
  const double res = (o - p).norm();
  return {std::move(p), res};
}

bool in_span(const Mat& o, const OperatorSubspace& s, double tol) {
  return project_to_span(o, s).residual_norm <= tol * std::max(1.0, o.norm());
}

}  // namespace coarse
