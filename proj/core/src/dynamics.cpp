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

#include "coarse/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "coarse/error.hpp"

namespace coarse {

namespace {

using Index = Eigen::Index;

Index ix(std::size_t i) { return static_cast<Index>(i); }

void require_dim(const Superoperator& l, const BipartitionTable& table, const char* what) {
  if (l.dim != table.dim()) {
    throw InvalidInput(std::string(what) + ": superoperator acts on dimension " +
                       std::to_string(l.dim) + ", table has " + std::to_string(table.dim()));
  }
}

// Superoperator whose column j*d+i is vec(f(|i><j|)) for d x d inputs.
template <class Fn>
Mat assemble(std::size_t in_dim, std::size_t out_dim, Fn&& f) {
  const auto d = ix(in_dim);
  const auto r = ix(out_dim);
  Mat m(r * r, d * d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      Mat e = Mat::Zero(d, d);
      e(i, j) = 1.0;
      m.col(j * d + i) = vectorize(f(e));
    }
  }
  return m;
}

}  // namespace

Superoperator Superoperator::from_matrix(std::size_t dim, Mat mat) {
  const auto n = ix(dim * dim);
  if (dim == 0 || mat.rows() != n || mat.cols() != n) {
    throw InvalidInput("Superoperator: expected " + std::to_string(n) + "x" + std::to_string(n) +
                       " matrix for dimension " + std::to_string(dim));
  }
  require_finite(mat, "Superoperator");
  return {dim, std::move(mat)};
}

Mat Superoperator::apply(const Mat& rho) const {
  const auto d = ix(dim);
  if (rho.rows() != d || rho.cols() != d) {
    throw InvalidInput("Superoperator::apply: operator must be " + std::to_string(dim) + "x" +
                       std::to_string(dim));
  }
  return unvectorize(mat * vectorize(rho), d, d);
}

Superoperator hamiltonian_generator(const Mat& h, double tol) {
  require_square(h, "hamiltonian_generator");
  require_finite(h, "hamiltonian_generator");
  if (!is_hermitian(h, tol)) throw InvalidInput("hamiltonian_generator: H is not Hermitian");
  const Index d = h.rows();
  const Mat id = Mat::Identity(d, d);
  // vec(H rho) = (I (x) H) vec(rho), vec(rho H) = (H^T (x) I) vec(rho)
  const Mat l = Complex(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
  return {static_cast<std::size_t>(d), l};
}

Superoperator projection_superoperator(const BipartitionTable& table) {
  return {table.dim(),
          assemble(table.dim(), table.dim(), [&](const Mat& e) { return qcg_projection(table, e); })};
}

CheckResult check_superop_compatibility(const Superoperator& l, const BipartitionTable& table,
                                        double tol) {
  require_dim(l, table, "check_superop_compatibility");
  const Mat p = projection_superoperator(table).mat;
  const Mat pl = p * l.mat;
  CheckResult r;
  r.residual = (pl - pl * p).norm() / std::max(1.0, l.mat.norm());
  r.compatible = r.residual <= tol;
  return r;
}

HamiltonianCheck check_hamiltonian_compatibility(const Mat& h, const BipartitionTable& table,
                                                 double tol) {
  const auto d = ix(table.dim());
  if (h.rows() != d || h.cols() != d) {
    throw InvalidInput("check_hamiltonian_compatibility: H must be " + std::to_string(d) + "x" +
                       std::to_string(d));
  }
  require_finite(h, "check_hamiltonian_compatibility");
  if (!is_hermitian(h, tol)) throw InvalidInput("check_hamiltonian_compatibility: H is not Hermitian");
  // |-i[H,.]|_F^2 = 2 d |H|_F^2 - 2 |tr H|^2
  const double lnorm2 = 2.0 * static_cast<double>(d) * h.squaredNorm() - 2.0 * std::norm(h.trace());
  const double scale = std::max(1.0, std::sqrt(std::max(0.0, lnorm2)));
  HamiltonianCheck out;
  const BipartitionOperators ops(table);
  for (const auto& e : ops.entries()) {
    const Mat c = commutator(h, e.op / e.op.norm());
    const double res = (c - qcg_projection(table, c)).norm() / scale;
    out.per_operator.push_back({e.block, e.k, e.l, res});
    out.worst_residual = std::max(out.worst_residual, res);
  }
  out.compatible = out.worst_residual <= tol;
  return out;
}

ReducedGenerator reduced_generator(const Superoperator& l, const BipartitionTable& table, bool force,
                                   double tol) {
  require_dim(l, table, "reduced_generator");
  ReducedGenerator out;
  out.check = check_superop_compatibility(l, table, tol);
  if (!out.check.compatible) {
    if (!force) {
      throw IncompatibleReduction("reduced_generator: generator is incompatible with the table",
                                  out.check.residual);
    }
    out.warnings.push_back("forced reduction of an incompatible generator (residual " +
                           std::to_string(out.check.residual) + ")");
  }
  const std::size_t r = table.reduced_dim();
  out.generator = {r, assemble(r, r, [&](const Mat& e) {
                     return qcg_map(table, l.apply(qcg_pseudoinverse(table, e)));
                   })};
  return out;
}

std::vector<Mat> evolve_quantum(const Superoperator& l, const Mat& rho0,
                                const std::vector<double>& times) {
  const auto d = ix(l.dim);
  if (rho0.rows() != d || rho0.cols() != d) {
    throw InvalidInput("evolve_quantum: initial state must be " + std::to_string(d) + "x" +
                       std::to_string(d));
  }
  require_finite(rho0, "evolve_quantum");
  const CVec v0 = vectorize(rho0);
  std::vector<Mat> out;
  out.reserve(times.size());
  for (double t : times) {
    if (!std::isfinite(t)) throw InvalidInput("evolve_quantum: non-finite time");
    out.push_back(unvectorize(matrix_exp(l.mat, t) * v0, d, d));
  }
  return out;
}

double verify_reduction_by_trajectory(const Superoperator& l, const BipartitionTable& table,
                                      const Mat& rho0, const std::vector<double>& times) {
  require_dim(l, table, "verify_reduction_by_trajectory");
  const Superoperator lr = reduced_generator(l, table, true).generator;
  const std::vector<Mat> full = evolve_quantum(l, rho0, times);
  const std::vector<Mat> reduced = evolve_quantum(lr, qcg_map(table, rho0), times);
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    worst = std::max(worst, (qcg_map(table, full[i]) - reduced[i]).norm());
  }
  return worst;
}

}  // namespace coarse
