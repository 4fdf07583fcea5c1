// Copyright 2026 The tnet Authors
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

#include <cstddef>
#include <vector>

#include <Eigen/SparseCore>

#include "tnet/model.hpp"
#include "tnet/mps.hpp"

namespace tnet {

using SparseMatrix = Eigen::SparseMatrix<cplx>;

/// Site tensor labels: left and right operator bonds, physical out (row) and in (column).
inline const Label kOpLeft = "wl";
inline const Label kOpRight = "wr";
inline const Label kOut = "po";
inline const Label kIn = "pi";

/// Matrix product operator. Tensors are always stored in open form with outer
/// bonds of extent 1; terms of a periodic model that close around the ring are
/// carried by extra bond channels. `boundary` records the model's boundary.
class MatrixProductOperator {
public:
    MatrixProductOperator() = default;
    MatrixProductOperator(std::vector<Tensor> sites, Boundary boundary, bool hermitian);

    std::size_t size() const noexcept { return sites_.size(); }
    const Tensor &site(std::size_t k) const { return sites_.at(k); }
    const std::vector<Tensor> &sites() const noexcept { return sites_; }
    Boundary boundary() const noexcept { return boundary_; }
    bool hermitian() const noexcept { return hermitian_; }
    std::size_t phys_dim(std::size_t k) const { return sites_.at(k).dim(kIn); }
    /// Operator bond extents between neighboring sites.
    std::vector<std::size_t> bond_dims() const;
    std::size_t max_bond_dim() const;

private:
    std::vector<Tensor> sites_;
    Boundary boundary_ = Boundary::open;
    bool hermitian_ = false;
};

MatrixProductOperator build_mpo(const ModelSpec &spec);

/// Finite-state-automaton MPO for a sum of operator strings on n sites of dimension d.
MatrixProductOperator mpo_from_terms(const std::vector<OperatorString> &terms, std::size_t n, std::size_t d,
                                     Boundary boundary = Boundary::open, bool hermitian = false);

MatrixProductOperator identity_mpo(const std::vector<std::size_t> &phys_dims);

/// Sparse operator on the full space (site 0 most significant).
SparseMatrix to_sparse(const MatrixProductOperator &op, std::size_t cap = std::size_t{1} << 16);
Matrix to_dense(const MatrixProductOperator &op, std::size_t cap = std::size_t{1} << 12);

/// O|psi> with bond extents D * D_w. Periodic states are first opened.
MatrixProductState apply_mpo(const MatrixProductOperator &op, const MatrixProductState &mps);

/// <psi|O|psi> in one left-to-right pass.
cplx expectation_mpo(const MatrixProductState &mps, const MatrixProductOperator &op);

// Environment sweeps shared by the expectation and DMRG code. Environments
// carry labels (b, w, k): bra bond, operator bond, ket bond.

/// Trivial 1 x 1 x 1 boundary environment.
Tensor boundary_environment();
/// Absorbs one site into a left environment: L' = L * ket * W * conj(bra).
Tensor extend_left(const Tensor &env, const Tensor &ket, const Tensor &w, const Tensor &bra);
/// Absorbs one site into a right environment.
Tensor extend_right(const Tensor &env, const Tensor &ket, const Tensor &w, const Tensor &bra);

} // namespace tnet
