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
#include <map>
#include <vector>

#include "tnet/model.hpp"
#include "tnet/mpo.hpp"

namespace tnet::ed {

/// Sparse Hamiltonian built term by term from Kronecker products. Site 0 is the
/// most significant tensor factor. Shares no code with the MPO builder.
SparseMatrix sparse_hamiltonian(const ModelSpec &spec, std::size_t cap = std::size_t{1} << 14);
Matrix dense_hamiltonian(const ModelSpec &spec, std::size_t cap = std::size_t{1} << 12);

struct SolveOptions {
    double degeneracy_tol = 1e-9;
    /// Full diagonalization at or below this dimension, deflated Lanczos above.
    std::size_t dense_limit = 512;
    std::size_t max_levels = 12;
    std::size_t cap = std::size_t{1} << 14;
};

struct SpectralSummary {
    double ground_energy = 0.0;
    double gap = 0.0;
    std::size_t degeneracy = 1;
    /// Lowest levels found (all of them for a full diagonalization).
    std::vector<double> levels;
};

struct Solution {
    SpectralSummary summary;
    std::vector<Vector> ground_vectors;
};

Solution solve(const ModelSpec &spec, const SolveOptions &opts = {});

/// e^{-beta H} / tr e^{-beta H}.
Matrix gibbs(const ModelSpec &spec, double beta, std::size_t cap = std::size_t{1} << 12);

/// Partial trace onto the sites in `region` (kept in increasing order).
Matrix reduce(const Vector &psi, const std::vector<std::size_t> &dims, const std::vector<std::size_t> &region);
Matrix reduce(const Matrix &rho, const std::vector<std::size_t> &dims, const std::vector<std::size_t> &region);

/// rho^{T_A}: partial transpose on the sites in `region`.
Matrix partial_transpose(const Matrix &rho, const std::vector<std::size_t> &dims,
                         const std::vector<std::size_t> &region);

/// Entropies in bits of a density matrix spectrum.
double von_neumann(const Matrix &rho);
double renyi(const Matrix &rho, double alpha);

struct EntropyReport {
    double von_neumann = 0.0;               ///< S(rho_A)
    std::map<double, double> renyi;         ///< S_alpha(rho_A) on the alpha grid
    double mutual_information = 0.0;        ///< S(A) + S(B) - S(AB)
    double negativity = 0.0;                ///< ||rho^{T_A}||_1 - 1
    double log_negativity = 0.0;            ///< log2 ||rho^{T_A}||_1
};

/// Default alpha grid: 0, 0.5, 2, 3, infinity.
std::vector<double> default_renyi_grid();

/// Bipartition of the full state into `region` and its complement.
EntropyReport entropy_suite(const Matrix &rho, const std::vector<std::size_t> &dims,
                            const std::vector<std::size_t> &region,
                            const std::vector<double> &alphas = default_renyi_grid());
EntropyReport entropy_suite(const Vector &psi, const std::vector<std::size_t> &dims,
                            const std::vector<std::size_t> &region,
                            const std::vector<double> &alphas = default_renyi_grid());

} // namespace tnet::ed
