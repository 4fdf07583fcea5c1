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
#include <string>
#include <vector>

#include "tnet/mps.hpp"
#include "tnet/tensor.hpp"

namespace tnet {

// Fixed single-site operators.
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
/// Spin-1 matrices in the basis (m=+1, 0, -1).
Matrix spin1_x();
Matrix spin1_y();
Matrix spin1_z();

/// Named local operator: I, X, Y, Z, Sp, Sm (d = 2) or I, Sx, Sy, Sz, Splus, Sminus (d = 3).
Matrix local_operator(const std::string &name, std::size_t d);

enum class ModelKind { xy, heisenberg_spin1, aklt, majumdar_ghosh, custom };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string &s);

struct Couplings {
    double gamma = 0.0;  ///< XY anisotropy
    double lambda = 0.0; ///< XY field
    double J = 1.0;      ///< Heisenberg exchange
};

/// coefficient * prod_k ops[k] acting on sites[k], for the custom model.
struct CustomTerm {
    cplx coefficient = 1.0;
    std::vector<std::size_t> sites;
    std::vector<std::string> ops;
};

/// Symbolic chain Hamiltonian shared by the MPO builder and the dense oracle.
///
///   xy                H = -1/2 sum_<jk> [(1+g)/4 XX + (1-g)/4 YY] - (lambda/2) sum_j Z_j
///   heisenberg_spin1  H = J sum_<jk> S.S
///   aklt              H = sum_<jk> [S.S/2 + (S.S)^2/6 + 1/3]
///   majumdar_ghosh    H = sum_j [2 s_j.s_{j+1} + s_j.s_{j+2}]   (Pauli vectors)
///   custom            H = sum of `terms` on sites of dimension `local_dim`
struct ModelSpec {
    ModelKind kind = ModelKind::xy;
    std::size_t n = 2;
    Boundary boundary = Boundary::open;
    Couplings couplings;
    std::size_t local_dim = 2; ///< custom models only
    std::vector<CustomTerm> terms;
};

/// Throws SpecError when the spec is malformed.
void validate(const ModelSpec &spec);
std::size_t local_dim(const ModelSpec &spec);
/// True for the named models, and for custom models whose terms are real
/// multiples of Hermitian operators on distinct sites.
bool is_hermitian(const ModelSpec &spec);

ModelSpec model_from_json(const std::string &text);
std::string model_to_json(const ModelSpec &spec);

/// coefficient * ops[0] (x) ... acting on strictly increasing `sites`.
struct OperatorString {
    cplx coefficient = 1.0;
    std::vector<std::size_t> sites;
    std::vector<Matrix> ops;
};

/// The Hamiltonian expanded into operator strings. Terms with repeated sites are merged.
std::vector<OperatorString> operator_strings(const ModelSpec &spec);

/// Largest site separation inside one term (0 for on-site terms).
std::size_t interaction_range(const std::vector<OperatorString> &terms);

} // namespace tnet
