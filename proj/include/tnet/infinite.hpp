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

#include <iosfwd>
#include <optional>
#include <vector>

#include "tnet/tensor.hpp"

namespace tnet {

/// Translation-invariant MPS given by one site tensor (labels l, r, p) with
/// equal bond extents. `make_uniform` rescales A so that the leading transfer
/// eigenvalue has modulus one.
struct UniformMps {
    Tensor a;
    bool normalized = false;
};

/// Throws NormalizationError for a tensor whose transfer operator is nilpotent.
UniformMps make_uniform(const Tensor &a);

/// E_I of the (rescaled) tensor.
Matrix transfer_operator(const UniformMps &u);
/// E_O = sum_{j,k} <k|O|j> A_j (x) conj(A_k).
Matrix transfer_operator(const UniformMps &u, const Matrix &op);

struct TransferSpectrum {
    std::vector<cplx> values; ///< non-increasing modulus
    std::vector<std::optional<Vector>> right;
    std::vector<std::optional<Vector>> left; ///< l_j^T r_j = 1
    bool degenerate = false; ///< more than one eigenvalue on the leading circle
    bool defective = false;
};

TransferSpectrum transfer_spectrum(const UniformMps &u, double degeneracy_tol = 1e-8);

/// xi = -1 / log|lambda_2|; 0 when there is no subleading eigenvalue.
double correlation_length(const UniformMps &u);

/// <O> in the thermodynamic limit.
cplx uniform_expectation(const UniformMps &u, const Matrix &op);

struct AsymptoticCorrelator {
    cplx raw;
    cplx connected;
};

/// <l_1| E_{O_A} E_I^{dist-1} E_{O_B} |r_1> for dist >= 1.
AsymptoticCorrelator asymptotic_correlator(const UniformMps &u, const Matrix &oa, const Matrix &ob,
                                           std::size_t dist);

/// Prefactor K with |connected(d)| <= K |lambda_2|^{d-1}, from the spectral expansion.
double decay_prefactor(const UniformMps &u, const Matrix &oa, const Matrix &ob);

/// CSV with columns index,re,im,modulus.
void write_spectrum_csv(std::ostream &os, const TransferSpectrum &s);

} // namespace tnet
