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

#include "tnet/mps.hpp"

namespace tnet {

/// Translation-invariant continuous MPS on a segment of length L.
struct ContinuousMps {
    Matrix Q;
    Matrix R;
    double L = 1.0;
};

void validate(const ContinuousMps &c);

/// T = Q (x) I + I (x) conj(Q) + R (x) conj(R).
Matrix transfer_generator(const ContinuousMps &c);

/// <Psi^dag(x) Psi^dag(0) Psi(0) Psi(x)> for 0 < x < L, divided by tr e^{TL}
/// unless `raw` is set.
cplx density_correlator(const ContinuousMps &c, double x, bool raw = false);

/// Lattice tensor with A_0 = I + eps Q and A_m = (sqrt(eps) R)^m / sqrt(m!) for
/// occupations m = 1 .. k_max. The 1/sqrt(m!) carries the Fock normalization.
Tensor discretized_tensor(const ContinuousMps &c, double eps, std::size_t k_max = 4);

/// Periodic MPS over n = L / eps sites of local dimension k_max + 1.
MatrixProductState discretize(const ContinuousMps &c, double eps, std::size_t k_max = 4);

/// <n_0 n_m> / eps^2 at m = x / eps on the periodic lattice, the lattice
/// counterpart of density_correlator.
cplx lattice_density_correlator(const ContinuousMps &c, double eps, double x, std::size_t k_max = 4);

/// {"D": D, "L": L, "Q": [[re, im], ...], "R": [[re, im], ...]} with row-major D*D entries.
ContinuousMps cmps_from_json(const std::string &text);
std::string cmps_to_json(const ContinuousMps &c);

} // namespace tnet
