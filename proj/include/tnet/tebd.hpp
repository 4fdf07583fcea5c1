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
#include <iosfwd>
#include <vector>

#include "tnet/model.hpp"
#include "tnet/mps.hpp"

namespace tnet {

struct Gate {
    std::size_t bond = 0; ///< acts on sites (bond, bond + 1)
    Matrix op;            ///< d^2 x d^2, site `bond` most significant
};

/// Even/odd splitting H = H_even + H_odd of a nearest-neighbor chain.
///
/// Order 1 applies e^{-H_even dt} e^{-H_odd dt} per step; order 2 applies the
/// symmetric sequence even(dt/2) odd(dt) even(dt/2). For real time the
/// exponent carries the factor i.
struct TrotterPlan {
    ModelSpec spec;
    double dt = 0.0;
    int order = 2;
    std::size_t steps = 0;
    bool imaginary = false;
    /// h_b on bond b; single-site terms are shared between the adjacent bonds.
    std::vector<Matrix> bond_terms;
    std::vector<Gate> even; ///< half-step gates for order 2
    std::vector<Gate> odd;
};

/// Throws UnsupportedError for longer-range terms and BoundaryError for periodic chains.
TrotterPlan build_plan(const ModelSpec &spec, double dt, int order, std::size_t steps, bool imaginary = false);

/// Gate sequence of one step in application order.
std::vector<Gate> step_sequence(const TrotterPlan &plan);

struct TraceRow {
    double t = 0.0;
    double energy = 0.0;
    double s_mid = 0.0;     ///< entropy in bits across the middle cut
    double trunc_cum = 0.0; ///< accumulated discarded weight
};

using EvolutionTrace = std::vector<TraceRow>;

struct EvolutionResult {
    MatrixProductState state;
    EvolutionTrace trace; ///< row 0 is the initial state
};

/// Applies `plan.steps` steps with bonds capped at d_max and discarded weight
/// per split at most `tol`. Imaginary-time plans renormalize after every gate.
EvolutionResult evolve(const MatrixProductState &mps, const TrotterPlan &plan, std::size_t d_max, double tol);

/// `evolve` for an imaginary-time plan; rejects real-time plans.
EvolutionResult evolve_imaginary(const MatrixProductState &mps, const TrotterPlan &plan, std::size_t d_max,
                                 double tol);

/// CSV with columns t,energy,S_mid,trunc_cum.
void write_trace_csv(std::ostream &os, const EvolutionTrace &trace);

} // namespace tnet
