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
#include <optional>
#include <vector>

#include "tnet/mps.hpp"

namespace tnet {

/// <a|b>.
cplx overlap(const MatrixProductState &a, const MatrixProductState &b);
double norm(const MatrixProductState &mps);

/// E_O = sum_{j,k} <k|O|j> A_j (x) conj(A_k), a D^2 x D^2 matrix with row index
/// (alpha, gamma) = alpha * D + gamma. Without `op` this is E_I = sum_j A_j (x) conj(A_j).
Matrix transfer_matrix(const Tensor &a, const std::optional<Matrix> &op = std::nullopt);

struct CorrelatorValue {
    std::size_t dist = 0;
    cplx raw;
    cplx connected;
};

/// Cached left and right norm environments of one state. Results are divided
/// by <psi|psi>, so unnormalized states are handled too. Periodic states are
/// opened first.
class ExpectationEngine {
public:
    explicit ExpectationEngine(const MatrixProductState &mps);

    std::size_t size() const noexcept { return state_.size(); }
    double norm_squared() const noexcept { return norm_sq_; }

    /// <O> for an operator acting on sites first .. first+r, where the
    /// operator dimension fixes r. Site `first` is the most significant factor.
    cplx local(const Matrix &op, std::size_t first) const;
    std::vector<cplx> local_scan(const Matrix &op) const;

    /// <O_A(i) O_B(j)> and its connected part, i != j.
    CorrelatorValue correlator(const Matrix &oa, std::size_t i, const Matrix &ob, std::size_t j) const;
    /// Correlators of O_A at `origin` with O_B at origin + d for d = 1 .. max_dist, in one pass.
    std::vector<CorrelatorValue> correlator_scan(const Matrix &oa, std::size_t origin, const Matrix &ob,
                                                 std::size_t max_dist) const;

private:
    Matrix dressed_left(const Matrix &env, std::size_t site, const Matrix &op) const;
    Matrix transfer_left(const Matrix &env, std::size_t site) const;
    cplx close(const Matrix &left, std::size_t next_site) const;

    MatrixProductState state_;
    std::vector<Matrix> left_;  // left_[k]: sites < k, bra x ket
    std::vector<Matrix> right_; // right_[k]: sites >= k, bra x ket
    double norm_sq_ = 0.0;
};

cplx local_expectation(const MatrixProductState &mps, const Matrix &op, std::size_t first);
CorrelatorValue connected_correlator(const MatrixProductState &mps, const Matrix &oa, std::size_t i,
                                     const Matrix &ob, std::size_t j);

struct DecayFit {
    double amplitude = 0.0;   ///< C
    double length = 0.0;      ///< xi
    double r_squared = 0.0;   ///< coefficient of determination of the log-linear fit
    std::size_t samples = 0;  ///< usable samples
};

/// Least squares of log|y| = log C - d / xi over samples with positive values.
DecayFit fit_correlation_decay(const std::vector<std::pair<double, double>> &samples);

/// CSV with columns dist,raw_re,raw_im,connected_abs.
void write_correlator_csv(std::ostream &os, const std::vector<CorrelatorValue> &rows);

} // namespace tnet
