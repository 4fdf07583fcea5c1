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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tnet/mpo.hpp"
#include "tnet/mps.hpp"

namespace tnet {

enum class DmrgMode { single_site, two_site };

std::string to_string(DmrgMode m);
DmrgMode dmrg_mode_from_string(const std::string &s);

struct DmrgConfig {
    DmrgMode mode = DmrgMode::two_site;
    /// Bond dimension per sweep; the last entry repeats once the list runs out.
    std::vector<std::size_t> schedule{16};
    std::size_t max_sweeps = 20;
    double energy_tol = 1e-10;
    double eig_tol = 1e-10;
    /// Largest discarded squared weight per two-site split.
    double svd_tol = 1e-14;
    /// Amplitude of random perturbations added to single-site updates.
    double noise = 0.0;
    std::uint64_t seed = 1;
};

/// Throws SpecError for an empty or decreasing schedule or non-positive tolerances.
void validate(const DmrgConfig &cfg);

struct DmrgReport {
    std::vector<double> energies;          ///< <H> after each full sweep
    std::vector<double> variances;         ///< <H^2> - <H>^2 after each full sweep
    std::vector<double> max_trunc_weights; ///< largest discarded weight of each sweep
    double energy = 0.0;
    double variance = 0.0;
    bool converged = false;
};

/// Working state of a sweep: the chain in mixed gauge at site 0 plus cached
/// environments (left_[k] covers sites < k, right_[k] covers sites >= k).
class DmrgSweeper {
public:
    DmrgSweeper(const MatrixProductOperator &op, const MatrixProductState &init);

    /// Left-to-right then right-to-left pass. Returns the lowest local
    /// eigenvalue met on the way back and updates `max_trunc`.
    double sweep_once(const DmrgConfig &cfg, std::size_t bond_dim, double &max_trunc, std::mt19937_64 &rng);
    MatrixProductState state() const;

private:
    Vector apply_two(const Vector &theta, std::size_t i, const std::vector<std::size_t> &shape) const;
    Vector apply_one(const Vector &a, std::size_t i, const std::vector<std::size_t> &shape) const;
    double update_pair(std::size_t i, bool moving_right, const DmrgConfig &cfg, std::size_t bond_dim, double &max_trunc);
    double update_site(std::size_t i, bool moving_right, const DmrgConfig &cfg, std::mt19937_64 &rng);
    void check_environment(std::size_t left, std::size_t right) const;

    const MatrixProductOperator &op_;
    std::vector<Tensor> sites_;
    std::vector<std::optional<Tensor>> left_;
    std::vector<std::optional<Tensor>> right_;
};

struct DmrgResult {
    MatrixProductState state;
    DmrgReport report;
};

/// Variational ground state of an open, Hermitian MPO. Non-convergence is
/// reported through `report.converged`, never thrown.
DmrgResult ground_state(const MatrixProductOperator &op, const DmrgConfig &cfg,
                        const std::optional<MatrixProductState> &init = std::nullopt);

/// <H^2> - <H>^2 for a normalized state, via the MPO of H^2.
double energy_variance(const MatrixProductState &mps, const MatrixProductOperator &op);

/// Site-wise product MPO representing a * b.
MatrixProductOperator mpo_product(const MatrixProductOperator &a, const MatrixProductOperator &b);

/// Gram matrix K2 of the map from the site-k tensor to the full state. The
/// identity when the state is in mixed gauge centered at k.
Matrix local_metric(const MatrixProductState &mps, std::size_t k);

DmrgConfig dmrg_config_from_json(const std::string &text);
std::string dmrg_config_to_json(const DmrgConfig &cfg);
std::string dmrg_report_to_json(const DmrgReport &report);
/// CSV with columns sweep,energy,variance,max_trunc_weight.
void write_dmrg_csv(std::ostream &os, const DmrgReport &report);

} // namespace tnet
