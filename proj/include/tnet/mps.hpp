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
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tnet/tensor.hpp"

namespace tnet {

enum class Boundary { open, periodic };

enum class GaugeKind { none, left, right, mixed };

/// Gauge metadata. `center` is meaningful for `mixed` only: sites before it are
/// left-canonical, sites after it right-canonical.
struct Gauge {
    GaugeKind kind = GaugeKind::none;
    std::size_t center = 0;

    static Gauge left() { return {GaugeKind::left, 0}; }
    static Gauge right() { return {GaugeKind::right, 0}; }
    static Gauge mixed(std::size_t c) { return {GaugeKind::mixed, c}; }
};

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string &s);

/// Site tensor labels: left bond, right bond, physical.
inline const Label kLeft = "l";
inline const Label kRight = "r";
inline const Label kPhys = "p";

/// Finite matrix product state. Site k holds A^(k) with labels (l, r, p).
///
/// Open chains have outer bonds of extent 1. Periodic chains close the trace
/// through the bond between the last and the first site. Schmidt weights, when
/// present, hold the squared Schmidt values of each internal bond b (the cut
/// between sites b and b+1) and sum to one.
class MatrixProductState {
public:
    MatrixProductState() = default;
    MatrixProductState(std::vector<Tensor> sites, Boundary boundary);

    std::size_t size() const noexcept { return sites_.size(); }
    Boundary boundary() const noexcept { return boundary_; }
    const Gauge &gauge() const noexcept { return gauge_; }
    const Tensor &site(std::size_t k) const { return sites_.at(k); }
    const std::vector<Tensor> &sites() const noexcept { return sites_; }

    std::size_t phys_dim(std::size_t k) const { return sites_.at(k).dim(kPhys); }
    std::vector<std::size_t> phys_dims() const;
    /// Extent of the bond to the right of site k (k = n-1 is the closing bond).
    std::size_t bond_dim(std::size_t k) const { return sites_.at(k).dim(kRight); }
    std::vector<std::size_t> bond_dims() const;
    std::size_t max_bond_dim() const;

    const std::optional<std::vector<std::vector<double>>> &schmidt_weights() const noexcept { return schmidt_; }

    /// Replaces site k; clears gauge and Schmidt metadata.
    void set_site(std::size_t k, Tensor t);
    /// Replaces site k, keeping metadata. The caller vouches for it.
    void set_site_raw(std::size_t k, Tensor t) { sites_.at(k) = std::move(t); }
    void set_gauge(Gauge g) { gauge_ = g; }
    void set_schmidt_weights(std::optional<std::vector<std::vector<double>>> w) { schmidt_ = std::move(w); }

    /// Complex Gaussian site tensors with bonds min(D, d^k, d^(n-k)), right-canonicalized.
    static MatrixProductState random(const std::vector<std::size_t> &phys_dims, std::size_t bond_dim,
                                     std::mt19937_64 &rng);

private:
    void check_shapes() const;

    std::vector<Tensor> sites_;
    Boundary boundary_ = Boundary::open;
    Gauge gauge_;
    std::optional<std::vector<std::vector<double>>> schmidt_;
};

/// Successive Schmidt decomposition of a dense vector (site 0 most significant).
/// Singular values whose tail weight stays below tol^2 are dropped.
MatrixProductState from_dense(const Vector &psi, const std::vector<std::size_t> &phys_dims, double tol = 1e-12);

inline constexpr std::size_t kDefaultDenseCap = std::size_t{1} << 20;

/// Coefficients c_{j1..jn} as a dense vector, site 0 most significant.
Vector to_dense(const MatrixProductState &mps, std::size_t cap = kDefaultDenseCap);

/// Inserts X X^{-1} on bond k (between sites k and k+1, or the closing bond).
MatrixProductState apply_gauge(const MatrixProductState &mps, std::size_t bond, const Matrix &x,
                               double condition_bound = 1e12);

struct CanonicalTarget {
    GaugeKind kind = GaugeKind::right;
    std::size_t center = 0;
};

/// Brings an open MPS into left, right or mixed canonical form, normalizes it
/// and fills the Schmidt weights. Numerically zero Schmidt values are removed.
MatrixProductState canonicalize(const MatrixProductState &mps, CanonicalTarget target = {});

struct CompressResult {
    MatrixProductState state;
    double truncation_weight = 0.0;
};

/// Left-to-right truncation from right-canonical form; the result is normalized
/// and right-canonical. `tol` bounds the discarded squared weight per cut.
CompressResult compress(const MatrixProductState &mps, std::optional<std::size_t> max_bond,
                        std::optional<double> tol);

struct EntanglementData {
    std::size_t cut = 0;
    std::vector<double> schmidt_values;

    /// Squared Schmidt values, the spectrum of the reduced state.
    std::vector<double> spectrum() const;
    /// S_alpha = log2(tr rho^alpha) / (1 - alpha); alpha = 0, 1, infinity handled as limits.
    double renyi(double alpha) const;
    double von_neumann() const { return renyi(1.0); }
    /// -ln p_i, the levels of the entanglement Hamiltonian.
    std::vector<double> hamiltonian_levels() const;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Schmidt data for the cut between sites k-1 and k, 1 <= k <= n-1.
EntanglementData entanglement_at_cut(const MatrixProductState &mps, std::size_t k);
std::vector<EntanglementData> entanglement_scan(const MatrixProductState &mps);

/// Smallest L <= l_max for which the block map from D x D matrices to L-site
/// states has rank D^2. `a` carries labels (l, r, p).
std::optional<std::size_t> injectivity_length(const Tensor &a, std::size_t l_max);

/// Number of stored complex amplitudes.
std::size_t parameter_count(const MatrixProductState &mps);

/// Open chain with bond D^2 representing the same state as a periodic one.
MatrixProductState periodic_to_open(const MatrixProductState &mps);

// Fixtures.
MatrixProductState ghz_state(std::size_t n, Boundary boundary = Boundary::open);
MatrixProductState cluster_state(std::size_t n);
/// Spin-1 valence-bond state, physical order (m=+1, 0, -1). Open chains use
/// boundary vectors selecting the first virtual state at both ends.
MatrixProductState aklt_state(std::size_t n, Boundary boundary = Boundary::open);
/// Product state from per-site local vectors (normalized here).
MatrixProductState product_state(const std::vector<Vector> &local);
/// Computational basis product state.
MatrixProductState basis_state(const std::vector<std::size_t> &digits, const std::vector<std::size_t> &phys_dims);
/// Bulk tensors of the valence-bond and GHZ fixtures, labels (l, r, p).
Tensor aklt_tensor();
Tensor ghz_tensor();
/// Dispatch by name: ghz, ghz-periodic, cluster, aklt, aklt-periodic.
MatrixProductState build_fixture(const std::string &name, std::size_t n);

// Persistence.
void save_mps(const std::filesystem::path &path, const MatrixProductState &mps);
MatrixProductState load_mps(const std::filesystem::path &path);
void write_mps(std::ostream &os, const MatrixProductState &mps);
MatrixProductState read_mps(std::istream &is);

/// CSV with columns cut,S0,S1,S2,Sinf,schmidt_1..schmidt_m.
void write_entanglement_csv(std::ostream &os, const std::vector<EntanglementData> &rows);

} // namespace tnet
