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

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tnet/errors.hpp"

namespace tnet {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowMajorMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Label = std::string;
using LabelPair = std::pair<Label, Label>;

/// Dense complex tensor with named indices.
///
/// Amplitudes are stored row-major over the declared label order: the last
/// label varies fastest. A rank-0 tensor holds a single scalar. Index identity
/// is by label; operations that combine tensors match indices by name, never by
/// position.
class Tensor {
public:
    /// Rank-0 tensor holding zero.
    Tensor();
    /// Zero-filled tensor.
    Tensor(std::vector<Label> labels, std::vector<std::size_t> dims);
    Tensor(std::vector<Label> labels, std::vector<std::size_t> dims, std::vector<cplx> data);

    static Tensor scalar(cplx value);
    /// `dim` x `dim` identity with labels (row, col).
    static Tensor identity(const Label &row, const Label &col, std::size_t dim);
    /// Complex Gaussian entries (unit variance per complex component pair).
    static Tensor random(std::vector<Label> labels, std::vector<std::size_t> dims, std::mt19937_64 &rng);
    /// Matrix -> rank-2 tensor (row, col).
    static Tensor from_matrix(const Matrix &m, const Label &row, const Label &col);
    /// Matrix whose rows fuse `row_labels` and columns fuse `col_labels`.
    static Tensor from_matrix(const Matrix &m, std::vector<Label> row_labels, std::vector<std::size_t> row_dims,
                              std::vector<Label> col_labels, std::vector<std::size_t> col_dims);

    std::size_t rank() const noexcept { return labels_.size(); }
    std::size_t size() const noexcept { return data_.size(); }
    const std::vector<Label> &labels() const noexcept { return labels_; }
    const std::vector<std::size_t> &dims() const noexcept { return dims_; }
    bool has_label(const Label &label) const;
    std::size_t index_of(const Label &label) const;
    std::size_t dim(const Label &label) const { return dims_[index_of(label)]; }

    std::span<const cplx> data() const noexcept { return data_; }
    std::span<cplx> data() noexcept { return data_; }

    cplx &at(std::initializer_list<std::size_t> index);
    cplx at(std::initializer_list<std::size_t> index) const;
    cplx &at(std::span<const std::size_t> index);
    cplx at(std::span<const std::size_t> index) const;
    /// Value of a rank-0 tensor.
    cplx value() const;

    /// Reorders indices; `order` must be a permutation of the labels.
    Tensor permuted(const std::vector<Label> &order) const;
    Tensor relabeled(const Label &from, const Label &to) const;
    Tensor relabeled(const std::vector<LabelPair> &renames) const;
    /// Fuses the given labels (in that order) into a single index placed last.
    Tensor fused(const std::vector<Label> &group, const Label &fused_label) const;
    /// Splits `label` into `parts` with extents `part_dims` (row-major), in place of the original.
    Tensor split(const Label &label, const std::vector<Label> &parts, const std::vector<std::size_t> &part_dims) const;
    Tensor conj() const;
    double norm() const;

    /// Matrix view with rows fused over `row_labels`, columns over `col_labels`.
    Matrix matrix(const std::vector<Label> &row_labels, const std::vector<Label> &col_labels) const;

    Tensor &operator*=(cplx s);
    Tensor &operator+=(const Tensor &other);
    Tensor &operator-=(const Tensor &other);

private:
    std::size_t offset(std::span<const std::size_t> index) const;

    std::vector<Label> labels_;
    std::vector<std::size_t> dims_;
    std::vector<cplx> data_;
};

Tensor operator*(Tensor t, cplx s);
Tensor operator*(cplx s, Tensor t);
Tensor operator+(Tensor a, const Tensor &b);
Tensor operator-(Tensor a, const Tensor &b);

/// Sums over each (label-in-a, label-in-b) pair. The result carries the unpaired
/// labels of `a` followed by the unpaired labels of `b`.
Tensor contract(const Tensor &a, const Tensor &b, const std::vector<LabelPair> &pairs);

/// Self-contraction: sums the diagonal of each (label, label) pair within `t`.
Tensor trace(const Tensor &t, const std::vector<LabelPair> &pairs);

/// Largest absolute elementwise difference. Labels must agree as sets; `b` is
/// permuted into `a`'s order.
double max_abs_diff(const Tensor &a, const Tensor &b);

struct SvdOptions {
    std::optional<std::size_t> max_rank;
    /// Largest admissible discarded squared weight.
    std::optional<double> tol;
    Label bond_label = "bond";
};

struct SvdResult {
    Tensor left_isometry;               ///< left labels + bond
    std::vector<double> singular_values; ///< non-increasing
    Tensor right_isometry;              ///< bond + remaining labels
    double truncation_weight = 0.0;     ///< sum of squared discarded values

    /// left * diag(s) * right, contracted over the bond.
    Tensor recombine() const;
};

/// Bipartitions `t` as (left_labels | rest) and factorizes. Keeps the smallest
/// rank whose discarded squared weight is <= tol, then caps at max_rank.
SvdResult svd_split(const Tensor &t, const std::vector<Label> &left_labels, const SvdOptions &opts = {});

/// Rank kept by the truncation rule for squared-norm-sorted singular values.
std::size_t truncation_rank(std::span<const double> singular_values, std::optional<std::size_t> max_rank,
                            std::optional<double> tol);

struct EigOptions {
    double tol = 1e-10;           ///< residual target ||Hv - Ev||
    int max_matvecs = 2000;
    int krylov_dim = 40;
    Eigen::Index dense_threshold = 64; ///< below this dimension use a dense solve
    double hermiticity_tol = 1e-10;
    /// When false, an unconverged result is returned with `converged = false`.
    bool throw_on_failure = true;
};

struct LowestEigenpair {
    double value = 0.0;
    Vector vector;
    double residual = 0.0;
    int matvecs = 0;
    bool converged = false;
};

using LinearMap = std::function<Vector(const Vector &)>;

/// Lowest eigenpair of a Hermitian operator given only its action.
LowestEigenpair eig_lowest(const LinearMap &apply, Eigen::Index dim, const std::optional<Vector> &guess,
                           const EigOptions &opts = {});
LowestEigenpair eig_lowest(const Matrix &h, const std::optional<Vector> &guess, const EigOptions &opts = {});
/// `h` viewed as a matrix with rows fused over `row_labels` and columns over the rest.
LowestEigenpair eig_lowest(const Tensor &h, const std::vector<Label> &row_labels, const std::optional<Vector> &guess,
                           const EigOptions &opts = {});

struct GeneralSpectrum {
    std::vector<cplx> values; ///< sorted by non-increasing modulus
    /// right[j]: M r = lambda_j r. Empty for eigenvalues in defective blocks.
    std::vector<std::optional<Vector>> right;
    /// left[j]: l^T M = lambda_j l^T, normalized so that l^T r = 1.
    std::vector<std::optional<Vector>> left;
    bool defective = false;
};

GeneralSpectrum eig_general(const Matrix &m, double cluster_tol = 1e-8);
GeneralSpectrum eig_general(const Tensor &m, const std::vector<Label> &row_labels, double cluster_tol = 1e-8);

/// Matrix exponential (scaling and squaring with Pade approximants).
Matrix expm(const Matrix &m);

} // namespace tnet
