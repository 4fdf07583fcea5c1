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

#include "tnet/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace tnet {

namespace {

std::size_t product(const std::vector<std::size_t> &dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void check_unique(const std::vector<Label> &labels) {
    std::unordered_set<Label> seen;
    for (const auto &l : labels) {
        if (!seen.insert(l).second) throw LabelError("duplicate tensor label '" + l + "'");
    }
}

std::vector<std::size_t> strides_of(const std::vector<std::size_t> &dims) {
    std::vector<std::size_t> strides(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
    return strides;
}

} // namespace

Tensor::Tensor() : data_(1, cplx{0.0, 0.0}) {}

Tensor::Tensor(std::vector<Label> labels, std::vector<std::size_t> dims)
    : labels_(std::move(labels)), dims_(std::move(dims)) {
    if (labels_.size() != dims_.size()) throw DimensionError("label count does not match dimension count");
    for (auto d : dims_) {
        if (d == 0) throw DimensionError("tensor extents must be positive");
    }
    check_unique(labels_);
    data_.assign(product(dims_), cplx{0.0, 0.0});
}

Tensor::Tensor(std::vector<Label> labels, std::vector<std::size_t> dims, std::vector<cplx> data)
    : Tensor(std::move(labels), std::move(dims)) {
    if (data.size() != data_.size()) {
        throw DimensionError("amplitude count " + std::to_string(data.size()) + " does not match extents (" +
                             std::to_string(data_.size()) + ")");
    }
    data_ = std::move(data);
}

Tensor Tensor::scalar(cplx value) {
    Tensor t;
    t.data_[0] = value;
    return t;
}

Tensor Tensor::identity(const Label &row, const Label &col, std::size_t dim) {
    Tensor t({row, col}, {dim, dim});
    for (std::size_t i = 0; i < dim; ++i) t.data_[i * dim + i] = 1.0;
    return t;
}

Tensor Tensor::random(std::vector<Label> labels, std::vector<std::size_t> dims, std::mt19937_64 &rng) {
    Tensor t(std::move(labels), std::move(dims));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto &x : t.data_) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        x = cplx{re, im};
    }
    return t;
}

Tensor Tensor::from_matrix(const Matrix &m, const Label &row, const Label &col) {
    return from_matrix(m, {row}, {static_cast<std::size_t>(m.rows())}, {col}, {static_cast<std::size_t>(m.cols())});
}

Tensor Tensor::from_matrix(const Matrix &m, std::vector<Label> row_labels, std::vector<std::size_t> row_dims,
                           std::vector<Label> col_labels, std::vector<std::size_t> col_dims) {
    if (product(row_dims) != static_cast<std::size_t>(m.rows()) ||
        product(col_dims) != static_cast<std::size_t>(m.cols())) {
        throw DimensionError("matrix shape does not match requested index extents");
    }
    std::vector<Label> labels = std::move(row_labels);
    labels.insert(labels.end(), col_labels.begin(), col_labels.end());
    std::vector<std::size_t> dims = std::move(row_dims);
    dims.insert(dims.end(), col_dims.begin(), col_dims.end());
    Tensor t(std::move(labels), std::move(dims));
    Eigen::Map<RowMajorMatrix>(t.data_.data(), m.rows(), m.cols()) = m;
    return t;
}

bool Tensor::has_label(const Label &label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t Tensor::index_of(const Label &label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw LabelError("unknown label '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t Tensor::offset(std::span<const std::size_t> index) const {
    if (index.size() != dims_.size()) throw DimensionError("index arity does not match tensor rank");
    std::size_t off = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (index[k] >= dims_[k]) throw DimensionError("index out of range");
        off = off * dims_[k] + index[k];
    }
    return off;
}

cplx &Tensor::at(std::initializer_list<std::size_t> index) {
    return data_[offset(std::span<const std::size_t>(index.begin(), index.size()))];
}
cplx Tensor::at(std::initializer_list<std::size_t> index) const {
    return data_[offset(std::span<const std::size_t>(index.begin(), index.size()))];
}
cplx &Tensor::at(std::span<const std::size_t> index) { return data_[offset(index)]; }
cplx Tensor::at(std::span<const std::size_t> index) const { return data_[offset(index)]; }

cplx Tensor::value() const {
    if (rank() != 0) throw DimensionError("value() requires a rank-0 tensor");
    return data_[0];
}

Tensor Tensor::permuted(const std::vector<Label> &order) const {
    if (order.size() != labels_.size()) throw LabelError("permutation must list every label exactly once");
    std::vector<std::size_t> perm(order.size());
    bool is_identity = true;
    for (std::size_t k = 0; k < order.size(); ++k) {
        perm[k] = index_of(order[k]);
        is_identity = is_identity && perm[k] == k;
    }
    check_unique(order);
    if (is_identity) return *this;

    std::vector<std::size_t> new_dims(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) new_dims[k] = dims_[perm[k]];
    Tensor out(order, new_dims);

    const auto src_strides = strides_of(dims_);
    std::vector<std::size_t> stride(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) stride[k] = src_strides[perm[k]];

    // Odometer over the output, innermost index unrolled.
    const std::size_t r = order.size();
    const std::size_t inner = new_dims[r - 1];
    const std::size_t inner_stride = stride[r - 1];
    std::vector<std::size_t> idx(r, 0);
    std::size_t src = 0;
    const std::size_t total = out.data_.size();
    for (std::size_t dst = 0; dst < total; dst += inner) {
        for (std::size_t i = 0; i < inner; ++i) out.data_[dst + i] = data_[src + i * inner_stride];
        for (std::size_t k = r - 1; k-- > 0;) {
            ++idx[k];
            src += stride[k];
            if (idx[k] < new_dims[k]) break;
            src -= stride[k] * new_dims[k];
            idx[k] = 0;
        }
    }
    return out;
}

Tensor Tensor::relabeled(const Label &from, const Label &to) const {
    Tensor out = *this;
    out.labels_[index_of(from)] = to;
    check_unique(out.labels_);
    return out;
}

Tensor Tensor::relabeled(const std::vector<LabelPair> &renames) const {
    Tensor out = *this;
    for (const auto &[from, to] : renames) out.labels_[index_of(from)] = to;
    check_unique(out.labels_);
    return out;
}

Tensor Tensor::fused(const std::vector<Label> &group, const Label &fused_label) const {
    std::vector<Label> order;
    std::vector<std::size_t> dims;
    for (std::size_t k = 0; k < labels_.size(); ++k) {
        if (std::find(group.begin(), group.end(), labels_[k]) == group.end()) {
            order.push_back(labels_[k]);
            dims.push_back(dims_[k]);
        }
    }
    std::size_t fused_dim = 1;
    for (const auto &l : group) fused_dim *= dim(l);
    order.insert(order.end(), group.begin(), group.end());
    Tensor out = permuted(order);
    order.resize(order.size() - group.size());
    order.push_back(fused_label);
    dims.push_back(fused_dim);
    out.labels_ = std::move(order);
    out.dims_ = std::move(dims);
    check_unique(out.labels_);
    return out;
}

Tensor Tensor::split(const Label &label, const std::vector<Label> &parts,
                     const std::vector<std::size_t> &part_dims) const {
    const std::size_t pos = index_of(label);
    if (parts.size() != part_dims.size() || product(part_dims) != dims_[pos]) {
        throw DimensionError("split extents do not multiply to the original extent of '" + label + "'");
    }
    Tensor out = *this;
    out.labels_.erase(out.labels_.begin() + static_cast<std::ptrdiff_t>(pos));
    out.dims_.erase(out.dims_.begin() + static_cast<std::ptrdiff_t>(pos));
    out.labels_.insert(out.labels_.begin() + static_cast<std::ptrdiff_t>(pos), parts.begin(), parts.end());
    out.dims_.insert(out.dims_.begin() + static_cast<std::ptrdiff_t>(pos), part_dims.begin(), part_dims.end());
    check_unique(out.labels_);
    return out;
}

Tensor Tensor::conj() const {
    Tensor out = *this;
    for (auto &x : out.data_) x = std::conj(x);
    return out;
}

double Tensor::norm() const {
    double s = 0.0;
    for (const auto &x : data_) s += std::norm(x);
    return std::sqrt(s);
}

Matrix Tensor::matrix(const std::vector<Label> &row_labels, const std::vector<Label> &col_labels) const {
    std::vector<Label> order = row_labels;
    order.insert(order.end(), col_labels.begin(), col_labels.end());
    const Tensor p = permuted(order);
    std::size_t rows = 1;
    for (const auto &l : row_labels) rows *= dim(l);
    const std::size_t cols = rows == 0 ? 0 : p.size() / rows;
    return Eigen::Map<const RowMajorMatrix>(p.data_.data(), static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(cols));
}

Tensor &Tensor::operator*=(cplx s) {
    for (auto &x : data_) x *= s;
    return *this;
}

Tensor &Tensor::operator+=(const Tensor &other) {
    const Tensor o = other.permuted(labels_);
    if (o.dims_ != dims_) throw DimensionError("extent mismatch in tensor sum");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

Tensor &Tensor::operator-=(const Tensor &other) {
    const Tensor o = other.permuted(labels_);
    if (o.dims_ != dims_) throw DimensionError("extent mismatch in tensor difference");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

Tensor operator*(Tensor t, cplx s) { return t *= s; }
Tensor operator*(cplx s, Tensor t) { return t *= s; }
Tensor operator+(Tensor a, const Tensor &b) { return a += b; }
Tensor operator-(Tensor a, const Tensor &b) { return a -= b; }

Tensor contract(const Tensor &a, const Tensor &b, const std::vector<LabelPair> &pairs) {
    std::vector<Label> a_paired, b_paired;
    std::size_t k = 1;
    for (const auto &[la, lb] : pairs) {
        const std::size_t da = a.dim(la);
        const std::size_t db = b.dim(lb);
        if (da != db) {
            throw DimensionError("cannot contract '" + la + "' (extent " + std::to_string(da) + ") with '" + lb +
                                 "' (extent " + std::to_string(db) + ")");
        }
        a_paired.push_back(la);
        b_paired.push_back(lb);
        k *= da;
    }
    std::vector<Label> a_free, b_free, labels;
    std::vector<std::size_t> dims;
    std::size_t m = 1, n = 1;
    for (std::size_t i = 0; i < a.rank(); ++i) {
        if (std::find(a_paired.begin(), a_paired.end(), a.labels()[i]) == a_paired.end()) {
            a_free.push_back(a.labels()[i]);
            labels.push_back(a.labels()[i]);
            dims.push_back(a.dims()[i]);
            m *= a.dims()[i];
        }
    }
    for (std::size_t i = 0; i < b.rank(); ++i) {
        if (std::find(b_paired.begin(), b_paired.end(), b.labels()[i]) == b_paired.end()) {
            b_free.push_back(b.labels()[i]);
            labels.push_back(b.labels()[i]);
            dims.push_back(b.dims()[i]);
            n *= b.dims()[i];
        }
    }

    std::vector<Label> a_order = a_free;
    a_order.insert(a_order.end(), a_paired.begin(), a_paired.end());
    std::vector<Label> b_order = b_paired;
    b_order.insert(b_order.end(), b_free.begin(), b_free.end());
    const Tensor ap = a.permuted(a_order);
    const Tensor bp = b.permuted(b_order);

    Tensor out = labels.empty() ? Tensor() : Tensor(labels, dims);
    using Idx = Eigen::Index;
    Eigen::Map<const RowMajorMatrix> am(ap.data().data(), static_cast<Idx>(m), static_cast<Idx>(k));
    Eigen::Map<const RowMajorMatrix> bm(bp.data().data(), static_cast<Idx>(k), static_cast<Idx>(n));
    Eigen::Map<RowMajorMatrix> cm(out.data().data(), static_cast<Idx>(m), static_cast<Idx>(n));
    cm.noalias() = am * bm;
    return out;
}

Tensor trace(const Tensor &t, const std::vector<LabelPair> &pairs) {
    std::vector<Label> row, col;
    for (const auto &[x, y] : pairs) {
        if (t.dim(x) != t.dim(y)) throw DimensionError("traced labels '" + x + "' and '" + y + "' differ in extent");
        row.push_back(x);
        col.push_back(y);
    }
    std::vector<Label> rest;
    std::vector<std::size_t> rest_dims;
    for (std::size_t i = 0; i < t.rank(); ++i) {
        const auto &l = t.labels()[i];
        if (std::find(row.begin(), row.end(), l) == row.end() && std::find(col.begin(), col.end(), l) == col.end()) {
            rest.push_back(l);
            rest_dims.push_back(t.dims()[i]);
        }
    }
    std::vector<Label> order = rest;
    order.insert(order.end(), row.begin(), row.end());
    order.insert(order.end(), col.begin(), col.end());
    const Tensor p = t.permuted(order);
    std::size_t k = 1;
    for (const auto &l : row) k *= t.dim(l);
    const std::size_t outer = p.size() / (k * k);
    Tensor out = rest.empty() ? Tensor() : Tensor(rest, rest_dims);
    for (std::size_t o = 0; o < outer; ++o) {
        cplx s = 0.0;
        for (std::size_t i = 0; i < k; ++i) s += p.data()[o * k * k + i * k + i];
        out.data()[o] = s;
    }
    return out;
}

double max_abs_diff(const Tensor &a, const Tensor &b) {
    const Tensor bp = b.permuted(a.labels());
    if (bp.dims() != a.dims()) throw DimensionError("extent mismatch in comparison");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - bp.data()[i]));
    return m;
}

} // namespace tnet
