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

#include "tnet/mpo.hpp"

#include <algorithm>
#include <map>

#include <unsupported/Eigen/KroneckerProduct>

namespace tnet {

namespace {

const std::vector<Label> kMpoOrder{kOpLeft, kOpRight, kOut, kIn};

// Channel keys of the automaton. A pending channel is keyed by the operator ids
// still to be placed on the following sites.
using Key = std::vector<int>;
const Key kStart{-1};
const Key kDone{-2};

class OpTable {
public:
    int id(const Matrix &m) {
        for (std::size_t i = 0; i < ops_.size(); ++i) {
            if (ops_[i].rows() == m.rows() && ops_[i] == m) return static_cast<int>(i);
        }
        ops_.push_back(m);
        return static_cast<int>(ops_.size() - 1);
    }
    const Matrix &at(int i) const { return ops_[static_cast<std::size_t>(i)]; }

private:
    std::vector<Matrix> ops_;
};

struct EncodedTerm {
    cplx coefficient;
    std::size_t first;
    Matrix first_op;
    Key rest; // ids for sites first+1 .. last
};

void write_block(Tensor &w, std::size_t row, std::size_t col, const Matrix &op, bool accumulate) {
    const auto d = static_cast<std::size_t>(op.rows());
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            cplx &slot = w.at({row, col, a, b});
            const cplx v = op(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            slot = accumulate ? slot + v : v;
        }
    }
}

Matrix site_block(const Tensor &w, std::size_t row, std::size_t col) {
    const std::size_t dout = w.dim(kOut), din = w.dim(kIn);
    Matrix m(static_cast<Eigen::Index>(dout), static_cast<Eigen::Index>(din));
    for (std::size_t a = 0; a < dout; ++a)
        for (std::size_t b = 0; b < din; ++b)
            m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = w.at({row, col, a, b});
    return m;
}

} // namespace

MatrixProductOperator::MatrixProductOperator(std::vector<Tensor> sites, Boundary boundary, bool hermitian)
    : sites_(std::move(sites)), boundary_(boundary), hermitian_(hermitian) {
    if (sites_.empty()) throw DimensionError("an operator needs at least one site");
    for (auto &t : sites_) t = t.permuted(kMpoOrder);
    for (std::size_t k = 0; k + 1 < sites_.size(); ++k) {
        if (sites_[k].dim(kOpRight) != sites_[k + 1].dim(kOpLeft)) {
            throw DimensionError("operator bond " + std::to_string(k) + " extents disagree");
        }
    }
    if (sites_.front().dim(kOpLeft) != 1 || sites_.back().dim(kOpRight) != 1) {
        throw DimensionError("operator end tensors need outer bond extent 1");
    }
}

std::vector<std::size_t> MatrixProductOperator::bond_dims() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k + 1 < sites_.size(); ++k) out.push_back(sites_[k].dim(kOpRight));
    return out;
}

std::size_t MatrixProductOperator::max_bond_dim() const {
    std::size_t m = 1;
    for (auto d : bond_dims()) m = std::max(m, d);
    return m;
}

MatrixProductOperator mpo_from_terms(const std::vector<OperatorString> &terms, std::size_t n, std::size_t d,
                                     Boundary boundary, bool hermitian) {
    if (n == 0) throw DimensionError("an operator needs at least one site");
    const auto dd = static_cast<Eigen::Index>(d);
    OpTable table;
    const int identity = table.id(Matrix::Identity(dd, dd));

    std::vector<EncodedTerm> encoded;
    for (const auto &t : terms) {
        if (t.sites.empty() || t.sites.back() >= n) throw DimensionError("operator string leaves the chain");
        EncodedTerm e{t.coefficient, t.sites.front(), t.ops.front(), {}};
        std::size_t next = 1;
        for (std::size_t s = t.sites.front() + 1; s <= t.sites.back(); ++s) {
            if (next < t.sites.size() && t.sites[next] == s) {
                e.rest.push_back(table.id(t.ops[next++]));
            } else {
                e.rest.push_back(identity);
            }
        }
        for (const auto &op : t.ops) {
            if (op.rows() != dd || op.cols() != dd) throw DimensionError("operator does not match local dimension");
        }
        encoded.push_back(std::move(e));
    }

    // Channel lists per bond; bond b sits between sites b and b+1, bond n-1 is the right edge.
    std::vector<std::map<Key, std::size_t>> channels(n);
    for (std::size_t b = 0; b + 1 < n; ++b) {
        channels[b][kStart] = 0;
        channels[b][kDone] = 1;
    }
    channels[n - 1][kDone] = 0;
    for (const auto &e : encoded) {
        for (std::size_t b = e.first; b < e.first + e.rest.size(); ++b) {
            Key suffix(e.rest.begin() + static_cast<std::ptrdiff_t>(b - e.first), e.rest.end());
            channels[b].emplace(std::move(suffix), channels[b].size());
        }
    }
    const std::map<Key, std::size_t> left_edge{{kStart, 0}};

    std::vector<Tensor> sites;
    for (std::size_t k = 0; k < n; ++k) {
        const auto &left = k == 0 ? left_edge : channels[k - 1];
        const auto &right = channels[k];
        Tensor w(kMpoOrder, {left.size(), right.size(), d, d});
        const Matrix &id = table.at(identity);
        if (left.count(kStart) && right.count(kStart)) write_block(w, left.at(kStart), right.at(kStart), id, false);
        if (left.count(kDone) && right.count(kDone)) write_block(w, left.at(kDone), right.at(kDone), id, false);
        for (const auto &e : encoded) {
            if (e.first != k) continue;
            const Key &target = e.rest.empty() ? kDone : e.rest;
            write_block(w, left.at(kStart), right.at(target), e.coefficient * e.first_op, true);
        }
        for (const auto &[key, row] : left) {
            if (key == kStart || key == kDone) continue;
            const Key target = key.size() == 1 ? kDone : Key(key.begin() + 1, key.end());
            write_block(w, row, right.at(target), table.at(key.front()), false);
        }
        sites.push_back(std::move(w));
    }
    return MatrixProductOperator(std::move(sites), boundary, hermitian);
}

MatrixProductOperator build_mpo(const ModelSpec &spec) {
    return mpo_from_terms(operator_strings(spec), spec.n, local_dim(spec), spec.boundary, is_hermitian(spec));
}

MatrixProductOperator identity_mpo(const std::vector<std::size_t> &phys_dims) {
    std::vector<Tensor> sites;
    for (auto d : phys_dims) {
        Tensor w(kMpoOrder, {1, 1, d, d});
        for (std::size_t a = 0; a < d; ++a) w.at({0, 0, a, a}) = 1.0;
        sites.push_back(std::move(w));
    }
    return MatrixProductOperator(std::move(sites), Boundary::open, true);
}

SparseMatrix to_sparse(const MatrixProductOperator &op, std::size_t cap) {
    std::size_t total = 1;
    for (std::size_t k = 0; k < op.size(); ++k) {
        total *= op.phys_dim(k);
        if (total > cap) throw SizeError("operator dimension exceeds the configured cap of " + std::to_string(cap));
    }
    std::vector<SparseMatrix> acc(1);
    acc[0].resize(1, 1);
    acc[0].insert(0, 0) = 1.0;
    for (const Tensor &w : op.sites()) {
        const std::size_t wl = w.dim(kOpLeft), wr = w.dim(kOpRight);
        std::vector<SparseMatrix> next(wr);
        const Eigen::Index rows = acc[0].rows() * static_cast<Eigen::Index>(w.dim(kOut));
        const Eigen::Index cols = acc[0].cols() * static_cast<Eigen::Index>(w.dim(kIn));
        for (std::size_t c = 0; c < wr; ++c) {
            next[c].resize(rows, cols);
            for (std::size_t r = 0; r < wl; ++r) {
                const Matrix block = site_block(w, r, c);
                if (block.cwiseAbs().maxCoeff() == 0.0 || acc[r].nonZeros() == 0) continue;
                const SparseMatrix sb = block.sparseView();
                next[c] += SparseMatrix(Eigen::kroneckerProduct(acc[r], sb));
            }
        }
        acc = std::move(next);
    }
    acc[0].prune(cplx(0.0, 0.0));
    return acc[0];
}

Matrix to_dense(const MatrixProductOperator &op, std::size_t cap) { return Matrix(to_sparse(op, cap)); }

MatrixProductState apply_mpo(const MatrixProductOperator &op, const MatrixProductState &mps) {
    const MatrixProductState open = periodic_to_open(mps);
    if (op.size() != open.size()) throw ShapeError("operator and state have different lengths");
    std::vector<Tensor> sites;
    for (std::size_t k = 0; k < open.size(); ++k) {
        if (op.phys_dim(k) != open.phys_dim(k)) throw ShapeError("operator and state local dimensions differ");
        const Tensor t = contract(open.site(k), op.site(k), {{kPhys, kIn}});
        sites.push_back(t.fused({kLeft, kOpLeft}, "L").fused({kRight, kOpRight}, "R").relabeled({{"L", kLeft},
                                                                                                 {"R", kRight},
                                                                                                 {kOut, kPhys}}));
    }
    return MatrixProductState(std::move(sites), Boundary::open);
}

Tensor boundary_environment() { return Tensor({"b", "w", "k"}, {1, 1, 1}, {cplx(1.0)}); }

Tensor extend_left(const Tensor &env, const Tensor &ket, const Tensor &w, const Tensor &bra) {
    const Tensor t1 = contract(env, ket.relabeled({{kLeft, "k"}, {kRight, "k2"}}), {{"k", "k"}});
    const Tensor t2 = contract(t1, w.relabeled({{kOpLeft, "w"}, {kOpRight, "w2"}}), {{"w", "w"}, {kPhys, kIn}});
    const Tensor t3 =
        contract(t2, bra.conj().relabeled({{kLeft, "b"}, {kRight, "b2"}, {kPhys, kOut}}), {{"b", "b"}, {kOut, kOut}});
    return t3.relabeled({{"k2", "k"}, {"w2", "w"}, {"b2", "b"}}).permuted({"b", "w", "k"});
}

Tensor extend_right(const Tensor &env, const Tensor &ket, const Tensor &w, const Tensor &bra) {
    const Tensor t1 = contract(env, ket.relabeled({{kRight, "k"}, {kLeft, "k2"}}), {{"k", "k"}});
    const Tensor t2 = contract(t1, w.relabeled({{kOpRight, "w"}, {kOpLeft, "w2"}}), {{"w", "w"}, {kPhys, kIn}});
    const Tensor t3 =
        contract(t2, bra.conj().relabeled({{kRight, "b"}, {kLeft, "b2"}, {kPhys, kOut}}), {{"b", "b"}, {kOut, kOut}});
    return t3.relabeled({{"k2", "k"}, {"w2", "w"}, {"b2", "b"}}).permuted({"b", "w", "k"});
}

cplx expectation_mpo(const MatrixProductState &mps, const MatrixProductOperator &op) {
    const MatrixProductState open = periodic_to_open(mps);
    if (op.size() != open.size()) throw ShapeError("operator and state have different lengths");
    Tensor env = boundary_environment();
    for (std::size_t k = 0; k < open.size(); ++k) {
        if (op.phys_dim(k) != open.phys_dim(k)) throw ShapeError("operator and state local dimensions differ");
        env = extend_left(env, open.site(k), op.site(k), open.site(k));
    }
    return env.data()[0];
}

} // namespace tnet
