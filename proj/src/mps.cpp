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

#include "tnet/mps.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <Eigen/QR>
#include <Eigen/SVD>
#include <json.hpp>

#include "tnet/tensor_io.hpp"

namespace tnet {

namespace {

using json = nlohmann::json;

// Numerically zero Schmidt values, relative to the norm of the spectrum.
constexpr double kSchmidtFloor = 1e-14;

const std::vector<Label> kSiteOrder{kLeft, kRight, kPhys};

Matrix left_matrix(const Tensor &t) { return t.matrix({kLeft, kPhys}, {kRight}); }
Matrix right_matrix(const Tensor &t) { return t.matrix({kLeft}, {kRight, kPhys}); }

Tensor from_left_matrix(const Matrix &m, std::size_t dl, std::size_t d) {
    return Tensor::from_matrix(m, {kLeft, kPhys}, {dl, d}, {kRight}, {static_cast<std::size_t>(m.cols())})
        .permuted(kSiteOrder);
}

Tensor from_right_matrix(const Matrix &m, std::size_t dr, std::size_t d) {
    return Tensor::from_matrix(m, {kLeft}, {static_cast<std::size_t>(m.rows())}, {kRight, kPhys}, {dr, d});
}

struct ThinQr {
    Matrix q; // orthonormal columns
    Matrix r;
};

ThinQr thin_qr(const Matrix &m) {
    const Eigen::Index k = std::min(m.rows(), m.cols());
    Eigen::HouseholderQR<Matrix> qr(m);
    ThinQr out;
    out.q = qr.householderQ() * Matrix::Identity(m.rows(), k);
    out.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    return out;
}

// Makes site k right-canonical and pushes the remainder into site k-1.
void shift_left(std::vector<Tensor> &sites, std::size_t k) {
    const Tensor &a = sites[k];
    const ThinQr f = thin_qr(right_matrix(a).adjoint());
    const Tensor prev = sites[k - 1];
    sites[k] = from_right_matrix(f.q.adjoint(), a.dim(kRight), a.dim(kPhys));
    sites[k - 1] = from_left_matrix(left_matrix(prev) * f.r.adjoint(), prev.dim(kLeft), prev.dim(kPhys));
}

Eigen::BDCSVD<Matrix> thin_svd(const Matrix &m) { return Eigen::BDCSVD<Matrix>(m, Eigen::ComputeThinU | Eigen::ComputeThinV); }

void require_open(const MatrixProductState &mps, const char *what) {
    if (mps.boundary() != Boundary::open) {
        throw BoundaryError(std::string(what) + " requires an open-boundary state");
    }
}

std::string gauge_name(GaugeKind g) {
    switch (g) {
    case GaugeKind::left: return "left";
    case GaugeKind::right: return "right";
    case GaugeKind::mixed: return "mixed";
    case GaugeKind::none: break;
    }
    return "none";
}

GaugeKind gauge_from_name(const std::string &s) {
    if (s == "left") return GaugeKind::left;
    if (s == "right") return GaugeKind::right;
    if (s == "mixed") return GaugeKind::mixed;
    if (s == "none") return GaugeKind::none;
    throw FormatError("unknown gauge tag '" + s + "'");
}

} // namespace

std::string to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

Boundary boundary_from_string(const std::string &s) {
    if (s == "open") return Boundary::open;
    if (s == "periodic") return Boundary::periodic;
    throw SpecError("boundary must be 'open' or 'periodic', got '" + s + "'");
}

MatrixProductState::MatrixProductState(std::vector<Tensor> sites, Boundary boundary)
    : sites_(std::move(sites)), boundary_(boundary) {
    for (auto &t : sites_) t = t.permuted(kSiteOrder);
    check_shapes();
}

void MatrixProductState::check_shapes() const {
    if (sites_.empty()) throw DimensionError("a matrix product state needs at least one site");
    const std::size_t n = sites_.size();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (sites_[k].dim(kRight) != sites_[k + 1].dim(kLeft)) {
            throw DimensionError("bond " + std::to_string(k) + " extents disagree");
        }
    }
    if (boundary_ == Boundary::open) {
        if (sites_.front().dim(kLeft) != 1 || sites_.back().dim(kRight) != 1) {
            throw DimensionError("open-boundary end tensors need outer bond extent 1");
        }
    } else if (sites_.back().dim(kRight) != sites_.front().dim(kLeft)) {
        throw DimensionError("closing bond extents disagree");
    }
}

std::vector<std::size_t> MatrixProductState::phys_dims() const {
    std::vector<std::size_t> out;
    for (const auto &t : sites_) out.push_back(t.dim(kPhys));
    return out;
}

std::vector<std::size_t> MatrixProductState::bond_dims() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k + 1 < sites_.size(); ++k) out.push_back(sites_[k].dim(kRight));
    if (boundary_ == Boundary::periodic) out.push_back(sites_.back().dim(kRight));
    return out;
}

std::size_t MatrixProductState::max_bond_dim() const {
    std::size_t d = 1;
    for (const auto &t : sites_) d = std::max({d, t.dim(kLeft), t.dim(kRight)});
    return d;
}

void MatrixProductState::set_site(std::size_t k, Tensor t) {
    sites_.at(k) = t.permuted(kSiteOrder);
    gauge_ = Gauge{};
    schmidt_.reset();
    check_shapes();
}

MatrixProductState MatrixProductState::random(const std::vector<std::size_t> &phys_dims, std::size_t bond_dim,
                                              std::mt19937_64 &rng) {
    const std::size_t n = phys_dims.size();
    if (n == 0 || bond_dim == 0) throw DimensionError("random state needs n >= 1 and D >= 1");
    std::vector<std::size_t> bonds(n + 1, 1);
    for (std::size_t k = 1; k < n; ++k) {
        std::size_t left = 1, right = 1;
        for (std::size_t j = 0; j < k && left < bond_dim; ++j) left *= phys_dims[j];
        for (std::size_t j = k; j < n && right < bond_dim; ++j) right *= phys_dims[j];
        bonds[k] = std::min({bond_dim, left, right});
    }
    std::vector<Tensor> sites;
    for (std::size_t k = 0; k < n; ++k) {
        sites.push_back(Tensor::random(kSiteOrder, {bonds[k], bonds[k + 1], phys_dims[k]}, rng));
    }
    return canonicalize(MatrixProductState(std::move(sites), Boundary::open));
}

MatrixProductState from_dense(const Vector &psi, const std::vector<std::size_t> &phys_dims, double tol) {
    const std::size_t total =
        std::accumulate(phys_dims.begin(), phys_dims.end(), std::size_t{1}, std::multiplies<>());
    if (phys_dims.empty() || static_cast<std::size_t>(psi.size()) != total) {
        throw DimensionError("vector length does not match the product of local dimensions");
    }
    const double norm = psi.norm();
    if (norm == 0.0) throw NormalizationError("cannot decompose the zero vector");
    if (std::abs(norm - 1.0) > 1e-10) throw NormalizationError("input vector is not normalized");

    const std::size_t n = phys_dims.size();
    std::vector<Tensor> sites;
    RowMajorMatrix rest = Eigen::Map<const RowMajorMatrix>(psi.data(), 1, psi.size());
    std::size_t dl = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const std::size_t d = phys_dims[k];
        const auto rows = static_cast<Eigen::Index>(dl * d);
        const Eigen::Index cols = rest.size() / rows;
        const Matrix m = Eigen::Map<const RowMajorMatrix>(rest.data(), rows, cols);
        const auto svd = thin_svd(m);
        const Eigen::VectorXd &s = svd.singularValues();
        std::vector<double> sv(s.data(), s.data() + s.size());
        const std::size_t keep = truncation_rank(sv, std::nullopt, tol * tol);
        const auto kk = static_cast<Eigen::Index>(keep);
        sites.push_back(from_left_matrix(svd.matrixU().leftCols(kk), dl, d));
        rest = s.head(kk).cast<cplx>().asDiagonal() * svd.matrixV().leftCols(kk).adjoint();
        dl = keep;
    }
    const Matrix last = Eigen::Map<const RowMajorMatrix>(rest.data(), static_cast<Eigen::Index>(dl),
                                                         static_cast<Eigen::Index>(phys_dims.back()));
    sites.push_back(from_right_matrix(last, 1, phys_dims.back()));
    return canonicalize(MatrixProductState(std::move(sites), Boundary::open));
}

Vector to_dense(const MatrixProductState &mps, std::size_t cap) {
    std::size_t total = 1;
    for (auto d : mps.phys_dims()) {
        total *= d;
        if (total > cap) throw SizeError("dense dimension exceeds the configured cap of " + std::to_string(cap));
    }
    const std::size_t d0 = mps.site(0).dim(kLeft);
    Matrix acc = Matrix::Identity(static_cast<Eigen::Index>(d0), static_cast<Eigen::Index>(d0));
    for (const Tensor &a : mps.sites()) {
        const auto d = static_cast<Eigen::Index>(a.dim(kPhys));
        const auto dr = static_cast<Eigen::Index>(a.dim(kRight));
        const Matrix p = acc * right_matrix(a);
        Matrix next(acc.rows() * d, dr);
        for (Eigen::Index row = 0; row < acc.rows(); ++row) {
            for (Eigen::Index j = 0; j < d; ++j) {
                for (Eigen::Index b = 0; b < dr; ++b) next(row * d + j, b) = p(row, b * d + j);
            }
        }
        acc = std::move(next);
    }
    const auto block = static_cast<Eigen::Index>(total);
    Vector out = Vector::Zero(block);
    for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(d0); ++a) out += acc.block(a * block, a, block, 1);
    return out;
}

MatrixProductState apply_gauge(const MatrixProductState &mps, std::size_t bond, const Matrix &x,
                               double condition_bound) {
    const std::size_t n = mps.size();
    const bool closing = mps.boundary() == Boundary::periodic && bond == n - 1;
    if (bond + 1 >= n && !closing) throw RangeError("bond index out of range");
    const std::size_t dim = mps.bond_dim(bond);
    if (x.rows() != x.cols() || static_cast<std::size_t>(x.rows()) != dim) {
        throw DimensionError("gauge matrix must be square with the bond extent");
    }
    const Eigen::VectorXd s = Eigen::JacobiSVD<Matrix>(x).singularValues();
    const double smin = s(s.size() - 1);
    if (!(smin > 0.0) || s(0) / smin > condition_bound) {
        throw InvertibilityError("gauge matrix is singular or exceeds the condition bound");
    }
    const Matrix xinv = x.partialPivLu().inverse();
    std::vector<Tensor> sites = mps.sites();
    const std::size_t next = (bond + 1) % n;
    const Tensor &a = sites[bond];
    sites[bond] = from_left_matrix(left_matrix(a) * x, a.dim(kLeft), a.dim(kPhys));
    const Tensor &b = sites[next];
    sites[next] = from_right_matrix(xinv * right_matrix(b), b.dim(kRight), b.dim(kPhys));
    return MatrixProductState(std::move(sites), mps.boundary());
}

MatrixProductState canonicalize(const MatrixProductState &mps, CanonicalTarget target) {
    require_open(mps, "canonicalization");
    const std::size_t n = mps.size();
    std::size_t center = 0;
    switch (target.kind) {
    case GaugeKind::left: center = n - 1; break;
    case GaugeKind::right: center = 0; break;
    case GaugeKind::mixed: center = target.center; break;
    case GaugeKind::none: throw SpecError("canonicalization target must be left, right or mixed");
    }
    if (center >= n) throw RangeError("canonical center out of range");

    std::vector<Tensor> sites = mps.sites();
    for (std::size_t k = n; k-- > 1;) shift_left(sites, k);

    std::vector<std::vector<double>> weights;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const Tensor &a = sites[k];
        const auto svd = thin_svd(left_matrix(a));
        const Eigen::VectorXd &s = svd.singularValues();
        const double total = s.squaredNorm();
        if (total == 0.0) throw NormalizationError("state has zero norm");
        Eigen::Index keep = 0;
        while (keep < s.size() && s(keep) > kSchmidtFloor * std::sqrt(total)) ++keep;
        std::vector<double> w;
        for (Eigen::Index i = 0; i < keep; ++i) w.push_back(s(i) * s(i) / total);
        weights.push_back(std::move(w));
        sites[k] = from_left_matrix(svd.matrixU().leftCols(keep), a.dim(kLeft), a.dim(kPhys));
        const Matrix carry = s.head(keep).cast<cplx>().asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
        const Tensor &b = sites[k + 1];
        sites[k + 1] = from_right_matrix(carry * right_matrix(b), b.dim(kRight), b.dim(kPhys));
    }
    const double norm = sites[n - 1].norm();
    if (norm == 0.0) throw NormalizationError("state has zero norm");
    sites[n - 1] *= cplx(1.0 / norm);
    for (std::size_t k = n - 1; k > center; --k) shift_left(sites, k);

    MatrixProductState out(std::move(sites), Boundary::open);
    out.set_gauge(target.kind == GaugeKind::mixed ? Gauge::mixed(center) : Gauge{target.kind, center});
    out.set_schmidt_weights(std::move(weights));
    return out;
}

CompressResult compress(const MatrixProductState &mps, std::optional<std::size_t> max_bond,
                        std::optional<double> tol) {
    if (max_bond && *max_bond == 0) throw RangeError("maximum bond dimension must be positive");
    const MatrixProductState c = canonicalize(mps, {GaugeKind::right, 0});
    std::vector<Tensor> sites = c.sites();
    double weight = 0.0;
    for (std::size_t k = 0; k + 1 < sites.size(); ++k) {
        const Tensor &a = sites[k];
        const auto svd = thin_svd(left_matrix(a));
        const Eigen::VectorXd &s = svd.singularValues();
        std::vector<double> sv(s.data(), s.data() + s.size());
        const auto keep = static_cast<Eigen::Index>(truncation_rank(sv, max_bond, tol));
        for (Eigen::Index i = keep; i < s.size(); ++i) weight += s(i) * s(i);
        sites[k] = from_left_matrix(svd.matrixU().leftCols(keep), a.dim(kLeft), a.dim(kPhys));
        const Matrix carry = s.head(keep).cast<cplx>().asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
        const Tensor &b = sites[k + 1];
        sites[k + 1] = from_right_matrix(carry * right_matrix(b), b.dim(kRight), b.dim(kPhys));
    }
    return {canonicalize(MatrixProductState(std::move(sites), Boundary::open), {GaugeKind::right, 0}), weight};
}

std::vector<double> EntanglementData::spectrum() const {
    std::vector<double> p;
    for (double s : schmidt_values) p.push_back(s * s);
    return p;
}

double EntanglementData::renyi(double alpha) const {
    const std::vector<double> p = spectrum();
    if (p.empty()) return 0.0;
    if (alpha == 0.0) return std::log2(static_cast<double>(p.size()));
    if (std::isinf(alpha)) return -std::log2(*std::max_element(p.begin(), p.end()));
    if (alpha == 1.0) {
        double s = 0.0;
        for (double x : p) {
            if (x > 0.0) s -= x * std::log2(x);
        }
        return s;
    }
    double tr = 0.0;
    for (double x : p) tr += std::pow(x, alpha);
    return std::log2(tr) / (1.0 - alpha);
}

std::vector<double> EntanglementData::hamiltonian_levels() const {
    std::vector<double> out;
    for (double x : spectrum()) out.push_back(-std::log(x));
    return out;
}

EntanglementData entanglement_at_cut(const MatrixProductState &mps, std::size_t k) {
    require_open(mps, "entanglement analysis");
    if (k < 1 || k >= mps.size()) throw RangeError("cut index must satisfy 1 <= k <= n-1");
    const auto &w = mps.schmidt_weights();
    const std::vector<double> lam = w ? (*w)[k - 1] : canonicalize(mps).schmidt_weights()->at(k - 1);
    EntanglementData out;
    out.cut = k;
    for (double x : lam) out.schmidt_values.push_back(std::sqrt(x));
    return out;
}

std::vector<EntanglementData> entanglement_scan(const MatrixProductState &mps) {
    require_open(mps, "entanglement analysis");
    const MatrixProductState c = mps.schmidt_weights() ? mps : canonicalize(mps);
    std::vector<EntanglementData> out;
    for (std::size_t k = 1; k < c.size(); ++k) out.push_back(entanglement_at_cut(c, k));
    return out;
}

std::optional<std::size_t> injectivity_length(const Tensor &a, std::size_t l_max) {
    const Tensor t = a.permuted(kSiteOrder);
    const std::size_t bond = t.dim(kLeft);
    if (t.dim(kRight) != bond) throw DimensionError("uniform tensor needs equal left and right bond extents");
    const auto dd = static_cast<Eigen::Index>(bond);
    const std::size_t d = t.dim(kPhys);
    std::vector<Matrix> mats;
    for (std::size_t j = 0; j < d; ++j) {
        Matrix m(dd, dd);
        for (Eigen::Index x = 0; x < dd; ++x) {
            for (Eigen::Index y = 0; y < dd; ++y) {
                m(x, y) = t.at({static_cast<std::size_t>(x), static_cast<std::size_t>(y), j});
            }
        }
        mats.push_back(std::move(m));
    }
    std::vector<Matrix> basis{Matrix::Identity(dd, dd)};
    for (std::size_t len = 1; len <= l_max; ++len) {
        Matrix cols(dd * dd, static_cast<Eigen::Index>(basis.size() * d));
        Eigen::Index c = 0;
        for (const auto &b : basis) {
            for (const auto &m : mats) {
                const Matrix prod = b * m;
                cols.col(c++) = Eigen::Map<const Vector>(prod.data(), prod.size());
            }
        }
        const auto svd = thin_svd(cols);
        const Eigen::VectorXd &s = svd.singularValues();
        if (s.size() == 0 || s(0) == 0.0) return std::nullopt;
        Eigen::Index rank = 0;
        while (rank < s.size() && s(rank) > 1e-10 * s(0)) ++rank;
        if (rank == dd * dd) return len;
        basis.clear();
        for (Eigen::Index i = 0; i < rank; ++i) {
            basis.push_back(Eigen::Map<const Matrix>(svd.matrixU().col(i).data(), dd, dd));
        }
    }
    return std::nullopt;
}

std::size_t parameter_count(const MatrixProductState &mps) {
    std::size_t total = 0;
    for (const auto &t : mps.sites()) total += t.size();
    return total;
}

MatrixProductState periodic_to_open(const MatrixProductState &mps) {
    if (mps.boundary() == Boundary::open) return mps;
    const std::size_t n = mps.size();
    if (n < 2) throw DimensionError("periodic conversion needs at least two sites");
    const std::size_t dc = mps.site(0).dim(kLeft);
    std::vector<Tensor> sites;
    {
        const Tensor &a = mps.site(0);
        const std::size_t dr = a.dim(kRight), d = a.dim(kPhys);
        Tensor b(kSiteOrder, {1, dc * dr, d});
        for (std::size_t x = 0; x < dc; ++x)
            for (std::size_t y = 0; y < dr; ++y)
                for (std::size_t j = 0; j < d; ++j) b.at({0, x * dr + y, j}) = a.at({x, y, j});
        sites.push_back(std::move(b));
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const Tensor &a = mps.site(k);
        const std::size_t dl = a.dim(kLeft), dr = a.dim(kRight), d = a.dim(kPhys);
        Tensor b(kSiteOrder, {dc * dl, dc * dr, d});
        for (std::size_t x = 0; x < dc; ++x)
            for (std::size_t y = 0; y < dl; ++y)
                for (std::size_t z = 0; z < dr; ++z)
                    for (std::size_t j = 0; j < d; ++j) b.at({x * dl + y, x * dr + z, j}) = a.at({y, z, j});
        sites.push_back(std::move(b));
    }
    {
        const Tensor &a = mps.site(n - 1);
        const std::size_t dl = a.dim(kLeft), d = a.dim(kPhys);
        Tensor b(kSiteOrder, {dc * dl, 1, d});
        for (std::size_t x = 0; x < dc; ++x)
            for (std::size_t y = 0; y < dl; ++y)
                for (std::size_t j = 0; j < d; ++j) b.at({x * dl + y, 0, j}) = a.at({y, x, j});
        sites.push_back(std::move(b));
    }
    return MatrixProductState(std::move(sites), Boundary::open);
}

Tensor ghz_tensor() {
    Tensor a(kSiteOrder, {2, 2, 2});
    a.at({0, 0, 0}) = 1.0;
    a.at({1, 1, 1}) = 1.0;
    return a;
}

Tensor aklt_tensor() {
    const double r2 = std::sqrt(2.0);
    Tensor a(kSiteOrder, {2, 2, 3});
    a.at({0, 1, 0}) = r2;
    a.at({0, 0, 1}) = 1.0;
    a.at({1, 1, 1}) = -1.0;
    a.at({1, 0, 2}) = -r2;
    return a;
}

namespace {

// Restricts the outer bonds of a uniform chain to the first virtual state.
std::vector<Tensor> open_chain(const Tensor &bulk, std::size_t n) {
    const std::size_t dd = bulk.dim(kLeft), d = bulk.dim(kPhys);
    std::vector<Tensor> sites(n, bulk);
    Tensor first(kSiteOrder, {1, dd, d});
    Tensor last(kSiteOrder, {dd, 1, d});
    for (std::size_t x = 0; x < dd; ++x) {
        for (std::size_t j = 0; j < d; ++j) {
            first.at({0, x, j}) = bulk.at({0, x, j});
            last.at({x, 0, j}) = bulk.at({x, 0, j});
        }
    }
    sites.front() = first;
    sites.back() = last;
    if (n == 1) {
        Tensor only(kSiteOrder, {1, 1, d});
        for (std::size_t j = 0; j < d; ++j) only.at({0, 0, j}) = bulk.at({0, 0, j});
        sites.front() = only;
    }
    return sites;
}

} // namespace

MatrixProductState ghz_state(std::size_t n, Boundary boundary) {
    if (n < 2) throw SpecError("GHZ fixture needs n >= 2");
    if (boundary == Boundary::periodic) {
        std::vector<Tensor> sites(n, ghz_tensor() * cplx(std::pow(2.0, -0.5 / static_cast<double>(n))));
        return MatrixProductState(std::move(sites), Boundary::periodic);
    }
    std::vector<Tensor> sites(n, ghz_tensor());
    Tensor first(kSiteOrder, {1, 2, 2});
    Tensor last(kSiteOrder, {2, 1, 2});
    for (std::size_t j = 0; j < 2; ++j) {
        first.at({0, j, j}) = 1.0 / std::sqrt(2.0);
        last.at({j, 0, j}) = 1.0;
    }
    sites.front() = first;
    sites.back() = last;
    return MatrixProductState(std::move(sites), Boundary::open);
}

MatrixProductState cluster_state(std::size_t n) {
    if (n < 3) throw SpecError("cluster fixture needs n >= 3");
    const double h = 1.0 / std::sqrt(2.0);
    std::vector<Tensor> sites;
    Tensor first(kSiteOrder, {1, 2, 2});
    for (std::size_t s = 0; s < 2; ++s) first.at({0, s, s}) = h;
    sites.push_back(first);
    Tensor bulk(kSiteOrder, {2, 2, 2});
    Tensor last(kSiteOrder, {2, 1, 2});
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t s = 0; s < 2; ++s) {
            const double sign = (a & s) ? -h : h;
            bulk.at({a, s, s}) = sign;
            last.at({a, 0, s}) = sign;
        }
    }
    for (std::size_t k = 1; k + 1 < n; ++k) sites.push_back(bulk);
    sites.push_back(last);
    return MatrixProductState(std::move(sites), Boundary::open);
}

MatrixProductState aklt_state(std::size_t n, Boundary boundary) {
    if (n < 3) throw SpecError("AKLT fixture needs n >= 3");
    if (boundary == Boundary::periodic) {
        const double nn = static_cast<double>(n);
        const double norm_sq = std::pow(3.0, nn) + 3.0 * (n % 2 ? -1.0 : 1.0);
        std::vector<Tensor> sites(n, aklt_tensor() * cplx(std::pow(norm_sq, -0.5 / nn)));
        return MatrixProductState(std::move(sites), Boundary::periodic);
    }
    return canonicalize(MatrixProductState(open_chain(aklt_tensor(), n), Boundary::open));
}

MatrixProductState product_state(const std::vector<Vector> &local) {
    if (local.empty()) throw DimensionError("product state needs at least one site");
    std::vector<Tensor> sites;
    for (const auto &v : local) {
        const double norm = v.norm();
        if (norm == 0.0) throw NormalizationError("local vector has zero norm");
        Tensor t(kSiteOrder, {1, 1, static_cast<std::size_t>(v.size())});
        for (Eigen::Index j = 0; j < v.size(); ++j) t.at({0, 0, static_cast<std::size_t>(j)}) = v(j) / norm;
        sites.push_back(std::move(t));
    }
    MatrixProductState out(std::move(sites), Boundary::open);
    out.set_gauge(Gauge::right());
    out.set_schmidt_weights(std::vector<std::vector<double>>(local.size() - 1, std::vector<double>{1.0}));
    return out;
}

MatrixProductState basis_state(const std::vector<std::size_t> &digits, const std::vector<std::size_t> &phys_dims) {
    if (digits.size() != phys_dims.size()) throw DimensionError("digit count does not match site count");
    std::vector<Vector> local;
    for (std::size_t k = 0; k < digits.size(); ++k) {
        if (digits[k] >= phys_dims[k]) throw RangeError("basis digit exceeds local dimension");
        Vector v = Vector::Zero(static_cast<Eigen::Index>(phys_dims[k]));
        v(static_cast<Eigen::Index>(digits[k])) = 1.0;
        local.push_back(std::move(v));
    }
    return product_state(local);
}

MatrixProductState build_fixture(const std::string &name, std::size_t n) {
    if (name == "ghz") return ghz_state(n, Boundary::open);
    if (name == "ghz-periodic") return ghz_state(n, Boundary::periodic);
    if (name == "cluster") return cluster_state(n);
    if (name == "aklt") return aklt_state(n, Boundary::open);
    if (name == "aklt-periodic") return aklt_state(n, Boundary::periodic);
    throw SpecError("unknown fixture '" + name + "'");
}

void write_mps(std::ostream &os, const MatrixProductState &mps) {
    json meta;
    meta["format"] = "mps";
    meta["boundary"] = to_string(mps.boundary());
    meta["gauge"] = gauge_name(mps.gauge().kind);
    meta["center"] = mps.gauge().center;
    meta["phys_dims"] = mps.phys_dims();
    meta["bond_dims"] = mps.bond_dims();
    if (mps.schmidt_weights()) meta["schmidt_weights"] = *mps.schmidt_weights();
    write_archive(os, Archive{meta.dump(), mps.sites()});
}

MatrixProductState read_mps(std::istream &is) {
    Archive a = read_archive(is);
    json meta;
    try {
        meta = json::parse(a.metadata);
    } catch (const json::exception &e) {
        throw FormatError(std::string("bad state metadata: ") + e.what());
    }
    if (meta.value("format", "") != "mps") throw FormatError("archive does not hold a matrix product state");
    MatrixProductState out(std::move(a.tensors), boundary_from_string(meta.at("boundary").get<std::string>()));
    out.set_gauge(Gauge{gauge_from_name(meta.at("gauge").get<std::string>()), meta.at("center").get<std::size_t>()});
    if (meta.contains("schmidt_weights")) {
        out.set_schmidt_weights(meta["schmidt_weights"].get<std::vector<std::vector<double>>>());
    }
    return out;
}

void save_mps(const std::filesystem::path &path, const MatrixProductState &mps) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open '" + path.string() + "' for writing");
    write_mps(os, mps);
}

MatrixProductState load_mps(const std::filesystem::path &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open '" + path.string() + "'");
    return read_mps(is);
}

void write_entanglement_csv(std::ostream &os, const std::vector<EntanglementData> &rows) {
    std::size_t m = 0;
    for (const auto &r : rows) m = std::max(m, r.schmidt_values.size());
    os << "cut,S0,S1,S2,Sinf";
    for (std::size_t i = 1; i <= m; ++i) os << ",schmidt_" << i;
    os << '\n' << std::setprecision(17);
    for (const auto &r : rows) {
        // + 0.0 turns the -0 of log2(1) / (1 - alpha) into 0.
        os << r.cut;
        for (double alpha : {0.0, 1.0, 2.0, kInfinity}) os << ',' << r.renyi(alpha) + 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            os << ',';
            if (i < r.schmidt_values.size()) os << r.schmidt_values[i];
        }
        os << '\n';
    }
}

} // namespace tnet
