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

#include "tnet/expectation.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace tnet {

namespace {

// The d matrices A_j of a site tensor, each D_l x D_r.
std::vector<Matrix> slices(const Tensor &a) {
    const std::size_t dl = a.dim(kLeft), dr = a.dim(kRight), d = a.dim(kPhys);
    std::vector<Matrix> out(d, Matrix(static_cast<Eigen::Index>(dl), static_cast<Eigen::Index>(dr)));
    const auto data = a.data();
    for (std::size_t x = 0; x < dl; ++x)
        for (std::size_t y = 0; y < dr; ++y)
            for (std::size_t j = 0; j < d; ++j)
                out[j](static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = data[(x * dr + y) * d + j];
    return out;
}

void check_op(const Matrix &op, std::size_t d) {
    if (op.rows() != op.cols() || static_cast<std::size_t>(op.rows()) != d) {
        throw DimensionError("operator does not match the local dimension");
    }
}

} // namespace

cplx overlap(const MatrixProductState &a, const MatrixProductState &b) {
    const MatrixProductState oa = periodic_to_open(a), ob = periodic_to_open(b);
    if (oa.size() != ob.size() || oa.phys_dims() != ob.phys_dims()) throw ShapeError("states have different shapes");
    Matrix env = Matrix::Ones(1, 1);
    for (std::size_t k = 0; k < oa.size(); ++k) {
        const auto sa = slices(oa.site(k)), sb = slices(ob.site(k));
        Matrix next = Matrix::Zero(sa[0].cols(), sb[0].cols());
        for (std::size_t j = 0; j < sa.size(); ++j) next += sa[j].adjoint() * env * sb[j];
        env = std::move(next);
    }
    return env(0, 0);
}

double norm(const MatrixProductState &mps) { return std::sqrt(std::abs(overlap(mps, mps))); }

Matrix transfer_matrix(const Tensor &a, const std::optional<Matrix> &op) {
    const auto s = slices(a.permuted({kLeft, kRight, kPhys}));
    const Eigen::Index dl = s[0].rows(), dr = s[0].cols();
    Matrix e = Matrix::Zero(dl * dl, dr * dr);
    const auto d = static_cast<Eigen::Index>(s.size());
    if (op) check_op(*op, s.size());
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = 0; k < d; ++k) {
            const cplx w = op ? (*op)(k, j) : (j == k ? cplx(1.0) : cplx(0.0));
            if (w == cplx(0.0)) continue;
            const Matrix ak = s[static_cast<std::size_t>(k)].conjugate();
            const Matrix &aj = s[static_cast<std::size_t>(j)];
            for (Eigen::Index x = 0; x < dl; ++x)
                for (Eigen::Index y = 0; y < dr; ++y) e.block(x * dl, y * dr, dl, dr) += w * aj(x, y) * ak;
        }
    }
    return e;
}

ExpectationEngine::ExpectationEngine(const MatrixProductState &mps) : state_(periodic_to_open(mps)) {
    const std::size_t n = state_.size();
    left_.assign(n + 1, Matrix::Ones(1, 1));
    right_.assign(n + 1, Matrix::Ones(1, 1));
    for (std::size_t k = 0; k < n; ++k) left_[k + 1] = transfer_left(left_[k], k);
    for (std::size_t k = n; k-- > 0;) {
        const auto s = slices(state_.site(k));
        Matrix env = Matrix::Zero(s[0].rows(), s[0].rows());
        for (const auto &m : s) env += m.conjugate() * right_[k + 1] * m.transpose();
        right_[k] = std::move(env);
    }
    norm_sq_ = left_[n](0, 0).real();
    if (!(norm_sq_ > 0.0)) throw NormalizationError("state has zero norm");
}

Matrix ExpectationEngine::transfer_left(const Matrix &env, std::size_t site) const {
    const auto s = slices(state_.site(site));
    Matrix next = Matrix::Zero(s[0].cols(), s[0].cols());
    for (const auto &m : s) next += m.adjoint() * env * m;
    return next;
}

Matrix ExpectationEngine::dressed_left(const Matrix &env, std::size_t site, const Matrix &op) const {
    const auto s = slices(state_.site(site));
    check_op(op, s.size());
    Matrix next = Matrix::Zero(s[0].cols(), s[0].cols());
    for (std::size_t j = 0; j < s.size(); ++j) {
        const Matrix ej = env * s[j];
        for (std::size_t k = 0; k < s.size(); ++k) {
            const cplx w = op(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
            if (w != cplx(0.0)) next += w * s[k].adjoint() * ej;
        }
    }
    return next;
}

cplx ExpectationEngine::close(const Matrix &left, std::size_t next_site) const {
    return left.cwiseProduct(right_[next_site]).sum() / norm_sq_;
}

cplx ExpectationEngine::local(const Matrix &op, std::size_t first) const {
    const std::size_t n = size();
    if (first >= n) throw RangeError("operator support starts outside the chain");
    // Block slices B_J over the support, J running over the fused physical index.
    std::vector<Matrix> block = slices(state_.site(first));
    std::size_t last = first;
    while (static_cast<std::size_t>(op.rows()) > block.size()) {
        if (++last >= n) throw RangeError("operator support extends past the chain");
        const auto s = slices(state_.site(last));
        std::vector<Matrix> next;
        for (const auto &b : block)
            for (const auto &m : s) next.push_back(b * m);
        block = std::move(next);
    }
    check_op(op, block.size());
    const Matrix &l = left_[first];
    const Matrix &r = right_[last + 1];
    std::vector<Matrix> lbr;
    for (const auto &b : block) lbr.push_back(l * b * r.transpose());
    cplx sum = 0.0;
    for (std::size_t k = 0; k < block.size(); ++k) {
        for (std::size_t j = 0; j < block.size(); ++j) {
            const cplx w = op(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
            if (w != cplx(0.0)) sum += w * block[k].conjugate().cwiseProduct(lbr[j]).sum();
        }
    }
    return sum / norm_sq_;
}

std::vector<cplx> ExpectationEngine::local_scan(const Matrix &op) const {
    std::vector<cplx> out;
    for (std::size_t k = 0; k < size(); ++k) out.push_back(local(op, k));
    return out;
}

CorrelatorValue ExpectationEngine::correlator(const Matrix &oa, std::size_t i, const Matrix &ob,
                                              std::size_t j) const {
    if (i == j) throw RangeError("correlator sites coincide");
    if (i >= size() || j >= size()) throw RangeError("correlator site outside the chain");
    if (i > j) {
        CorrelatorValue v = correlator(ob, j, oa, i);
        return v;
    }
    Matrix env = dressed_left(left_[i], i, oa);
    for (std::size_t k = i + 1; k < j; ++k) env = transfer_left(env, k);
    env = dressed_left(env, j, ob);
    CorrelatorValue v;
    v.dist = j - i;
    v.raw = close(env, j + 1);
    v.connected = v.raw - local(oa, i) * local(ob, j);
    return v;
}

std::vector<CorrelatorValue> ExpectationEngine::correlator_scan(const Matrix &oa, std::size_t origin,
                                                                const Matrix &ob, std::size_t max_dist) const {
    if (origin >= size()) throw RangeError("correlator origin outside the chain");
    if (origin + max_dist >= size()) throw RangeError("correlator scan extends past the chain");
    const cplx mean_a = local(oa, origin);
    std::vector<CorrelatorValue> out;
    Matrix env = dressed_left(left_[origin], origin, oa);
    for (std::size_t d = 1; d <= max_dist; ++d) {
        const std::size_t j = origin + d;
        CorrelatorValue v;
        v.dist = d;
        v.raw = close(dressed_left(env, j, ob), j + 1);
        v.connected = v.raw - mean_a * local(ob, j);
        out.push_back(v);
        env = transfer_left(env, j);
    }
    return out;
}

cplx local_expectation(const MatrixProductState &mps, const Matrix &op, std::size_t first) {
    return ExpectationEngine(mps).local(op, first);
}

CorrelatorValue connected_correlator(const MatrixProductState &mps, const Matrix &oa, std::size_t i,
                                     const Matrix &ob, std::size_t j) {
    return ExpectationEngine(mps).correlator(oa, i, ob, j);
}

DecayFit fit_correlation_decay(const std::vector<std::pair<double, double>> &samples) {
    std::vector<double> x, y;
    for (const auto &[d, v] : samples) {
        if (v > 0.0 && std::isfinite(v)) {
            x.push_back(d);
            y.push_back(std::log(v));
        }
    }
    if (x.size() < 4) throw FitError("need at least 4 positive samples, got " + std::to_string(x.size()));
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw FitError("samples share a single distance");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (intercept + slope * x[i]);
        ss_res += r * r;
    }
    DecayFit fit;
    fit.amplitude = std::exp(intercept);
    fit.length = slope < 0.0 ? -1.0 / slope : std::numeric_limits<double>::infinity();
    fit.r_squared = syy > 1e-300 ? 1.0 - ss_res / syy : 0.0;
    fit.samples = x.size();
    return fit;
}

void write_correlator_csv(std::ostream &os, const std::vector<CorrelatorValue> &rows) {
    os << "dist,raw_re,raw_im,connected_abs\n" << std::setprecision(17);
    for (const auto &r : rows) {
        os << r.dist << ',' << r.raw.real() << ',' << r.raw.imag() << ',' << std::abs(r.connected) << '\n';
    }
}

} // namespace tnet
