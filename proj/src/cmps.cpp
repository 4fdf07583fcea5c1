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

#include "tnet/cmps.hpp"

#include <cmath>

#include <json.hpp>
#include <unsupported/Eigen/KroneckerProduct>

#include "tnet/expectation.hpp"

namespace tnet {

namespace {

using json = nlohmann::json;

// Number of lattice steps in `len`, which must be a whole multiple of eps.
std::size_t steps_of(double len, double eps, const char *what) {
    const double n = len / eps;
    const double r = std::round(n);
    if (!(eps > 0.0) || r < 1.0 || std::abs(n - r) > 1e-9 * std::max(1.0, n)) {
        throw SpecError(std::string(what) + " is not a whole number of lattice steps");
    }
    return static_cast<std::size_t>(r);
}

Matrix matrix_power(const Matrix &m, std::size_t k) {
    Matrix out = Matrix::Identity(m.rows(), m.cols()), base = m;
    while (k > 0) {
        if (k & 1U) out = out * base;
        base = base * base;
        k >>= 1U;
    }
    return out;
}

Matrix parse_matrix(const json &j, std::size_t d) {
    if (!j.is_array() || j.size() != d * d) throw SpecError("matrix needs D*D entries");
    Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d * d; ++i) {
        const json &e = j[i];
        cplx v = e.is_array() ? cplx(e.at(0).get<double>(), e.at(1).get<double>()) : cplx(e.get<double>());
        m(static_cast<Eigen::Index>(i / d), static_cast<Eigen::Index>(i % d)) = v;
    }
    return m;
}

json dump_matrix(const Matrix &m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
    return out;
}

} // namespace

void validate(const ContinuousMps &c) {
    if (c.Q.rows() == 0 || c.Q.rows() != c.Q.cols() || c.R.rows() != c.R.cols() || c.Q.rows() != c.R.rows()) {
        throw SpecError("Q and R must be square matrices of equal size");
    }
    if (!(c.L > 0.0) || !std::isfinite(c.L)) throw SpecError("segment length must be positive and finite");
}

Matrix transfer_generator(const ContinuousMps &c) {
    validate(c);
    const Matrix id = Matrix::Identity(c.Q.rows(), c.Q.cols());
    return Eigen::kroneckerProduct(c.Q, id).eval() + Eigen::kroneckerProduct(id, c.Q.conjugate()).eval() +
           Eigen::kroneckerProduct(c.R, c.R.conjugate()).eval();
}

cplx density_correlator(const ContinuousMps &c, double x, bool raw) {
    const Matrix t = transfer_generator(c);
    if (!(x > 0.0 && x < c.L)) throw RangeError("position must lie strictly inside the segment");
    const Matrix rr = Eigen::kroneckerProduct(c.R, c.R.conjugate()).eval();
    const cplx value = (expm(t * (c.L - x)) * rr * expm(t * x) * rr).trace();
    return raw ? value : value / expm(t * c.L).trace();
}

Tensor discretized_tensor(const ContinuousMps &c, double eps, std::size_t k_max) {
    validate(c);
    if (!(eps > 0.0)) throw SpecError("lattice spacing must be positive");
    if (k_max < 2) throw SpecError("local cutoff must be at least 2");
    const auto dd = static_cast<std::size_t>(c.Q.rows());
    const std::size_t d = k_max + 1;
    Tensor a({kLeft, kRight, kPhys}, {dd, dd, d});
    std::vector<Matrix> mats{Matrix::Identity(c.Q.rows(), c.Q.cols()) + eps * c.Q};
    const Matrix step = std::sqrt(eps) * c.R;
    Matrix power = Matrix::Identity(c.Q.rows(), c.Q.cols());
    double fact = 1.0;
    for (std::size_t m = 1; m <= k_max; ++m) {
        power = power * step;
        fact *= double(m);
        mats.push_back(power / std::sqrt(fact));
    }
    for (std::size_t x = 0; x < dd; ++x)
        for (std::size_t y = 0; y < dd; ++y)
            for (std::size_t m = 0; m < d; ++m)
                a.at({x, y, m}) = mats[m](static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
    return a;
}

MatrixProductState discretize(const ContinuousMps &c, double eps, std::size_t k_max) {
    const std::size_t n = steps_of(c.L, eps, "segment length");
    return MatrixProductState(std::vector<Tensor>(n, discretized_tensor(c, eps, k_max)), Boundary::periodic);
}

cplx lattice_density_correlator(const ContinuousMps &c, double eps, double x, std::size_t k_max) {
    const std::size_t n = steps_of(c.L, eps, "segment length");
    const std::size_t m = steps_of(x, eps, "position");
    if (m == 0 || m >= n) throw RangeError("position must lie strictly inside the segment");
    const Tensor a = discretized_tensor(c, eps, k_max);
    Matrix number = Matrix::Zero(static_cast<Eigen::Index>(k_max + 1), static_cast<Eigen::Index>(k_max + 1));
    for (std::size_t k = 0; k <= k_max; ++k) number(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = double(k);
    const Matrix e = transfer_matrix(a);
    const Matrix en = transfer_matrix(a, number) / eps;
    const cplx value = (en * matrix_power(e, m - 1) * en * matrix_power(e, n - m - 1)).trace();
    return value / matrix_power(e, n).trace();
}

ContinuousMps cmps_from_json(const std::string &text) {
    ContinuousMps c;
    try {
        const json j = json::parse(text);
        const auto d = j.at("D").get<std::size_t>();
        if (d == 0) throw SpecError("D must be positive");
        c.Q = parse_matrix(j.at("Q"), d);
        c.R = parse_matrix(j.at("R"), d);
        c.L = j.at("L").get<double>();
    } catch (const json::exception &e) {
        throw SpecError(std::string("bad cMPS descriptor: ") + e.what());
    }
    validate(c);
    return c;
}

std::string cmps_to_json(const ContinuousMps &c) {
    json j{{"D", c.Q.rows()}, {"L", c.L}, {"Q", dump_matrix(c.Q)}, {"R", dump_matrix(c.R)}};
    return j.dump(2);
}

} // namespace tnet
