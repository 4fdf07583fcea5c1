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

#include "tnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

namespace tnet {

namespace {

using json = nlohmann::json;

const cplx kI{0.0, 1.0};

Matrix spin1_plus() {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 1) = m(1, 2) = std::sqrt(2.0);
    return m;
}

bool is_zero(cplx c) { return c == cplx(0.0, 0.0); }

void add_term(std::vector<OperatorString> &out, cplx c, std::vector<std::size_t> sites, std::vector<Matrix> ops) {
    if (is_zero(c)) return;
    out.push_back(OperatorString{c, std::move(sites), std::move(ops)});
}

// Sorts the sites of a term and multiplies operators that share a site.
OperatorString normalized(const OperatorString &t) {
    std::vector<std::size_t> order(t.sites.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return t.sites[a] < t.sites[b]; });
    OperatorString out{t.coefficient, {}, {}};
    for (auto i : order) {
        if (!out.sites.empty() && out.sites.back() == t.sites[i]) {
            // Operators listed earlier act to the left.
            out.ops.back() = out.ops.back() * t.ops[i];
        } else {
            out.sites.push_back(t.sites[i]);
            out.ops.push_back(t.ops[i]);
        }
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> bonds(const ModelSpec &spec, std::size_t distance) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t n = spec.n;
    for (std::size_t j = 0; j + distance < n; ++j) out.emplace_back(j, j + distance);
    if (spec.boundary == Boundary::periodic) {
        for (std::size_t j = n - distance; j < n; ++j) out.emplace_back(j, (j + distance) % n);
    }
    return out;
}

bool finite(double x) { return std::isfinite(x); }

} // namespace

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0.0, -kI, kI, 0.0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

Matrix spin1_x() { return 0.5 * (spin1_plus() + spin1_plus().adjoint()); }
Matrix spin1_y() { return -0.5 * kI * (spin1_plus() - spin1_plus().adjoint()); }
Matrix spin1_z() {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 1.0;
    m(2, 2) = -1.0;
    return m;
}

Matrix local_operator(const std::string &name, std::size_t d) {
    const auto dd = static_cast<Eigen::Index>(d);
    if (name == "I") return Matrix::Identity(dd, dd);
    if (d == 2) {
        if (name == "X") return pauli_x();
        if (name == "Y") return pauli_y();
        if (name == "Z") return pauli_z();
        if (name == "Sp") return 0.5 * (pauli_x() + kI * pauli_y());
        if (name == "Sm") return 0.5 * (pauli_x() - kI * pauli_y());
    } else if (d == 3) {
        if (name == "Sx") return spin1_x();
        if (name == "Sy") return spin1_y();
        if (name == "Sz") return spin1_z();
        if (name == "Splus") return spin1_plus();
        if (name == "Sminus") return spin1_plus().adjoint();
    }
    throw SpecError("unknown operator '" + name + "' for local dimension " + std::to_string(d));
}

std::string to_string(ModelKind k) {
    switch (k) {
    case ModelKind::xy: return "xy";
    case ModelKind::heisenberg_spin1: return "heisenberg_spin1";
    case ModelKind::aklt: return "aklt";
    case ModelKind::majumdar_ghosh: return "majumdar_ghosh";
    case ModelKind::custom: break;
    }
    return "custom";
}

ModelKind model_kind_from_string(const std::string &s) {
    for (auto k : {ModelKind::xy, ModelKind::heisenberg_spin1, ModelKind::aklt, ModelKind::majumdar_ghosh,
                   ModelKind::custom}) {
        if (to_string(k) == s) return k;
    }
    throw SpecError("unknown model kind '" + s + "'");
}

std::size_t local_dim(const ModelSpec &spec) {
    switch (spec.kind) {
    case ModelKind::xy:
    case ModelKind::majumdar_ghosh: return 2;
    case ModelKind::heisenberg_spin1:
    case ModelKind::aklt: return 3;
    case ModelKind::custom: break;
    }
    return spec.local_dim;
}

void validate(const ModelSpec &spec) {
    const std::size_t min_n = spec.kind == ModelKind::majumdar_ghosh ? 3 : 2;
    if (spec.n < min_n) throw SpecError("model needs n >= " + std::to_string(min_n));
    if (spec.boundary == Boundary::periodic) {
        const std::size_t min_ring = spec.kind == ModelKind::majumdar_ghosh ? 5 : 3;
        if (spec.n < min_ring) throw SpecError("periodic chain needs n >= " + std::to_string(min_ring));
    }
    const Couplings &c = spec.couplings;
    if (!finite(c.gamma) || !finite(c.lambda) || !finite(c.J)) throw SpecError("couplings must be finite");
    if (spec.kind != ModelKind::custom) return;
    if (spec.local_dim < 2) throw SpecError("custom model needs local_dim >= 2");
    for (const auto &t : spec.terms) {
        if (t.sites.empty() || t.sites.size() != t.ops.size()) {
            throw SpecError("custom term needs matching, nonempty site and operator lists");
        }
        if (!finite(t.coefficient.real()) || !finite(t.coefficient.imag())) {
            throw SpecError("custom term coefficient must be finite");
        }
        for (auto s : t.sites) {
            if (s >= spec.n) throw SpecError("custom term site out of range");
        }
        for (const auto &op : t.ops) local_operator(op, spec.local_dim);
    }
}

bool is_hermitian(const ModelSpec &spec) {
    if (spec.kind != ModelKind::custom) return true;
    for (const auto &t : spec.terms) {
        if (t.coefficient.imag() != 0.0) return false;
        std::vector<std::size_t> s = t.sites;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) return false;
        for (const auto &op : t.ops) {
            const Matrix m = local_operator(op, spec.local_dim);
            if ((m - m.adjoint()).cwiseAbs().maxCoeff() != 0.0) return false;
        }
    }
    return true;
}

std::vector<OperatorString> operator_strings(const ModelSpec &spec) {
    validate(spec);
    std::vector<OperatorString> out;
    switch (spec.kind) {
    case ModelKind::xy: {
        const double g = spec.couplings.gamma;
        for (auto [j, k] : bonds(spec, 1)) {
            add_term(out, -0.5 * (1.0 + g) / 4.0, {j, k}, {pauli_x(), pauli_x()});
            add_term(out, -0.5 * (1.0 - g) / 4.0, {j, k}, {pauli_y(), pauli_y()});
        }
        for (std::size_t j = 0; j < spec.n; ++j) add_term(out, -spec.couplings.lambda / 2.0, {j}, {pauli_z()});
        break;
    }
    case ModelKind::heisenberg_spin1: {
        const Matrix s[3] = {spin1_x(), spin1_y(), spin1_z()};
        for (auto [j, k] : bonds(spec, 1)) {
            for (const auto &m : s) add_term(out, spec.couplings.J, {j, k}, {m, m});
        }
        break;
    }
    case ModelKind::aklt: {
        const Matrix s[3] = {spin1_x(), spin1_y(), spin1_z()};
        for (auto [j, k] : bonds(spec, 1)) {
            for (const auto &m : s) add_term(out, 0.5, {j, k}, {m, m});
            // (S.S)^2 = sum_ab (S^a S^b)_j (S^a S^b)_k
            for (const auto &a : s) {
                for (const auto &b : s) add_term(out, 1.0 / 6.0, {j, k}, {a * b, a * b});
            }
            add_term(out, 1.0 / 3.0, {j}, {Matrix::Identity(3, 3)});
        }
        break;
    }
    case ModelKind::majumdar_ghosh: {
        const Matrix s[3] = {pauli_x(), pauli_y(), pauli_z()};
        for (auto [j, k] : bonds(spec, 1)) {
            for (const auto &m : s) add_term(out, 2.0, {j, k}, {m, m});
        }
        for (auto [j, k] : bonds(spec, 2)) {
            for (const auto &m : s) add_term(out, 1.0, {j, k}, {m, m});
        }
        break;
    }
    case ModelKind::custom:
        for (const auto &t : spec.terms) {
            std::vector<Matrix> ops;
            for (const auto &name : t.ops) ops.push_back(local_operator(name, spec.local_dim));
            add_term(out, t.coefficient, t.sites, std::move(ops));
        }
        break;
    }
    for (auto &t : out) t = normalized(t);
    return out;
}

std::size_t interaction_range(const std::vector<OperatorString> &terms) {
    std::size_t r = 0;
    for (const auto &t : terms) r = std::max(r, t.sites.back() - t.sites.front());
    return r;
}

ModelSpec model_from_json(const std::string &text) {
    ModelSpec spec;
    try {
        const json j = json::parse(text);
        spec.kind = model_kind_from_string(j.at("kind").get<std::string>());
        spec.n = j.at("n").get<std::size_t>();
        spec.boundary = boundary_from_string(j.value("boundary", std::string("open")));
        if (j.contains("couplings")) {
            const json &c = j["couplings"];
            spec.couplings.gamma = c.value("gamma", 0.0);
            spec.couplings.lambda = c.value("lambda", 0.0);
            spec.couplings.J = c.value("J", 1.0);
        }
        spec.local_dim = j.value("local_dim", std::size_t{2});
        if (j.contains("terms")) {
            for (const json &t : j["terms"]) {
                CustomTerm term;
                const json &c = t.value("coefficient", json(1.0));
                term.coefficient = c.is_array() ? cplx(c.at(0).get<double>(), c.at(1).get<double>())
                                                : cplx(c.get<double>(), 0.0);
                term.sites = t.at("sites").get<std::vector<std::size_t>>();
                term.ops = t.at("ops").get<std::vector<std::string>>();
                spec.terms.push_back(std::move(term));
            }
        }
    } catch (const json::exception &e) {
        throw SpecError(std::string("malformed model document: ") + e.what());
    }
    validate(spec);
    return spec;
}

std::string model_to_json(const ModelSpec &spec) {
    json j;
    j["kind"] = to_string(spec.kind);
    j["n"] = spec.n;
    j["boundary"] = to_string(spec.boundary);
    j["couplings"] = {{"gamma", spec.couplings.gamma}, {"lambda", spec.couplings.lambda}, {"J", spec.couplings.J}};
    if (spec.kind == ModelKind::custom) {
        j["local_dim"] = spec.local_dim;
        json terms = json::array();
        for (const auto &t : spec.terms) {
            terms.push_back({{"coefficient", {t.coefficient.real(), t.coefficient.imag()}},
                             {"sites", t.sites},
                             {"ops", t.ops}});
        }
        j["terms"] = terms;
    }
    return j.dump();
}

} // namespace tnet
