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

#include "tnet/dmrg.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include <json.hpp>
#include <unsupported/Eigen/KroneckerProduct>

namespace tnet {

namespace {

using json = nlohmann::json;

// Multiplies the slices of `t` along `label` by s[i].
Tensor scale_index(const Tensor &t, const Label &label, const std::vector<double> &s) {
    Tensor out = t;
    const std::size_t axis = t.index_of(label);
    std::size_t inner = 1;
    for (std::size_t a = axis + 1; a < t.rank(); ++a) inner *= t.dims()[a];
    const std::size_t extent = t.dims()[axis];
    auto data = out.data();
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= s[(i / inner) % extent];
    return out;
}

Vector as_vector(const Tensor &t) {
    Vector v(static_cast<Eigen::Index>(t.size()));
    std::copy(t.data().begin(), t.data().end(), v.data());
    return v;
}

Tensor as_tensor(const Vector &v, std::vector<Label> labels, std::vector<std::size_t> dims) {
    return Tensor(std::move(labels), std::move(dims), std::vector<cplx>(v.data(), v.data() + v.size()));
}

} // namespace

std::string to_string(DmrgMode m) { return m == DmrgMode::two_site ? "two-site" : "single-site"; }

DmrgMode dmrg_mode_from_string(const std::string &s) {
    if (s == "two-site") return DmrgMode::two_site;
    if (s == "single-site") return DmrgMode::single_site;
    throw SpecError("unknown DMRG mode '" + s + "'");
}

void validate(const DmrgConfig &cfg) {
    if (cfg.schedule.empty()) throw SpecError("bond schedule is empty");
    for (std::size_t i = 0; i < cfg.schedule.size(); ++i) {
        if (cfg.schedule[i] == 0) throw SpecError("bond dimensions must be positive");
        if (i > 0 && cfg.schedule[i] < cfg.schedule[i - 1]) throw SpecError("bond schedule must be non-decreasing");
    }
    if (!(cfg.energy_tol > 0.0) || !(cfg.eig_tol > 0.0) || !(cfg.svd_tol > 0.0)) {
        throw SpecError("tolerances must be positive");
    }
    if (cfg.max_sweeps == 0) throw SpecError("max_sweeps must be positive");
    if (!(cfg.noise >= 0.0)) throw SpecError("noise must be non-negative");
}

DmrgSweeper::DmrgSweeper(const MatrixProductOperator &op, const MatrixProductState &init) : op_(op) {
    const std::size_t n = op.size();
    if (init.size() != n) throw ShapeError("initial state and operator have different lengths");
    if (init.boundary() != Boundary::open) throw BoundaryError("DMRG needs an open initial state");
    for (std::size_t k = 0; k < n; ++k) {
        if (init.phys_dim(k) != op.phys_dim(k)) throw ShapeError("initial state and operator local dimensions differ");
    }
    const MatrixProductState right = canonicalize(init, {GaugeKind::right, 0});
    sites_ = right.sites();
    left_.assign(n + 1, std::nullopt);
    right_.assign(n + 1, std::nullopt);
    left_[0] = boundary_environment();
    right_[n] = boundary_environment();
    for (std::size_t k = n; k-- > 1;) right_[k] = extend_right(*right_[k + 1], sites_[k], op.site(k), sites_[k]);
}

void DmrgSweeper::check_environment(std::size_t left, std::size_t right) const {
    if (!left_[left] || !right_[right]) throw InternalError("stale DMRG environment");
}

MatrixProductState DmrgSweeper::state() const {
    MatrixProductState out(sites_, Boundary::open);
    out.set_gauge(Gauge::mixed(0));
    return out;
}

// H_eff acting on a two-site tensor with labels (l, p1, p2, r).
Vector DmrgSweeper::apply_two(const Vector &theta, std::size_t i, const std::vector<std::size_t> &shape) const {
    const Tensor th = as_tensor(theta, {"l", "p1", "p2", "r"}, shape);
    Tensor t = contract(left_[i]->relabeled("k", "l"), th, {{"l", "l"}});
    t = contract(t, op_.site(i).relabeled({{kOpLeft, "w"}, {kOpRight, "m"}, {kOut, "q1"}, {kIn, "p1"}}),
                 {{"w", "w"}, {"p1", "p1"}});
    t = contract(t, op_.site(i + 1).relabeled({{kOpLeft, "m"}, {kOpRight, "v"}, {kOut, "q2"}, {kIn, "p2"}}),
                 {{"m", "m"}, {"p2", "p2"}});
    t = contract(t, right_[i + 2]->relabeled({{"b", "rb"}, {"w", "v"}, {"k", "r"}}), {{"r", "r"}, {"v", "v"}});
    return as_vector(t.permuted({"b", "q1", "q2", "rb"}));
}

// H_eff acting on a one-site tensor with labels (l, p, r).
Vector DmrgSweeper::apply_one(const Vector &a, std::size_t i, const std::vector<std::size_t> &shape) const {
    const Tensor th = as_tensor(a, {"l", "p", "r"}, shape);
    Tensor t = contract(left_[i]->relabeled("k", "l"), th, {{"l", "l"}});
    t = contract(t, op_.site(i).relabeled({{kOpLeft, "w"}, {kOpRight, "v"}, {kOut, "q"}, {kIn, "p"}}),
                 {{"w", "w"}, {"p", "p"}});
    t = contract(t, right_[i + 1]->relabeled({{"b", "rb"}, {"w", "v"}, {"k", "r"}}), {{"r", "r"}, {"v", "v"}});
    return as_vector(t.permuted({"b", "q", "rb"}));
}

double DmrgSweeper::update_pair(std::size_t i, bool moving_right, const DmrgConfig &cfg, std::size_t bond_dim,
                                double &max_trunc) {
    check_environment(i, i + 2);
    const Tensor a = sites_[i].relabeled(kPhys, "p1");
    const Tensor b = sites_[i + 1].relabeled({{kPhys, "p2"}, {kLeft, "m"}});
    const Tensor theta = contract(a.relabeled(kRight, "m"), b, {{"m", "m"}}).permuted({kLeft, "p1", "p2", kRight});
    const std::vector<std::size_t> shape = theta.dims();
    EigOptions eo;
    eo.tol = cfg.eig_tol;
    eo.throw_on_failure = false;
    const LowestEigenpair ev = eig_lowest([&](const Vector &v) { return apply_two(v, i, shape); },
                                          static_cast<Eigen::Index>(theta.size()), as_vector(theta), eo);
    const Tensor opt = as_tensor(ev.vector.normalized(), {kLeft, "p1", "p2", kRight}, shape);
    SvdOptions so;
    so.max_rank = bond_dim;
    so.tol = cfg.svd_tol;
    so.bond_label = "m";
    const SvdResult svd = svd_split(opt, {kLeft, "p1"}, so);
    max_trunc = std::max(max_trunc, svd.truncation_weight);
    std::vector<double> s = svd.singular_values;
    double nrm = 0.0;
    for (double x : s) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (double &x : s) x /= nrm;
    Tensor u = svd.left_isometry.relabeled({{"p1", kPhys}, {"m", kRight}}).permuted({kLeft, kRight, kPhys});
    Tensor v = svd.right_isometry.relabeled({{"p2", kPhys}, {"m", kLeft}}).permuted({kLeft, kRight, kPhys});
    if (moving_right) {
        v = scale_index(v, kLeft, s);
        sites_[i] = std::move(u);
        sites_[i + 1] = std::move(v);
        left_[i + 1] = extend_left(*left_[i], sites_[i], op_.site(i), sites_[i]);
        right_[i + 1].reset();
    } else {
        u = scale_index(u, kRight, s);
        sites_[i] = std::move(u);
        sites_[i + 1] = std::move(v);
        right_[i + 1] = extend_right(*right_[i + 2], sites_[i + 1], op_.site(i + 1), sites_[i + 1]);
        left_[i + 1].reset();
    }
    return ev.value;
}

double DmrgSweeper::update_site(std::size_t i, bool moving_right, const DmrgConfig &cfg, std::mt19937_64 &rng) {
    check_environment(i, i + 1);
    const Tensor a = sites_[i].permuted({kLeft, kPhys, kRight});
    const std::vector<std::size_t> shape = a.dims();
    EigOptions eo;
    eo.tol = cfg.eig_tol;
    eo.throw_on_failure = false;
    const LowestEigenpair ev = eig_lowest([&](const Vector &v) { return apply_one(v, i, shape); },
                                          static_cast<Eigen::Index>(a.size()), as_vector(a), eo);
    Tensor opt = as_tensor(ev.vector.normalized(), {kLeft, kPhys, kRight}, shape);
    if (cfg.noise > 0.0) {
        opt += cfg.noise * Tensor::random({kLeft, kPhys, kRight}, shape, rng);
        opt *= 1.0 / opt.norm();
    }
    const std::size_t n = sites_.size();
    if (moving_right && i + 1 < n) {
        const SvdResult svd = svd_split(opt, {kLeft, kPhys}, {.bond_label = "m"});
        sites_[i] = svd.left_isometry.relabeled({{"m", kRight}}).permuted({kLeft, kRight, kPhys});
        const Tensor carry = scale_index(svd.right_isometry, "m", svd.singular_values);
        sites_[i + 1] = contract(carry.relabeled(kRight, "x"), sites_[i + 1].relabeled(kLeft, "x"), {{"x", "x"}})
                            .relabeled("m", kLeft)
                            .permuted({kLeft, kRight, kPhys});
        left_[i + 1] = extend_left(*left_[i], sites_[i], op_.site(i), sites_[i]);
        right_[i + 1].reset();
    } else if (!moving_right && i > 0) {
        const SvdResult svd = svd_split(opt, {kLeft}, {.bond_label = "m"});
        sites_[i] = svd.right_isometry.relabeled({{"m", kLeft}}).permuted({kLeft, kRight, kPhys});
        const Tensor carry = scale_index(svd.left_isometry, "m", svd.singular_values);
        sites_[i - 1] = contract(sites_[i - 1].relabeled(kRight, "x"), carry.relabeled(kLeft, "x"), {{"x", "x"}})
                            .relabeled("m", kRight)
                            .permuted({kLeft, kRight, kPhys});
        right_[i] = extend_right(*right_[i + 1], sites_[i], op_.site(i), sites_[i]);
        left_[i].reset();
    } else {
        sites_[i] = opt.permuted({kLeft, kRight, kPhys});
    }
    return ev.value;
}

double DmrgSweeper::sweep_once(const DmrgConfig &cfg, std::size_t bond_dim, double &max_trunc, std::mt19937_64 &rng) {
    const std::size_t n = sites_.size();
    double e = 0.0;
    if (cfg.mode == DmrgMode::two_site && n >= 2) {
        for (std::size_t i = 0; i + 2 < n; ++i) update_pair(i, true, cfg, bond_dim, max_trunc);
        for (std::size_t i = n - 1; i-- > 0;) e = update_pair(i, false, cfg, bond_dim, max_trunc);
    } else {
        for (std::size_t i = 0; i + 1 < n; ++i) update_site(i, true, cfg, rng);
        for (std::size_t i = n; i-- > 0;) e = update_site(i, false, cfg, rng);
    }
    return e;
}

MatrixProductOperator mpo_product(const MatrixProductOperator &a, const MatrixProductOperator &b) {
    if (a.size() != b.size()) throw ShapeError("operators have different lengths");
    std::vector<Tensor> sites;
    for (std::size_t k = 0; k < a.size(); ++k) {
        // (a*b)[o, i] = sum_m a[o, m] b[m, i]; bonds fuse as (a, b).
        const Tensor ta = a.site(k).relabeled({{kIn, "mid"}, {kOpLeft, "al"}, {kOpRight, "ar"}});
        const Tensor tb = b.site(k).relabeled({{kOut, "mid"}, {kOpLeft, "bl"}, {kOpRight, "br"}});
        const Tensor t = contract(ta, tb, {{"mid", "mid"}});
        const std::size_t al = t.dim("al"), bl = t.dim("bl"), ar = t.dim("ar"), br = t.dim("br");
        const std::size_t d_out = t.dim(kOut), d_in = t.dim(kIn);
        // Row-major (al, bl, ar, br, o, i) is already row-major (al*bl, ar*br, o, i).
        const Tensor src = t.permuted({"al", "bl", "ar", "br", kOut, kIn});
        sites.emplace_back(std::vector<Label>{kOpLeft, kOpRight, kOut, kIn},
                           std::vector<std::size_t>{al * bl, ar * br, d_out, d_in},
                           std::vector<cplx>(src.data().begin(), src.data().end()));
    }
    return MatrixProductOperator(std::move(sites), a.boundary(), a.hermitian() && b.hermitian());
}

double energy_variance(const MatrixProductState &mps, const MatrixProductOperator &op) {
    const double nsq = std::real(expectation_mpo(mps, identity_mpo(mps.phys_dims())));
    const double e = std::real(expectation_mpo(mps, op)) / nsq;
    const double e2 = std::real(expectation_mpo(mps, mpo_product(op, op))) / nsq;
    return e2 - e * e;
}

Matrix local_metric(const MatrixProductState &mps, std::size_t k) {
    if (k >= mps.size()) throw RangeError("site outside the chain");
    const MatrixProductState open = periodic_to_open(mps);
    const MatrixProductOperator id = identity_mpo(open.phys_dims());
    Tensor l = boundary_environment(), r = boundary_environment();
    for (std::size_t j = 0; j < k; ++j) l = extend_left(l, open.site(j), id.site(j), open.site(j));
    for (std::size_t j = open.size(); j-- > k + 1;) r = extend_right(r, open.site(j), id.site(j), open.site(j));
    // K2 = L (x) I_d (x) R over the site index (l, p, r); rows are bra, columns ket.
    const Matrix lm = l.matrix({"b"}, {"w", "k"});
    const Matrix rm = r.matrix({"b"}, {"w", "k"});
    const auto d = static_cast<Eigen::Index>(open.phys_dim(k));
    const Matrix ld = Eigen::kroneckerProduct(lm, Matrix::Identity(d, d)).eval();
    return Eigen::kroneckerProduct(ld, rm).eval();
}

DmrgResult ground_state(const MatrixProductOperator &op, const DmrgConfig &cfg,
                        const std::optional<MatrixProductState> &init) {
    validate(cfg);
    if (op.boundary() != Boundary::open) throw BoundaryError("DMRG supports open chains only");
    if (!op.hermitian()) throw SymmetryError("DMRG needs a Hermitian MPO");
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> dims;
    for (std::size_t k = 0; k < op.size(); ++k) dims.push_back(op.phys_dim(k));
    const MatrixProductState start = init ? *init : MatrixProductState::random(dims, cfg.schedule.front(), rng);
    DmrgSweeper sweeper(op, start);
    const MatrixProductOperator op2 = mpo_product(op, op);
    DmrgReport report;
    for (std::size_t sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
        const std::size_t bond = cfg.schedule[std::min(sweep, cfg.schedule.size() - 1)];
        double trunc = 0.0;
        sweeper.sweep_once(cfg, bond, trunc, rng);
        const MatrixProductState psi = sweeper.state();
        const double e = std::real(expectation_mpo(psi, op));
        const double var = std::real(expectation_mpo(psi, op2)) - e * e;
        const bool settled = sweep + 1 >= cfg.schedule.size();
        const bool flat = !report.energies.empty() && std::abs(e - report.energies.back()) < cfg.energy_tol;
        report.energies.push_back(e);
        report.variances.push_back(var);
        report.max_trunc_weights.push_back(trunc);
        if (settled && flat && var < 10.0 * cfg.energy_tol) {
            report.converged = true;
            break;
        }
    }
    report.energy = report.energies.back();
    report.variance = report.variances.back();
    return {sweeper.state(), report};
}

DmrgConfig dmrg_config_from_json(const std::string &text) {
    DmrgConfig cfg;
    try {
        json j = json::parse(text);
        if (j.contains("dmrg")) j = j["dmrg"];
        if (j.contains("mode")) cfg.mode = dmrg_mode_from_string(j["mode"].get<std::string>());
        if (j.contains("schedule")) cfg.schedule = j["schedule"].get<std::vector<std::size_t>>();
        if (j.contains("max_sweeps")) cfg.max_sweeps = j["max_sweeps"].get<std::size_t>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("noise")) cfg.noise = j["noise"].get<double>();
        if (j.contains("tols")) {
            const json &t = j["tols"];
            if (t.contains("energy")) cfg.energy_tol = t["energy"].get<double>();
            if (t.contains("eig")) cfg.eig_tol = t["eig"].get<double>();
            if (t.contains("svd")) cfg.svd_tol = t["svd"].get<double>();
        }
    } catch (const json::exception &e) {
        throw SpecError(std::string("bad DMRG config: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

std::string dmrg_config_to_json(const DmrgConfig &cfg) {
    json j{{"mode", to_string(cfg.mode)},
           {"schedule", cfg.schedule},
           {"max_sweeps", cfg.max_sweeps},
           {"seed", cfg.seed},
           {"noise", cfg.noise},
           {"tols", {{"energy", cfg.energy_tol}, {"eig", cfg.eig_tol}, {"svd", cfg.svd_tol}}}};
    return j.dump(2);
}

std::string dmrg_report_to_json(const DmrgReport &r) {
    json j{{"energy", r.energy},
           {"variance", r.variance},
           {"converged", r.converged},
           {"sweeps", r.energies.size()},
           {"energies", r.energies},
           {"variances", r.variances},
           {"max_trunc_weights", r.max_trunc_weights}};
    return j.dump(2);
}

void write_dmrg_csv(std::ostream &os, const DmrgReport &r) {
    os << "sweep,energy,variance,max_trunc_weight\n" << std::setprecision(17);
    for (std::size_t i = 0; i < r.energies.size(); ++i) {
        os << i + 1 << ',' << r.energies[i] << ',' << r.variances[i] << ',' << r.max_trunc_weights[i] << '\n';
    }
}

} // namespace tnet
