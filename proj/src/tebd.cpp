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

#include "tnet/tebd.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include <unsupported/Eigen/KroneckerProduct>

#include "tnet/mpo.hpp"

namespace tnet {

namespace {

Matrix embed_term(const OperatorString &t, std::size_t bond, std::size_t d) {
    const auto dd = static_cast<Eigen::Index>(d);
    Matrix a = Matrix::Identity(dd, dd), b = Matrix::Identity(dd, dd);
    for (std::size_t k = 0; k < t.sites.size(); ++k) {
        if (t.sites[k] == bond) a = t.ops[k];
        else b = t.ops[k];
    }
    return t.coefficient * Eigen::kroneckerProduct(a, b).eval();
}

Gate make_gate(const TrotterPlan &p, std::size_t bond, double fraction) {
    const cplx factor = p.imaginary ? cplx(-p.dt * fraction) : cplx(0.0, -p.dt * fraction);
    return {bond, expm(factor * p.bond_terms[bond])};
}

struct Chain {
    std::vector<Tensor> sites;
    std::size_t center = 0;
    double trunc = 0.0;

    void move_to(std::size_t target) {
        while (center < target) {
            const SvdResult s = svd_split(sites[center], {kLeft, kPhys}, {.bond_label = "x"});
            sites[center] = s.left_isometry.relabeled("x", kRight).permuted({kLeft, kRight, kPhys});
            Tensor carry = s.right_isometry;
            std::vector<double> sv = s.singular_values;
            for (std::size_t i = 0; i < carry.size(); ++i) carry.data()[i] *= sv[i / carry.dim(kRight)];
            sites[center + 1] = contract(carry.relabeled(kRight, "y"), sites[center + 1].relabeled(kLeft, "y"),
                                         {{"y", "y"}})
                                    .relabeled("x", kLeft)
                                    .permuted({kLeft, kRight, kPhys});
            ++center;
        }
        while (center > target) {
            const SvdResult s = svd_split(sites[center], {kLeft}, {.bond_label = "x"});
            sites[center] = s.right_isometry.relabeled("x", kLeft).permuted({kLeft, kRight, kPhys});
            Tensor carry = s.left_isometry;
            const std::size_t m = carry.dim("x");
            for (std::size_t i = 0; i < carry.size(); ++i) carry.data()[i] *= s.singular_values[i % m];
            sites[center - 1] = contract(sites[center - 1].relabeled(kRight, "y"), carry.relabeled(kLeft, "y"),
                                         {{"y", "y"}})
                                    .relabeled("x", kRight)
                                    .permuted({kLeft, kRight, kPhys});
            --center;
        }
    }

    void apply(const Gate &g, std::size_t d_max, double tol, bool renormalize) {
        move_to(g.bond);
        const std::size_t i = g.bond;
        const std::size_t d1 = sites[i].dim(kPhys), d2 = sites[i + 1].dim(kPhys);
        const Tensor theta = contract(sites[i].relabeled({{kRight, "m"}, {kPhys, "p1"}}),
                                      sites[i + 1].relabeled({{kLeft, "m"}, {kPhys, "p2"}}), {{"m", "m"}});
        const Tensor u = Tensor::from_matrix(g.op, {"q1", "q2"}, {d1, d2}, {"p1", "p2"}, {d1, d2});
        const Tensor out =
            contract(theta, u, {{"p1", "p1"}, {"p2", "p2"}}).permuted({kLeft, "q1", "q2", kRight});
        double total = 0.0;
        for (const cplx &x : out.data()) total += std::norm(x);
        SvdOptions so;
        so.max_rank = d_max;
        so.tol = tol * total;
        so.bond_label = "x";
        const SvdResult s = svd_split(out, {kLeft, "q1"}, so);
        trunc += s.truncation_weight / total;
        std::vector<double> sv = s.singular_values;
        if (renormalize) {
            double kept = 0.0;
            for (double x : sv) kept += x * x;
            for (double &x : sv) x /= std::sqrt(kept);
        }
        sites[i] = s.left_isometry.relabeled({{"q1", kPhys}, {"x", kRight}}).permuted({kLeft, kRight, kPhys});
        Tensor right = s.right_isometry.relabeled({{"q2", kPhys}, {"x", kLeft}}).permuted({kLeft, kRight, kPhys});
        const std::size_t inner = right.dim(kRight) * right.dim(kPhys);
        for (std::size_t k = 0; k < right.size(); ++k) right.data()[k] *= sv[k / inner];
        sites[i + 1] = std::move(right);
        center = i + 1;
    }

    MatrixProductState state() const {
        MatrixProductState m(sites, Boundary::open);
        m.set_gauge(Gauge::mixed(center));
        return m;
    }
};

TraceRow record(const MatrixProductState &psi, const MatrixProductOperator &h, double t, double trunc) {
    TraceRow row;
    row.t = t;
    row.energy = std::real(expectation_mpo(psi, h));
    row.s_mid = psi.size() >= 2 ? entanglement_at_cut(psi, psi.size() / 2).von_neumann() : 0.0;
    row.trunc_cum = trunc;
    return row;
}

} // namespace

TrotterPlan build_plan(const ModelSpec &spec, double dt, int order, std::size_t steps, bool imaginary) {
    validate(spec);
    if (spec.boundary != Boundary::open) throw BoundaryError("TEBD supports open chains only");
    if (order != 1 && order != 2) throw SpecError("Trotter order must be 1 or 2");
    if (!std::isfinite(dt)) throw SpecError("time step must be finite");
    const std::vector<OperatorString> terms = operator_strings(spec);
    if (interaction_range(terms) > 1) throw UnsupportedError("TEBD needs nearest-neighbor terms only");
    if (imaginary && !is_hermitian(spec)) throw SymmetryError("imaginary-time evolution needs a Hermitian model");
    const std::size_t n = spec.n, d = local_dim(spec);
    TrotterPlan p;
    p.spec = spec;
    p.dt = dt;
    p.order = order;
    p.steps = steps;
    p.imaginary = imaginary;
    const auto dd = static_cast<Eigen::Index>(d * d);
    p.bond_terms.assign(n - 1, Matrix::Zero(dd, dd));
    for (const OperatorString &t : terms) {
        if (t.sites.size() == 2) {
            p.bond_terms[t.sites[0]] += embed_term(t, t.sites[0], d);
            continue;
        }
        const std::size_t j = t.sites[0];
        const bool has_left = j > 0, has_right = j + 1 < n;
        const double share = has_left && has_right ? 0.5 : 1.0;
        OperatorString part = t;
        part.coefficient *= share;
        if (has_right) p.bond_terms[j] += embed_term(part, j, d);
        if (has_left) {
            // Site j is the second factor of bond j-1.
            const Matrix id = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
            p.bond_terms[j - 1] += part.coefficient * Eigen::kroneckerProduct(id, t.ops[0]).eval();
        }
    }
    const double even_fraction = order == 2 ? 0.5 : 1.0;
    for (std::size_t b = 0; b + 1 < n; b += 2) p.even.push_back(make_gate(p, b, even_fraction));
    for (std::size_t b = 1; b + 1 < n; b += 2) p.odd.push_back(make_gate(p, b, 1.0));
    return p;
}

std::vector<Gate> step_sequence(const TrotterPlan &plan) {
    std::vector<Gate> seq = plan.even;
    seq.insert(seq.end(), plan.odd.begin(), plan.odd.end());
    if (plan.order == 2) seq.insert(seq.end(), plan.even.begin(), plan.even.end());
    return seq;
}

EvolutionResult evolve(const MatrixProductState &mps, const TrotterPlan &plan, std::size_t d_max, double tol) {
    if (mps.boundary() != Boundary::open) throw BoundaryError("TEBD needs an open state");
    if (mps.size() != plan.spec.n) throw ShapeError("state and plan have different lengths");
    for (std::size_t k = 0; k < mps.size(); ++k) {
        if (mps.phys_dim(k) != local_dim(plan.spec)) throw ShapeError("state and plan local dimensions differ");
    }
    if (d_max == 0) throw SpecError("d_max must be positive");
    const MatrixProductOperator h = build_mpo(plan.spec);
    Chain chain{canonicalize(mps, {GaugeKind::right, 0}).sites(), 0, 0.0};
    EvolutionResult out;
    out.trace.push_back(record(chain.state(), h, 0.0, 0.0));
    const std::vector<Gate> seq = step_sequence(plan);
    for (std::size_t step = 1; step <= plan.steps; ++step) {
        for (const Gate &g : seq) chain.apply(g, d_max, tol, plan.imaginary);
        out.trace.push_back(record(chain.state(), h, plan.dt * double(step), chain.trunc));
    }
    out.state = canonicalize(chain.state(), {GaugeKind::right, 0});
    return out;
}

EvolutionResult evolve_imaginary(const MatrixProductState &mps, const TrotterPlan &plan, std::size_t d_max,
                                 double tol) {
    if (!plan.imaginary) throw SpecError("plan was built for real time");
    return evolve(mps, plan, d_max, tol);
}

void write_trace_csv(std::ostream &os, const EvolutionTrace &trace) {
    os << "t,energy,S_mid,trunc_cum\n" << std::setprecision(17);
    for (const auto &r : trace) os << r.t << ',' << r.energy << ',' << r.s_mid << ',' << r.trunc_cum << '\n';
}

} // namespace tnet
