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

#include "tnet/ed.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace tnet::ed {

namespace {

// Local operator tables, written out independently of the model builders.
Matrix sigma(int axis) {
    Matrix m = Matrix::Zero(2, 2);
    if (axis == 0) m << 0.0, 1.0, 1.0, 0.0;
    if (axis == 1) m << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    if (axis == 2) m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

Matrix spin_one(int axis) {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx i(0.0, 1.0);
    Matrix m = Matrix::Zero(3, 3);
    if (axis == 0) m << 0.0, r, 0.0, r, 0.0, r, 0.0, r, 0.0;
    if (axis == 1) m << 0.0, -i * r, 0.0, i * r, 0.0, -i * r, 0.0, i * r, 0.0;
    if (axis == 2) m << 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0;
    return m;
}

Matrix dense_kron(const Matrix &a, const Matrix &b) { return Eigen::kroneckerProduct(a, b).eval(); }

SparseMatrix sparse_identity(Eigen::Index n) {
    SparseMatrix m(n, n);
    m.setIdentity();
    return m;
}

class Embedder {
public:
    Embedder(std::size_t n, std::size_t d) : n_(n), d_(static_cast<Eigen::Index>(d)) {}

    Eigen::Index dim() const {
        Eigen::Index total = 1;
        for (std::size_t k = 0; k < n_; ++k) total *= d_;
        return total;
    }

    SparseMatrix one(const Matrix &op, std::size_t site) const {
        Eigen::Index left = 1, right = 1;
        for (std::size_t k = 0; k < site; ++k) left *= d_;
        for (std::size_t k = site + 1; k < n_; ++k) right *= d_;
        const SparseMatrix s = op.sparseView();
        const SparseMatrix ls = Eigen::kroneckerProduct(sparse_identity(left), s);
        return Eigen::kroneckerProduct(ls, sparse_identity(right));
    }

    /// h acts on the ordered pair (i, j) with i the more significant factor of h.
    SparseMatrix two(const Matrix &h, std::size_t i, std::size_t j) const {
        SparseMatrix out(dim(), dim());
        for (Eigen::Index a = 0; a < d_; ++a) {
            for (Eigen::Index c = 0; c < d_; ++c) {
                const Matrix block = h.block(a * d_, c * d_, d_, d_);
                if (block.cwiseAbs().maxCoeff() == 0.0) continue;
                Matrix unit = Matrix::Zero(d_, d_);
                unit(a, c) = 1.0;
                out += one(unit, i) * one(block, j);
            }
        }
        return out;
    }

private:
    std::size_t n_;
    Eigen::Index d_;
};

std::vector<std::pair<std::size_t, std::size_t>> pairs_at(const ModelSpec &spec, std::size_t distance) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t count = spec.boundary == Boundary::periodic ? spec.n : spec.n - distance;
    for (std::size_t j = 0; j < count; ++j) out.emplace_back(j, (j + distance) % spec.n);
    return out;
}

Matrix dot_product(Matrix (*op)(int)) {
    Matrix h = dense_kron(op(0), op(0));
    h += dense_kron(op(1), op(1));
    h += dense_kron(op(2), op(2));
    return h;
}

// Maps a basis index to (region index, complement index).
struct Split {
    std::vector<Eigen::Index> a, b;
    Eigen::Index dim_a = 1, dim_b = 1;
};

Split split_indices(const std::vector<std::size_t> &dims, const std::vector<std::size_t> &region) {
    std::vector<bool> in(dims.size(), false);
    for (std::size_t i = 0; i < region.size(); ++i) {
        if (region[i] >= dims.size()) throw RangeError("region site out of range");
        if (i > 0 && region[i] <= region[i - 1]) throw RangeError("region sites must be strictly increasing");
        in[region[i]] = true;
    }
    Split s;
    Eigen::Index total = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        total *= static_cast<Eigen::Index>(dims[k]);
        (in[k] ? s.dim_a : s.dim_b) *= static_cast<Eigen::Index>(dims[k]);
    }
    s.a.resize(static_cast<std::size_t>(total));
    s.b.resize(static_cast<std::size_t>(total));
    for (Eigen::Index idx = 0; idx < total; ++idx) {
        Eigen::Index rem = idx, a = 0, b = 0, wa = 1, wb = 1;
        for (std::size_t k = dims.size(); k-- > 0;) {
            const auto d = static_cast<Eigen::Index>(dims[k]);
            const Eigen::Index digit = rem % d;
            rem /= d;
            if (in[k]) {
                a += digit * wa;
                wa *= d;
            } else {
                b += digit * wb;
                wb *= d;
            }
        }
        s.a[static_cast<std::size_t>(idx)] = a;
        s.b[static_cast<std::size_t>(idx)] = b;
    }
    return s;
}

std::vector<Eigen::Index> inverse_table(const Split &s) {
    std::vector<Eigen::Index> table(static_cast<std::size_t>(s.dim_a * s.dim_b));
    for (std::size_t idx = 0; idx < s.a.size(); ++idx) {
        table[static_cast<std::size_t>(s.a[idx] * s.dim_b + s.b[idx])] = static_cast<Eigen::Index>(idx);
    }
    return table;
}

Eigen::VectorXd spectrum_of(const Matrix &rho) {
    return Eigen::SelfAdjointEigenSolver<Matrix>(rho, Eigen::EigenvaluesOnly).eigenvalues();
}

double renyi_of(const Eigen::VectorXd &p, double alpha) {
    if (alpha == 0.0) return std::log2(static_cast<double>((p.array() > 1e-12).count()));
    if (std::isinf(alpha)) return -std::log2(p.maxCoeff());
    if (alpha == 1.0) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            if (p(i) > 0.0) s -= p(i) * std::log2(p(i));
        }
        return s;
    }
    double tr = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) tr += std::pow(std::max(p(i), 0.0), alpha);
    return std::log2(tr) / (1.0 - alpha);
}

std::size_t total_dim(const ModelSpec &spec, std::size_t cap) {
    std::size_t total = 1;
    for (std::size_t k = 0; k < spec.n; ++k) {
        total *= local_dim(spec);
        if (total > cap) throw SizeError("Hilbert-space dimension exceeds the configured cap of " + std::to_string(cap));
    }
    return total;
}

} // namespace

SparseMatrix sparse_hamiltonian(const ModelSpec &spec, std::size_t cap) {
    validate(spec);
    total_dim(spec, cap);
    const std::size_t d = local_dim(spec);
    const Embedder e(spec.n, d);
    SparseMatrix h(e.dim(), e.dim());
    switch (spec.kind) {
    case ModelKind::xy: {
        const double g = spec.couplings.gamma;
        const Matrix bond =
            -0.5 * ((1.0 + g) / 4.0 * dense_kron(sigma(0), sigma(0)) + (1.0 - g) / 4.0 * dense_kron(sigma(1), sigma(1)));
        for (auto [i, j] : pairs_at(spec, 1)) h += e.two(bond, i, j);
        if (spec.couplings.lambda != 0.0) {
            for (std::size_t j = 0; j < spec.n; ++j) h += e.one(-spec.couplings.lambda / 2.0 * sigma(2), j);
        }
        break;
    }
    case ModelKind::heisenberg_spin1: {
        const Matrix bond = spec.couplings.J * dot_product(spin_one);
        for (auto [i, j] : pairs_at(spec, 1)) h += e.two(bond, i, j);
        break;
    }
    case ModelKind::aklt: {
        const Matrix x = dot_product(spin_one);
        const Matrix bond = 0.5 * x + x * x / 6.0 + Matrix::Identity(9, 9) / 3.0;
        for (auto [i, j] : pairs_at(spec, 1)) h += e.two(bond, i, j);
        break;
    }
    case ModelKind::majumdar_ghosh: {
        const Matrix s = dot_product(sigma);
        for (auto [i, j] : pairs_at(spec, 1)) h += e.two(2.0 * s, i, j);
        for (auto [i, j] : pairs_at(spec, 2)) h += e.two(s, i, j);
        break;
    }
    case ModelKind::custom:
        for (const auto &t : spec.terms) {
            SparseMatrix term = sparse_identity(e.dim());
            for (std::size_t k = 0; k < t.sites.size(); ++k) term = term * e.one(local_operator(t.ops[k], d), t.sites[k]);
            h += t.coefficient * term;
        }
        break;
    }
    h.prune(cplx(0.0, 0.0));
    return h;
}

Matrix dense_hamiltonian(const ModelSpec &spec, std::size_t cap) { return Matrix(sparse_hamiltonian(spec, cap)); }

Solution solve(const ModelSpec &spec, const SolveOptions &opts) {
    const SparseMatrix h = sparse_hamiltonian(spec, opts.cap);
    const Eigen::Index dim = h.rows();
    Solution out;
    std::vector<double> levels;
    std::vector<Vector> vectors;
    if (static_cast<std::size_t>(dim) <= opts.dense_limit) {
        Eigen::SelfAdjointEigenSolver<Matrix> es{Matrix(h)};
        for (Eigen::Index i = 0; i < dim; ++i) {
            levels.push_back(es.eigenvalues()(i));
            vectors.push_back(es.eigenvectors().col(i));
        }
    } else {
        double bound = 0.0;
        for (Eigen::Index c = 0; c < h.outerSize(); ++c) {
            double col = 0.0;
            for (SparseMatrix::InnerIterator it(h, c); it; ++it) col += std::abs(it.value());
            bound = std::max(bound, col);
        }
        const double shift = 2.0 * bound + 1.0;
        EigOptions eo;
        eo.tol = 1e-10;
        eo.max_matvecs = 50000;
        eo.krylov_dim = 60;
        std::mt19937_64 rng(0x0dd5eed);
        std::normal_distribution<double> g(0.0, 1.0);
        while (levels.size() < opts.max_levels) {
            const LinearMap apply = [&](const Vector &v) {
                Vector w = h * v;
                for (const auto &f : vectors) w += shift * f * f.dot(v);
                return w;
            };
            Vector guess(dim);
            for (Eigen::Index i = 0; i < dim; ++i) guess(i) = cplx(g(rng), g(rng));
            const LowestEigenpair p = eig_lowest(apply, dim, guess, eo);
            levels.push_back(p.value);
            vectors.push_back(p.vector);
            if (p.value > levels.front() + opts.degeneracy_tol) break;
        }
    }
    SpectralSummary &s = out.summary;
    s.ground_energy = levels.front();
    s.degeneracy = 0;
    s.gap = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] <= s.ground_energy + opts.degeneracy_tol) {
            ++s.degeneracy;
            out.ground_vectors.push_back(vectors[i]);
        } else {
            s.gap = levels[i] - s.ground_energy;
            break;
        }
    }
    s.levels = std::move(levels);
    return out;
}

Matrix gibbs(const ModelSpec &spec, double beta, std::size_t cap) {
    if (!(beta >= 0.0)) throw RangeError("inverse temperature must be non-negative");
    Eigen::SelfAdjointEigenSolver<Matrix> es(dense_hamiltonian(spec, cap));
    const Eigen::VectorXd &e = es.eigenvalues();
    Eigen::VectorXd w = (-beta * (e.array() - e(0))).exp();
    w /= w.sum();
    return es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

Matrix reduce(const Vector &psi, const std::vector<std::size_t> &dims, const std::vector<std::size_t> &region) {
    const Split s = split_indices(dims, region);
    if (static_cast<std::size_t>(psi.size()) != s.a.size()) throw DimensionError("state length does not match site dims");
    Matrix m = Matrix::Zero(s.dim_a, s.dim_b);
    for (std::size_t idx = 0; idx < s.a.size(); ++idx) m(s.a[idx], s.b[idx]) = psi(static_cast<Eigen::Index>(idx));
    return m * m.adjoint();
}

Matrix reduce(const Matrix &rho, const std::vector<std::size_t> &dims, const std::vector<std::size_t> &region) {
    const Split s = split_indices(dims, region);
    if (static_cast<std::size_t>(rho.rows()) != s.a.size() || rho.rows() != rho.cols()) {
        throw DimensionError("density matrix shape does not match site dims");
    }
    const auto table = inverse_table(s);
    Matrix out = Matrix::Zero(s.dim_a, s.dim_a);
    for (Eigen::Index a = 0; a < s.dim_a; ++a) {
        for (Eigen::Index a2 = 0; a2 < s.dim_a; ++a2) {
            cplx sum = 0.0;
            for (Eigen::Index b = 0; b < s.dim_b; ++b) {
                sum += rho(table[static_cast<std::size_t>(a * s.dim_b + b)], table[static_cast<std::size_t>(a2 * s.dim_b + b)]);
            }
            out(a, a2) = sum;
        }
    }
    return out;
}

Matrix partial_transpose(const Matrix &rho, const std::vector<std::size_t> &dims,
                         const std::vector<std::size_t> &region) {
    const Split s = split_indices(dims, region);
    if (static_cast<std::size_t>(rho.rows()) != s.a.size() || rho.rows() != rho.cols()) {
        throw DimensionError("density matrix shape does not match site dims");
    }
    const auto table = inverse_table(s);
    const auto at = [&](Eigen::Index a, Eigen::Index b) { return table[static_cast<std::size_t>(a * s.dim_b + b)]; };
    Matrix out(rho.rows(), rho.cols());
    for (std::size_t r = 0; r < s.a.size(); ++r) {
        for (std::size_t c = 0; c < s.a.size(); ++c) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rho(at(s.a[c], s.b[r]), at(s.a[r], s.b[c]));
        }
    }
    return out;
}

double von_neumann(const Matrix &rho) { return renyi_of(spectrum_of(rho), 1.0); }

double renyi(const Matrix &rho, double alpha) { return renyi_of(spectrum_of(rho), alpha); }

std::vector<double> default_renyi_grid() { return {0.0, 0.5, 2.0, 3.0, std::numeric_limits<double>::infinity()}; }

EntropyReport entropy_suite(const Matrix &rho, const std::vector<std::size_t> &dims,
                            const std::vector<std::size_t> &region, const std::vector<double> &alphas) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw SymmetryError("density matrix is not Hermitian");
    const Eigen::VectorXd p = spectrum_of(rho);
    if (std::abs(p.sum() - 1.0) > 1e-10) throw NormalizationError("density matrix does not have unit trace");
    if (p.minCoeff() < -1e-10) throw NormalizationError("density matrix is not positive semidefinite");

    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (std::find(region.begin(), region.end(), k) == region.end()) rest.push_back(k);
    }
    const Eigen::VectorXd pa = spectrum_of(reduce(rho, dims, region));
    const Eigen::VectorXd pb = spectrum_of(reduce(rho, dims, rest));

    EntropyReport r;
    r.von_neumann = renyi_of(pa, 1.0);
    for (double a : alphas) r.renyi[a] = renyi_of(pa, a);
    r.mutual_information = r.von_neumann + renyi_of(pb, 1.0) - renyi_of(p, 1.0);
    const double trace_norm = spectrum_of(partial_transpose(rho, dims, region)).cwiseAbs().sum();
    r.negativity = trace_norm - 1.0;
    r.log_negativity = std::log2(trace_norm);
    return r;
}

EntropyReport entropy_suite(const Vector &psi, const std::vector<std::size_t> &dims,
                            const std::vector<std::size_t> &region, const std::vector<double> &alphas) {
    return entropy_suite(Matrix(psi * psi.adjoint()), dims, region, alphas);
}

} // namespace tnet::ed
