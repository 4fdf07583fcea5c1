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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "tnet/tensor.hpp"

namespace tnet {

std::size_t truncation_rank(std::span<const double> singular_values, std::optional<std::size_t> max_rank,
                            std::optional<double> tol) {
    std::size_t r = singular_values.size();
    if (tol) {
        double discarded = 0.0;
        while (r > 1) {
            const double w = singular_values[r - 1] * singular_values[r - 1];
            if (discarded + w > *tol) break;
            discarded += w;
            --r;
        }
    }
    if (max_rank) r = std::min(r, std::max<std::size_t>(1, *max_rank));
    return std::max<std::size_t>(r, 1);
}

SvdResult svd_split(const Tensor &t, const std::vector<Label> &left_labels, const SvdOptions &opts) {
    if (left_labels.empty() || left_labels.size() >= t.rank()) {
        throw BipartitionError("left labels must be a nonempty proper subset of the tensor labels");
    }
    std::vector<Label> right_labels;
    std::vector<std::size_t> left_dims, right_dims;
    for (const auto &l : left_labels) left_dims.push_back(t.dim(l));
    for (std::size_t i = 0; i < t.rank(); ++i) {
        const auto &l = t.labels()[i];
        if (std::find(left_labels.begin(), left_labels.end(), l) == left_labels.end()) {
            right_labels.push_back(l);
            right_dims.push_back(t.dims()[i]);
        }
    }
    if (right_labels.size() + left_labels.size() != t.rank()) {
        throw BipartitionError("left labels contain duplicates");
    }

    const Matrix m = t.matrix(left_labels, right_labels);
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd &s = svd.singularValues();
    std::vector<double> values(s.data(), s.data() + s.size());
    const std::size_t r = truncation_rank(values, opts.max_rank, opts.tol);

    SvdResult out;
    for (std::size_t i = r; i < values.size(); ++i) out.truncation_weight += values[i] * values[i];
    values.resize(r);
    out.singular_values = std::move(values);
    const auto ri = static_cast<Eigen::Index>(r);
    out.left_isometry = Tensor::from_matrix(svd.matrixU().leftCols(ri), left_labels, left_dims, {opts.bond_label}, {r});
    out.right_isometry =
        Tensor::from_matrix(svd.matrixV().leftCols(ri).adjoint(), {opts.bond_label}, {r}, right_labels, right_dims);
    return out;
}

Tensor SvdResult::recombine() const {
    const Label &bond = right_isometry.labels().front();
    Tensor weighted = right_isometry;
    const std::size_t r = singular_values.size();
    const std::size_t stride = weighted.size() / r;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < stride; ++j) weighted.data()[i * stride + j] *= singular_values[i];
    }
    return contract(left_isometry, weighted, {{bond, bond}});
}

namespace {

void check_hermitian(const Matrix &h, double tol) {
    if (h.rows() != h.cols()) throw DimensionError("eigenproblem requires a square matrix");
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tol * scale) {
        throw SymmetryError("matrix is not Hermitian (max |H - H^dagger| = " + std::to_string(asym) + ")");
    }
}

LowestEigenpair dense_lowest(const Matrix &h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    LowestEigenpair out;
    out.value = es.eigenvalues()(0);
    out.vector = es.eigenvectors().col(0);
    out.residual = (h * out.vector - out.value * out.vector).norm();
    out.converged = true;
    return out;
}

Vector start_vector(Eigen::Index dim, const std::optional<Vector> &guess) {
    if (guess) {
        if (guess->size() != dim) throw DimensionError("eigensolver guess has the wrong length");
        if (guess->norm() > 0.0) return guess->normalized();
    }
    std::mt19937_64 rng(0x5eedULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v(i) = cplx{re, im};
    }
    return v.normalized();
}

} // namespace

LowestEigenpair eig_lowest(const LinearMap &apply, Eigen::Index dim, const std::optional<Vector> &guess,
                           const EigOptions &opts) {
    if (dim <= 0) throw DimensionError("eigenproblem dimension must be positive");
    if (dim < opts.dense_threshold) {
        Matrix h(dim, dim);
        Vector e = Vector::Zero(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            e(i) = 1.0;
            h.col(i) = apply(e);
            e(i) = 0.0;
        }
        check_hermitian(h, opts.hermiticity_tol);
        auto out = dense_lowest(0.5 * (h + h.adjoint()));
        out.matvecs = static_cast<int>(dim);
        return out;
    }

    Vector v = start_vector(dim, guess);
    LowestEigenpair best;
    best.residual = std::numeric_limits<double>::infinity();
    int matvecs = 0;
    while (matvecs < opts.max_matvecs) {
        const Eigen::Index m = std::min<Eigen::Index>(opts.krylov_dim, dim);
        Matrix basis(dim, m);
        std::vector<double> alpha, beta;
        basis.col(0) = v;
        Eigen::Index size = 0;
        for (Eigen::Index k = 0; k < m; ++k) {
            Vector w = apply(basis.col(k));
            ++matvecs;
            alpha.push_back(std::real(basis.col(k).dot(w)));
            ++size;
            for (int pass = 0; pass < 2; ++pass) {
                w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).adjoint() * w);
            }
            const double b = w.norm();
            if (k + 1 == m || b < 1e-12 * std::max(1.0, std::abs(alpha.back()))) break;
            // Ritz residual estimate b * |last component| ends the block early.
            if (k >= 3) {
                Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k + 1, k + 1);
                for (Eigen::Index i = 0; i <= k; ++i) {
                    t(i, i) = alpha[static_cast<std::size_t>(i)];
                    if (i < k) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
                }
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
                if (b * std::abs(es.eigenvectors()(k, 0)) < 0.1 * opts.tol) break;
            }
            beta.push_back(b);
            basis.col(k + 1) = w / b;
        }

        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(size, size);
        for (Eigen::Index i = 0; i < size; ++i) {
            tri(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < size) tri(i, i + 1) = tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(tri);
        const double theta = tes.eigenvalues()(0);
        Vector x = basis.leftCols(size) * tes.eigenvectors().col(0).cast<cplx>();
        x.normalize();
        const Vector hx = apply(x);
        ++matvecs;
        const double rq = std::real(x.dot(hx));
        const double residual = (hx - rq * x).norm();
        // Each restart keeps x in the new Krylov space, so Ritz values only decrease.
        (void)theta;
        best.value = rq;
        best.vector = x;
        best.residual = residual;
        if (residual <= opts.tol) {
            best.converged = true;
            break;
        }
        v = x;
    }
    best.matvecs = matvecs;
    if (!best.converged && opts.throw_on_failure) {
        throw ConvergenceError("Lanczos did not reach residual " + std::to_string(opts.tol) + " after " +
                                   std::to_string(matvecs) + " operator applications",
                               best.residual);
    }
    return best;
}

LowestEigenpair eig_lowest(const Matrix &h, const std::optional<Vector> &guess, const EigOptions &opts) {
    check_hermitian(h, opts.hermiticity_tol);
    if (h.rows() < opts.dense_threshold) return dense_lowest(0.5 * (h + h.adjoint()));
    return eig_lowest([&h](const Vector &x) -> Vector { return h * x; }, h.rows(), guess, opts);
}

LowestEigenpair eig_lowest(const Tensor &h, const std::vector<Label> &row_labels, const std::optional<Vector> &guess,
                           const EigOptions &opts) {
    std::vector<Label> col_labels;
    for (const auto &l : h.labels()) {
        if (std::find(row_labels.begin(), row_labels.end(), l) == row_labels.end()) col_labels.push_back(l);
    }
    return eig_lowest(h.matrix(row_labels, col_labels), guess, opts);
}

namespace {

bool modulus_order(const cplx &a, const cplx &b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-12 * std::max(1.0, std::max(ma, mb))) return ma > mb;
    if (std::abs(a.real() - b.real()) > 1e-12) return a.real() > b.real();
    return a.imag() > b.imag();
}

std::vector<std::size_t> sorted_order(const Eigen::VectorXcd &values) {
    std::vector<std::size_t> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return modulus_order(values(static_cast<Eigen::Index>(i)), values(static_cast<Eigen::Index>(j)));
    });
    return order;
}

// Groups indices of `values` (already sorted) whose eigenvalues coincide within tolerance.
std::vector<std::vector<std::size_t>> clusters_of(const std::vector<cplx> &values, double tol) {
    std::vector<std::vector<std::size_t>> clusters;
    std::vector<bool> used(values.size(), false);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (used[i]) continue;
        std::vector<std::size_t> c{i};
        used[i] = true;
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            if (!used[j] && std::abs(values[j] - values[i]) <= tol * std::max(1.0, std::abs(values[i]))) {
                c.push_back(j);
                used[j] = true;
            }
        }
        clusters.push_back(std::move(c));
    }
    return clusters;
}

Eigen::Index numerical_rank(const Matrix &cols) {
    Eigen::JacobiSVD<Matrix> svd(cols);
    const auto &s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > 1e-7 * s(0)) ++r;
    }
    return r;
}

} // namespace

GeneralSpectrum eig_general(const Matrix &m, double cluster_tol) {
    if (m.rows() != m.cols()) throw DimensionError("eig_general requires a square matrix");
    const Eigen::Index n = m.rows();
    Eigen::ComplexEigenSolver<Matrix> ces(m, true);
    const auto order = sorted_order(ces.eigenvalues());

    GeneralSpectrum out;
    Matrix right(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto src = static_cast<Eigen::Index>(order[static_cast<std::size_t>(k)]);
        out.values.push_back(ces.eigenvalues()(src));
        right.col(k) = ces.eigenvectors().col(src).normalized();
    }
    out.right.resize(static_cast<std::size_t>(n));
    out.left.resize(static_cast<std::size_t>(n));

    const auto clusters = clusters_of(out.values, cluster_tol);
    std::vector<bool> defective_cluster(clusters.size(), false);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        Matrix cols(n, static_cast<Eigen::Index>(clusters[c].size()));
        for (std::size_t j = 0; j < clusters[c].size(); ++j) {
            cols.col(static_cast<Eigen::Index>(j)) = right.col(static_cast<Eigen::Index>(clusters[c][j]));
        }
        if (numerical_rank(cols) < cols.cols()) {
            defective_cluster[c] = true;
            out.defective = true;
        }
    }

    if (!out.defective) {
        const Matrix inv = right.inverse();
        for (Eigen::Index k = 0; k < n; ++k) {
            out.right[static_cast<std::size_t>(k)] = right.col(k);
            out.left[static_cast<std::size_t>(k)] = inv.row(k).transpose();
        }
        return out;
    }

    // Left eigenvectors from the transpose, biorthonormalized cluster by cluster.
    Eigen::ComplexEigenSolver<Matrix> tes(m.transpose(), true);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        if (defective_cluster[c]) continue;
        const cplx center = out.values[clusters[c].front()];
        std::vector<Eigen::Index> match;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (std::abs(tes.eigenvalues()(j) - center) <= cluster_tol * std::max(1.0, std::abs(center))) {
                match.push_back(j);
            }
        }
        const auto k = static_cast<Eigen::Index>(clusters[c].size());
        if (static_cast<Eigen::Index>(match.size()) != k) continue;
        Matrix rc(n, k), lc(n, k);
        for (Eigen::Index j = 0; j < k; ++j) {
            rc.col(j) = right.col(static_cast<Eigen::Index>(clusters[c][static_cast<std::size_t>(j)]));
            lc.col(j) = tes.eigenvectors().col(match[static_cast<std::size_t>(j)]);
        }
        const Matrix g = lc.transpose() * rc;
        const Matrix lnew = lc * g.inverse().transpose();
        for (Eigen::Index j = 0; j < k; ++j) {
            const std::size_t idx = clusters[c][static_cast<std::size_t>(j)];
            out.right[idx] = rc.col(j);
            out.left[idx] = lnew.col(j);
        }
    }
    return out;
}

GeneralSpectrum eig_general(const Tensor &m, const std::vector<Label> &row_labels, double cluster_tol) {
    std::vector<Label> col_labels;
    for (const auto &l : m.labels()) {
        if (std::find(row_labels.begin(), row_labels.end(), l) == row_labels.end()) col_labels.push_back(l);
    }
    return eig_general(m.matrix(row_labels, col_labels), cluster_tol);
}

Matrix expm(const Matrix &m) {
    if (m.rows() != m.cols()) throw DimensionError("matrix exponential requires a square matrix");
    return m.exp();
}

} // namespace tnet
