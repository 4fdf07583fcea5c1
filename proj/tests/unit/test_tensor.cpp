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

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "tnet/tensor.hpp"
#include "tnet/tensor_io.hpp"

using namespace tnet;

namespace {

Tensor mat_tensor(const Matrix &m, const Label &r, const Label &c) { return Tensor::from_matrix(m, r, c); }

} // namespace

TEST(Tensor, IdentityContractionIsNoOp) {
    std::mt19937_64 rng(1);
    const Tensor t = Tensor::random({"a", "b", "c"}, {2, 3, 4}, rng);
    const Tensor id = Tensor::identity("b", "x", 3);
    const Tensor out = contract(t, id, {{"b", "b"}}).relabeled("x", "b");
    EXPECT_LT(max_abs_diff(t, out), 1e-14);
}

TEST(Tensor, ContractMatchesNaiveProduct) {
    std::mt19937_64 rng(2);
    const Matrix a = oracle::random_matrix(3, 3, rng);
    const Matrix b = oracle::random_matrix(3, 3, rng);
    const Tensor c = contract(mat_tensor(a, "i", "k"), mat_tensor(b, "k", "j"), {{"k", "k"}});
    EXPECT_LT((c.matrix({"i"}, {"j"}) - oracle::naive_matmul(a, b)).norm(), 1e-12);
}

TEST(Tensor, TraceOfIdentityIsDimension) {
    const Tensor id = Tensor::identity("a", "b", 7);
    EXPECT_NEAR(std::abs(trace(id, {{"a", "b"}}).value() - cplx(7.0)), 0.0, 1e-14);
}

TEST(Tensor, FullContractionGivesScalar) {
    std::mt19937_64 rng(3);
    const Tensor t = Tensor::random({"a", "b"}, {3, 2}, rng);
    const Tensor s = contract(t.conj(), t, {{"a", "a"}, {"b", "b"}});
    EXPECT_EQ(s.rank(), 0U);
    EXPECT_NEAR(s.value().real(), t.norm() * t.norm(), 1e-12);
}

TEST(Tensor, ExtentMismatchThrows) {
    const Tensor a({"i", "k"}, {2, 3});
    const Tensor b({"k", "j"}, {4, 2});
    EXPECT_THROW(contract(a, b, {{"k", "k"}}), DimensionError);
}

TEST(Tensor, MissingOrDuplicateLabelsThrow) {
    const Tensor a({"i", "k"}, {2, 3});
    const Tensor b({"k", "j"}, {3, 2});
    EXPECT_THROW(contract(a, b, {{"z", "k"}}), LabelError);
    EXPECT_THROW(Tensor({"i", "i"}, {2, 2}), LabelError);
    const Tensor c({"i", "j"}, {2, 2});
    EXPECT_THROW(contract(a, c, {{"k", "j"}}), DimensionError);
    EXPECT_THROW(contract(a, Tensor({"i", "m"}, {2, 2}), {{"k", "m"}}), DimensionError);
}

TEST(Tensor, FuseSplitRoundTrip) {
    std::mt19937_64 rng(4);
    const Tensor t = Tensor::random({"a", "b", "c"}, {2, 3, 4}, rng);
    const Tensor f = t.fused({"a", "c"}, "ac");
    EXPECT_EQ(f.labels(), (std::vector<Label>{"b", "ac"}));
    EXPECT_EQ(f.dim("ac"), 8U);
    const Tensor back = f.split("ac", {"a", "c"}, {2, 4});
    EXPECT_LT(max_abs_diff(t, back), 1e-15);
}

TEST(Svd, EmptyOrFullBipartitionThrows) {
    const Tensor t({"a", "b"}, {2, 2});
    EXPECT_THROW(svd_split(t, {}), BipartitionError);
    EXPECT_THROW(svd_split(t, {"a", "b"}), BipartitionError);
}

TEST(Svd, IdentityHasUnitSingularValues) {
    const SvdResult r = svd_split(Tensor::identity("a", "b", 4), {"a"});
    ASSERT_EQ(r.singular_values.size(), 4U);
    for (double s : r.singular_values) EXPECT_NEAR(s, 1.0, 1e-14);
    EXPECT_EQ(r.truncation_weight, 0.0);
}

TEST(Svd, RankOneIsDetected) {
    Matrix m(3, 2);
    m << 1, 2, 2, 4, 3, 6;
    SvdOptions opts;
    opts.tol = 1e-20;
    const SvdResult r = svd_split(mat_tensor(m, "a", "b"), {"a"}, opts);
    EXPECT_EQ(r.singular_values.size(), 1U);
    EXPECT_NEAR(r.singular_values[0], std::sqrt(70.0), 1e-12);
    EXPECT_LT((r.recombine().matrix({"a"}, {"b"}) - m).norm(), 1e-12);
}

TEST(Svd, ReconstructsRandomMatrix) {
    std::mt19937_64 rng(5);
    const Tensor t = Tensor::random({"a", "b", "c", "d"}, {2, 4, 2, 4}, rng);
    const SvdResult r = svd_split(t, {"a", "c"});
    EXPECT_EQ(r.singular_values.size(), 4U);
    EXPECT_LT(max_abs_diff(t, r.recombine()), 1e-12);
    EXPECT_EQ(r.left_isometry.labels(), (std::vector<Label>{"a", "c", "bond"}));
    EXPECT_EQ(r.right_isometry.labels(), (std::vector<Label>{"bond", "b", "d"}));
}

TEST(Svd, TruncationRuleKeepsSmallestAdmissibleRank) {
    const std::vector<double> s{1.0, 0.5, 0.1, 0.01};
    // Squared tail weights: drop last -> 1e-4, last two -> 0.0101, last three -> 0.2601.
    EXPECT_EQ(truncation_rank(s, std::nullopt, 1e-4), 3U);
    EXPECT_EQ(truncation_rank(s, std::nullopt, 0.011), 2U);
    EXPECT_EQ(truncation_rank(s, std::nullopt, 0.3), 1U);
    EXPECT_EQ(truncation_rank(s, std::nullopt, 10.0), 1U);
    EXPECT_EQ(truncation_rank(s, std::size_t{2}, 1e-12), 2U);
    EXPECT_EQ(truncation_rank(s, std::nullopt, std::nullopt), 4U);
}

TEST(Svd, MaxRankCapReportsDiscardedWeight) {
    Matrix m = Matrix::Zero(4, 4);
    m.diagonal() << 4.0, 3.0, 2.0, 1.0;
    SvdOptions opts;
    opts.max_rank = 2;
    const SvdResult r = svd_split(mat_tensor(m, "a", "b"), {"a"}, opts);
    EXPECT_EQ(r.singular_values.size(), 2U);
    EXPECT_NEAR(r.truncation_weight, 5.0, 1e-12);
}

TEST(Eig, PauliZLowest) {
    const LowestEigenpair r = eig_lowest(oracle::pauli_z(), std::nullopt);
    EXPECT_NEAR(r.value, -1.0, 1e-12);
    EXPECT_NEAR(std::abs(r.vector(1)), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(r.vector(0)), 0.0, 1e-12);
}

TEST(Eig, PauliXLowestUpToPhase) {
    const LowestEigenpair r = eig_lowest(oracle::pauli_x(), std::nullopt);
    EXPECT_NEAR(r.value, -1.0, 1e-12);
    Vector expect(2);
    expect << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(expect.dot(r.vector)), 1.0, 1e-12);
}

TEST(Eig, TwoSiteXYMatchesDenseSolve) {
    const Matrix h = oracle::xy_hamiltonian(2, 0.0, 0.0, false);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    EXPECT_NEAR(eig_lowest(h, std::nullopt).value, es.eigenvalues()(0), 1e-12);
    EXPECT_NEAR(es.eigenvalues()(0), -0.25, 1e-12);
}

TEST(Eig, LanczosMatchesDenseOnLargeMatrix) {
    std::mt19937_64 rng(6);
    const Matrix h = oracle::random_hermitian(200, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const LowestEigenpair r = eig_lowest(h, std::nullopt);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, es.eigenvalues()(0), 1e-9);
    EXPECT_LT((h * r.vector - r.value * r.vector).norm(), 1e-8);
}

TEST(Eig, NonHermitianThrows) {
    Matrix m(2, 2);
    m << 0, 1, 0, 0;
    EXPECT_THROW(eig_lowest(m, std::nullopt), SymmetryError);
}

TEST(Eig, IterationCapRaisesConvergenceError) {
    std::mt19937_64 rng(7);
    const Matrix h = oracle::random_hermitian(300, rng);
    EigOptions opts;
    opts.max_matvecs = 5;
    opts.krylov_dim = 5;
    try {
        eig_lowest(h, std::nullopt, opts);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError &e) {
        EXPECT_GT(e.best_residual(), 0.0);
    }
    opts.throw_on_failure = false;
    EXPECT_FALSE(eig_lowest(h, std::nullopt, opts).converged);
}

TEST(EigGeneral, DiagonalSortedByModulus) {
    Matrix m = Matrix::Zero(4, 4);
    m.diagonal() << 1.0, -1.0, 3.0, 1.0;
    const GeneralSpectrum s = eig_general(m);
    EXPECT_NEAR(std::abs(s.values[0] - cplx(3.0)), 0.0, 1e-12);
    for (std::size_t j = 1; j < 4; ++j) EXPECT_NEAR(std::abs(s.values[j]), 1.0, 1e-12);
    EXPECT_FALSE(s.defective);
}

TEST(EigGeneral, RotationHasImaginaryPair) {
    Matrix m(2, 2);
    m << 0, -1, 1, 0;
    const GeneralSpectrum s = eig_general(m);
    EXPECT_NEAR(std::abs(s.values[0].real()), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s.values[0].imag()), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(s.values[0] + s.values[1]), 0.0, 1e-12);
}

TEST(EigGeneral, AkltTransferSpectrum) {
    // E = sum_m A_m (x) conj(A_m) with the spin-1 valence-bond matrices.
    Matrix ap = Matrix::Zero(2, 2), a0 = Matrix::Zero(2, 2), am = Matrix::Zero(2, 2);
    ap(0, 1) = std::sqrt(2.0);
    a0(0, 0) = 1.0;
    a0(1, 1) = -1.0;
    am(1, 0) = -std::sqrt(2.0);
    const Matrix e = oracle::kron(ap, ap.conjugate()) + oracle::kron(a0, a0.conjugate()) +
                     oracle::kron(am, am.conjugate());
    const GeneralSpectrum s = eig_general(e);
    EXPECT_NEAR(std::abs(s.values[0] - cplx(3.0)), 0.0, 1e-10);
    for (std::size_t j = 1; j < 4; ++j) EXPECT_NEAR(std::abs(s.values[j] + cplx(1.0)), 0.0, 1e-10);
}

TEST(EigGeneral, JordanBlockIsDefective) {
    Matrix m(2, 2);
    m << 1, 1, 0, 1;
    EXPECT_TRUE(eig_general(m).defective);
}

TEST(EigGeneral, LeftRightBiorthonormal) {
    std::mt19937_64 rng(8);
    const Matrix m = oracle::random_matrix(6, 6, rng);
    const GeneralSpectrum s = eig_general(m);
    for (std::size_t j = 0; j < s.values.size(); ++j) {
        ASSERT_TRUE(s.right[j] && s.left[j]);
        const Vector &r = *s.right[j];
        const Vector &l = *s.left[j];
        EXPECT_LT((m * r - s.values[j] * r).norm(), 1e-9);
        EXPECT_LT((l.transpose() * m - s.values[j] * l.transpose()).norm(), 1e-9);
        EXPECT_NEAR(std::abs((l.transpose() * r)(0) - cplx(1.0)), 0.0, 1e-9);
    }
}

TEST(Expm, MatchesEigendecomposition) {
    std::mt19937_64 rng(9);
    const Matrix h = oracle::random_hermitian(5, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const cplx dt(0.0, -0.3);
    Vector phases(5);
    for (int i = 0; i < 5; ++i) phases(i) = std::exp(dt * es.eigenvalues()(i));
    const Matrix expect = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    EXPECT_LT((expm(dt * h) - expect).norm(), 1e-12);
}

TEST(TensorIo, RoundTripPreservesEverything) {
    std::mt19937_64 rng(10);
    const Tensor t = Tensor::random({"left", "p", "right"}, {3, 2, 5}, rng);
    std::stringstream ss;
    write_tensor(ss, t);
    const Tensor back = read_tensor(ss);
    EXPECT_EQ(back.labels(), t.labels());
    EXPECT_EQ(back.dims(), t.dims());
    EXPECT_EQ(max_abs_diff(t, back), 0.0);
}

TEST(TensorIo, ArchiveRoundTrip) {
    std::mt19937_64 rng(11);
    Archive a{R"({"kind":"mps"})", {Tensor::random({"x"}, {4}, rng), Tensor::scalar(cplx(1, 2))}};
    std::stringstream ss;
    write_archive(ss, a);
    const Archive b = read_archive(ss);
    EXPECT_EQ(b.metadata, a.metadata);
    ASSERT_EQ(b.tensors.size(), 2U);
    EXPECT_EQ(b.tensors[1].value(), cplx(1, 2));
}

TEST(TensorIo, TruncatedOrForeignStreamsThrow) {
    std::stringstream ss;
    write_tensor(ss, Tensor::identity("a", "b", 3));
    std::string bytes = ss.str();
    std::stringstream cut(bytes.substr(0, bytes.size() - 4));
    EXPECT_THROW(read_tensor(cut), FormatError);
    std::stringstream foreign("PK\x03\x04 not a tensor");
    EXPECT_THROW(read_tensor(foreign), FormatError);
}

// Randomized properties.

TEST(TensorProperty, ContractionIsAssociative) {
    std::mt19937_64 rng(100);
    std::uniform_int_distribution<std::size_t> ext(1, 4);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t i = ext(rng), j = ext(rng), k = ext(rng), l = ext(rng);
        const Tensor a = Tensor::random({"i", "j"}, {i, j}, rng);
        const Tensor b = Tensor::random({"j", "k"}, {j, k}, rng);
        const Tensor c = Tensor::random({"k", "l"}, {k, l}, rng);
        const Tensor left = contract(contract(a, b, {{"j", "j"}}), c, {{"k", "k"}});
        const Tensor right = contract(a, contract(b, c, {{"k", "k"}}), {{"j", "j"}});
        ASSERT_LT(max_abs_diff(left, right), 1e-12) << "trial " << trial;
    }
}

TEST(TensorProperty, SvdRoundTripAndWeightIdentity) {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<std::size_t> ext(1, 5);
    for (int trial = 0; trial < 100; ++trial) {
        const Tensor t = Tensor::random({"a", "b", "c"}, {ext(rng), ext(rng), ext(rng)}, rng);
        const SvdResult full = svd_split(t, {"a", "c"});
        ASSERT_LT(max_abs_diff(t, full.recombine()), 1e-11);
        const double sum_sq = std::accumulate(full.singular_values.begin(), full.singular_values.end(), 0.0,
                                              [](double acc, double s) { return acc + s * s; });
        ASSERT_NEAR(sum_sq, t.norm() * t.norm(), 1e-10 * (1.0 + sum_sq));

        SvdOptions opts;
        opts.max_rank = 1;
        const SvdResult cut = svd_split(t, {"a", "c"}, opts);
        const Tensor diff = t - cut.recombine();
        ASSERT_NEAR(diff.norm() * diff.norm(), cut.truncation_weight, 1e-10 * (1.0 + sum_sq));
    }
}

TEST(TensorProperty, LanczosNeverExceedsGuessRayleighQuotient) {
    std::mt19937_64 rng(102);
    std::uniform_int_distribution<Eigen::Index> dim(2, 120);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = dim(rng);
        const Matrix h = oracle::random_hermitian(n, rng);
        const Vector g = oracle::random_unit_vector(n, rng);
        const double rq = g.dot(h * g).real();
        const LowestEigenpair r = eig_lowest(h, g);
        ASSERT_LE(r.value, rq + 1e-12);
        ASSERT_NEAR(r.value, Eigen::SelfAdjointEigenSolver<Matrix>(h).eigenvalues()(0), 1e-8);
    }
}
