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
#include <random>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "tnet/ed.hpp"
#include "tnet/mpo.hpp"

using namespace tnet;

namespace {

ModelSpec spec_of(ModelKind kind, std::size_t n, Boundary b = Boundary::open, Couplings c = {}) {
    ModelSpec s;
    s.kind = kind;
    s.n = n;
    s.boundary = b;
    s.couplings = c;
    return s;
}

ModelSpec field_model(std::size_t n, double lambda) {
    ModelSpec s;
    s.kind = ModelKind::custom;
    s.n = n;
    for (std::size_t j = 0; j < n; ++j) s.terms.push_back({cplx(-lambda / 2.0), {j}, {"Z"}});
    return s;
}

double max_diff(const Matrix &a, const Matrix &b) { return (a - b).cwiseAbs().maxCoeff(); }

Vector dimer_state(std::size_t n) {
    Vector singlet = Vector::Zero(4);
    singlet(1) = 1.0 / std::sqrt(2.0);
    singlet(2) = -1.0 / std::sqrt(2.0);
    oracle::Matrix v = oracle::Matrix::Identity(1, 1);
    for (std::size_t k = 0; k < n / 2; ++k) v = oracle::kron(v, singlet);
    return v.col(0);
}

} // namespace

TEST(Mpo, TwoSiteIsingCoefficient) {
    const Matrix h = to_dense(build_mpo(spec_of(ModelKind::xy, 2, Boundary::open, {1.0, 0.0, 1.0})));
    EXPECT_LT(max_diff(h, -0.25 * oracle::kron(oracle::pauli_x(), oracle::pauli_x())), 1e-15);
}

TEST(Mpo, AkltBondTermIsProjector) {
    const Matrix h = to_dense(build_mpo(spec_of(ModelKind::aklt, 2)));
    EXPECT_LT(max_diff(h * h, h), 1e-12);
    const Eigen::VectorXd e = Eigen::SelfAdjointEigenSolver<Matrix>(h).eigenvalues();
    int ones = 0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        EXPECT_TRUE(std::abs(e(i)) < 1e-12 || std::abs(e(i) - 1.0) < 1e-12);
        ones += std::abs(e(i) - 1.0) < 1e-12;
    }
    EXPECT_EQ(ones, 5); // the S = 2 multiplet
}

TEST(Mpo, XYMatchesKroneckerOracle) {
    const ModelSpec s = spec_of(ModelKind::xy, 10, Boundary::open, {0.5, 0.75, 1.0});
    EXPECT_LT(max_diff(to_dense(build_mpo(s)), oracle::xy_hamiltonian(10, 0.5, 0.75, false)), 1e-12);
    const ModelSpec p = spec_of(ModelKind::xy, 7, Boundary::periodic, {0.3, -0.4, 1.0});
    EXPECT_LT(max_diff(to_dense(build_mpo(p)), oracle::xy_hamiltonian(7, 0.3, -0.4, true)), 1e-12);
}

TEST(Mpo, MajumdarGhoshMatchesKroneckerOracle) {
    EXPECT_LT(max_diff(to_dense(build_mpo(spec_of(ModelKind::majumdar_ghosh, 8))),
                       oracle::majumdar_ghosh_hamiltonian(8)),
              1e-12);
}

TEST(Mpo, BondDimensionsOfNamedModels) {
    EXPECT_EQ(build_mpo(spec_of(ModelKind::xy, 10, Boundary::open, {0.5, 0.7, 1.0})).max_bond_dim(), 4U);
    EXPECT_EQ(build_mpo(spec_of(ModelKind::heisenberg_spin1, 10)).max_bond_dim(), 5U);
    EXPECT_EQ(build_mpo(spec_of(ModelKind::aklt, 10)).max_bond_dim(), 14U);
    EXPECT_EQ(build_mpo(spec_of(ModelKind::majumdar_ghosh, 10)).max_bond_dim(), 8U);
}

TEST(Mpo, NamedModelsMatchSparseOracleAndAreHermitian) {
    const std::vector<ModelSpec> specs{
        spec_of(ModelKind::xy, 8, Boundary::open, {0.2, 0.9, 1.0}),
        spec_of(ModelKind::xy, 6, Boundary::periodic, {1.0, 0.5, 1.0}),
        spec_of(ModelKind::heisenberg_spin1, 6, Boundary::open, {0.0, 0.0, 0.7}),
        spec_of(ModelKind::heisenberg_spin1, 5, Boundary::periodic),
        spec_of(ModelKind::aklt, 6),
        spec_of(ModelKind::aklt, 5, Boundary::periodic),
        spec_of(ModelKind::majumdar_ghosh, 8),
        spec_of(ModelKind::majumdar_ghosh, 7, Boundary::periodic),
    };
    for (const auto &s : specs) {
        const Matrix m = to_dense(build_mpo(s));
        EXPECT_LT(max_diff(m, ed::dense_hamiltonian(s)), 1e-12) << model_to_json(s);
        EXPECT_LT(max_diff(m, m.adjoint()), 1e-12) << model_to_json(s);
        EXPECT_TRUE(build_mpo(s).hermitian());
    }
}

TEST(Mpo, InvalidSpecsRejected) {
    EXPECT_THROW(build_mpo(spec_of(ModelKind::xy, 1)), SpecError);
    EXPECT_THROW(build_mpo(spec_of(ModelKind::majumdar_ghosh, 2)), SpecError);
    EXPECT_THROW(build_mpo(spec_of(ModelKind::xy, 4, Boundary::open, {std::nan(""), 0.0, 1.0})), SpecError);
    ModelSpec c;
    c.kind = ModelKind::custom;
    c.n = 3;
    c.terms.push_back({1.0, {0, 5}, {"X", "X"}});
    EXPECT_THROW(build_mpo(c), SpecError);
    c.terms = {{1.0, {0}, {"Sx"}}};
    EXPECT_THROW(build_mpo(c), SpecError);
    EXPECT_THROW(model_from_json(R"({"kind":"toric","n":4})"), SpecError);
    EXPECT_THROW(model_from_json("{not json"), SpecError);
}

TEST(Mpo, ApplyIdentityAndFieldEigenstate) {
    std::mt19937_64 rng(40);
    const MatrixProductState m = MatrixProductState::random(std::vector<std::size_t>(5, 2), 3, rng);
    EXPECT_LT((to_dense(apply_mpo(identity_mpo(m.phys_dims()), m)) - to_dense(m)).norm(), 1e-13);

    ModelSpec z = field_model(6, -2.0); // sum_j Z_j
    const MatrixProductState zero = basis_state(std::vector<std::size_t>(6, 0), std::vector<std::size_t>(6, 2));
    const Vector out = to_dense(apply_mpo(build_mpo(z), zero));
    EXPECT_NEAR(std::abs(out(0) - cplx(6.0)), 0.0, 1e-13);
    EXPECT_NEAR(out.norm(), 6.0, 1e-13);
    EXPECT_NEAR(std::abs(expectation_mpo(zero, build_mpo(z)) - cplx(6.0)), 0.0, 1e-13);
}

TEST(Mpo, ApplyMatchesDenseMultiply) {
    std::mt19937_64 rng(41);
    const ModelSpec s = spec_of(ModelKind::xy, 8, Boundary::open, {0.4, 0.3, 1.0});
    const MatrixProductState m = MatrixProductState::random(std::vector<std::size_t>(8, 2), 6, rng);
    const Vector expect = oracle::xy_hamiltonian(8, 0.4, 0.3, false) * to_dense(m);
    EXPECT_LT((to_dense(apply_mpo(build_mpo(s), m)) - expect).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Mpo, ApplyShapeMismatchThrows) {
    EXPECT_THROW(apply_mpo(build_mpo(spec_of(ModelKind::xy, 4)), ghz_state(5)), ShapeError);
    EXPECT_THROW(expectation_mpo(aklt_state(4), build_mpo(spec_of(ModelKind::xy, 4))), ShapeError);
}

TEST(Mpo, ExpectationOnFixtures) {
    for (std::size_t n : {3, 5, 8}) {
        const cplx e = expectation_mpo(ghz_state(n), build_mpo(spec_of(ModelKind::xy, n, Boundary::open, {0.3, 0.8, 1.0})));
        EXPECT_LT(std::abs(e), 1e-12);
    }
    for (std::size_t n : {4, 6, 8}) {
        const cplx e = expectation_mpo(aklt_state(n, Boundary::periodic), build_mpo(spec_of(ModelKind::aklt, n, Boundary::periodic)));
        EXPECT_LT(std::abs(e), 1e-10);
    }
}

TEST(Mpo, ExpectationMatchesDenseAndIsGaugeInvariant) {
    std::mt19937_64 rng(42);
    const ModelSpec s = spec_of(ModelKind::heisenberg_spin1, 6, Boundary::open, {0.0, 0.0, 1.3});
    const MatrixProductState m = MatrixProductState::random(std::vector<std::size_t>(6, 3), 4, rng);
    const Vector v = to_dense(m);
    const cplx dense = v.dot(ed::dense_hamiltonian(s) * v);
    const cplx mpo = expectation_mpo(m, build_mpo(s));
    EXPECT_LT(std::abs(dense - mpo), 1e-10);
    EXPECT_LT(std::abs(mpo.imag()), 1e-12);
    const Matrix x = Matrix::Identity(4, 4) + 0.3 * oracle::random_matrix(4, 4, rng);
    EXPECT_LT(std::abs(expectation_mpo(apply_gauge(m, 2, x), build_mpo(s)) - mpo), 1e-8);
}

TEST(Model, JsonRoundTripGivesIdenticalMatrix) {
    const ModelSpec s = spec_of(ModelKind::xy, 5, Boundary::periodic, {0.25, -1.5, 1.0});
    const ModelSpec back = model_from_json(model_to_json(s));
    EXPECT_EQ(max_diff(ed::dense_hamiltonian(s), ed::dense_hamiltonian(back)), 0.0);
    const ModelSpec parsed = model_from_json(R"({"kind":"xy","n":4,"boundary":"open","couplings":{"gamma":0.5,"lambda":1.0}})");
    EXPECT_EQ(parsed.couplings.gamma, 0.5);
    EXPECT_EQ(parsed.couplings.lambda, 1.0);
    ModelSpec c = field_model(3, 1.0);
    c.terms.push_back({cplx(0.5, 0.0), {0, 2}, {"X", "Y"}});
    EXPECT_EQ(max_diff(ed::dense_hamiltonian(c), ed::dense_hamiltonian(model_from_json(model_to_json(c)))), 0.0);
}

TEST(Model, CustomHermiticityFlag) {
    ModelSpec c = field_model(3, 1.0);
    EXPECT_TRUE(is_hermitian(c));
    c.terms.push_back({1.0, {0, 1}, {"Sp", "Sm"}});
    EXPECT_FALSE(is_hermitian(c));
}

TEST(Ed, TwoSiteXXCoefficients) {
    const Matrix h = ed::dense_hamiltonian(spec_of(ModelKind::xy, 2));
    const Matrix expect = -0.125 * (oracle::kron(oracle::pauli_x(), oracle::pauli_x()) +
                                    oracle::kron(oracle::pauli_y(), oracle::pauli_y()));
    EXPECT_LT(max_diff(h, expect), 1e-15);
}

TEST(Ed, PeriodicAkltKernel) {
    const ModelSpec s = spec_of(ModelKind::aklt, 3, Boundary::periodic);
    const ed::Solution sol = ed::solve(s);
    EXPECT_NEAR(sol.summary.ground_energy, 0.0, 1e-12);
    const Vector psi = oracle::aklt_periodic_vector(3);
    EXPECT_LT((ed::dense_hamiltonian(s) * psi).norm(), 1e-12);
}

TEST(Ed, SingleSpinFieldGap) {
    const ed::Solution sol = ed::solve(field_model(1 + 1, 0.8) /* two free spins */);
    EXPECT_NEAR(sol.summary.ground_energy, -0.8, 1e-12);
    EXPECT_NEAR(sol.summary.gap, 0.8, 1e-12);
    ModelSpec one;
    one.kind = ModelKind::custom;
    one.n = 2;
    one.terms = {{cplx(-0.35), {0}, {"Z"}}};
    EXPECT_NEAR(ed::solve(one).summary.gap, 0.7, 1e-12);
    EXPECT_EQ(ed::solve(one).summary.degeneracy, 2U);
}

TEST(Ed, MajumdarGhoshDimerGround) {
    for (std::size_t n : {6, 8}) {
        const ed::Solution sol = ed::solve(spec_of(ModelKind::majumdar_ghosh, n));
        EXPECT_NEAR(sol.summary.ground_energy, -3.0 * static_cast<double>(n), 1e-10);
        EXPECT_EQ(sol.summary.degeneracy, 1U); // a single nearest-neighbor dimer covering
        const Vector dimer = dimer_state(n);
        EXPECT_NEAR(std::abs(dimer.dot(sol.ground_vectors[0])), 1.0, 1e-10);
    }
}

TEST(Ed, LanczosPathAgreesWithDense) {
    const ModelSpec s = spec_of(ModelKind::xy, 9, Boundary::open, {0.5, 0.6, 1.0});
    ed::SolveOptions sparse;
    sparse.dense_limit = 64;
    const ed::Solution a = ed::solve(s);
    const ed::Solution b = ed::solve(s, sparse);
    EXPECT_NEAR(a.summary.ground_energy, b.summary.ground_energy, 1e-10);
    EXPECT_NEAR(a.summary.gap, b.summary.gap, 1e-8);
    EXPECT_EQ(a.summary.degeneracy, b.summary.degeneracy);
}

TEST(Ed, XXGroundEnergyFromFreeFermions) {
    const ed::Solution sol = ed::solve(spec_of(ModelKind::xy, 10));
    EXPECT_NEAR(sol.summary.ground_energy, oracle::xx_free_fermion_energy(10), 1e-10);
}

TEST(Ed, CapExceededThrows) {
    EXPECT_THROW(ed::sparse_hamiltonian(spec_of(ModelKind::aklt, 10)), SizeError);
    EXPECT_THROW(ed::dense_hamiltonian(spec_of(ModelKind::xy, 13)), SizeError);
}

TEST(Gibbs, InfiniteTemperatureIsMaximallyMixed) {
    const Matrix rho = ed::gibbs(spec_of(ModelKind::xy, 4, Boundary::open, {0.5, 1.0, 1.0}), 0.0);
    EXPECT_LT(max_diff(rho, Matrix::Identity(16, 16) / 16.0), 1e-14);
}

TEST(Gibbs, LowTemperatureProjectsOntoGround) {
    const ModelSpec s = spec_of(ModelKind::xy, 6, Boundary::open, {0.5, 1.0, 1.0});
    const ed::Solution sol = ed::solve(s);
    ASSERT_EQ(sol.summary.degeneracy, 1U);
    const Vector &g = sol.ground_vectors[0];
    const Matrix rho = ed::gibbs(s, 50.0);
    EXPECT_GT(g.dot(rho * g).real(), 1.0 - 1e-8);
}

TEST(Gibbs, EnergyDecreasesWithBeta) {
    const ModelSpec s = spec_of(ModelKind::xy, 6, Boundary::open, {0.2, 0.4, 1.0});
    const Matrix h = ed::dense_hamiltonian(s);
    double prev = 1e300;
    for (double beta : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double e = (ed::gibbs(s, beta) * h).trace().real();
        EXPECT_LT(e, prev);
        prev = e;
    }
    EXPECT_THROW(ed::gibbs(s, -1.0), RangeError);
}

TEST(Reduce, ProductGhzAndFullRegion) {
    Vector prod = Vector::Zero(8);
    prod(5) = 1.0;
    const Matrix ra = ed::reduce(prod, {2, 2, 2}, {0, 2});
    EXPECT_NEAR(std::abs(ra.trace() - cplx(1.0)), 0.0, 1e-14);
    EXPECT_NEAR(ed::von_neumann(ra), 0.0, 1e-12);

    const Matrix g = ed::reduce(oracle::ghz_vector(4), {2, 2, 2, 2}, {1, 2});
    Matrix expect = Matrix::Zero(4, 4);
    expect(0, 0) = expect(3, 3) = 0.5;
    EXPECT_LT(max_diff(g, expect), 1e-14);

    const Vector psi = oracle::ghz_vector(3);
    const Matrix rho = psi * psi.adjoint();
    EXPECT_LT(max_diff(ed::reduce(rho, {2, 2, 2}, {0, 1, 2}), rho), 1e-15);
    EXPECT_THROW(ed::reduce(psi, {2, 2, 2}, {2, 1}), RangeError);
    EXPECT_THROW(ed::reduce(psi, {2, 2, 2}, {3}), RangeError);
}

TEST(EntropySuite, ProductStateHasNoCorrelations) {
    Vector a(2), b(2);
    a << 0.6, 0.8;
    b << 1.0, 0.0;
    const Vector psi = oracle::kron(a, b).col(0);
    const ed::EntropyReport r = ed::entropy_suite(psi, {2, 2}, {0});
    EXPECT_NEAR(r.mutual_information, 0.0, 1e-12);
    EXPECT_NEAR(r.negativity, 0.0, 1e-12);
    Matrix ra = Matrix::Zero(2, 2), rb = Matrix::Zero(2, 2);
    ra.diagonal() << 0.3, 0.7;
    rb.diagonal() << 0.5, 0.5;
    const ed::EntropyReport m = ed::entropy_suite(Matrix(oracle::kron(ra, rb)), {2, 2}, {0});
    EXPECT_NEAR(m.mutual_information, 0.0, 1e-12);
    EXPECT_NEAR(m.negativity, 0.0, 1e-12);
}

TEST(EntropySuite, GhzNegativityAcrossEveryCut) {
    const Vector psi = oracle::ghz_vector(4);
    for (std::vector<std::size_t> region : {std::vector<std::size_t>{0}, {0, 1}, {0, 1, 2}, {1, 3}}) {
        const ed::EntropyReport r = ed::entropy_suite(psi, {2, 2, 2, 2}, region);
        EXPECT_NEAR(r.negativity, 1.0, 1e-10);
        EXPECT_NEAR(r.von_neumann, 1.0, 1e-12);
        EXPECT_NEAR(r.mutual_information, 2.0, 1e-12);
        for (const auto &[alpha, s] : r.renyi) EXPECT_NEAR(s, 1.0, 1e-12) << alpha;
    }
}

TEST(EntropySuite, RejectsInvalidDensityMatrices) {
    Matrix m = Matrix::Identity(2, 2);
    EXPECT_THROW(ed::entropy_suite(m, {2}, {0}), NormalizationError);
    m(0, 1) = 0.3;
    EXPECT_THROW(ed::entropy_suite(Matrix(m / 2.0), {2}, {0}), SymmetryError);
    Matrix neg = Matrix::Zero(2, 2);
    neg.diagonal() << 1.5, -0.5;
    EXPECT_THROW(ed::entropy_suite(neg, {2}, {0}), NormalizationError);
}

// Randomized properties.

TEST(EdProperty, PureStateIdentitiesOnRandomStates) {
    std::mt19937_64 rng(300);
    const std::vector<std::size_t> dims(6, 2);
    std::uniform_int_distribution<std::size_t> cut(1, 5);
    for (int trial = 0; trial < 100; ++trial) {
        const Vector psi = oracle::random_unit_vector(64, rng);
        std::vector<std::size_t> region;
        for (std::size_t k = 0; k < cut(rng); ++k) region.push_back(k);
        const ed::EntropyReport r = ed::entropy_suite(psi, dims, region);
        ASSERT_NEAR(r.mutual_information, 2.0 * r.von_neumann, 1e-9);
        ASSERT_GE(r.log_negativity, r.von_neumann - 1e-10);
        ASSERT_LE(r.von_neumann, static_cast<double>(region.size()) + 1e-10);
        ASSERT_NEAR(r.von_neumann, oracle::dense_cut_entropy(psi, region.size(), 6, 2), 1e-9);
    }
}

TEST(EdProperty, MutualInformationNonNegativeOnMixedStates) {
    std::mt19937_64 rng(301);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix g = oracle::random_matrix(16, 16, rng);
        Matrix rho = g * g.adjoint();
        rho /= rho.trace();
        const ed::EntropyReport r = ed::entropy_suite(rho, {2, 2, 2, 2}, {0, 2});
        ASSERT_GE(r.mutual_information, -1e-10);
        ASSERT_LE(r.von_neumann, 2.0 + 1e-10);
    }
}

TEST(EdProperty, ThermalMutualInformationSaturates) {
    const ModelSpec s = spec_of(ModelKind::xy, 8, Boundary::open, {0.5, 0.5, 1.0});
    const Matrix rho = ed::gibbs(s, 2.0);
    const std::vector<std::size_t> dims(8, 2);
    double max_i = 0.0;
    for (std::size_t a = 1; a < 8; ++a) {
        std::vector<std::size_t> region;
        for (std::size_t k = 0; k < a; ++k) region.push_back(k);
        const double i = ed::entropy_suite(rho, dims, region, {}).mutual_information;
        max_i = std::max(max_i, i);
        // A single cut of a short-range chain: bounded independently of |A|.
        EXPECT_LT(i, 2.0);
    }
    EXPECT_GT(max_i, 0.0);
}
