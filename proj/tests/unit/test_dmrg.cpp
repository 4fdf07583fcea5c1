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

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "tnet/dmrg.hpp"
#include "tnet/ed.hpp"
#include "tnet/expectation.hpp"

using namespace tnet;

namespace {

ModelSpec spec_of(ModelKind kind, std::size_t n, Couplings c = {}) {
    ModelSpec s;
    s.kind = kind;
    s.n = n;
    s.couplings = c;
    return s;
}

DmrgConfig config(std::vector<std::size_t> schedule, std::uint64_t seed = 7) {
    DmrgConfig cfg;
    cfg.schedule = std::move(schedule);
    cfg.seed = seed;
    cfg.max_sweeps = 30;
    return cfg;
}

} // namespace

TEST(Dmrg, AkltOpenChainReachesZeroAtD2) {
    const std::size_t n = 12;
    const DmrgResult r = ground_state(build_mpo(spec_of(ModelKind::aklt, n)), config({2}));
    EXPECT_LT(std::abs(r.report.energy) / double(n - 1), 1e-8);
    EXPECT_LE(r.state.max_bond_dim(), 2u);
}

TEST(Dmrg, MajumdarGhoshMatchesEdAtD3) {
    const ModelSpec spec = spec_of(ModelKind::majumdar_ghosh, 12);
    const double e0 = ed::solve(spec).summary.ground_energy;
    DmrgConfig cfg = config({2, 3});
    const DmrgResult r = ground_state(build_mpo(spec), cfg);
    EXPECT_NEAR(r.report.energy, e0, 1e-8);
    EXPECT_LE(r.state.max_bond_dim(), 3u);
}

TEST(Dmrg, XYMatchesEdAndHasSmallVariance) {
    const ModelSpec spec = spec_of(ModelKind::xy, 10, {0.0, 0.5, 1.0});
    const double e0 = ed::solve(spec).summary.ground_energy;
    const MatrixProductOperator h = build_mpo(spec);
    const DmrgResult r = ground_state(h, config({4, 8, 16}));
    EXPECT_NEAR(r.report.energy, e0, 1e-8);
    EXPECT_LT(r.report.variance, 1e-6);
    EXPECT_NEAR(energy_variance(r.state, h), r.report.variance, 1e-9);
    EXPECT_TRUE(r.report.converged);
    EXPECT_NEAR(norm(r.state), 1.0, 1e-10);
}

TEST(Dmrg, XXGroundEnergyFromFreeFermions) {
    const std::size_t n = 10;
    const DmrgResult r = ground_state(build_mpo(spec_of(ModelKind::xy, n)), config({8, 16, 32}));
    EXPECT_NEAR(r.report.energy, oracle::xx_free_fermion_energy(n), 1e-8);
}

TEST(Dmrg, SingleSiteModeWithNoise) {
    const ModelSpec spec = spec_of(ModelKind::xy, 8, {0.5, 1.0, 1.0});
    const double e0 = ed::solve(spec).summary.ground_energy;
    std::mt19937_64 rng(3);
    const MatrixProductState init = MatrixProductState::random(std::vector<std::size_t>(8, 2), 8, rng);
    DmrgConfig cfg = config({8});
    cfg.mode = DmrgMode::single_site;
    cfg.noise = 1e-4;
    cfg.max_sweeps = 4;
    ground_state(build_mpo(spec), cfg, init);
    cfg.noise = 0.0;
    cfg.max_sweeps = 30;
    const DmrgResult r = ground_state(build_mpo(spec), cfg, init);
    EXPECT_NEAR(r.report.energy, e0, 1e-8);
}

TEST(Dmrg, SweepOnExactEigenstateIsStationary) {
    const std::size_t n = 8;
    const MatrixProductOperator h = build_mpo(spec_of(ModelKind::aklt, n));
    const MatrixProductState psi = aklt_state(n);
    DmrgSweeper sw(h, psi);
    double trunc = 0.0;
    std::mt19937_64 rng(1);
    const double e = sw.sweep_once(config({2}), 2, trunc, rng);
    EXPECT_LT(std::abs(e), 1e-10);
    EXPECT_LT(std::abs(expectation_mpo(sw.state(), h)), 1e-10);
}

TEST(Dmrg, FirstSweepLowersEnergy) {
    const MatrixProductOperator h = build_mpo(spec_of(ModelKind::xy, 10, {0.0, 0.5, 1.0}));
    std::mt19937_64 rng(11);
    const MatrixProductState init = MatrixProductState::random(std::vector<std::size_t>(10, 2), 4, rng);
    const double e_init = std::real(expectation_mpo(init, h));
    DmrgSweeper sw(h, init);
    double trunc = 0.0;
    sw.sweep_once(config({4}), 4, trunc, rng);
    EXPECT_LT(std::real(expectation_mpo(sw.state(), h)), e_init);
}

TEST(Dmrg, TwoSiteGrowsBondsFromProductState) {
    const std::size_t n = 8;
    const MatrixProductOperator h = build_mpo(spec_of(ModelKind::xy, n, {0.0, 0.2, 1.0}));
    const MatrixProductState init = basis_state({0, 1, 0, 1, 0, 1, 0, 1}, std::vector<std::size_t>(n, 2));
    const DmrgResult r = ground_state(h, config({6}), init);
    EXPECT_EQ(r.state.max_bond_dim(), 6u);
    EXPECT_GT(r.report.max_trunc_weights.back(), 0.0);
}

TEST(Dmrg, RestartIsDeterministic) {
    const MatrixProductOperator h = build_mpo(spec_of(ModelKind::heisenberg_spin1, 6));
    DmrgConfig cfg = config({4, 8}, 99);
    cfg.max_sweeps = 5;
    const DmrgResult a = ground_state(h, cfg);
    const DmrgResult b = ground_state(h, cfg);
    ASSERT_EQ(a.report.energies.size(), b.report.energies.size());
    for (std::size_t i = 0; i < a.report.energies.size(); ++i) EXPECT_EQ(a.report.energies[i], b.report.energies[i]);
}

TEST(Dmrg, RejectsUnsupportedInputs) {
    ModelSpec periodic = spec_of(ModelKind::xy, 6);
    periodic.boundary = Boundary::periodic;
    EXPECT_THROW(ground_state(build_mpo(periodic), config({4})), BoundaryError);
    ModelSpec skew;
    skew.kind = ModelKind::custom;
    skew.n = 3;
    skew.terms.push_back({1.0, {0, 1}, {"Sp", "Sm"}});
    EXPECT_THROW(ground_state(build_mpo(skew), config({4})), SymmetryError);
    EXPECT_THROW(ground_state(build_mpo(spec_of(ModelKind::xy, 4)), config({8, 4})), SpecError);
    DmrgConfig bad = config({4});
    bad.energy_tol = 0.0;
    EXPECT_THROW(validate(bad), SpecError);
}

TEST(Dmrg, NonConvergenceIsReported) {
    DmrgConfig cfg = config({2});
    cfg.max_sweeps = 2;
    const DmrgResult r = ground_state(build_mpo(spec_of(ModelKind::xy, 10)), cfg);
    EXPECT_FALSE(r.report.converged);
    EXPECT_EQ(r.report.energies.size(), 2u);
}

TEST(Dmrg, ConfigJsonRoundTripAndCsv) {
    DmrgConfig cfg = config({2, 4, 8}, 5);
    cfg.mode = DmrgMode::single_site;
    cfg.noise = 1e-3;
    const DmrgConfig back = dmrg_config_from_json(dmrg_config_to_json(cfg));
    EXPECT_EQ(back.schedule, cfg.schedule);
    EXPECT_EQ(back.mode, cfg.mode);
    EXPECT_EQ(back.seed, 5u);
    EXPECT_EQ(back.noise, 1e-3);
    EXPECT_THROW(dmrg_config_from_json(R"({"mode": "three-site"})"), SpecError);
    DmrgReport rep;
    rep.energies = {-1.0};
    rep.variances = {0.5};
    rep.max_trunc_weights = {0.0};
    std::ostringstream os;
    write_dmrg_csv(os, rep);
    EXPECT_EQ(os.str(), "sweep,energy,variance,max_trunc_weight\n1,-1,0.5,0\n");
}

TEST(EnergyVariance, EigenstateAndDenseOracle) {
    const std::size_t n = 8;
    const ModelSpec spec = spec_of(ModelKind::xy, n, {0.3, 0.7, 1.0});
    const MatrixProductOperator h = build_mpo(spec);
    const Matrix hd = oracle::xy_hamiltonian(n, 0.3, 0.7, false);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        const MatrixProductState m = MatrixProductState::random(std::vector<std::size_t>(n, 2), 4, rng);
        const Vector psi = to_dense(m);
        const double e = oracle::expectation(psi, hd).real();
        const double e2 = oracle::expectation(psi, hd * hd).real();
        EXPECT_NEAR(energy_variance(m, h), e2 - e * e, 1e-9);
    }
    EXPECT_LT(std::abs(energy_variance(aklt_state(8), build_mpo(spec_of(ModelKind::aklt, 8)))), 1e-9);
}

TEST(DmrgProperty, MixedGaugeMetricIsIdentity) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> nd(3, 7), dd(2, 3), bd(1, 6);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = static_cast<std::size_t>(nd(rng));
        const MatrixProductState m =
            MatrixProductState::random(std::vector<std::size_t>(n, std::size_t(dd(rng))), std::size_t(bd(rng)), rng);
        const std::size_t c = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        const MatrixProductState mixed = canonicalize(m, {GaugeKind::mixed, c});
        const Matrix k2 = local_metric(mixed, c);
        ASSERT_LT((k2 - Matrix::Identity(k2.rows(), k2.cols())).norm(), 1e-10) << trial;
    }
}

// Random XY couplings: every bond dimension gives an upper bound on E0 and the
// bound tightens as D grows through 1, 2, 4, 8.
TEST(DmrgProperty, VariationalBoundMonotoneInD) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 6;
        const ModelSpec spec = spec_of(ModelKind::xy, n, {u(rng), 1.5 * u(rng), 1.0});
        const MatrixProductOperator h = build_mpo(spec);
        const double e0 = ed::solve(spec).summary.ground_energy;
        std::optional<MatrixProductState> warm;
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t d : {1u, 2u, 4u, 8u}) {
            DmrgConfig cfg = config({d}, 100 + trial);
            cfg.max_sweeps = 8;
            const DmrgResult r = ground_state(h, cfg, warm);
            ASSERT_GE(r.report.energy, e0 - 1e-9) << trial;
            ASSERT_LE(r.report.energy, prev + 1e-9) << trial << " D=" << d;
            prev = r.report.energy;
            warm = r.state;
        }
        ASSERT_NEAR(prev, e0, 1e-8) << trial;
    }
}
