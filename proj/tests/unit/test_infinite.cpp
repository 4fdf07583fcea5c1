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
#include <sstream>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "tnet/expectation.hpp"
#include "tnet/infinite.hpp"
#include "tnet/model.hpp"

using namespace tnet;

namespace {

// Open chain of n copies of `a` closed by boundary vectors vl, vr.
MatrixProductState finite_chain(const Tensor &a, std::size_t n, const Vector &vl, const Vector &vr) {
    const std::size_t dd = a.dim(kLeft), d = a.dim(kPhys);
    std::vector<Tensor> sites(n, a);
    Tensor first({kLeft, kRight, kPhys}, {1, dd, d}), last({kLeft, kRight, kPhys}, {dd, 1, d});
    for (std::size_t y = 0; y < dd; ++y)
        for (std::size_t j = 0; j < d; ++j) {
            cplx s = 0.0, t = 0.0;
            for (std::size_t x = 0; x < dd; ++x) {
                s += vl(static_cast<Eigen::Index>(x)) * a.at({x, y, j});
                t += a.at({y, x, j}) * vr(static_cast<Eigen::Index>(x));
            }
            first.at({0, y, j}) = s;
            last.at({y, 0, j}) = t;
        }
    sites.front() = first;
    sites.back() = last;
    return MatrixProductState(sites, Boundary::open);
}

Tensor random_uniform(std::size_t dd, std::size_t d, std::mt19937_64 &rng) {
    return Tensor::random({kLeft, kRight, kPhys}, {dd, dd, d}, rng);
}

} // namespace

TEST(Infinite, ProductTensorIsScalarOne) {
    Tensor a({kLeft, kRight, kPhys}, {1, 1, 2}, {cplx(0.6), cplx(0.0, 0.8)});
    const UniformMps u = make_uniform(a);
    const Matrix e = transfer_operator(u);
    ASSERT_EQ(e.rows(), 1);
    EXPECT_NEAR(std::abs(e(0, 0) - 1.0), 0.0, 1e-15);
    EXPECT_EQ(correlation_length(u), 0.0);
    EXPECT_THROW(make_uniform(Tensor({kLeft, kRight, kPhys}, {1, 1, 2})), NormalizationError);
}

TEST(Infinite, AkltSpectrumAndCorrelationLength) {
    const UniformMps u = make_uniform(aklt_tensor());
    const TransferSpectrum s = transfer_spectrum(u);
    ASSERT_EQ(s.values.size(), 4u);
    EXPECT_NEAR(std::abs(s.values[0] - 1.0), 0.0, 1e-12);
    for (std::size_t j = 1; j < 4; ++j) EXPECT_NEAR(std::abs(s.values[j] + 1.0 / 3.0), 0.0, 1e-12);
    EXPECT_FALSE(s.degenerate);
    EXPECT_NEAR(correlation_length(u), 1.0 / std::log(3.0), 1e-9);
}

TEST(Infinite, GhzIsDegenerate) {
    const UniformMps u = make_uniform(ghz_tensor());
    EXPECT_TRUE(transfer_spectrum(u).degenerate);
    try {
        correlation_length(u);
        FAIL() << "expected a degenerate-spectrum error";
    } catch (const DegenerateSpectrumError &e) {
        EXPECT_NE(std::string(e.what()).find("constant contributions"), std::string::npos);
    }
    EXPECT_THROW(asymptotic_correlator(u, pauli_z(), pauli_z(), 3), DegenerateSpectrumError);
}

TEST(Infinite, AkltSpinCorrelatorDecaysAsMinusOneThird) {
    const UniformMps u = make_uniform(aklt_tensor());
    EXPECT_NEAR(std::abs(uniform_expectation(u, spin1_z())), 0.0, 1e-12);
    std::vector<double> x, y;
    for (std::size_t d = 1; d <= 12; ++d) {
        const AsymptoticCorrelator c = asymptotic_correlator(u, spin1_z(), spin1_z(), d);
        EXPECT_NEAR(c.raw.real(), 4.0 / 3.0 * std::pow(-1.0 / 3.0, double(d)), 1e-12);
        x.push_back(double(d));
        y.push_back(std::log(std::abs(c.connected)));
    }
    EXPECT_NEAR(oracle::linear_fit(x, y).first, -std::log(3.0), 1e-6);
}

TEST(Infinite, LargeDistanceFactorizes) {
    std::mt19937_64 rng(31);
    const UniformMps u = make_uniform(random_uniform(3, 2, rng));
    const Matrix a = oracle::random_hermitian(2, rng), b = oracle::random_hermitian(2, rng);
    const AsymptoticCorrelator c = asymptotic_correlator(u, a, b, 200);
    EXPECT_NEAR(std::abs(c.raw - uniform_expectation(u, a) * uniform_expectation(u, b)), 0.0, 1e-10);
    EXPECT_LT(std::abs(c.connected), 1e-10);
}

TEST(Infinite, DressedTransferMatchesDirectKronecker) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dd = 1 + trial % 3, d = 2 + trial % 2;
        const Tensor a = random_uniform(dd, d, rng);
        const UniformMps u{a, false};
        const Matrix o = oracle::random_matrix(Eigen::Index(d), Eigen::Index(d), rng);
        Matrix direct = Matrix::Zero(Eigen::Index(dd * dd), Eigen::Index(dd * dd));
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) {
                Matrix aj(dd, dd), ak(dd, dd);
                for (std::size_t x = 0; x < dd; ++x)
                    for (std::size_t y = 0; y < dd; ++y) {
                        aj(Eigen::Index(x), Eigen::Index(y)) = a.at({x, y, j});
                        ak(Eigen::Index(x), Eigen::Index(y)) = a.at({x, y, k});
                    }
                direct += o(Eigen::Index(k), Eigen::Index(j)) * oracle::kron(aj, ak.conjugate());
            }
        ASSERT_LT((transfer_operator(u, o) - direct).cwiseAbs().maxCoeff(), 1e-12) << trial;
    }
}

TEST(Infinite, SpectrumCsv) {
    std::ostringstream os;
    write_spectrum_csv(os, transfer_spectrum(make_uniform(aklt_tensor())));
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "index,re,im,modulus");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    EXPECT_EQ(rows, 4);
}

TEST(Infinite, AkltMeansMatchLongFiniteChain) {
    const std::size_t n = 200;
    const ExpectationEngine eng(aklt_state(n));
    const UniformMps u = make_uniform(aklt_tensor());
    const Matrix sz2 = spin1_z() * spin1_z();
    EXPECT_NEAR(std::abs(eng.local(sz2, n / 2) - uniform_expectation(u, sz2)), 0.0, 1e-6);
    EXPECT_NEAR(uniform_expectation(u, sz2).real(), 2.0 / 3.0, 1e-12);
}

// Finite/infinite consistency and the exponential decay bound on random
// injective tensors. Tensors with |lambda_2| > 0.8 are redrawn: the boundary
// leaks into site 90 of a 200-site chain as |lambda_2|^90, above 1e-6 otherwise.
TEST(InfiniteProperty, FiniteChainBulkMatchesAsymptotic) {
    std::mt19937_64 rng(77);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dd = 2 + trial % 2, d = 2;
        UniformMps u = make_uniform(random_uniform(dd, d, rng));
        while (std::abs(transfer_spectrum(u).values[1]) > 0.8) u = make_uniform(random_uniform(dd, d, rng));
        const double l2 = std::abs(transfer_spectrum(u).values[1]);
        const Matrix a = oracle::random_hermitian(2, rng), b = oracle::random_hermitian(2, rng);
        const auto vl = oracle::random_unit_vector(Eigen::Index(dd), rng);
        const auto vr = oracle::random_unit_vector(Eigen::Index(dd), rng);
        const ExpectationEngine eng(finite_chain(u.a, 200, vl, vr));
        const auto rows = eng.correlator_scan(a, 90, b, 20);
        const double k = decay_prefactor(u, a, b);
        for (const auto &r : rows) {
            const AsymptoticCorrelator c = asymptotic_correlator(u, a, b, r.dist);
            ASSERT_NEAR(std::abs(r.connected - c.connected), 0.0, 1e-6) << trial << " d=" << r.dist;
        }
        for (std::size_t dist = 1; dist <= 50; ++dist) {
            const double c = std::abs(asymptotic_correlator(u, a, b, dist).connected);
            ASSERT_LE(c, k * std::pow(l2, double(dist - 1)) * (1.0 + 1e-9) + 1e-14) << trial << " d=" << dist;
        }
        ++checked;
    }
    EXPECT_EQ(checked, 100);
}
