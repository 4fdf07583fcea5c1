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

#include "tnet/infinite.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "tnet/expectation.hpp"
#include "tnet/mps.hpp"

namespace tnet {

namespace {

const char *kDegenerate =
    "leading transfer eigenvalue is degenerate: correlation functions carry constant contributions";

// x^T y without conjugation.
cplx bil(const Vector &x, const Vector &y) { return x.cwiseProduct(y).sum(); }

void require_spectral(const TransferSpectrum &s) {
    if (s.degenerate) throw DegenerateSpectrumError(kDegenerate);
    if (!s.right.front() || !s.left.front()) throw DegenerateSpectrumError("leading eigenvalue is defective");
}

} // namespace

UniformMps make_uniform(const Tensor &a) {
    const Tensor t = a.permuted({kLeft, kRight, kPhys});
    if (t.dim(kLeft) != t.dim(kRight)) throw DimensionError("uniform tensor needs equal bond extents");
    const GeneralSpectrum s = eig_general(transfer_matrix(t));
    const double lead = std::abs(s.values.front());
    if (!(lead > 1e-300) || !std::isfinite(lead)) throw NormalizationError("transfer operator has zero spectral radius");
    return {t * cplx(1.0 / std::sqrt(lead)), true};
}

Matrix transfer_operator(const UniformMps &u) { return transfer_matrix(u.a); }
Matrix transfer_operator(const UniformMps &u, const Matrix &op) { return transfer_matrix(u.a, op); }

TransferSpectrum transfer_spectrum(const UniformMps &u, double degeneracy_tol) {
    const GeneralSpectrum g = eig_general(transfer_operator(u));
    TransferSpectrum s;
    s.values = g.values;
    s.right = g.right;
    s.left = g.left;
    s.defective = g.defective;
    const double lead = std::abs(g.values.front());
    std::size_t on_circle = 0;
    for (const cplx &v : g.values) {
        if (std::abs(std::abs(v) - lead) <= degeneracy_tol * std::max(1.0, lead)) ++on_circle;
    }
    s.degenerate = on_circle > 1;
    return s;
}

double correlation_length(const UniformMps &u) {
    const TransferSpectrum s = transfer_spectrum(u);
    if (s.values.size() < 2) return 0.0;
    if (s.degenerate) throw DegenerateSpectrumError(kDegenerate);
    const double l2 = std::abs(s.values[1]) / std::abs(s.values[0]);
    if (l2 == 0.0) return 0.0;
    return -1.0 / std::log(l2);
}

cplx uniform_expectation(const UniformMps &u, const Matrix &op) {
    const TransferSpectrum s = transfer_spectrum(u);
    require_spectral(s);
    const Vector &l = *s.left.front(), &r = *s.right.front();
    return bil(l, transfer_operator(u, op) * r) / s.values.front();
}

AsymptoticCorrelator asymptotic_correlator(const UniformMps &u, const Matrix &oa, const Matrix &ob,
                                           std::size_t dist) {
    if (dist == 0) throw RangeError("correlator distance must be at least 1");
    const TransferSpectrum s = transfer_spectrum(u);
    require_spectral(s);
    const cplx l1v = s.values.front();
    const Vector &l1 = *s.left.front(), &r1 = *s.right.front();
    const Matrix ea = transfer_operator(u, oa), eb = transfer_operator(u, ob);
    const Vector la = ea.transpose() * l1; // <l1| E_A as a column
    const Vector rb = eb * r1;             // E_B |r1>
    cplx raw = 0.0;
    if (!s.defective) {
        for (std::size_t j = 0; j < s.values.size(); ++j) {
            const cplx lam = s.values[j] / l1v;
            raw += std::pow(lam, double(dist - 1)) * bil(la, *s.right[j]) * bil(*s.left[j], rb);
        }
    } else {
        Vector v = rb;
        const Matrix e = transfer_operator(u) / l1v;
        for (std::size_t k = 1; k < dist; ++k) v = e * v;
        raw = bil(la, v);
    }
    raw /= l1v * l1v;
    const cplx mean_a = bil(la, r1) / l1v;
    const cplx mean_b = bil(l1, rb) / l1v;
    return {raw, raw - mean_a * mean_b};
}

double decay_prefactor(const UniformMps &u, const Matrix &oa, const Matrix &ob) {
    const TransferSpectrum s = transfer_spectrum(u);
    require_spectral(s);
    if (s.defective) throw DegenerateSpectrumError("transfer operator is defective");
    const cplx l1v = s.values.front();
    const Vector la = transfer_operator(u, oa).transpose() * *s.left.front();
    const Vector rb = transfer_operator(u, ob) * *s.right.front();
    double k = 0.0;
    for (std::size_t j = 1; j < s.values.size(); ++j) {
        k += std::abs(bil(la, *s.right[j])) * std::abs(bil(*s.left[j], rb));
    }
    return k / std::norm(l1v);
}

void write_spectrum_csv(std::ostream &os, const TransferSpectrum &s) {
    os << "index,re,im,modulus\n" << std::setprecision(17);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        os << i << ',' << s.values[i].real() << ',' << s.values[i].imag() << ',' << std::abs(s.values[i]) << '\n';
    }
}

} // namespace tnet
