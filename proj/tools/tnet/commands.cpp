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

#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "tnet/cmps.hpp"
#include "tnet/dmrg.hpp"
#include "tnet/ed.hpp"
#include "tnet/errors.hpp"
#include "tnet/expectation.hpp"
#include "tnet/infinite.hpp"
#include "tnet/model.hpp"
#include "tnet/mpo.hpp"
#include "tnet/mps.hpp"
#include "tnet/tebd.hpp"
#include "tnet/tensor_io.hpp"

namespace tnet::cli {

using json = nlohmann::json;

namespace {

const std::set<std::string> kCommands{"gs",     "evolve", "correlate", "entropy-scan",
                                      "spectrum", "oracle", "cmps",      "fixtures"};

const std::set<std::string> kTopKeys{"command", "seed",     "threads", "out",    "model",  "dmrg",   "gs",
                                     "evolve",  "state",    "correlate", "spectrum", "oracle", "cmps", "fixtures"};

template <class F>
std::string to_text(F &&write) {
    std::ostringstream os;
    write(os);
    return os.str();
}

ModelSpec model_of(const json &desc) {
    if (!desc.contains("model")) throw UsageError("descriptor has no model");
    return model_from_json(desc["model"].dump());
}

std::vector<std::size_t> digits_for(const std::string &kind, std::size_t n, std::size_t d) {
    std::vector<std::size_t> digits(n, 0);
    if (kind == "neel")
        for (std::size_t j = 1; j < n; j += 2) digits[j] = d - 1;
    return digits;
}

MatrixProductState product_of(const std::string &kind, std::size_t n, std::size_t d) {
    const std::vector<std::size_t> dims(n, d);
    if (kind == "up" || kind == "neel") return basis_state(digits_for(kind, n, d), dims);
    if (kind == "plus") {
        const Vector v = Vector::Constant(static_cast<Eigen::Index>(d), 1.0 / std::sqrt(double(d)));
        return product_state(std::vector<Vector>(n, v));
    }
    throw UsageError("unknown product state '" + kind + "' (up, neel, plus)");
}

/// The state a command acts on: a TNET1 file, a named fixture, a product state
/// or a random right-canonical state.
MatrixProductState state_of(const json &desc, std::size_t default_n, std::size_t default_d) {
    const json s = desc.value("state", json::object());
    const std::size_t n = s.value("n", default_n);
    const std::size_t d = s.value("d", default_d);
    const int sources = int(s.contains("file")) + int(s.contains("fixture")) + int(s.contains("product")) +
                        int(s.contains("random"));
    if (sources > 1) throw UsageError("state: give exactly one of file, fixture, product, random");
    if (s.contains("file")) return load_mps(s["file"].get<std::string>());
    if (n == 0) throw UsageError("state: number of sites required");
    if (s.contains("fixture")) return build_fixture(s["fixture"].get<std::string>(), n);
    if (s.contains("random")) {
        std::mt19937_64 rng(desc.value("seed", std::uint64_t{1}));
        return MatrixProductState::random(std::vector<std::size_t>(n, d), s["random"].get<std::size_t>(), rng);
    }
    return product_of(s.value("product", std::string("neel")), n, d);
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

int run_gs(const json &desc, RunDirectory &dir) {
    const ModelSpec spec = model_of(desc);
    DmrgConfig cfg = dmrg_config_from_json(desc.value("dmrg", json::object()).dump());
    cfg.seed = desc.value("seed", cfg.seed);
    const DmrgResult res = ground_state(build_mpo(spec), cfg);

    json result = json::parse(dmrg_report_to_json(res.report));
    result["command"] = "gs";
    result["model"] = json::parse(model_to_json(spec));
    result["bond_dims"] = res.state.bond_dims();
    if (desc.value("gs", json::object()).value("reference", false)) {
        const ed::Solution exact = ed::solve(spec);
        result["reference_energy"] = exact.summary.ground_energy;
        result["reference_error"] = std::abs(res.report.energy - exact.summary.ground_energy);
    }
    dir.write_json("result.json", result);
    dir.write_text("sweeps.csv", to_text([&](std::ostream &os) { write_dmrg_csv(os, res.report); }));
    dir.write_text("entropy.csv",
                   to_text([&](std::ostream &os) { write_entanglement_csv(os, entanglement_scan(res.state)); }));
    save_mps(dir.path("state.tnet"), res.state);
    return kExitOk;
}

int run_evolve(const json &desc, RunDirectory &dir) {
    const ModelSpec spec = model_of(desc);
    const json e = desc.value("evolve", json::object());
    const TrotterPlan plan = build_plan(spec, e.value("dt", 0.05), e.value("order", 2), e.value("steps", std::size_t{20}),
                                       e.value("imaginary", false));
    const MatrixProductState init = state_of(desc, spec.n, local_dim(spec));
    if (init.size() != spec.n) throw ShapeError("initial state and model have different lengths");
    const std::size_t d_max = e.value("d_max", std::size_t{64});
    const double tol = e.value("tol", 1e-12);
    const EvolutionResult res = plan.imaginary ? evolve_imaginary(init, plan, d_max, tol) : evolve(init, plan, d_max, tol);

    const TraceRow &last = res.trace.back();
    json result{{"command", "evolve"},
                {"model", json::parse(model_to_json(spec))},
                {"imaginary", plan.imaginary},
                {"order", plan.order},
                {"dt", plan.dt},
                {"steps", plan.steps},
                {"t", last.t},
                {"energy", last.energy},
                {"S_mid", last.s_mid},
                {"trunc_cum", last.trunc_cum},
                {"bond_dims", res.state.bond_dims()}};
    dir.write_json("result.json", result);
    dir.write_text("trace.csv", to_text([&](std::ostream &os) { write_trace_csv(os, res.trace); }));
    save_mps(dir.path("state.tnet"), res.state);
    return kExitOk;
}

int run_correlate(const json &desc, RunDirectory &dir) {
    const MatrixProductState mps = state_of(desc, 0, 2);
    const json c = desc.value("correlate", json::object());
    const std::size_t d = mps.phys_dim(0);
    const Matrix oa = local_operator(c.value("op_a", std::string(d == 2 ? "Z" : "Sz")), d);
    const Matrix ob = local_operator(c.value("op_b", std::string(d == 2 ? "Z" : "Sz")), d);
    const std::size_t origin = c.value("origin", std::size_t{0});
    if (origin + 1 >= mps.size()) throw RangeError("origin leaves no room for a second site");
    const std::size_t max_dist = c.value("max_dist", mps.size() - 1 - origin);

    const ExpectationEngine engine(mps);
    const auto rows = engine.correlator_scan(oa, origin, ob, max_dist);
    std::vector<std::pair<double, double>> samples;
    for (const auto &r : rows) samples.emplace_back(double(r.dist), std::abs(r.connected));

    json result{{"command", "correlate"}, {"origin", origin}, {"max_dist", max_dist}, {"sites", mps.size()}};
    try {
        const DecayFit fit = fit_correlation_decay(samples);
        result["fit"] = {{"amplitude", fit.amplitude},
                         {"length", std::isfinite(fit.length) ? json(fit.length) : json(nullptr)},
                         {"r_squared", fit.r_squared},
                         {"samples", fit.samples}};
    } catch (const FitError &err) {
        result["fit"] = nullptr;
        result["fit_error"] = err.what();
    }
    dir.write_json("result.json", result);
    dir.write_text("correlators.csv", to_text([&](std::ostream &os) { write_correlator_csv(os, rows); }));
    return kExitOk;
}

int run_entropy(const json &desc, RunDirectory &dir) {
    const MatrixProductState mps = state_of(desc, 0, 2);
    const auto scan = entanglement_scan(mps);
    json entropies = json::array();
    double max_s = 0.0;
    for (const auto &cut : scan) {
        entropies.push_back(cut.von_neumann());
        max_s = std::max(max_s, cut.von_neumann());
    }
    dir.write_json("result.json", {{"command", "entropy-scan"},
                                   {"sites", mps.size()},
                                   {"bond_dims", mps.bond_dims()},
                                   {"von_neumann", entropies},
                                   {"max_von_neumann", max_s}});
    dir.write_text("entropy.csv", to_text([&](std::ostream &os) { write_entanglement_csv(os, scan); }));
    return kExitOk;
}

Tensor tensor_of(const std::string &name) {
    if (name == "aklt") return aklt_tensor();
    if (name == "ghz") return ghz_tensor();
    return load_tensor(name);
}

int run_spectrum(const json &desc, RunDirectory &dir) {
    const std::string name = desc.value("spectrum", json::object()).value("tensor", std::string("aklt"));
    const UniformMps u = make_uniform(tensor_of(name));
    const TransferSpectrum s = transfer_spectrum(u);
    json values = json::array();
    for (cplx v : s.values) values.push_back(complex_json(v));
    json result{{"command", "spectrum"},
                {"tensor", name},
                {"values", values},
                {"degenerate", s.degenerate},
                {"defective", s.defective}};
    try {
        result["correlation_length"] = correlation_length(u);
    } catch (const DegenerateSpectrumError &err) {
        result["correlation_length"] = nullptr;
        result["correlation_length_error"] = err.what();
    }
    dir.write_json("result.json", result);
    dir.write_text("spectrum.csv", to_text([&](std::ostream &os) { write_spectrum_csv(os, s); }));
    return kExitOk;
}

int run_oracle(const json &desc, RunDirectory &dir) {
    const ModelSpec spec = model_of(desc);
    ed::SolveOptions opts;
    opts.max_levels = desc.value("oracle", json::object()).value("max_levels", opts.max_levels);
    const ed::Solution sol = ed::solve(spec, opts);

    json result{{"command", "oracle"},
                {"model", json::parse(model_to_json(spec))},
                {"ground_energy", sol.summary.ground_energy},
                {"gap", sol.summary.gap},
                {"degeneracy", sol.summary.degeneracy},
                {"levels", sol.summary.levels}};
    dir.write_json("result.json", result);

    const std::vector<std::size_t> dims(spec.n, local_dim(spec));
    const auto alphas = ed::default_renyi_grid();
    std::ostringstream csv;
    csv.precision(17);
    csv << "cut,von_neumann";
    for (double a : alphas) csv << ",renyi_" << (std::isinf(a) ? std::string("inf") : to_text([&](std::ostream &os) { os << a; }));
    csv << ",mutual_information,negativity,log_negativity\n";
    std::vector<std::size_t> region;
    for (std::size_t k = 1; k < spec.n; ++k) {
        region.push_back(k - 1);
        const ed::EntropyReport r = ed::entropy_suite(sol.ground_vectors.front(), dims, region, alphas);
        csv << k << ',' << r.von_neumann;
        for (double a : alphas) csv << ',' << r.renyi.at(a);
        csv << ',' << r.mutual_information << ',' << r.negativity << ',' << r.log_negativity << '\n';
    }
    dir.write_text("entropy.csv", csv.str());
    return kExitOk;
}

int run_cmps(const json &desc, RunDirectory &dir) {
    if (!desc.contains("cmps")) throw UsageError("descriptor has no cmps section");
    const json &c = desc["cmps"];
    const ContinuousMps field = cmps_from_json(c.dump());
    const std::size_t points = c.value("points", std::size_t{50});
    if (points == 0) throw UsageError("cmps.points must be positive");
    const bool lattice = c.contains("eps");
    const double eps = c.value("eps", 0.0);
    if (lattice && !(eps > 0.0)) throw UsageError("cmps.eps must be positive");
    const std::size_t k_max = c.value("k_max", std::size_t{4});

    std::ostringstream csv;
    csv.precision(17);
    csv << "x,correlator_re,correlator_im";
    if (lattice) csv << ",lattice_re,lattice_im";
    csv << '\n';
    for (std::size_t i = 1; i <= points; ++i) {
        const double x = field.L * double(i) / double(points + 1);
        const cplx v = density_correlator(field, x);
        csv << x << ',' << v.real() << ',' << v.imag();
        if (lattice) {
            // The lattice correlator needs x on the grid; round to the nearest site.
            const double xl = std::min(std::max(1.0, std::round(x / eps)), std::round(field.L / eps) - 1.0) * eps;
            const cplx w = lattice_density_correlator(field, eps, xl, k_max);
            csv << ',' << w.real() << ',' << w.imag();
        }
        csv << '\n';
    }
    json result{{"command", "cmps"}, {"D", field.Q.rows()}, {"L", field.L}, {"points", points}};
    if (lattice) result["eps"] = eps;
    dir.write_json("result.json", result);
    dir.write_text("correlator.csv", csv.str());
    return kExitOk;
}

Matrix kron(const Matrix &a, const Matrix &b) { return Eigen::kroneckerProduct(a, b).eval(); }

int run_fixtures(const json &desc, RunDirectory &dir) {
    const json f = desc.value("fixtures", json::object());
    const std::size_t n = f.value("n", std::size_t{12});
    if (n < 3) throw UsageError("fixtures need at least 3 sites");
    const bool check = f.value("check", false);

    const MatrixProductState ghz = ghz_state(n);
    const MatrixProductState cluster = cluster_state(n);
    const MatrixProductState aklt = aklt_state(n);
    const MatrixProductState aklt_ring = aklt_state(n, Boundary::periodic);
    save_mps(dir.path("ghz.tnet"), ghz);
    save_mps(dir.path("cluster.tnet"), cluster);
    save_mps(dir.path("aklt.tnet"), aklt);
    save_mps(dir.path("aklt-periodic.tnet"), aklt_ring);

    json checks = json::array();
    bool all_pass = true;
    auto record = [&](const std::string &name, double error, double tol) {
        const bool pass = error <= tol;
        all_pass = all_pass && pass;
        checks.push_back({{"name", name}, {"error", error}, {"tolerance", tol}, {"pass", pass}});
    };

    if (check) {
        double worst = 0.0;
        for (const auto &cut : entanglement_scan(ghz)) worst = std::max(worst, std::abs(cut.von_neumann() - 1.0));
        record("ghz entropy is one bit at every cut", worst, 1e-12);

        const std::size_t small = std::min<std::size_t>(n, 10);
        const Vector psi = to_dense(ghz_state(small));
        const std::vector<std::size_t> dims(small, 2);
        worst = 0.0;
        std::vector<std::size_t> region;
        for (std::size_t k = 1; k < small; ++k) {
            region.push_back(k - 1);
            worst = std::max(worst, std::abs(ed::entropy_suite(psi, dims, region).negativity - 1.0));
        }
        record("ghz negativity is one at every cut", worst, 1e-10);

        const ExpectationEngine engine(cluster);
        const Matrix x = pauli_x(), z = pauli_z();
        worst = std::max(std::abs(engine.local(kron(x, z), 0) - 1.0), std::abs(engine.local(kron(z, x), n - 2) - 1.0));
        const Matrix zxz = kron(z, kron(x, z));
        for (std::size_t j = 1; j + 1 < n; ++j) worst = std::max(worst, std::abs(engine.local(zxz, j - 1) - 1.0));
        record("cluster stabilizers equal one", worst, 1e-12);

        ModelSpec ring;
        ring.kind = ModelKind::aklt;
        ring.n = n;
        ring.boundary = Boundary::periodic;
        const double e = std::abs(expectation_mpo(aklt_ring, build_mpo(ring))) / std::pow(norm(aklt_ring), 2);
        record("aklt periodic energy is zero", e, 1e-10);

        const double xi = correlation_length(make_uniform(aklt_tensor()));
        record("aklt correlation length is 1/ln 3", std::abs(xi - 1.0 / std::log(3.0)), 1e-9);
    }

    dir.write_json("result.json", {{"command", "fixtures"}, {"n", n}, {"checked", check}, {"checks", checks},
                                   {"pass", all_pass}});
    return all_pass ? kExitOk : kExitCheckFailed;
}

} // namespace

void check_descriptor(const json &desc) {
    if (!desc.is_object()) throw UsageError("descriptor must be a JSON object");
    for (const auto &[key, value] : desc.items())
        if (!kTopKeys.count(key)) throw UsageError("unknown descriptor key '" + key + "'");
    if (!desc.contains("command") || !desc["command"].is_string())
        throw UsageError("descriptor needs a string 'command'");
    if (!kCommands.count(desc["command"].get<std::string>()))
        throw UsageError("unknown command '" + desc["command"].get<std::string>() + "'");
    for (const char *key : {"model", "dmrg", "gs", "evolve", "state", "correlate", "spectrum", "oracle", "cmps",
                            "fixtures"})
        if (desc.contains(key) && !desc[key].is_object()) throw UsageError(std::string(key) + " must be an object");
}

int run_descriptor(const json &desc, RunDirectory &dir) {
    const std::string cmd = desc.at("command").get<std::string>();
    try {
        if (cmd == "gs") return run_gs(desc, dir);
        if (cmd == "evolve") return run_evolve(desc, dir);
        if (cmd == "correlate") return run_correlate(desc, dir);
        if (cmd == "entropy-scan") return run_entropy(desc, dir);
        if (cmd == "spectrum") return run_spectrum(desc, dir);
        if (cmd == "oracle") return run_oracle(desc, dir);
        if (cmd == "cmps") return run_cmps(desc, dir);
        return run_fixtures(desc, dir);
    } catch (const json::exception &e) {
        throw UsageError(std::string("descriptor schema violation: ") + e.what());
    }
}

} // namespace tnet::cli
