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

// tnet command-line front end. Every subcommand builds a run descriptor from
// --config and/or flags, saves it, runs it and commits the output directory.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include "commands.hpp"
#include "run_dir.hpp"
#include "tnet/errors.hpp"

#ifndef TNET_VERSION
#define TNET_VERSION "0.0.0"
#endif

namespace {

using json = nlohmann::json;
using namespace tnet::cli;

enum class FlagType { integer, real, text, boolean, int_list, file };

/// A command-line flag and the descriptor field it fills.
struct Flag {
    std::string name;
    std::string pointer;
    FlagType type;
    std::string help;
};

const std::vector<Flag> kModelFlags{
    {"--model", "/model", FlagType::file, "model JSON file"},
    {"--kind", "/model/kind", FlagType::text, "xy, heisenberg_spin1, aklt, majumdar_ghosh"},
    {"--n", "/model/n", FlagType::integer, "number of sites"},
    {"--boundary", "/model/boundary", FlagType::text, "open or periodic"},
    {"--gamma", "/model/couplings/gamma", FlagType::real, "XY anisotropy"},
    {"--lambda", "/model/couplings/lambda", FlagType::real, "XY field"},
    {"--J", "/model/couplings/J", FlagType::real, "Heisenberg exchange"},
};

const std::vector<Flag> kStateFlags{
    {"--state", "/state/file", FlagType::text, "TNET1 state file"},
    {"--fixture", "/state/fixture", FlagType::text, "ghz, ghz-periodic, cluster, aklt, aklt-periodic"},
    {"--product", "/state/product", FlagType::text, "up, neel or plus"},
    {"--random-bond", "/state/random", FlagType::integer, "random right-canonical state of this bond dimension"},
    {"--sites", "/state/n", FlagType::integer, "number of sites of a generated state"},
    {"--local-dim", "/state/d", FlagType::integer, "local dimension of a generated state"},
};

std::map<std::string, std::vector<Flag>> command_flags() {
    std::map<std::string, std::vector<Flag>> m;
    m["gs"] = kModelFlags;
    for (const Flag &f : std::vector<Flag>{
             {"--mode", "/dmrg/mode", FlagType::text, "two-site or single-site"},
             {"--schedule", "/dmrg/schedule", FlagType::int_list, "bond dimensions per sweep, e.g. 4,8,16"},
             {"--max-sweeps", "/dmrg/max_sweeps", FlagType::integer, "sweep limit"},
             {"--energy-tol", "/dmrg/tols/energy", FlagType::real, "energy convergence tolerance"},
             {"--eig-tol", "/dmrg/tols/eig", FlagType::real, "local eigensolver tolerance"},
             {"--svd-tol", "/dmrg/tols/svd", FlagType::real, "discarded weight per split"},
             {"--noise", "/dmrg/noise", FlagType::real, "single-site noise amplitude"},
             {"--reference", "/gs/reference", FlagType::boolean, "also solve exactly and report the error"},
         })
        m["gs"].push_back(f);
    m["evolve"] = kModelFlags;
    m["evolve"].insert(m["evolve"].end(), kStateFlags.begin(), kStateFlags.end());
    for (const Flag &f : std::vector<Flag>{
             {"--dt", "/evolve/dt", FlagType::real, "time step"},
             {"--order", "/evolve/order", FlagType::integer, "Trotter order (1 or 2)"},
             {"--steps", "/evolve/steps", FlagType::integer, "number of steps"},
             {"--imaginary", "/evolve/imaginary", FlagType::boolean, "imaginary-time evolution"},
             {"--d-max", "/evolve/d_max", FlagType::integer, "bond dimension cap"},
             {"--tol", "/evolve/tol", FlagType::real, "discarded weight per gate"},
         })
        m["evolve"].push_back(f);
    m["correlate"] = kStateFlags;
    for (const Flag &f : std::vector<Flag>{
             {"--op-a", "/correlate/op_a", FlagType::text, "first operator name"},
             {"--op-b", "/correlate/op_b", FlagType::text, "second operator name"},
             {"--origin", "/correlate/origin", FlagType::integer, "site of the first operator"},
             {"--max-dist", "/correlate/max_dist", FlagType::integer, "largest separation"},
         })
        m["correlate"].push_back(f);
    m["entropy-scan"] = kStateFlags;
    m["spectrum"] = {{"--tensor", "/spectrum/tensor", FlagType::text, "aklt, ghz or a TNET1 tensor file"}};
    m["oracle"] = kModelFlags;
    m["oracle"].push_back({"--max-levels", "/oracle/max_levels", FlagType::integer, "levels to report"});
    m["cmps"] = {{"--cmps", "/cmps", FlagType::file, "cMPS JSON file {D, L, Q, R}"},
                 {"--points", "/cmps/points", FlagType::integer, "number of x samples"},
                 {"--eps", "/cmps/eps", FlagType::real, "also evaluate the lattice correlator at this spacing"},
                 {"--k-max", "/cmps/k_max", FlagType::integer, "physical cutoff of the lattice tensor"}};
    m["fixtures"] = {{"--check", "/fixtures/check", FlagType::boolean, "verify the fixture identities"},
                     {"--sites", "/fixtures/n", FlagType::integer, "chain length"}};
    return m;
}

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw tnet::UsageError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw tnet::UsageError(path + ": " + e.what());
    }
}

json flag_value(const Flag &f, const std::string &raw) {
    try {
        switch (f.type) {
        case FlagType::integer: return std::stoll(raw);
        case FlagType::real: return std::stod(raw);
        case FlagType::text: return raw;
        case FlagType::boolean: return true;
        case FlagType::file: return read_json_file(raw);
        case FlagType::int_list: {
            json list = json::array();
            std::stringstream ss(raw);
            for (std::string item; std::getline(ss, item, ',');) list.push_back(std::stoll(item));
            return list;
        }
        }
    } catch (const std::invalid_argument &) {
    } catch (const std::out_of_range &) {
    }
    throw tnet::UsageError("bad value '" + raw + "' for " + f.name);
}

/// Overlays `value` at `pointer`; file flags merge into an existing object so
/// that finer flags given alongside them still apply.
void set_field(json &desc, const std::string &pointer, const json &value) {
    const json::json_pointer ptr(pointer);
    if (value.is_object() && desc.contains(ptr) && desc[ptr].is_object())
        desc[ptr].update(value);
    else
        desc[ptr] = value;
}

int report_error(const std::string &kind, const std::string &message, int code) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << std::endl;
    return code;
}

std::size_t default_threads() {
    if (const char *env = std::getenv("TNET_THREADS")) {
        try {
            return std::stoul(env);
        } catch (const std::exception &) {
            throw tnet::UsageError(std::string("TNET_THREADS is not a number: ") + env);
        }
    }
    return 1;
}

struct Invocation {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::vector<std::pair<const Flag *, std::string>> values;
};

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"tnet: matrix product state toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", TNET_VERSION);

    const auto flags = command_flags();
    std::map<std::string, Invocation> inv;
    std::map<std::string, std::map<std::string, std::string>> raw;
    std::map<std::string, CLI::App *> subs;

    auto add_common = [&](CLI::App *sub, Invocation &i) {
        sub->add_option("--config", i.config, "run descriptor JSON");
        sub->add_option("--out", i.out, "output directory (must not exist)");
        sub->add_option("--seed", i.seed, "random seed");
        sub->add_option("--threads", i.threads, "worker threads (overrides TNET_THREADS)");
    };
    for (const auto &[cmd, list] : flags) {
        CLI::App *sub = app.add_subcommand(cmd, "run the " + cmd + " command");
        subs[cmd] = sub;
        add_common(sub, inv[cmd]);
        for (const Flag &f : list) {
            if (f.type == FlagType::boolean)
                sub->add_flag(f.name, f.help);
            else
                sub->add_option(f.name, raw[cmd][f.name], f.help);
        }
    }
    CLI::App *run = app.add_subcommand("run", "replay a saved run descriptor");
    subs["run"] = run;
    add_common(run, inv["run"]);
    run->get_option("--config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return report_error("usage", e.what(), kExitUsage);
    }

    try {
        std::string cmd;
        for (const auto &[name, sub] : subs)
            if (sub->parsed()) cmd = name;
        Invocation &i = inv[cmd];

        json desc = i.config.empty() ? json::object() : read_json_file(i.config);
        if (cmd != "run") {
            if (desc.contains("command") && desc["command"] != cmd)
                throw tnet::UsageError("descriptor is for command '" + desc["command"].get<std::string>() + "'");
            desc["command"] = cmd;
            for (const Flag &f : flags.at(cmd)) {
                if (subs[cmd]->count(f.name) == 0) continue;
                set_field(desc, f.pointer, flag_value(f, raw[cmd][f.name]));
            }
        }
        if (i.seed) desc["seed"] = *i.seed;
        if (!desc.contains("seed")) desc["seed"] = 1;
        const std::size_t threads = i.threads ? *i.threads : desc.value("threads", default_threads());
        if (threads == 0) throw tnet::UsageError("--threads must be positive");
        desc["threads"] = threads;
        std::string out = i.out.empty() ? desc.value("out", std::string()) : i.out;
        check_descriptor(desc);

        Eigen::setNbThreads(static_cast<int>(threads));
        RunDirectory dir(out);
        dir.write_json("descriptor.json", desc);
        const int code = run_descriptor(desc, dir);
        dir.commit({{"tool", "tnet"},
                    {"version", TNET_VERSION},
                    {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                  std::to_string(EIGEN_MINOR_VERSION)},
                    {"command", desc["command"]},
                    {"seed", desc["seed"]},
                    {"threads", threads},
                    {"inputs", desc}});
        std::cout << json{{"status", code == kExitOk ? "ok" : "check-failed"}, {"out", out}}.dump() << std::endl;
        return code;
    } catch (const tnet::UsageError &e) {
        return report_error(e.kind(), e.what(), kExitUsage);
    } catch (const tnet::SpecError &e) {
        return report_error(e.kind(), e.what(), kExitUsage);
    } catch (const tnet::Error &e) {
        return report_error(e.kind(), e.what(), kExitError);
    } catch (const std::exception &e) {
        return report_error("internal", e.what(), kExitError);
    }
}
