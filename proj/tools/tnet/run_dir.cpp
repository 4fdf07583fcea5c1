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

#include "run_dir.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <memory>
#include <sstream>

#include <unistd.h>

#include <openssl/evp.h>

#include "tnet/errors.hpp"

namespace tnet::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string sha256_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw InternalError("sha256 init failed");
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

RunDirectory::RunDirectory(fs::path target) : target_(std::move(target)), start_(std::chrono::steady_clock::now()) {
    if (target_.empty()) throw UsageError("an output directory is required (--out)");
    if (fs::exists(target_)) throw UsageError("output directory already exists: " + target_.string());
    fs::path parent = fs::absolute(target_).parent_path();
    fs::create_directories(parent);
    staging_ = parent / ("." + target_.filename().string() + ".partial-" + std::to_string(::getpid()));
    fs::remove_all(staging_);
    fs::create_directory(staging_);
}

RunDirectory::~RunDirectory() {
    if (!committed_) {
        std::error_code ec;
        fs::remove_all(staging_, ec);
    }
}

void RunDirectory::write_text(const std::string &name, const std::string &text) {
    std::ofstream out(path(name), std::ios::binary);
    out << text;
    if (!out) throw FormatError("cannot write " + name);
}

void RunDirectory::write_json(const std::string &name, const json &j) { write_text(name, j.dump(2) + "\n"); }

void RunDirectory::commit(json manifest) {
    std::vector<std::string> names;
    for (const auto &entry : fs::directory_iterator(staging_)) {
        if (entry.is_regular_file() && entry.path().filename() != "manifest.json")
            names.push_back(entry.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    json files = json::array();
    for (const auto &name : names) {
        files.push_back({{"path", name}, {"bytes", fs::file_size(path(name))}, {"sha256", sha256_file(path(name))}});
    }
    manifest["files"] = files;
    manifest["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_json("manifest.json", manifest);
    fs::rename(staging_, target_);
    committed_ = true;
}

} // namespace tnet::cli
