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

#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace tnet::cli {

/// Lowercase hex SHA-256 of a file's contents.
std::string sha256_file(const std::filesystem::path &path);

/// Output directory staged next to its final location and renamed into place
/// by `commit`. A run that throws leaves nothing behind.
class RunDirectory {
public:
    explicit RunDirectory(std::filesystem::path target);
    ~RunDirectory();

    RunDirectory(const RunDirectory &) = delete;
    RunDirectory &operator=(const RunDirectory &) = delete;

    std::filesystem::path path(const std::string &name) const { return staging_ / name; }

    void write_text(const std::string &name, const std::string &text);
    void write_json(const std::string &name, const nlohmann::json &j);

    /// Writes manifest.json (every other file with its hash) and renames the
    /// staging directory to the target.
    void commit(nlohmann::json manifest);

private:
    std::filesystem::path target_;
    std::filesystem::path staging_;
    std::chrono::steady_clock::time_point start_;
    bool committed_ = false;
};

} // namespace tnet::cli
