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

#include <json.hpp>

#include "run_dir.hpp"

namespace tnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCheckFailed = 3;

/// Rejects unknown keys and commands; throws UsageError.
void check_descriptor(const nlohmann::json &desc);

/// Executes a validated descriptor, writing artifacts into `dir` (not yet
/// committed). Returns the process exit status.
int run_descriptor(const nlohmann::json &desc, RunDirectory &dir);

} // namespace tnet::cli
