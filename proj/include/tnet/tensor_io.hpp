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

// TNET1 binary container.
//
//   bytes 0..4   "TNET1"
//   byte  5      endianness marker, always 'L' (payload is little-endian)
//   byte  6      record type: 'T' single tensor, 'A' archive
//
// Tensor record:
//   u32 rank
//   rank x (u32 byte length, UTF-8 label bytes)
//   rank x u64 extent
//   prod(extents) x (f64 re, f64 im), row-major over the label order
//
// Archive record:
//   u32 metadata length, metadata bytes (JSON text)
//   u32 tensor count
//   count x complete tensor record (each with its own 7-byte header)

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tnet/tensor.hpp"

namespace tnet {

void write_tensor(std::ostream &os, const Tensor &t);
Tensor read_tensor(std::istream &is);

void save_tensor(const std::filesystem::path &path, const Tensor &t);
Tensor load_tensor(const std::filesystem::path &path);

struct Archive {
    std::string metadata;
    std::vector<Tensor> tensors;
};

void write_archive(std::ostream &os, const Archive &archive);
Archive read_archive(std::istream &is);

void save_archive(const std::filesystem::path &path, const Archive &archive);
Archive load_archive(const std::filesystem::path &path);

} // namespace tnet
