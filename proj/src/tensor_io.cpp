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

#include "tnet/tensor_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace tnet {

namespace {

constexpr std::array<char, 5> kMagic{'T', 'N', 'E', 'T', '1'};
constexpr char kLittleEndian = 'L';
constexpr char kTensorRecord = 'T';
constexpr char kArchiveRecord = 'A';

template <typename U> void put_le(std::ostream &os, U value) {
    std::array<char, sizeof(U)> bytes{};
    for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFFu);
    os.write(bytes.data(), bytes.size());
}

template <typename U> U get_le(std::istream &is) {
    std::array<unsigned char, sizeof(U)> bytes{};
    is.read(reinterpret_cast<char *>(bytes.data()), bytes.size());
    if (!is) throw FormatError("unexpected end of TNET1 stream");
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
    return value;
}

void put_header(std::ostream &os, char record) {
    os.write(kMagic.data(), kMagic.size());
    os.put(kLittleEndian);
    os.put(record);
}

void expect_header(std::istream &is, char record) {
    std::array<char, 7> head{};
    is.read(head.data(), head.size());
    if (!is || std::memcmp(head.data(), kMagic.data(), kMagic.size()) != 0) {
        throw FormatError("missing TNET1 magic");
    }
    if (head[5] != kLittleEndian) throw FormatError("unsupported endianness marker");
    if (head[6] != record) throw FormatError(std::string("expected record type '") + record + "'");
}

void put_string(std::ostream &os, const std::string &s) {
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream &is) {
    const auto len = get_le<std::uint32_t>(is);
    std::string s(len, '\0');
    is.read(s.data(), len);
    if (!is) throw FormatError("truncated string in TNET1 stream");
    return s;
}

} // namespace

void write_tensor(std::ostream &os, const Tensor &t) {
    put_header(os, kTensorRecord);
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(t.rank()));
    for (const auto &l : t.labels()) put_string(os, l);
    for (auto d : t.dims()) put_le<std::uint64_t>(os, d);
    for (const auto &x : t.data()) {
        put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(x.real()));
        put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(x.imag()));
    }
    if (!os) throw FormatError("failed writing tensor");
}

Tensor read_tensor(std::istream &is) {
    expect_header(is, kTensorRecord);
    const auto rank = get_le<std::uint32_t>(is);
    std::vector<Label> labels(rank);
    std::vector<std::size_t> dims(rank);
    for (auto &l : labels) l = get_string(is);
    std::size_t count = 1;
    for (auto &d : dims) {
        d = static_cast<std::size_t>(get_le<std::uint64_t>(is));
        count *= d;
    }
    std::vector<cplx> data(count);
    for (auto &x : data) {
        const double re = std::bit_cast<double>(get_le<std::uint64_t>(is));
        const double im = std::bit_cast<double>(get_le<std::uint64_t>(is));
        x = cplx{re, im};
    }
    if (rank == 0) return Tensor::scalar(data.at(0));
    return Tensor(std::move(labels), std::move(dims), std::move(data));
}

void save_tensor(const std::filesystem::path &path, const Tensor &t) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open '" + path.string() + "' for writing");
    write_tensor(os, t);
}

Tensor load_tensor(const std::filesystem::path &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open '" + path.string() + "'");
    return read_tensor(is);
}

void write_archive(std::ostream &os, const Archive &archive) {
    put_header(os, kArchiveRecord);
    put_string(os, archive.metadata);
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(archive.tensors.size()));
    for (const auto &t : archive.tensors) write_tensor(os, t);
}

Archive read_archive(std::istream &is) {
    expect_header(is, kArchiveRecord);
    Archive archive;
    archive.metadata = get_string(is);
    const auto count = get_le<std::uint32_t>(is);
    archive.tensors.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) archive.tensors.push_back(read_tensor(is));
    return archive;
}

void save_archive(const std::filesystem::path &path, const Archive &archive) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open '" + path.string() + "' for writing");
    write_archive(os, archive);
}

Archive load_archive(const std::filesystem::path &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open '" + path.string() + "'");
    return read_archive(is);
}

} // namespace tnet
