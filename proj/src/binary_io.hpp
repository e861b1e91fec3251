// SPDX-License-Identifier: Apache-2.0
//
// xlbt: near-field multiuser beam training toolkit for sub-connected XL-MIMO
// Copyright (C) 2026 The xlbt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Helpers shared by the combiner and dataset file formats: a one-line JSON
// header followed by a little-endian float32 (re, im) interleaved payload.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "xlbt/common.hpp"

namespace xlbt::detail {

inline float load_le_float(const char* p)
{
    std::uint32_t bits;
    std::memcpy(&bits, p, 4);
    if constexpr (std::endian::native == std::endian::big)
        bits = __builtin_bswap32(bits);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
}

inline void store_le_float(char* p, float f)
{
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    if constexpr (std::endian::native == std::endian::big)
        bits = __builtin_bswap32(bits);
    std::memcpy(p, &bits, 4);
}

struct RawFile {
    nlohmann::json header;
    std::vector<char> payload;
};

inline RawFile read_header_and_payload(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw FormatError(path + ": missing header line");
    RawFile out;
    try {
        out.header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ": header is not valid JSON (" + e.what() + ")");
    }
    if (!out.header.is_object())
        throw FormatError(path + ": header must be a JSON object");
    out.payload.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    return out;
}

inline void write_header_and_payload(const std::string& path, const nlohmann::json& header,
                                     const std::vector<char>& payload)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    out << header.dump() << '\n';
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out)
        throw std::runtime_error("write failed for " + path);
}

template <typename T>
T header_field(const nlohmann::json& header, const char* key, const std::string& path)
{
    auto it = header.find(key);
    if (it == header.end())
        throw FormatError(path + ": header lacks '" + key + "'");
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw FormatError(path + ": header field '" + key + "' has the wrong type");
    }
}

} // namespace xlbt::detail
