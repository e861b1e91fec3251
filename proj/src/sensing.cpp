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

#include "xlbt/sensing.hpp"

#include <cmath>

#include "binary_io.hpp"
#include "xlbt/rng.hpp"

namespace xlbt {

namespace {
constexpr std::uint64_t kCombinerStream = 0xC0B1;
constexpr std::uint64_t kUplinkNoiseStream = 0x0153;
constexpr double kNormDrift = 1e-6;
} // namespace

CMatrix SensingConfig::stacked() const
{
    CMatrix phi_h(static_cast<Eigen::Index>(m_slots) * k, n);
    for (int m = 0; m < m_slots; ++m)
        phi_h.middleRows(static_cast<Eigen::Index>(m) * k, k) = slots[m].adjoint();
    return phi_h;
}

void SensingConfig::validate() const
{
    if (m_slots < 1 || k < 1 || n < 1)
        throw std::invalid_argument("sensing config needs m, k, n >= 1");
    if (static_cast<int>(slots.size()) != m_slots)
        throw std::invalid_argument("sensing config has " + std::to_string(slots.size()) + " slots, expected " +
                                    std::to_string(m_slots));
    for (const auto& s : slots)
        if (s.rows() != n || s.cols() != k)
            throw std::invalid_argument("per-slot combiner must be n x k");
    if (noise_var < 0.0)
        throw std::invalid_argument("noise variance must be nonnegative");
}

SensingConfig random_combiner(int m, int k, int n, std::uint64_t seed)
{
    SensingConfig cfg;
    cfg.m_slots = m;
    cfg.k = k;
    cfg.n = n;
    if (m < 1 || k < 1 || n < 1)
        throw std::invalid_argument("random_combiner needs m, k, n >= 1");
    const double mag = 1.0 / std::sqrt(static_cast<double>(n));
    cfg.slots.reserve(m);
    for (int slot = 0; slot < m; ++slot) {
        KeyedRng rng{kCombinerStream, seed, static_cast<std::uint64_t>(slot)};
        CMatrix phi(n, k);
        for (int col = 0; col < k; ++col)
            for (int row = 0; row < n; ++row)
                phi(row, col) = std::polar(mag, 2.0 * kPi * rng.uniform());
        cfg.slots.push_back(std::move(phi));
    }
    return cfg;
}

CMatrix measure_uplink(const SensingConfig& config, const CMatrix& H, std::uint64_t seed)
{
    config.validate();
    if (H.rows() != config.n || H.cols() != config.k)
        throw std::invalid_argument("channel must be n x k to match the combiner");
    const Eigen::Index K = config.k;
    CMatrix Y(static_cast<Eigen::Index>(config.m_slots) * K, K);
    for (int m = 0; m < config.m_slots; ++m) {
        const auto& phi = config.slots[m];
        if (config.noise_var > 0.0) {
            KeyedRng rng{kUplinkNoiseStream, seed, static_cast<std::uint64_t>(m)};
            CMatrix noise(config.n, K);
            for (Eigen::Index c = 0; c < K; ++c)
                for (Eigen::Index r = 0; r < config.n; ++r)
                    noise(r, c) = rng.complex_normal(config.noise_var);
            Y.middleRows(m * K, K) = phi.adjoint() * (H + noise);
        } else {
            Y.middleRows(m * K, K) = phi.adjoint() * H;
        }
    }
    return Y;
}

void save_combiner(const std::string& path, const SensingConfig& config)
{
    config.validate();
    nlohmann::json header = {{"m", config.m_slots},
                             {"k", config.k},
                             {"n", config.n},
                             {"dtype", "c64-interleaved"},
                             {"version", 1}};
    std::vector<char> payload(static_cast<std::size_t>(config.m_slots) * config.n * config.k * 8);
    char* p = payload.data();
    for (const auto& phi : config.slots)
        for (int a = 0; a < config.n; ++a)
            for (int s = 0; s < config.k; ++s) {
                detail::store_le_float(p, static_cast<float>(phi(a, s).real()));
                detail::store_le_float(p + 4, static_cast<float>(phi(a, s).imag()));
                p += 8;
            }
    detail::write_header_and_payload(path, header, payload);
}

SensingConfig load_learned_combiner(const std::string& path)
{
    const auto raw = detail::read_header_and_payload(path);
    const auto& h = raw.header;
    if (detail::header_field<int>(h, "version", path) != 1)
        throw FormatError(path + ": unsupported combiner version");
    if (detail::header_field<std::string>(h, "dtype", path) != "c64-interleaved")
        throw FormatError(path + ": unsupported dtype");
    SensingConfig cfg;
    cfg.m_slots = detail::header_field<int>(h, "m", path);
    cfg.k = detail::header_field<int>(h, "k", path);
    cfg.n = detail::header_field<int>(h, "n", path);
    if (cfg.m_slots < 1 || cfg.k < 1 || cfg.n < 1)
        throw FormatError(path + ": dimensions must be positive");
    const std::size_t expected = static_cast<std::size_t>(cfg.m_slots) * cfg.n * cfg.k * 8;
    if (raw.payload.size() != expected)
        throw FormatError(path + ": payload has " + std::to_string(raw.payload.size()) + " bytes, header implies " +
                          std::to_string(expected));

    const char* p = raw.payload.data();
    cfg.slots.reserve(cfg.m_slots);
    for (int m = 0; m < cfg.m_slots; ++m) {
        CMatrix phi(cfg.n, cfg.k);
        for (int a = 0; a < cfg.n; ++a)
            for (int s = 0; s < cfg.k; ++s) {
                phi(a, s) = cdouble(detail::load_le_float(p), detail::load_le_float(p + 4));
                p += 8;
            }
        for (int s = 0; s < cfg.k; ++s) {
            const double norm = phi.col(s).norm();
            if (!(norm > 0.0) || !std::isfinite(norm))
                throw FormatError(path + ": combiner column has zero or non-finite norm");
            if (std::abs(norm - 1.0) > kNormDrift)
                phi.col(s) /= norm;
        }
        cfg.slots.push_back(std::move(phi));
    }
    return cfg;
}

} // namespace xlbt
