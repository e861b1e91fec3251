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

#include "xlbt/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "binary_io.hpp"

namespace xlbt {

void export_dataset(const ScenarioConfig& scenario, long long count, std::uint64_t seed, const std::string& path)
{
    if (count < 0)
        throw std::invalid_argument("dataset count must be nonnegative");
    scenario.validate();
    ChannelDataset ds;
    ds.header.n_sub = scenario.n_sub;
    ds.header.n_a = scenario.n_a;
    ds.header.k = scenario.users;
    ds.header.l = scenario.paths;
    ds.header.count = count;
    ds.header.seed = seed;
    ds.header.carrier_hz = scenario.carrier_hz;
    ds.channels.reserve(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i)
        ds.channels.push_back(sample_scenario(scenario, seed, static_cast<std::uint64_t>(i)).H);
    write_dataset(ds, path);
}

void write_dataset(const ChannelDataset& dataset, const std::string& path)
{
    const auto& h = dataset.header;
    const int N = h.n_sub * h.n_a;
    if (static_cast<long long>(dataset.channels.size()) != h.count)
        throw std::invalid_argument("dataset header count does not match the number of channels");
    nlohmann::ordered_json header;
    header["n_sub"] = h.n_sub;
    header["n_a"] = h.n_a;
    header["k"] = h.k;
    header["l"] = h.l;
    header["count"] = h.count;
    header["seed"] = h.seed;
    header["carrier_hz"] = h.carrier_hz;
    header["version"] = 1;

    std::vector<char> payload(static_cast<std::size_t>(h.count) * N * h.k * 8);
    char* p = payload.data();
    for (const auto& H : dataset.channels) {
        if (H.rows() != N || H.cols() != h.k)
            throw std::invalid_argument("dataset channel has the wrong shape");
        for (int a = 0; a < N; ++a)
            for (int u = 0; u < h.k; ++u) {
                detail::store_le_float(p, static_cast<float>(H(a, u).real()));
                detail::store_le_float(p + 4, static_cast<float>(H(a, u).imag()));
                p += 8;
            }
    }
    detail::write_header_and_payload(path, header, payload);
}

ChannelDataset import_dataset(const std::string& path)
{
    const auto raw = detail::read_header_and_payload(path);
    ChannelDataset ds;
    auto& h = ds.header;
    h.version = detail::header_field<int>(raw.header, "version", path);
    if (h.version != 1)
        throw FormatError(path + ": unsupported dataset version " + std::to_string(h.version));
    h.n_sub = detail::header_field<int>(raw.header, "n_sub", path);
    h.n_a = detail::header_field<int>(raw.header, "n_a", path);
    h.k = detail::header_field<int>(raw.header, "k", path);
    h.l = detail::header_field<int>(raw.header, "l", path);
    h.count = detail::header_field<long long>(raw.header, "count", path);
    h.seed = detail::header_field<std::uint64_t>(raw.header, "seed", path);
    h.carrier_hz = detail::header_field<double>(raw.header, "carrier_hz", path);
    if (h.n_sub < 1 || h.n_a < 1 || h.k < 1 || h.count < 0)
        throw FormatError(path + ": invalid dimensions in header");

    const int N = h.n_sub * h.n_a;
    const std::size_t expected = static_cast<std::size_t>(h.count) * N * h.k * 8;
    if (raw.payload.size() != expected)
        throw FormatError(path + ": payload has " + std::to_string(raw.payload.size()) + " bytes, header implies " +
                          std::to_string(expected));

    const char* p = raw.payload.data();
    ds.channels.reserve(static_cast<std::size_t>(h.count));
    for (long long s = 0; s < h.count; ++s) {
        CMatrix H(N, h.k);
        for (int a = 0; a < N; ++a)
            for (int u = 0; u < h.k; ++u) {
                H(a, u) = cdouble(detail::load_le_float(p), detail::load_le_float(p + 4));
                p += 8;
            }
        ds.channels.push_back(std::move(H));
    }
    return ds;
}

void write_beam_file(const std::string& path, const std::vector<BeamRow>& rows, int n_sub)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    out << "sample_id";
    for (int s = 1; s <= n_sub; ++s)
        out << ",i_" << s;
    out << '\n';
    for (const auto& r : rows) {
        if (r.selection.size() != n_sub)
            throw std::invalid_argument("beam row has the wrong number of subarrays");
        out << r.sample_id;
        for (int i : r.selection.indices)
            out << ',' << i;
        out << '\n';
    }
    if (!out)
        throw std::runtime_error("write failed for " + path);
}

std::vector<BeamRow> read_beam_file(const std::string& path, int n_sub, int n_q)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);

    std::string expected_header = "sample_id";
    for (int s = 1; s <= n_sub; ++s)
        expected_header += ",i_" + std::to_string(s);

    std::string line;
    if (!std::getline(in, line))
        throw FormatError(path + ":1: missing header");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != expected_header)
        throw FormatError(path + ":1: expected header '" + expected_header + "'");

    std::vector<BeamRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const std::string where = path + ":" + std::to_string(line_no) + ": ";
        std::vector<long long> fields;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            std::size_t used = 0;
            long long v = 0;
            try {
                v = std::stoll(tok, &used);
            } catch (const std::logic_error&) {
                throw FormatError(where + "field '" + tok + "' is not an integer");
            }
            if (used != tok.size())
                throw FormatError(where + "field '" + tok + "' is not an integer");
            fields.push_back(v);
        }
        if (static_cast<int>(fields.size()) != n_sub + 1)
            throw FormatError(where + "expected " + std::to_string(n_sub + 1) + " fields, got " +
                              std::to_string(fields.size()));
        BeamRow row;
        row.sample_id = fields[0];
        for (int s = 1; s <= n_sub; ++s) {
            if (fields[s] < 1 || fields[s] > n_q)
                throw std::out_of_range(where + "beam index " + std::to_string(fields[s]) + " outside [1, " +
                                        std::to_string(n_q) + "]");
            row.selection.indices.push_back(static_cast<int>(fields[s]));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

BeamValidation validate_beams(const std::string& dataset_path, const std::string& beam_path, int n_q,
                              const LinkBudget& budget, const OverheadModel& overhead, long long pilot_count)
{
    const ChannelDataset ds = import_dataset(dataset_path);
    const Codebook codebook(n_q, ds.header.n_a);
    const auto rows = read_beam_file(beam_path, ds.header.n_sub, n_q);

    BeamValidation out;
    out.per_sample.reserve(rows.size());
    for (const auto& r : rows) {
        if (r.sample_id < 0 || r.sample_id >= ds.header.count)
            throw std::out_of_range(beam_path + ": unknown sample id " + std::to_string(r.sample_id));
        TrialResult t = evaluate_selection(ds.channels[static_cast<std::size_t>(r.sample_id)], codebook,
                                           r.selection, std::nullopt, budget, overhead, pilot_count);
        t.method = "beam-file";
        t.seed = ds.header.seed;
        t.trial = static_cast<std::uint64_t>(r.sample_id);
        out.per_sample.push_back(std::move(t));
    }
    out.summary = summarize(10.0 * std::log10(budget.snr()), "beam-file", out.per_sample);
    return out;
}

} // namespace xlbt
