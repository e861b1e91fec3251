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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xlbt/harness.hpp"

namespace xlbt {

struct DatasetHeader {
    int n_sub = 0;
    int n_a = 0;
    int k = 0;
    int l = 0;
    long long count = 0;
    std::uint64_t seed = 0;
    double carrier_hz = 0.0;
    int version = 1;
};

struct ChannelDataset {
    DatasetHeader header;
    std::vector<CMatrix> channels; // count matrices of size (n_sub n_a) x k
};

// Channel dataset file: JSON header {n_sub, n_a, k, l, count, seed, carrier_hz, version: 1},
// a newline, then little-endian float32 (re, im) pairs in [sample][antenna][user] order.
// Sample i is sample_scenario(scenario, seed, i).
void export_dataset(const ScenarioConfig& scenario, long long count, std::uint64_t seed, const std::string& path);
void write_dataset(const ChannelDataset& dataset, const std::string& path);
ChannelDataset import_dataset(const std::string& path);

struct BeamRow {
    long long sample_id = 0;
    BeamSelection selection;
};

// Beam file: CSV with header "sample_id,i_1,...,i_{n_sub}" and 1-based beam indices.
void write_beam_file(const std::string& path, const std::vector<BeamRow>& rows, int n_sub);

// Throws FormatError naming the offending line for malformed rows, and
// std::out_of_range (also with the line) for indices outside [1, n_q].
std::vector<BeamRow> read_beam_file(const std::string& path, int n_sub, int n_q);

struct BeamValidation {
    std::vector<TrialResult> per_sample;
    SweepRow summary;
};

// Scores externally chosen beams (e.g. from the trained predictor) on the
// dataset channels with the MMSE digital precoder.
BeamValidation validate_beams(const std::string& dataset_path, const std::string& beam_path, int n_q,
                              const LinkBudget& budget, const OverheadModel& overhead, long long pilot_count);

} // namespace xlbt
