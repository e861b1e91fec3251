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
#include <optional>
#include <string>
#include <vector>

#include "xlbt/beam_search.hpp"
#include "xlbt/channel_model.hpp"
#include "xlbt/codebook.hpp"
#include "xlbt/precoding.hpp"

namespace xlbt {

// Coherence interval and pilot slot duration, both in seconds.
struct OverheadModel {
    double coherence_time_s = 200e-3;
    double pilot_slot_s = 0.2e-3;

    void validate() const;
};

// (1 - M t / T_c) R_sum, clamped at zero once the pilots fill the coherence interval.
double effective_rate(double r_sum, long long pilot_count, const OverheadModel& overhead);

enum class Method { exhaustive, exhaustive_rate, greedy, radix4, ao_pcsi, ao_ncsi, random };

std::string method_name(Method method);
Method parse_method(const std::string& name);
const std::vector<Method>& all_methods();

// Everything a trial needs besides the link budget and seed.
struct TrialSetup {
    ScenarioConfig scenario;
    int n_q = 32;
    std::optional<double> est_snr_db; // NCSI estimation SNR; defaults to the operating SNR
    int ao_max_iter = 50;
    double ao_tol = 1e-9;
    long long enumeration_cap = 1'000'000;
};

struct TrialResult {
    std::string method;
    double loss = 0.0;
    double sum_rate = 0.0;
    long long pilot_count = 0;
    double effective_rate = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    BeamSelection selection;
};

// Scores a selection on the true channel. When `digital` is empty the MMSE
// precoder is designed on the true channel.
TrialResult evaluate_selection(const CMatrix& H, const Codebook& codebook, const BeamSelection& selection,
                               const std::optional<DigitalPrecoder>& digital, const LinkBudget& budget,
                               const OverheadModel& overhead, long long pilot_count);

// Runs the search `method` on channel draw (seed, trial) and scores its outcome.
SearchResult run_method(const CMatrix& H, const Codebook& codebook, Method method, const TrialSetup& setup,
                        const LinkBudget& budget, std::uint64_t seed, std::uint64_t trial);

TrialResult run_trial(const TrialSetup& setup, Method method, const LinkBudget& budget,
                      const OverheadModel& overhead, std::uint64_t seed, std::uint64_t trial = 0);

enum class SweepAxis { snr_db, codebook_size };

struct SweepSpec {
    SweepAxis axis = SweepAxis::snr_db;
    std::vector<double> grid;
    std::vector<Method> methods;
    int trials = 100;
    TrialSetup base;
    double snr_db = 10.0; // fixed SNR for codebook sweeps
    double p_t = 1.0;
    int workers = 1;

    void validate() const;
};

struct SweepRow {
    double axis_value = 0.0;
    std::string method;
    double mean_sum_rate = 0.0;
    double se_sum_rate = 0.0;
    double mean_eff_rate = 0.0;
    double se_eff_rate = 0.0;
    long long pilot_count = 0;
    int trials = 0;
};

using ResultTable = std::vector<SweepRow>;

// Trial t of every grid point and method sees channel draw (seed, t). Results
// are reduced in trial order, so the table is independent of the worker count.
ResultTable sweep(const SweepSpec& spec, const OverheadModel& overhead, std::uint64_t seed);

// Mean and standard error of the mean (n - 1 normalisation) of sum and effective rates.
SweepRow summarize(double axis_value, const std::string& method, const std::vector<TrialResult>& trials);

enum class TableFormat { csv, jsonl };

TableFormat parse_table_format(const std::string& name);

// Columns: axis_value, method, mean_sum_rate, se_sum_rate, mean_eff_rate,
// se_eff_rate, pilot_count, trials.
void export_results(const ResultTable& table, const std::string& path, TableFormat format);
ResultTable import_results(const std::string& path, TableFormat format);

} // namespace xlbt
