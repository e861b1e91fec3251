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

#include "xlbt/harness.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "xlbt/rng.hpp"

namespace xlbt {

namespace {

template <typename T> bool parse_number(const std::string& text, T& out)
{
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

constexpr std::uint64_t kRandomTag = 0x7261;
constexpr std::uint64_t kNcsiTag = 0x6E63;

const std::vector<std::string> kColumns = {"axis_value",    "method",      "mean_sum_rate", "se_sum_rate",
                                           "mean_eff_rate", "se_eff_rate", "pilot_count",   "trials"};

std::string format_double(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c != '\r') {
            fields.back() += c;
        }
    }
    return fields;
}

} // namespace

void OverheadModel::validate() const
{
    if (!(coherence_time_s > 0.0) || !(pilot_slot_s > 0.0))
        throw std::invalid_argument("coherence time and pilot slot duration must be positive");
    if (!(pilot_slot_s < coherence_time_s))
        throw std::invalid_argument("pilot slot must be shorter than the coherence time");
}

double effective_rate(double r_sum, long long pilot_count, const OverheadModel& overhead)
{
    overhead.validate();
    if (r_sum < 0.0 || pilot_count < 0)
        throw std::invalid_argument("effective_rate needs nonnegative inputs");
    const double fraction = static_cast<double>(pilot_count) * overhead.pilot_slot_s / overhead.coherence_time_s;
    return std::max(0.0, 1.0 - fraction) * r_sum;
}

std::string method_name(Method method)
{
    switch (method) {
    case Method::exhaustive: return "exhaustive";
    case Method::exhaustive_rate: return "exhaustive-rate";
    case Method::greedy: return "greedy";
    case Method::radix4: return "radix4";
    case Method::ao_pcsi: return "ao-pcsi";
    case Method::ao_ncsi: return "ao-ncsi";
    case Method::random: return "random";
    }
    throw std::logic_error("unhandled method");
}

Method parse_method(const std::string& name)
{
    for (Method m : all_methods())
        if (method_name(m) == name)
            return m;
    throw std::invalid_argument("unknown method '" + name + "'");
}

const std::vector<Method>& all_methods()
{
    static const std::vector<Method> methods = {Method::exhaustive, Method::exhaustive_rate, Method::greedy,
                                                Method::radix4,     Method::ao_pcsi,         Method::ao_ncsi,
                                                Method::random};
    return methods;
}

TrialResult evaluate_selection(const CMatrix& H, const Codebook& codebook, const BeamSelection& selection,
                               const std::optional<DigitalPrecoder>& digital, const LinkBudget& budget,
                               const OverheadModel& overhead, long long pilot_count)
{
    const CMatrix G = effective::channel(selection, codebook, H);
    TrialResult out;
    out.selection = selection;
    out.loss = effective::loss(G, budget);
    if (digital) {
        out.sum_rate = effective::sum_rate(G, digital->f_bb, budget.sigma2);
    } else if (G.norm() > 0.0) {
        const auto d = effective::mmse(G, budget);
        out.sum_rate = effective::sum_rate(G, d.f_bb, budget.sigma2);
    }
    out.pilot_count = pilot_count;
    out.effective_rate = effective_rate(out.sum_rate, pilot_count, overhead);
    return out;
}

SearchResult run_method(const CMatrix& H, const Codebook& codebook, Method method, const TrialSetup& setup,
                        const LinkBudget& budget, std::uint64_t seed, std::uint64_t trial)
{
    const int n_sub = static_cast<int>(H.rows() / codebook.beam_length());
    AoOptions ao;
    ao.max_iter = setup.ao_max_iter;
    ao.tol = setup.ao_tol;
    ExhaustiveOptions ex;
    ex.enumeration_cap = setup.enumeration_cap;

    switch (method) {
    case Method::exhaustive:
        return exhaustive_oracle(H, codebook, n_sub, budget, SearchObjective::min_loss, ex);
    case Method::exhaustive_rate:
        return exhaustive_oracle(H, codebook, n_sub, budget, SearchObjective::max_sum_rate, ex);
    case Method::greedy:
        return greedy_per_subarray(H, codebook, budget);
    case Method::radix4:
        return radix4_hierarchical(H, codebook, budget);
    case Method::ao_pcsi:
        return alternating_optimization(H, codebook, budget, ao);
    case Method::ao_ncsi: {
        const double est_db = setup.est_snr_db.value_or(10.0 * std::log10(budget.snr()));
        const CMatrix H_est = noisy_csi(H, std::pow(10.0, est_db / 10.0), hash_ids({seed, trial, kNcsiTag}));
        return alternating_optimization(H_est, codebook, budget, ao);
    }
    case Method::random:
        return random_selection(n_sub, codebook.size(), hash_ids({seed, trial, kRandomTag}));
    }
    throw std::logic_error("unhandled method");
}

TrialResult run_trial(const TrialSetup& setup, Method method, const LinkBudget& budget,
                      const OverheadModel& overhead, std::uint64_t seed, std::uint64_t trial)
{
    try {
        const ChannelRealization ch = sample_scenario(setup.scenario, seed, trial);
        const Codebook codebook(setup.n_q, setup.scenario.n_a);
        const SearchResult found = run_method(ch.H, codebook, method, setup, budget, seed, trial);
        TrialResult out =
            evaluate_selection(ch.H, codebook, found.selection, found.digital, budget, overhead, found.pilot_count);
        out.method = method_name(method);
        out.seed = seed;
        out.trial = trial;
        return out;
    } catch (const std::exception& e) {
        throw std::runtime_error("trial " + std::to_string(trial) + " (seed " + std::to_string(seed) + ", method " +
                                 method_name(method) + "): " + e.what());
    }
}

void SweepSpec::validate() const
{
    if (grid.empty())
        throw std::invalid_argument("sweep grid is empty");
    if (methods.empty())
        throw std::invalid_argument("sweep has no methods");
    if (trials < 1)
        throw std::invalid_argument("sweep needs at least one trial per point");
    if (axis == SweepAxis::codebook_size)
        for (double v : grid)
            if (v < 1.0 || v != std::floor(v))
                throw std::invalid_argument("codebook sizes must be positive integers");
}

SweepRow summarize(double axis_value, const std::string& method, const std::vector<TrialResult>& trials)
{
    SweepRow row;
    row.axis_value = axis_value;
    row.method = method;
    row.trials = static_cast<int>(trials.size());
    if (trials.empty())
        return row;
    row.pilot_count = trials.front().pilot_count;

    const double n = static_cast<double>(trials.size());
    double sum_r = 0.0, sum_e = 0.0;
    for (const auto& t : trials) {
        sum_r += t.sum_rate;
        sum_e += t.effective_rate;
    }
    row.mean_sum_rate = sum_r / n;
    row.mean_eff_rate = sum_e / n;
    if (trials.size() > 1) {
        double ss_r = 0.0, ss_e = 0.0;
        for (const auto& t : trials) {
            ss_r += (t.sum_rate - row.mean_sum_rate) * (t.sum_rate - row.mean_sum_rate);
            ss_e += (t.effective_rate - row.mean_eff_rate) * (t.effective_rate - row.mean_eff_rate);
        }
        row.se_sum_rate = std::sqrt(ss_r / (n - 1.0) / n);
        row.se_eff_rate = std::sqrt(ss_e / (n - 1.0) / n);
    }
    return row;
}

ResultTable sweep(const SweepSpec& spec, const OverheadModel& overhead, std::uint64_t seed)
{
    spec.validate();
    overhead.validate();

    const std::size_t n_points = spec.grid.size();
    const std::size_t n_methods = spec.methods.size();
    const std::size_t n_trials = static_cast<std::size_t>(spec.trials);
    const std::size_t n_jobs = n_points * n_methods * n_trials;

    std::vector<TrialResult> results(n_jobs);
    std::vector<std::exception_ptr> errors(n_jobs);
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (std::size_t job = next++; job < n_jobs; job = next++) {
            const std::size_t t = job % n_trials;
            const std::size_t m = (job / n_trials) % n_methods;
            const std::size_t p = job / (n_trials * n_methods);
            try {
                TrialSetup setup = spec.base;
                LinkBudget budget;
                if (spec.axis == SweepAxis::snr_db) {
                    budget = LinkBudget::from_snr_db(spec.grid[p], spec.p_t);
                } else {
                    budget = LinkBudget::from_snr_db(spec.snr_db, spec.p_t);
                    setup.n_q = static_cast<int>(spec.grid[p]);
                }
                results[job] = run_trial(setup, spec.methods[m], budget, overhead, seed, t);
            } catch (...) {
                errors[job] = std::current_exception();
            }
        }
    };

    const int workers = std::max(1, std::min<int>(spec.workers, static_cast<int>(n_jobs)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    ResultTable table;
    table.reserve(n_points * n_methods);
    for (std::size_t p = 0; p < n_points; ++p)
        for (std::size_t m = 0; m < n_methods; ++m) {
            const auto first = results.begin() + static_cast<std::ptrdiff_t>((p * n_methods + m) * n_trials);
            std::vector<TrialResult> group(first, first + static_cast<std::ptrdiff_t>(n_trials));
            table.push_back(summarize(spec.grid[p], method_name(spec.methods[m]), group));
        }
    return table;
}

TableFormat parse_table_format(const std::string& name)
{
    if (name == "csv")
        return TableFormat::csv;
    if (name == "jsonl" || name == "json-lines")
        return TableFormat::jsonl;
    throw std::invalid_argument("unknown table format '" + name + "' (expected csv or jsonl)");
}

void export_results(const ResultTable& table, const std::string& path, TableFormat format)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");

    if (format == TableFormat::csv) {
        for (std::size_t c = 0; c < kColumns.size(); ++c)
            out << (c ? "," : "") << kColumns[c];
        out << "\r\n";
        for (const auto& r : table)
            out << format_double(r.axis_value) << ',' << csv_field(r.method) << ',' << format_double(r.mean_sum_rate)
                << ',' << format_double(r.se_sum_rate) << ',' << format_double(r.mean_eff_rate) << ','
                << format_double(r.se_eff_rate) << ',' << r.pilot_count << ',' << r.trials << "\r\n";
    } else {
        for (const auto& r : table) {
            nlohmann::ordered_json j;
            j["axis_value"] = r.axis_value;
            j["method"] = r.method;
            j["mean_sum_rate"] = r.mean_sum_rate;
            j["se_sum_rate"] = r.se_sum_rate;
            j["mean_eff_rate"] = r.mean_eff_rate;
            j["se_eff_rate"] = r.se_eff_rate;
            j["pilot_count"] = r.pilot_count;
            j["trials"] = r.trials;
            out << j.dump() << '\n';
        }
    }
    if (!out)
        throw std::runtime_error("write failed for " + path);
}

ResultTable import_results(const std::string& path, TableFormat format)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    ResultTable table;
    std::string line;
    int line_no = 0;

    if (format == TableFormat::csv) {
        if (!std::getline(in, line) || split_csv_line(line) != kColumns)
            throw FormatError(path + ": missing or unexpected CSV header");
        line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line == "\r")
                continue;
            const auto f = split_csv_line(line);
            if (f.size() != kColumns.size())
                throw FormatError(path + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(kColumns.size()) + " fields");
            SweepRow r;
            r.method = f[1];
            const bool ok = parse_number(f[0], r.axis_value) && parse_number(f[2], r.mean_sum_rate) &&
                            parse_number(f[3], r.se_sum_rate) && parse_number(f[4], r.mean_eff_rate) &&
                            parse_number(f[5], r.se_eff_rate) && parse_number(f[6], r.pilot_count) &&
                            parse_number(f[7], r.trials);
            if (ok) {
                table.push_back(std::move(r));
            } else {
                throw FormatError(path + ":" + std::to_string(line_no) + ": non-numeric field");
            }
        }
        return table;
    }

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        try {
            const auto j = nlohmann::json::parse(line);
            SweepRow r;
            r.axis_value = j.at("axis_value").get<double>();
            r.method = j.at("method").get<std::string>();
            r.mean_sum_rate = j.at("mean_sum_rate").get<double>();
            r.se_sum_rate = j.at("se_sum_rate").get<double>();
            r.mean_eff_rate = j.at("mean_eff_rate").get<double>();
            r.se_eff_rate = j.at("se_eff_rate").get<double>();
            r.pilot_count = j.at("pilot_count").get<long long>();
            r.trials = j.at("trials").get<int>();
            table.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return table;
}

} // namespace xlbt
