// SPDX-License-Identifier: Apache-2.0
// xlbt: near-field multiuser beam training toolkit for sub-connected XL-MIMO
// Copyright (C) 2026 The xlbt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ----------------------------------------------------------------------------

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xlbt/dataset.hpp"
#include "xlbt/harness.hpp"

using namespace xlbt;

namespace {

struct Options {
    std::string config;
    std::uint64_t seed = 1;
    int trials = 100;
    double snr_db = 10.0;
    double p_t = 1.0;
    int n_q = 32;
    int n_sub = 8;
    int n_a = 32;
    int users = 8;
    int paths = 3;
    double carrier_ghz = 100.0;
    double tc_ms = 200.0;
    double slot_ms = 0.2;
    double est_snr_db = std::numeric_limits<double>::quiet_NaN();
    int workers = 1;
    std::string out;
    std::string in;
    std::string format;
    std::string axis = "snr";
    std::vector<double> grid;
    std::vector<std::string> methods;
    std::string method;
    std::string dataset;
    std::string beams;
    std::string beams_out;
    long long pilots = -1;
};

// Registers the flag and remembers its config-file key.
class Binder {
  public:
    explicit Binder(CLI::App* app) : app_(app) {}

    template <typename T> CLI::Option* add(const std::string& name, T& target, const std::string& help)
    {
        CLI::Option* opt = app_->add_option("--" + name, target, help)->capture_default_str();
        apply_.push_back([opt, &target, name](const nlohmann::json& cfg) {
            if (opt->count() == 0 && cfg.contains(name))
                target = cfg.at(name).get<T>();
        });
        return opt;
    }

    void apply(const nlohmann::json& cfg) const
    {
        for (const auto& f : apply_)
            f(cfg);
    }

  private:
    CLI::App* app_;
    std::vector<std::function<void(const nlohmann::json&)>> apply_;
};

void add_scenario(Binder& b, Options& o)
{
    b.add("nsub", o.n_sub, "number of subarrays");
    b.add("na", o.n_a, "antennas per subarray");
    b.add("users", o.users, "number of users K");
    b.add("paths", o.paths, "paths per user L");
    b.add("carrier-ghz", o.carrier_ghz, "carrier frequency in GHz");
    b.add("seed", o.seed, "master seed");
    b.add("trials", o.trials, "trials (or dataset size)");
}

void add_link(Binder& b, Options& o)
{
    b.add("snr-db", o.snr_db, "operating SNR P_t / sigma^2 in dB");
    b.add("pt", o.p_t, "transmit power P_t");
    b.add("nq", o.n_q, "codebook size N_q");
    b.add("tc-ms", o.tc_ms, "coherence time in ms");
    b.add("slot-ms", o.slot_ms, "pilot slot duration in ms");
}

ScenarioConfig scenario_of(const Options& o)
{
    ScenarioConfig s;
    s.n_sub = o.n_sub;
    s.n_a = o.n_a;
    s.users = o.users;
    s.paths = o.paths;
    s.carrier_hz = o.carrier_ghz * 1e9;
    return s;
}

TrialSetup setup_of(const Options& o)
{
    TrialSetup t;
    t.scenario = scenario_of(o);
    t.n_q = o.n_q;
    if (!std::isnan(o.est_snr_db))
        t.est_snr_db = o.est_snr_db;
    return t;
}

OverheadModel overhead_of(const Options& o) { return OverheadModel{o.tc_ms * 1e-3, o.slot_ms * 1e-3}; }

TableFormat format_for(const std::string& explicit_format, const std::string& path)
{
    if (!explicit_format.empty())
        return parse_table_format(explicit_format);
    const auto dot = path.rfind('.');
    if (dot != std::string::npos && path.substr(dot) == ".jsonl")
        return TableFormat::jsonl;
    return TableFormat::csv;
}

void print_rows(const ResultTable& table)
{
    std::printf("%-12s %-16s %12s %10s %12s %10s %10s %7s\n", "axis", "method", "sum_rate", "se", "eff_rate", "se",
                "pilots", "trials");
    for (const auto& r : table)
        std::printf("%-12g %-16s %12.4f %10.4f %12.4f %10.4f %10lld %7d\n", r.axis_value, r.method.c_str(),
                    r.mean_sum_rate, r.se_sum_rate, r.mean_eff_rate, r.se_eff_rate, r.pilot_count, r.trials);
}

int cmd_generate(const Options& o)
{
    const auto scenario = scenario_of(o);
    export_dataset(scenario, o.trials, o.seed, o.out);
    std::printf("wrote %d channels to %s\n", o.trials, o.out.c_str());
    return 0;
}

int cmd_sweep(const Options& o)
{
    SweepSpec spec;
    if (o.axis == "snr")
        spec.axis = SweepAxis::snr_db;
    else if (o.axis == "codebook")
        spec.axis = SweepAxis::codebook_size;
    else
        throw std::invalid_argument("unknown sweep axis '" + o.axis + "' (expected snr or codebook)");
    spec.grid = o.grid;
    for (const auto& m : o.methods)
        spec.methods.push_back(parse_method(m));
    if (spec.methods.empty())
        spec.methods = all_methods();
    spec.trials = o.trials;
    spec.base = setup_of(o);
    spec.snr_db = o.snr_db;
    spec.p_t = o.p_t;
    spec.workers = o.workers;
    const auto table = sweep(spec, overhead_of(o), o.seed);
    print_rows(table);
    if (!o.out.empty()) {
        export_results(table, o.out, format_for(o.format, o.out));
        std::printf("wrote %zu rows to %s\n", table.size(), o.out.c_str());
    }
    return 0;
}

int cmd_evaluate(const Options& o)
{
    const Method method = parse_method(o.method);
    const LinkBudget lb = LinkBudget::from_snr_db(o.snr_db, o.p_t);
    const OverheadModel ov = overhead_of(o);
    TrialSetup setup = setup_of(o);

    std::vector<CMatrix> channels;
    if (!o.dataset.empty()) {
        auto ds = import_dataset(o.dataset);
        setup.scenario.n_sub = ds.header.n_sub;
        setup.scenario.n_a = ds.header.n_a;
        setup.scenario.users = ds.header.k;
        const auto n = std::min<std::size_t>(ds.channels.size(), static_cast<std::size_t>(o.trials));
        channels.assign(ds.channels.begin(), ds.channels.begin() + n);
    } else {
        for (int t = 0; t < o.trials; ++t)
            channels.push_back(sample_scenario(setup.scenario, o.seed, t).H);
    }

    const Codebook cb(setup.n_q, setup.scenario.n_a);
    std::vector<TrialResult> results;
    std::vector<BeamRow> beams;
    for (std::size_t t = 0; t < channels.size(); ++t) {
        const auto search = run_method(channels[t], cb, method, setup, lb, o.seed, t);
        auto r = evaluate_selection(channels[t], cb, search.selection, search.digital, lb, ov, search.pilot_count);
        r.method = method_name(method);
        r.seed = o.seed;
        r.trial = t;
        results.push_back(r);
        beams.push_back({static_cast<long long>(t), search.selection});
    }
    print_rows({summarize(o.snr_db, method_name(method), results)});
    if (!o.beams_out.empty()) {
        write_beam_file(o.beams_out, beams, setup.scenario.n_sub);
        std::printf("wrote %zu beam rows to %s\n", beams.size(), o.beams_out.c_str());
    }
    return 0;
}

int cmd_validate(const Options& o)
{
    const LinkBudget lb = LinkBudget::from_snr_db(o.snr_db, o.p_t);
    const long long pilots = o.pilots >= 0 ? o.pilots : 0;
    const auto v = validate_beams(o.dataset, o.beams, o.n_q, lb, overhead_of(o), pilots);
    print_rows({v.summary});
    if (!o.out.empty()) {
        export_results({v.summary}, o.out, format_for(o.format, o.out));
        std::printf("wrote 1 rows to %s\n", o.out.c_str());
    }
    return 0;
}

int cmd_export(const Options& o)
{
    const auto table = import_results(o.in, format_for("", o.in));
    export_results(table, o.out, format_for(o.format, o.out));
    std::printf("wrote %zu rows to %s\n", table.size(), o.out.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"xlbt: near-field multiuser beam training for sub-connected XL-MIMO"};
    app.require_subcommand(1);
    Options o;

    auto* gen = app.add_subcommand("generate-dataset", "sample channels and write a binary dataset");
    auto* swp = app.add_subcommand("sweep", "sweep SNR or codebook size over several methods");
    auto* eva = app.add_subcommand("evaluate", "run one method over a batch of channels");
    auto* val = app.add_subcommand("validate-beams", "score externally chosen beams on a dataset");
    auto* conv = app.add_subcommand("export", "convert a result table between csv and jsonl");

    std::map<CLI::App*, Binder> binders;
    for (auto* sub : {gen, swp, eva, val, conv}) {
        auto& b = binders.emplace(sub, Binder(sub)).first->second;
        sub->add_option("--config", o.config, "JSON file whose keys mirror the flags")->check(CLI::ExistingFile);
        b.add("out", o.out, "output path");
    }
    add_scenario(binders.at(gen), o);

    for (auto* sub : {swp, eva}) {
        add_scenario(binders.at(sub), o);
        add_link(binders.at(sub), o);
        binders.at(sub).add("workers", o.workers, "worker threads");
        binders.at(sub).add("est-snr-db", o.est_snr_db, "channel estimation SNR for ao-ncsi");
    }
    binders.at(swp).add("axis", o.axis, "snr or codebook")->check(CLI::IsMember({"snr", "codebook"}));
    binders.at(swp).add("grid", o.grid, "axis values")->delimiter(',');
    binders.at(swp).add("methods", o.methods, "methods to compare")->delimiter(',');
    binders.at(swp).add("format", o.format, "csv or jsonl (default from the extension)");
    binders.at(eva).add("method", o.method, "method name")->required();
    binders.at(eva).add("dataset", o.dataset, "read channels from a dataset file");
    binders.at(eva).add("beams-out", o.beams_out, "write the chosen beams as a beam file");

    add_link(binders.at(val), o);
    binders.at(val).add("dataset", o.dataset, "dataset file")->required();
    binders.at(val).add("beams", o.beams, "beam file")->required();
    binders.at(val).add("pilots", o.pilots, "pilot slots charged per sample");
    binders.at(val).add("format", o.format, "csv or jsonl");

    binders.at(conv).add("in", o.in, "input table (.csv or .jsonl)")->required();
    binders.at(conv).add("format", o.format, "output format");
    conv->get_option("--out")->required();
    gen->get_option("--out")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* active = app.get_subcommands().front();
        if (!o.config.empty()) {
            std::ifstream in(o.config);
            const auto cfg = nlohmann::json::parse(in);
            binders.at(active).apply(cfg);
        }
        if (active == gen)
            return cmd_generate(o);
        if (active == swp)
            return cmd_sweep(o);
        if (active == eva)
            return cmd_evaluate(o);
        if (active == val)
            return cmd_validate(o);
        return cmd_export(o);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
