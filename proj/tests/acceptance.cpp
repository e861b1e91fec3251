// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "xlbt/harness.hpp"
#include "xlbt/rng.hpp"

using namespace xlbt;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void run(const std::string& name, double time_limit_s, const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (time_limit_s > 0.0 && secs >= time_limit_s) {
        out.pass = false;
        out.detail += " (over time limit)";
    }
    if (!out.pass)
        ++failures;
    std::printf("%s  %-34s %8.3f s  %s\n", out.pass ? "PASS" : "FAIL", name.c_str(), secs, out.detail.c_str());
}

std::string fmt(const char* f, double a, double b = 0.0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

BeamSelection random_beams(int n_sub, int n_q, KeyedRng& rng)
{
    BeamSelection sel;
    for (int s = 0; s < n_sub; ++s)
        sel.indices.push_back(1 + static_cast<int>(rng.uniform() * n_q));
    return sel;
}

} // namespace

int main()
{
    run("power-constraint-equality", 10.0, [] {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            KeyedRng rng{0xACCE, 1, static_cast<std::uint64_t>(i)};
            const int k = 2 + static_cast<int>(rng.uniform() * 7);
            const int n_sub = k + static_cast<int>(rng.uniform() * (9 - k));
            const int n_a = std::max(1, (8 + static_cast<int>(rng.uniform() * 57)) / n_sub);
            const Codebook cb(16, n_a);
            const CMatrix f_rf = assemble_analog(random_beams(n_sub, 16, rng), cb);
            const CMatrix H = oracle::random_matrix(static_cast<Eigen::Index>(n_sub) * n_a, k, rng);
            const LinkBudget lb{0.5 + 4.0 * rng.uniform(), std::pow(10.0, rng.uniform(-2.0, 2.0))};
            const auto d = mmse_digital(f_rf, H, lb);
            worst = std::max(worst, std::abs((f_rf * d.f_bb).squaredNorm() - lb.p_t) / lb.p_t);
        }
        return Outcome{worst <= 1e-9, fmt("max rel err %.2e", worst)};
    });

    run("loss-mse-equivalence", 5.0, [] {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            KeyedRng rng{0xACCE, 2, static_cast<std::uint64_t>(i)};
            const int k = 2 + static_cast<int>(rng.uniform() * 5);
            const int n_sub = k + static_cast<int>(rng.uniform() * 4);
            const int n_a = 2 + static_cast<int>(rng.uniform() * 7);
            const Codebook cb(8, n_a);
            const CMatrix f_rf = assemble_analog(random_beams(n_sub, 8, rng), cb);
            const CMatrix H = oracle::random_matrix(static_cast<Eigen::Index>(n_sub) * n_a, k, rng);
            const LinkBudget lb = LinkBudget::from_snr_db(rng.uniform(-5.0, 25.0));
            const auto d = mmse_digital(f_rf, H, lb);
            const double mse = reconstruction_mse(H, f_rf, d.f_bb, d.beta, lb);
            worst = std::max(worst, std::abs(mse - variant_mse_loss(f_rf, H, lb)));
        }
        return Outcome{worst <= 1e-8, fmt("max abs diff %.2e", worst)};
    });

    run("scalar-analytic-case", 0.0, [] {
        const CMatrix one = CMatrix::Ones(1, 1);
        const LinkBudget lb{1.0, 1.0};
        const auto d = mmse_digital(one, one, lb);
        const double loss = variant_mse_loss(one, one, lb);
        const double err = std::max({std::abs(d.f_bb(0, 0) - cdouble(1.0)), std::abs(d.beta - 2.0),
                                     std::abs(loss - 0.5)});
        return Outcome{err <= 1e-12, fmt("F_BB=%.15g beta=%.15g", d.f_bb(0, 0).real(), d.beta) +
                                         fmt(" loss=%.15g", loss)};
    });

    run("oracle-dominance", 30.0, [] {
        TrialSetup setup;
        setup.scenario.n_sub = 2;
        setup.scenario.n_a = 4;
        setup.scenario.users = 2;
        setup.n_q = 8;
        const LinkBudget lb = LinkBudget::from_snr_db(10.0);
        const OverheadModel ov;
        int violations = 0;
        std::vector<double> diff;
        for (int s = 0; s < 200; ++s) {
            const double ex = run_trial(setup, Method::exhaustive, lb, ov, s).loss;
            const double gr = run_trial(setup, Method::greedy, lb, ov, s).loss;
            const double rn = run_trial(setup, Method::random, lb, ov, s).loss;
            if (ex > gr + 1e-12 || ex > rn + 1e-12)
                ++violations;
            diff.push_back(rn - gr);
        }
        double m = 0.0, ss = 0.0;
        for (double x : diff)
            m += x;
        m /= diff.size();
        for (double x : diff)
            ss += (x - m) * (x - m);
        const double se = std::sqrt(ss / (diff.size() - 1) / diff.size());
        const bool ok = violations == 0 && m > 3.0 * se;
        return Outcome{ok, std::to_string(violations) + " violations, " +
                               fmt("random-greedy loss %.4f (se %.4f)", m, se)};
    });

    run("effective-rate-arithmetic", 0.0, [] {
        const OverheadModel ov{200e-3, 0.2e-3};
        const double a = effective_rate(46.33, 8, ov);
        const double b = effective_rate(49.83, 256, ov);
        const bool ok = std::abs(a - 45.96) <= 0.01 && std::abs(b - 37.08) <= 0.01;
        return Outcome{ok, fmt("%.4f and %.4f", a, b)};
    });

    run("codebook-size-collapse", 0.0, [] {
        SweepSpec spec;
        spec.axis = SweepAxis::codebook_size;
        spec.grid = {8, 16, 32, 64, 128, 256, 512};
        spec.methods = {Method::ao_pcsi, Method::ao_ncsi};
        spec.trials = 3;
        spec.base.scenario.n_sub = 4;
        spec.base.scenario.n_a = 8;
        spec.base.scenario.users = 4;
        spec.snr_db = 20.0;
        spec.workers = 4;
        const OverheadModel ov;
        const auto table = sweep(spec, ov, 5);
        int collapsed = 0;
        bool ok = true;
        for (const auto& row : table) {
            const bool over = row.pilot_count * ov.pilot_slot_s >= ov.coherence_time_s;
            if (over) {
                ++collapsed;
                ok = ok && row.mean_eff_rate == 0.0;
            } else {
                ok = ok && row.mean_eff_rate > 0.0;
            }
        }
        return Outcome{ok && collapsed > 0, std::to_string(collapsed) + " rows at or past T_c, all exactly 0"};
    });

    run("subarray-approximation-validity", 0.0, [] {
        ScenarioConfig cfg;
        cfg.n_sub = 8;
        cfg.n_a = 32;
        const ArrayGeometry g = cfg.geometry();
        double worst_phase = 0.0;
        for (double r = 5.0; r <= 1000.0; r *= 1.01)
            worst_phase = std::max(worst_phase, max_phase_error(g, r).phase_error_rad);
        double worst_corr = 1.0;
        for (double c : subarray_correlation(g, 0.0, 5.0))
            worst_corr = std::min(worst_corr, c);
        const bool ok = worst_phase < kPi / 8.0 && worst_corr >= 0.99;
        return Outcome{ok, fmt("max phase %.4f rad, min corr %.6f", worst_phase, worst_corr)};
    });

    run("ao-monotone-convergence", 0.0, [] {
        ScenarioConfig cfg;
        cfg.n_sub = 4;
        cfg.n_a = 8;
        cfg.users = 4;
        const Codebook cb(8, cfg.n_a);
        const LinkBudget lb = LinkBudget::from_snr_db(10.0);
        int violations = 0;
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const CMatrix H = sample_scenario(cfg, 0xA0, i).H;
            KeyedRng rng{0xA0, 7, static_cast<std::uint64_t>(i)};
            AoOptions opt;
            opt.initial = random_beams(cfg.n_sub, 8, rng);
            const auto res = alternating_optimization(H, cb, lb, opt);
            for (std::size_t t = 1; t < res.loss_trace.size(); ++t) {
                const double rise = res.loss_trace[t] - res.loss_trace[t - 1];
                worst = std::max(worst, rise);
                if (rise > 1e-12)
                    ++violations;
            }
        }
        return Outcome{violations == 0, std::to_string(violations) + fmt(" violations, max rise %.2e", worst)};
    });

    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
