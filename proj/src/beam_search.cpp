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

#include "xlbt/beam_search.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <string>

#include "xlbt/rng.hpp"

namespace xlbt {

namespace {

constexpr std::uint64_t kNoisyCsiStream = 0x4E43;
constexpr std::uint64_t kRandomSelectionStream = 0x52AD;

int infer_n_sub(const CMatrix& H, const Codebook& codebook)
{
    const int n_a = codebook.beam_length();
    if (H.rows() == 0 || H.rows() % n_a != 0)
        throw std::invalid_argument("channel rows (" + std::to_string(H.rows()) +
                                    ") are not a multiple of the beam length " + std::to_string(n_a));
    return static_cast<int>(H.rows() / n_a);
}

// Sum rate with the MMSE precoder designed on G itself; zero for a dead effective channel.
double mmse_rate(const CMatrix& G, const LinkBudget& budget)
{
    if (G.norm() == 0.0)
        return 0.0;
    const auto digital = effective::mmse(G, budget);
    return effective::sum_rate(G, digital.f_bb, budget.sigma2);
}

struct Candidate {
    double value = std::numeric_limits<double>::infinity();
    long long linear = -1;
};

void decode(long long linear, int n_q, std::vector<int>& indices)
{
    for (int s = static_cast<int>(indices.size()) - 1; s >= 0; --s) {
        indices[s] = static_cast<int>(linear % n_q) + 1;
        linear /= n_q;
    }
}

Candidate scan_range(const BeamResponseTable& table, const LinkBudget& budget, SearchObjective objective,
                     long long begin, long long end)
{
    BeamSelection sel;
    sel.indices.assign(table.n_sub(), 1);
    Candidate best;
    for (long long lin = begin; lin < end; ++lin) {
        decode(lin, table.n_q(), sel.indices);
        const CMatrix G = table.effective(sel);
        const double value =
            objective == SearchObjective::min_loss ? effective::loss(G, budget) : -mmse_rate(G, budget);
        if (value < best.value) {
            best.value = value;
            best.linear = lin;
        }
    }
    return best;
}

} // namespace

BeamResponseTable::BeamResponseTable(const CMatrix& H, const Codebook& codebook)
    : n_q_(codebook.size()), users_(static_cast<int>(H.cols()))
{
    const int n_sub = infer_n_sub(H, codebook);
    const int n_a = codebook.beam_length();
    responses_.reserve(n_sub);
    for (int s = 0; s < n_sub; ++s)
        responses_.push_back(codebook.beams().adjoint() * H.middleRows(static_cast<Eigen::Index>(s) * n_a, n_a));
}

CMatrix BeamResponseTable::effective(const BeamSelection& selection) const
{
    if (selection.size() > n_sub())
        throw std::invalid_argument("selection longer than the number of subarrays");
    CMatrix G(selection.size(), users_);
    for (int s = 0; s < selection.size(); ++s) {
        const int i = selection.indices[s];
        if (i < 1 || i > n_q_)
            throw std::out_of_range("beam index " + std::to_string(i) + " outside [1, " + std::to_string(n_q_) +
                                    "]");
        G.row(s) = responses_[s].row(i - 1);
    }
    return G;
}

SearchResult exhaustive_oracle(const CMatrix& H, const Codebook& codebook, int n_sub, const LinkBudget& budget,
                               SearchObjective objective, const ExhaustiveOptions& options)
{
    budget.validate();
    if (infer_n_sub(H, codebook) != n_sub)
        throw std::invalid_argument("channel does not match n_sub * n_a rows");

    long long total = 1;
    for (int s = 0; s < n_sub; ++s) {
        if (total > options.enumeration_cap / codebook.size() + 1) {
            total = options.enumeration_cap + 1;
            break;
        }
        total *= codebook.size();
    }
    if (total > options.enumeration_cap)
        throw std::length_error("exhaustive search over " + std::to_string(codebook.size()) + "^" +
                                std::to_string(n_sub) + " combinations exceeds the cap of " +
                                std::to_string(options.enumeration_cap));

    const BeamResponseTable table(H, codebook);
    const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(total)));
    Candidate best;
    if (workers == 1) {
        best = scan_range(table, budget, objective, 0, total);
    } else {
        std::vector<std::future<Candidate>> parts;
        for (int w = 0; w < workers; ++w) {
            const long long begin = total * w / workers;
            const long long end = total * (w + 1) / workers;
            parts.push_back(std::async(std::launch::async, scan_range, std::cref(table), std::cref(budget),
                                       objective, begin, end));
        }
        // chunks are in ascending order, so strict < keeps the lexicographically smallest tie
        for (auto& f : parts) {
            const Candidate c = f.get();
            if (c.value < best.value)
                best = c;
        }
    }

    SearchResult out;
    out.selection.indices.assign(n_sub, 1);
    decode(best.linear, codebook.size(), out.selection.indices);
    out.loss = effective::loss(table.effective(out.selection), budget);
    out.pilot_count = total;
    return out;
}

SearchResult greedy_per_subarray(const CMatrix& H, const Codebook& codebook, const LinkBudget& budget)
{
    budget.validate();
    const BeamResponseTable table(H, codebook);
    SearchResult out;
    BeamSelection partial;
    for (int s = 0; s < table.n_sub(); ++s) {
        partial.indices.push_back(1);
        double best_loss = std::numeric_limits<double>::infinity();
        int best_index = 1;
        for (int i = 1; i <= codebook.size(); ++i) {
            partial.indices.back() = i;
            const double l = effective::loss(table.effective(partial), budget);
            if (l < best_loss) {
                best_loss = l;
                best_index = i;
            }
        }
        partial.indices.back() = best_index;
        out.loss = best_loss;
    }
    out.selection = std::move(partial);
    out.pilot_count = static_cast<long long>(codebook.size()) * table.n_sub();
    return out;
}

int radix4_depth(int n_q)
{
    if (n_q < 1)
        throw std::invalid_argument("radix4_depth needs n_q >= 1");
    int depth = 0;
    long long reach = 1;
    while (reach < n_q) {
        reach *= 4;
        ++depth;
    }
    return depth;
}

SearchResult radix4_hierarchical(const CMatrix& H, const Codebook& codebook, const LinkBudget& budget)
{
    budget.validate();
    const int n_q = codebook.size();
    if ((n_q & (n_q - 1)) != 0)
        throw ConfigError("radix-4 search needs a power-of-two codebook size, got " + std::to_string(n_q));

    const int n_sub = infer_n_sub(H, codebook);
    const int n_a = codebook.beam_length();
    const CMatrix& beams = codebook.beams();

    SearchResult out;
    out.selection.indices.reserve(n_sub);
    for (int s = 0; s < n_sub; ++s) {
        const auto Hs = H.middleRows(static_cast<Eigen::Index>(s) * n_a, n_a);
        int lo = 0;
        int width = n_q;
        while (width > 1) {
            const int groups = std::min(4, width);
            const int group_width = width / groups;
            int best_group = 0;
            double best_gain = -1.0;
            for (int g = 0; g < groups; ++g) {
                CVector probe = beams.middleCols(lo + g * group_width, group_width).rowwise().sum();
                probe.normalize();
                const double gain = (probe.adjoint() * Hs).cwiseAbs().sum();
                if (gain > best_gain) {
                    best_gain = gain;
                    best_group = g;
                }
            }
            lo += best_group * group_width;
            width = group_width;
        }
        out.selection.indices.push_back(lo + 1);
    }
    out.loss = effective::loss(effective::channel(out.selection, codebook, H), budget);
    out.pilot_count = 4LL * radix4_depth(n_q) * n_sub;
    return out;
}

SearchResult alternating_optimization(const CMatrix& H_est, const Codebook& codebook, const LinkBudget& budget,
                                      const AoOptions& options)
{
    budget.validate();
    if (options.max_iter < 1)
        throw std::invalid_argument("alternating_optimization needs max_iter >= 1");

    const BeamResponseTable table(H_est, codebook);
    BeamSelection sel = options.initial ? *options.initial : greedy_per_subarray(H_est, codebook, budget).selection;
    if (sel.size() != table.n_sub())
        throw std::invalid_argument("initial selection has the wrong number of subarrays");
    sel.validate(codebook);

    SearchResult out;
    double current = effective::loss(table.effective(sel), budget);
    out.loss_trace.push_back(current);
    for (int it = 1; it <= options.max_iter; ++it) {
        for (int s = 0; s < table.n_sub(); ++s) {
            int best_index = sel.indices[s];
            double best_loss = std::numeric_limits<double>::infinity();
            for (int i = 1; i <= codebook.size(); ++i) {
                sel.indices[s] = i;
                const double l = effective::loss(table.effective(sel), budget);
                if (l < best_loss) {
                    best_loss = l;
                    best_index = i;
                }
            }
            sel.indices[s] = best_index;
        }
        const double next = effective::loss(table.effective(sel), budget);
        out.loss_trace.push_back(next);
        out.iterations = it;
        const double improvement = current - next;
        current = next;
        if (improvement < options.tol)
            break;
    }

    const CMatrix G = table.effective(sel);
    out.digital = effective::mmse(G, budget);
    out.selection = std::move(sel);
    out.loss = current;
    out.pilot_count = static_cast<long long>(codebook.size()) * table.n_sub();
    return out;
}

CMatrix noisy_csi(const CMatrix& H, double est_snr, std::uint64_t seed)
{
    if (std::isnan(est_snr) || !(est_snr > 0.0))
        throw std::invalid_argument("estimation SNR must be positive");
    if (std::isinf(est_snr))
        return H;
    const double var = H.squaredNorm() / (static_cast<double>(H.size()) * est_snr);
    KeyedRng rng{kNoisyCsiStream, seed};
    CMatrix out = H;
    for (Eigen::Index c = 0; c < H.cols(); ++c)
        for (Eigen::Index r = 0; r < H.rows(); ++r)
            out(r, c) += rng.complex_normal(var);
    return out;
}

SearchResult random_selection(int n_sub, int n_q, std::uint64_t seed)
{
    if (n_sub < 1 || n_q < 1)
        throw std::invalid_argument("random_selection needs n_sub >= 1 and n_q >= 1");
    KeyedRng rng{kRandomSelectionStream, seed};
    SearchResult out;
    out.selection.indices.reserve(n_sub);
    for (int s = 0; s < n_sub; ++s) {
        const int i = static_cast<int>(rng.uniform() * n_q) + 1;
        out.selection.indices.push_back(std::min(i, n_q));
    }
    return out;
}

} // namespace xlbt
