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

#include "xlbt/codebook.hpp"

#include <cmath>
#include <string>

#include "xlbt/channel_model.hpp"

namespace xlbt {

Codebook::Codebook(int n_q, int n_a) : n_q_(n_q), n_a_(n_a)
{
    if (n_q < 1 || n_a < 1)
        throw std::domain_error("codebook needs n_q >= 1 and n_a >= 1");
    grid_.reserve(n_q);
    beams_.resize(n_a, n_q);
    for (int i = 1; i <= n_q; ++i) {
        const double s = -1.0 + 2.0 * i / n_q;
        grid_.push_back(s);
        beams_.col(i - 1) = steering_vector(n_a, s);
    }
}

void Codebook::check_index(int index) const
{
    if (index < 1 || index > n_q_)
        throw std::out_of_range("beam index " + std::to_string(index) + " outside [1, " + std::to_string(n_q_) + "]");
}

Eigen::Ref<const CVector> Codebook::beam(int index) const
{
    check_index(index);
    return beams_.col(index - 1);
}

double Codebook::grid(int index) const
{
    check_index(index);
    return grid_[index - 1];
}

int Codebook::nearest_index(double sin_theta) const
{
    // grid spacing is uniform, so round in index space
    const double pos = (sin_theta + 1.0) * n_q_ / 2.0;
    int i = static_cast<int>(std::lround(pos));
    if (i < 1)
        i = 1;
    if (i > n_q_)
        i = n_q_;
    return i;
}

Codebook build_codebook(int n_q, int n_a) { return Codebook(n_q, n_a); }

} // namespace xlbt
