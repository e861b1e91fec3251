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

#include <vector>

#include "xlbt/common.hpp"

namespace xlbt {

/// Far-field per-subarray codebook on the uniform spatial-frequency grid
/// sin(theta_i) = -1 + 2 i / n_q, i = 1..n_q.
///
/// Beam indices are 1-based in the public interface, matching the beam-file
/// format. Immutable after construction.
class Codebook {
  public:
    Codebook(int n_q, int n_a);

    int size() const { return n_q_; }
    int beam_length() const { return n_a_; }

    /// Beam `index` (1-based); throws std::out_of_range outside [1, n_q].
    Eigen::Ref<const CVector> beam(int index) const;

    /// sin(theta_i) of beam `index` (1-based).
    double grid(int index) const;
    const std::vector<double>& grid() const { return grid_; }

    /// All beams as columns of an n_a x n_q matrix (column i-1 is beam i).
    const CMatrix& beams() const { return beams_; }

    /// Index (1-based) of the grid point closest to sin_theta.
    int nearest_index(double sin_theta) const;

  private:
    void check_index(int index) const;

    int n_q_;
    int n_a_;
    std::vector<double> grid_;
    CMatrix beams_;
};

Codebook build_codebook(int n_q, int n_a);

} // namespace xlbt
