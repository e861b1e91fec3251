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
#include <vector>

#include "xlbt/common.hpp"

namespace xlbt {

// Uniform linear array split into n_sub consecutive subarrays of n_a elements.
// Element n (0-based) sits at offset delta_n * spacing from the array center,
// delta_n = n - (N - 1) / 2, so the offsets are symmetric about zero.
struct ArrayGeometry {
    int n_sub = 1;
    int n_a = 1;
    double wavelength_m = kSpeedOfLight / 100e9;
    double spacing_m = 0.5 * kSpeedOfLight / 100e9;

    static ArrayGeometry from_carrier(int n_sub, int n_a, double carrier_hz);

    int total() const { return n_sub * n_a; }
    double offset(int n) const { return n - 0.5 * (total() - 1); }
    double wavenumber() const { return 2.0 * kPi / wavelength_m; }

    // Offset (in element spacings) of the center of subarray s.
    double subarray_center(int s) const { return s * n_a + 0.5 * (n_a - 1) - 0.5 * (total() - 1); }

    void validate() const;
};

struct ChannelPath {
    cdouble gain{1.0, 0.0};
    double angle_rad = 0.0; // from broadside
    double range_m = 1.0;
};

struct ChannelRealization {
    ArrayGeometry geometry;
    std::vector<std::vector<ChannelPath>> paths; // [user][path]
    CMatrix H;                                   // N x K, column k is user k's uplink channel
};

// Monte Carlo scenario: K users, L paths each, gains CN(0,1), sin(theta) ~ U(-1,1),
// range ~ U(r_min, r_max).
struct ScenarioConfig {
    int n_sub = 8;
    int n_a = 32;
    int users = 8;
    int paths = 3;
    double carrier_hz = 100e9;
    double r_min_m = 5.0;
    double r_max_m = 200.0;

    ArrayGeometry geometry() const { return ArrayGeometry::from_carrier(n_sub, n_a, carrier_hz); }
    void validate() const;
};

// Distances r^(n) from every element to a point at (angle, range) seen from the array center.
RVector element_distances(const ArrayGeometry& geometry, double angle_rad, double range_m);

// Near-field (spherical wavefront) array response, unit norm.
CVector array_response(const ArrayGeometry& geometry, double angle_rad, double range_m);

// Far-field steering vector a_n(theta) = [1, e^{j pi s}, ..., e^{j pi (n-1) s}] / sqrt(n),
// s = sin(theta). Assumes half-wavelength spacing.
CVector steering_vector(int n, double sin_theta);

// Saleh-Valenzuela channel of one user: sqrt(N/L) sum_l alpha_l e^{-j k r_l} b(theta_l, r_l).
CVector generate_channel(const ArrayGeometry& geometry, const std::vector<ChannelPath>& paths);

// Draw one realization. Path (user u, path l) of trial t is keyed by (seed, t, u, l),
// so the result does not depend on evaluation order.
ChannelRealization sample_scenario(const ScenarioConfig& config, std::uint64_t seed, std::uint64_t trial = 0);

struct SubarrayApproximation {
    std::vector<double> local_angles_rad; // one per subarray
    CVector stacked;                      // [a_{n_a}(theta_1); ...; a_{n_a}(theta_{n_sub})]
};

// Local incidence angle of a point at (angle, range) seen from each subarray center,
// and the stacked per-subarray far-field responses approximating b(angle, range).
SubarrayApproximation subarray_approximation(const ArrayGeometry& geometry, double angle_rad, double range_m);

// |a_{n_a}(theta_s)^H b_s| / ||b_s|| per subarray s, where b_s is the exact near-field
// response restricted to subarray s.
std::vector<double> subarray_correlation(const ArrayGeometry& geometry, double angle_rad, double range_m);

struct PhaseErrorBound {
    double aperture_m = 0.0;      // D_sub = (n_a - 1) d
    double path_difference_m = 0; // D_sub^2 / (8 r)
    double phase_error_rad = 0.0; // 2 pi dr / lambda
    bool plane_wave_valid = false; // phase error < pi / 8
};

PhaseErrorBound max_phase_error(const ArrayGeometry& geometry, double range_m);

} // namespace xlbt
