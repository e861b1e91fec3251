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

#include "xlbt/channel_model.hpp"

#include <cmath>
#include <string>

#include "xlbt/rng.hpp"

namespace xlbt {

namespace {

void require_positive_range(double range_m)
{
    if (!(range_m > 0.0) || !std::isfinite(range_m))
        throw std::domain_error("range must be positive and finite, got " + std::to_string(range_m));
}

// Far-field response of n elements with spacing d: e^{j k d m sin(theta)} / sqrt(n).
CVector far_field_block(int n, double phase_step)
{
    CVector a(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int m = 0; m < n; ++m)
        a(m) = std::polar(scale, phase_step * m);
    return a;
}

} // namespace

ArrayGeometry ArrayGeometry::from_carrier(int n_sub, int n_a, double carrier_hz)
{
    if (!(carrier_hz > 0.0))
        throw std::invalid_argument("carrier frequency must be positive");
    ArrayGeometry g;
    g.n_sub = n_sub;
    g.n_a = n_a;
    g.wavelength_m = kSpeedOfLight / carrier_hz;
    g.spacing_m = 0.5 * g.wavelength_m;
    g.validate();
    return g;
}

void ArrayGeometry::validate() const
{
    if (n_sub < 1 || n_a < 1)
        throw std::invalid_argument("array geometry needs n_sub >= 1 and n_a >= 1");
    if (!(wavelength_m > 0.0) || !(spacing_m > 0.0))
        throw std::invalid_argument("wavelength and element spacing must be positive");
}

void ScenarioConfig::validate() const
{
    if (users < 1)
        throw std::invalid_argument("scenario needs at least one user");
    if (paths < 1)
        throw std::invalid_argument("scenario needs at least one path per user");
    if (!(r_min_m > 0.0) || !(r_max_m >= r_min_m))
        throw std::invalid_argument("scenario range interval must satisfy 0 < r_min <= r_max");
    geometry().validate();
}

RVector element_distances(const ArrayGeometry& geometry, double angle_rad, double range_m)
{
    require_positive_range(range_m);
    const int N = geometry.total();
    const double d = geometry.spacing_m;
    const double s = std::sin(angle_rad);
    RVector dist(N);
    for (int n = 0; n < N; ++n) {
        const double x = geometry.offset(n) * d;
        dist(n) = std::sqrt(range_m * range_m + x * x - 2.0 * range_m * x * s);
    }
    return dist;
}

CVector array_response(const ArrayGeometry& geometry, double angle_rad, double range_m)
{
    const RVector dist = element_distances(geometry, angle_rad, range_m);
    const double k = geometry.wavenumber();
    const double scale = 1.0 / std::sqrt(static_cast<double>(geometry.total()));
    CVector b(dist.size());
    for (Eigen::Index n = 0; n < dist.size(); ++n)
        b(n) = std::polar(scale, -k * (dist(n) - range_m));
    return b;
}

CVector steering_vector(int n, double sin_theta)
{
    if (n < 1)
        throw std::domain_error("steering vector length must be >= 1");
    return far_field_block(n, kPi * sin_theta);
}

CVector generate_channel(const ArrayGeometry& geometry, const std::vector<ChannelPath>& paths)
{
    if (paths.empty())
        throw std::domain_error("generate_channel needs at least one path");
    const int N = geometry.total();
    const double k = geometry.wavenumber();
    CVector h = CVector::Zero(N);
    for (const auto& p : paths)
        h += (p.gain * std::polar(1.0, -k * p.range_m)) * array_response(geometry, p.angle_rad, p.range_m);
    h *= std::sqrt(static_cast<double>(N) / static_cast<double>(paths.size()));
    return h;
}

ChannelRealization sample_scenario(const ScenarioConfig& config, std::uint64_t seed, std::uint64_t trial)
{
    config.validate();
    ChannelRealization out;
    out.geometry = config.geometry();
    out.paths.resize(config.users);
    out.H.resize(out.geometry.total(), config.users);

    for (int u = 0; u < config.users; ++u) {
        auto& user_paths = out.paths[u];
        user_paths.reserve(config.paths);
        for (int l = 0; l < config.paths; ++l) {
            KeyedRng rng{seed, trial, static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(l)};
            ChannelPath p;
            p.gain = rng.complex_normal(1.0);
            p.angle_rad = std::asin(rng.uniform(-1.0, 1.0));
            p.range_m = rng.uniform(config.r_min_m, config.r_max_m);
            user_paths.push_back(p);
        }
        out.H.col(u) = generate_channel(out.geometry, user_paths);
    }
    return out;
}

SubarrayApproximation subarray_approximation(const ArrayGeometry& geometry, double angle_rad, double range_m)
{
    require_positive_range(range_m);
    const double d = geometry.spacing_m;
    const double step = geometry.wavenumber() * d;
    SubarrayApproximation out;
    out.local_angles_rad.reserve(geometry.n_sub);
    out.stacked.resize(geometry.total());
    for (int s = 0; s < geometry.n_sub; ++s) {
        const double yc = geometry.subarray_center(s) * d;
        const double local = std::atan2(range_m * std::sin(angle_rad) - yc, range_m * std::cos(angle_rad));
        out.local_angles_rad.push_back(local);
        out.stacked.segment(static_cast<Eigen::Index>(s) * geometry.n_a, geometry.n_a) =
            far_field_block(geometry.n_a, step * std::sin(local));
    }
    return out;
}

std::vector<double> subarray_correlation(const ArrayGeometry& geometry, double angle_rad, double range_m)
{
    const CVector b = array_response(geometry, angle_rad, range_m);
    const SubarrayApproximation approx = subarray_approximation(geometry, angle_rad, range_m);
    std::vector<double> corr;
    corr.reserve(geometry.n_sub);
    for (int s = 0; s < geometry.n_sub; ++s) {
        const Eigen::Index off = static_cast<Eigen::Index>(s) * geometry.n_a;
        const auto bs = b.segment(off, geometry.n_a);
        const auto as = approx.stacked.segment(off, geometry.n_a);
        corr.push_back(std::abs(as.dot(bs)) / bs.norm());
    }
    return corr;
}

PhaseErrorBound max_phase_error(const ArrayGeometry& geometry, double range_m)
{
    require_positive_range(range_m);
    PhaseErrorBound out;
    out.aperture_m = (geometry.n_a - 1) * geometry.spacing_m;
    out.path_difference_m = out.aperture_m * out.aperture_m / (8.0 * range_m);
    out.phase_error_rad = 2.0 * kPi * out.path_difference_m / geometry.wavelength_m;
    out.plane_wave_valid = out.phase_error_rad < kPi / 8.0;
    return out;
}

} // namespace xlbt
