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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace xlbt {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0; // m/s, exact

// Effective channel F_RF^H H vanished, so the power-scaling factor is undefined.
class DegenerateChannelError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Malformed or inconsistent file contents (combiner, dataset, beam list).
class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration (e.g. a radix-4 search on a non power-of-two codebook).
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

} // namespace xlbt
