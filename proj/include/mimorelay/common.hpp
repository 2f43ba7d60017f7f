// SPDX-License-Identifier: Apache-2.0
//
// mimorelay: hybrid-processing massive MIMO two-way relay simulator
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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace mimorelay {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

using Rng = std::mt19937_64;

inline constexpr double kPi = 3.14159265358979323846;

/// Pilot power value meaning "perfect channel knowledge".
inline constexpr double kPerfectCsi = std::numeric_limits<double>::infinity();

/// Bad input value (non-positive power, mismatched dimensions, ...).
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A precoder or realization that cannot be used (e.g. zero precoder).
class InvalidState : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Equivalent baseband channel F_r * G_hat is numerically singular.
class SingularChannel : public std::runtime_error {
public:
    SingularChannel(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// Monte Carlo run produced no usable draw.
class SimulationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bracketed search could not certify an interior maximum.
class OptimizerFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Partner of user `k` in its pair: (0,1), (2,3), ...
inline int partner(int k) { return k ^ 1; }

} // namespace mimorelay
