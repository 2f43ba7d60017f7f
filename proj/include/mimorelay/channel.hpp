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

#include "mimorelay/common.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace mimorelay {

struct RayleighModel {};

/// Geometric (few-path) channel over a uniform linear array.
struct MmWaveModel {
    int paths = 10;        // N_p
    double spacing = 0.5;  // antenna spacing in wavelengths
};

using ChannelModel = std::variant<RayleighModel, MmWaveModel>;

/// One operating point of the relay network. All powers are linear and
/// normalized to unit noise power.
struct Scenario {
    int antennas = 64;       // N
    int pairs = 5;           // K
    int rf_chains = 10;      // L, must equal 2K
    double user_power = 10;  // P_s
    double relay_power = 100;  // P_r
    double pilot_power = 10;   // P_p, kPerfectCsi for perfect CSI
    int pilot_length = 10;     // tau
    std::vector<double> betas = std::vector<double>(10, 1.0);
    std::optional<int> phase_bits;  // empty -> ideal phase shifters
    ChannelModel model = RayleighModel{};

    int users() const { return 2 * pairs; }
    bool perfect_csi() const { return pilot_power == kPerfectCsi; }
    bool is_mmwave() const { return std::holds_alternative<MmWaveModel>(model); }

    /// Throws InvalidParameter on the first violated constraint.
    void validate() const;

    /// Convenience: K pairs, N antennas, equal large-scale gain `beta`,
    /// tau = 2K, P_r = 2K * P_s.
    static Scenario symmetric(int antennas, int pairs, double user_power, double pilot_power,
                              double beta = 1.0);
};

struct EstimationVariances {
    double sigma2;  // variance of each estimate entry
    double eps2;    // variance of each error entry
};

/// MMSE estimate/error split of a CN(0, beta) coefficient observed through
/// `tau` pilot symbols of power `pilot_power`. Infinite pilot power gives
/// a perfect estimate.
EstimationVariances estimation_variances(double beta, int tau, double pilot_power);

/// True uplink channel, its estimate and the estimation error (N x 2K each).
struct ChannelRealization {
    CMatrix G;
    CMatrix G_hat;
    CMatrix E;
    std::vector<double> sigma2;
    std::vector<double> eps2;
};

/// Draws G_hat and E independently with per-column variances sigma_j^2 and
/// eps_j^2, then sets G = G_hat + E.
ChannelRealization gen_rayleigh(const Scenario& scenario, Rng& rng);

/// Path-sum ULA channel per user; the estimate is the linear MMSE estimate
/// from a pilot observation with unit per-element prior power.
ChannelRealization gen_mmwave(const Scenario& scenario, Rng& rng);

/// Dispatches on scenario.model.
ChannelRealization generate_channel(const Scenario& scenario, Rng& rng);

/// ULA response a(theta) = N^{-1/2} [1, e^{-j2pi d sin(theta)}, ...]^T.
CVector steering_vector(int antennas, double spacing, double theta);

/// sqrt(N / N_p) * sum_l gain_l * conj(a(theta_l)).
CVector mmwave_user_channel(int antennas, double spacing, const std::vector<cplx>& gains,
                            const std::vector<double>& angles);

/// Draws one CN(0, variance) sample.
cplx complex_normal(Rng& rng, double variance);

} // namespace mimorelay
