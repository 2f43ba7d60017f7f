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

#include "mimorelay/channel.hpp"

#include <utility>
#include <vector>

namespace mimorelay {

/// Circuit and amplifier power consumption, in watts.
struct PowerModel {
    double kappa = 0.375;   // PA efficiency, same for users and relay
    double P_0 = 1.0;       // per RF chain
    double P_const = 20.0;  // fixed circuit power
    double P_APS = 0.02;    // per analog phase shifter

    void validate() const;
};

struct EEReport {
    double ee = 0.0;     // bits/Joule per Hz
    double se = 0.0;     // bits/s/Hz
    double p_sum = 0.0;  // W
    double P_s = 0.0;
    double P_r = 0.0;
    int pairs = 0;
    int antennas = 0;
    double kkt_residual = 0.0;  // relative, optimizers only
    int iterations = 0;
};

/// Coefficients of the single-variable EE objective on the line P_r = 2K P_s.
struct EECoefficients {
    double a0 = 0.0;  // pi N sigma^2
    double a1 = 0.0;  // 8K eps^2
    double P_c = 0.0;  // 2K P_0 + P_const + 2KN P_APS
};

EECoefficients ee_coefficients(const Scenario& scenario, const PowerModel& model);

/// 1/2 (2K P_s + P_r)/kappa + 2K P_0 + P_const + 2KN P_APS
double total_power(double user_power, double relay_power, int pairs, int antennas,
                   const PowerModel& model);

/// Closed-form EE at (P_s, P_r). Requires equal large-scale gains.
EEReport energy_efficiency(double user_power, double relay_power, const Scenario& scenario,
                           const PowerModel& model);

/// EE on the line P_r = 2K P, as a function of the per-user power P.
double ee_on_line(double power, int pairs, const EECoefficients& c, double kappa);

/// Stationarity residual of the line objective; positive below the optimum.
double kkt_residual(double power, int pairs, const EECoefficients& c, double kappa);

/// Stationary-point EE value 2 a0 kappa / ([(a0+a1)P+4](a1 P+4) ln 2).
double stationary_ee(double power, const EECoefficients& c, double kappa);

struct PowerSplit {
    double user_power = 0.0;
    double relay_power = 0.0;
    double best_sweep_ee = 0.0;  // best EE among the 99 sweep ratios
    double split_ee = 0.0;       // EE at the returned split
};

/// Splits a total budget P_T = 2K P_s + P_r as P_s = P_T/(4K), P_r = P_T/2 and
/// checks it against a 99-point sweep of P_r / P_T.
PowerSplit optimal_power_split(double total, const Scenario& scenario, const PowerModel& model);

/// Maximizes the EE over P_s with P_r = 2K P_s. Throws OptimizerFailure when
/// no interior maximum exists or the certificate checks fail.
EEReport optimize_Ps(const Scenario& scenario, const PowerModel& model);

struct GreenPoint {
    double se = 0.0;
    double log_ee = 0.0;
    double user_power = 0.0;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    bool degenerate = false;  // fewer than two distinct SE values
    double predicted_slope = 0.0;      // -ln 2 / K
    double predicted_intercept = 0.0;  // ln(a0 kappa / (8 ln 2))
    std::vector<GreenPoint> points;
};

/// Optimal (SE, ln EE) for every circuit model, with a least-squares line.
/// All models must share kappa; the scenario must have perfect CSI.
LineFit green_point_line(const Scenario& scenario, const std::vector<PowerModel>& models);

struct RfChainPoint {
    int pairs = 0;
    int rf_chains = 0;
    double ee = 0.0;
    bool condition_satisfied = false;
};

struct RfChainResult {
    int best_pairs = 0;
    int best_rf_chains = 0;
    double best_ee = 0.0;
    bool unimodal = false;
    std::vector<RfChainPoint> curve;
};

/// EE as a function of the pair count K with P_r = 2K P_s and the estimation
/// variances of the template held fixed.
double ee_versus_pairs(int pairs, int antennas, double user_power, double sigma2, double eps2,
                       const PowerModel& model);

/// Exhaustive search over K in [1, max_pairs].
RfChainResult search_rf_chains(int antennas, double user_power, const Scenario& tmpl,
                               const PowerModel& model, int max_pairs);

/// Same search restricted to K <= floor(L_max / 2) so that N > floor(4 L^2 / pi).
RfChainResult optimize_rf_chains(int antennas, double user_power, const Scenario& tmpl,
                                 const PowerModel& model);

/// True when the sequence has a single peak (ties count as flat, not as a new peak).
bool is_unimodal(const std::vector<double>& values);

} // namespace mimorelay
