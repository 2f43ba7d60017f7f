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
#include "mimorelay/hybrid.hpp"
#include "mimorelay/parallel.hpp"

#include <string>
#include <vector>

namespace mimorelay {

enum class RateMethod { MonteCarlo, HardeningBound, ClosedFormTheorem1, ClosedFormFullDigital, ScaledClosedForm };

std::string to_string(RateMethod m);

/// Per directed link k -> k' (indexed by the sender k) rates in bits/s/Hz.
/// Every link rate already carries the half-duplex factor 1/2.
struct RateReport {
    std::vector<double> per_link;
    double sum = 0.0;
    RateMethod method = RateMethod::ClosedFormTheorem1;
    std::size_t trials = 0;
    std::vector<double> stderr_per_link;  // Monte Carlo estimators only
    double sum_stderr = 0.0;
    std::size_t singular_resamples = 0;  // rejected draws
    std::size_t failed_trials = 0;       // trials without any usable draw
    bool condition_satisfied = true;     // N > floor(4 L^2 / pi); closed forms only

    /// Mean one-hop rates (before min and 1/2), Monte Carlo only.
    std::vector<double> uplink;
    std::vector<double> downlink;  // indexed by receiving user
};

// ---- instantaneous SINRs -----------------------------------------------

/// Uplink SINR of stream k using the true channel G.
double sinr_uplink(int k, const HybridWeights& w, const CMatrix& G, double user_power);

/// Downlink SINR at user k_prime, whose desired stream is partner(k_prime).
double sinr_downlink(int k_prime, const HybridWeights& w, const CMatrix& G, double relay_power);

std::vector<double> uplink_sinrs(const HybridWeights& w, const CMatrix& G, double user_power);
std::vector<double> downlink_sinrs(const HybridWeights& w, const CMatrix& G, double relay_power);

// ---- Monte Carlo estimators --------------------------------------------

/// Ergodic rate: per link 1/2 min(E log2(1+gamma_up), E log2(1+gamma_down)).
RateReport mc_sum_rate(const Scenario& scenario, const MonteCarlo& mc);

/// Worst-case-noise (channel hardening) lower bound with Monte Carlo moments.
RateReport hardening_bound_rate(const Scenario& scenario, const MonteCarlo& mc);

// ---- closed forms --------------------------------------------------------

/// Effective SINR scale x of link k -> partner(k).
double theorem1_x(const Scenario& scenario, int k);

/// Per link 1/2 log2(1 + pi N x / 4).
RateReport closed_form_theorem1(const Scenario& scenario);

/// Full-RF-chain ZF benchmark: per link 1/2 log2(1 + (N - 2K) x). Requires N > 2K.
RateReport full_digital_rate(const Scenario& scenario);

struct ConditionCheck {
    bool satisfied = false;     // N > floor(4 L^2 / pi)
    long required_above = 0;    // floor(4 L^2 / pi)
    int max_rf_chains = 0;      // floor(sqrt(pi N / 4))
};

ConditionCheck condition_check(int antennas, int rf_chains);

/// Equal-path-loss sum rate K log2(1 + min{up, down}).
double equal_path_loss_sum_rate(int antennas, int pairs, double user_power, double relay_power,
                                double sigma2, double eps2);

enum class ScalingCase { FixedPilot, ScaledPilot };

struct ScalingSpec {
    double alpha = 1.0;
    double user_budget = 1.0;   // E_s
    double relay_budget = 1.0;  // E_r
    ScalingCase scaling = ScalingCase::FixedPilot;
};

/// P_s = E_s / N^alpha, P_r = 2K E_r / N^alpha (and P_p = P_s for the scaled
/// pilot case) substituted in the equal-path-loss closed form.
RateReport scaled_sum_rate(const Scenario& scenario, const ScalingSpec& spec);

/// N -> infinity sum rate for fixed pilot power and alpha = 1.
double fixed_pilot_limit(int pairs, double user_budget, double relay_budget, double sigma2);

/// N -> infinity sum rate for pilot power scaled with P_s and alpha = 1/2.
double scaled_pilot_limit(int pairs, double user_budget, double relay_budget, int tau,
                          double beta);

// ---- asymptotic diagnostics ----------------------------------------------

struct ConvergenceStats {
    double mean = 0.0;       // Monte Carlo E{X}, X = ||A D^{-1}||_F^2
    double variance = 0.0;   // Monte Carlo V{X}
    double mean_stderr = 0.0;
    double predicted_mean = 0.0;      // 8K(2K-1)/(pi N)
    double predicted_variance = 0.0;  // 32K(2K-1)/(pi^2 N^2)
    double below_one = 0.0;           // fraction of draws with X < 1
    std::size_t trials = 0;
};

/// Splits H_eq = F_r G_hat into diagonal D and off-diagonal A per draw.
ConvergenceStats convergence_diagnostic(const Scenario& scenario, const MonteCarlo& mc);

/// X = ||A D^{-1}||_F^2 of one equivalent channel.
double off_diagonal_ratio(const CMatrix& H_eq);

struct RatioMomentRow {
    double a = 0.0;
    double estimate = 0.0;           // E{a^2 / (y + a)^2}
    double stderr_estimate = 0.0;
    double deviation = 0.0;          // estimate - 1
    double first_correction = 0.0;   // 3 sigma^2 / a^2
};

/// Monte Carlo E{a^2/(y+a)^2}, y ~ N(0, sigma^2), with antithetic pairs (y, -y).
std::vector<RatioMomentRow> ratio_moment_check(double sigma, const std::vector<double>& a_values,
                                               const MonteCarlo& mc);

enum class OverheadMode { Limited, Full };

/// rate * (T - N)/T for the hybrid relay, rate * (T - 2K)/T for full RF chains.
double throughput_with_overhead(double rate, double coherence, int antennas, int pairs,
                                OverheadMode mode);

} // namespace mimorelay
