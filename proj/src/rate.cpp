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

#include "mimorelay/rate.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace mimorelay {

namespace {

constexpr int kMaxAttempts = 32;

struct Moments {
    double mean = 0.0;
    double stderr_mean = 0.0;
};

Moments moments(const std::vector<double>& xs)
{
    Moments m;
    if (xs.empty()) return m;
    const double n = static_cast<double>(xs.size());
    m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - m.mean) * (x - m.mean);
        m.stderr_mean = std::sqrt(ss / (n - 1.0) / n);
    }
    return m;
}

/// Draws until the equivalent channel is usable; counts rejected draws.
struct Draw {
    ChannelRealization channel;
    HybridWeights weights;
};

std::optional<Draw> usable_draw(const Scenario& s, Rng& rng, std::size_t& rejected)
{
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        auto ch = generate_channel(s, rng);
        try {
            auto w = build_hybrid_weights(ch.G_hat, s.pairs, s.phase_bits);
            return Draw{std::move(ch), std::move(w)};
        } catch (const SingularChannel&) {
            ++rejected;
        }
    }
    return std::nullopt;
}

void check_power(double p, const char* what)
{
    if (!(p >= 0) || !std::isfinite(p)) throw InvalidParameter(std::string(what) + " must be finite and >= 0");
}

/// Uplink effective channel W_r F_r G with its noise gains, and downlink
/// effective channel G^T F_t W_t.
struct Links {
    CMatrix A;
    Eigen::VectorXd noise;
    CMatrix H;
};

Links effective_links(const HybridWeights& w, const CMatrix& G)
{
    Links l;
    const CMatrix WF = w.W_r * w.F_r;
    l.noise = WF.rowwise().squaredNorm();
    l.A.noalias() = WF * G;
    const CMatrix C = w.F_t.transpose() * G;
    l.H.noalias() = C.transpose() * w.W_t;
    return l;
}

} // namespace

std::string to_string(RateMethod m)
{
    switch (m) {
    case RateMethod::MonteCarlo: return "monte-carlo";
    case RateMethod::HardeningBound: return "hardening-bound";
    case RateMethod::ClosedFormTheorem1: return "closed-form-theorem1";
    case RateMethod::ClosedFormFullDigital: return "closed-form-full-digital";
    case RateMethod::ScaledClosedForm: return "closed-form-scaled";
    }
    return "unknown";
}

std::vector<double> uplink_sinrs(const HybridWeights& w, const CMatrix& G, double user_power)
{
    check_power(user_power, "user power");
    const auto links = effective_links(w, G);
    std::vector<double> out(links.A.rows());
    for (Eigen::Index k = 0; k < links.A.rows(); ++k) {
        const double signal = std::norm(links.A(k, k));
        const double interference = links.A.row(k).squaredNorm() - signal;
        out[k] = user_power * signal / (user_power * std::max(interference, 0.0) + links.noise(k));
    }
    return out;
}

std::vector<double> downlink_sinrs(const HybridWeights& w, const CMatrix& G, double relay_power)
{
    check_power(relay_power, "relay power");
    const auto links = effective_links(w, G);
    const double noise = 1.0 / (w.mu * w.mu);
    std::vector<double> out(links.H.rows());
    for (Eigen::Index kp = 0; kp < links.H.rows(); ++kp) {
        const double signal = std::norm(links.H(kp, partner(static_cast<int>(kp))));
        const double interference = links.H.row(kp).squaredNorm() - signal;
        out[kp] = relay_power * signal / (relay_power * std::max(interference, 0.0) + noise);
    }
    return out;
}

double sinr_uplink(int k, const HybridWeights& w, const CMatrix& G, double user_power)
{
    if (k < 0 || k >= G.cols()) throw InvalidParameter("sinr_uplink: user index out of range");
    return uplink_sinrs(w, G, user_power)[k];
}

double sinr_downlink(int k_prime, const HybridWeights& w, const CMatrix& G, double relay_power)
{
    if (k_prime < 0 || k_prime >= G.cols())
        throw InvalidParameter("sinr_downlink: user index out of range");
    return downlink_sinrs(w, G, relay_power)[k_prime];
}

RateReport mc_sum_rate(const Scenario& s, const MonteCarlo& mc)
{
    s.validate();
    if (mc.trials < 1) throw InvalidParameter("trials must be >= 1");
    const int users = s.users();

    struct TrialResult {
        bool ok = false;
        std::size_t rejected = 0;
        std::vector<double> up, down;
    };
    std::vector<TrialResult> results(mc.trials);

    parallel_for(mc.trials, mc.workers, [&](std::size_t i) {
        Rng rng = substream(mc.seed, mc.stream, i);
        TrialResult& r = results[i];
        auto draw = usable_draw(s, rng, r.rejected);
        if (!draw) return;
        const auto& w = draw->weights;
        const double s_up = s.user_power, s_down = s.relay_power;
        const auto links = effective_links(w, draw->channel.G);
        std::vector<double> up(users), down(users);
        for (int k = 0; k < users; ++k) {
            const double a = std::norm(links.A(k, k));
            up[k] = s_up * a / (s_up * std::max(links.A.row(k).squaredNorm() - a, 0.0) + links.noise(k));
            const double h = std::norm(links.H(k, partner(k)));
            down[k] = s_down * h /
                      (s_down * std::max(links.H.row(k).squaredNorm() - h, 0.0) + 1.0 / (w.mu * w.mu));
        }
        r.up.resize(users);
        r.down.resize(users);
        for (int k = 0; k < users; ++k) {
            r.up[k] = std::log2(1.0 + up[k]);
            r.down[k] = std::log2(1.0 + down[k]);
        }
        r.ok = true;
    });

    RateReport report;
    report.method = RateMethod::MonteCarlo;
    std::vector<std::vector<double>> up(users), down(users);
    for (const auto& r : results) {
        report.singular_resamples += r.rejected;
        if (!r.ok) {
            ++report.failed_trials;
            continue;
        }
        for (int k = 0; k < users; ++k) {
            up[k].push_back(r.up[k]);
            down[k].push_back(r.down[k]);
        }
    }
    report.trials = mc.trials - report.failed_trials;
    if (report.trials == 0) throw SimulationFailure("mc_sum_rate: every draw was singular");

    report.uplink.resize(users);
    report.downlink.resize(users);
    std::vector<Moments> up_m(users), down_m(users);
    for (int k = 0; k < users; ++k) {
        up_m[k] = moments(up[k]);
        down_m[k] = moments(down[k]);
        report.uplink[k] = up_m[k].mean;
        report.downlink[k] = down_m[k].mean;
    }

    // The min is taken after averaging; the per-trial sum of the selected
    // one-hop rates gives the standard error of the sum.
    report.per_link.resize(users);
    report.stderr_per_link.resize(users);
    std::vector<bool> use_uplink(users);
    for (int k = 0; k < users; ++k) {
        const int kp = partner(k);
        use_uplink[k] = up_m[k].mean <= down_m[kp].mean;
        report.per_link[k] = 0.5 * std::min(up_m[k].mean, down_m[kp].mean);
        report.stderr_per_link[k] = 0.5 * (use_uplink[k] ? up_m[k].stderr_mean : down_m[kp].stderr_mean);
    }
    std::vector<double> per_trial_sum(report.trials, 0.0);
    for (std::size_t t = 0; t < report.trials; ++t)
        for (int k = 0; k < users; ++k)
            per_trial_sum[t] += 0.5 * (use_uplink[k] ? up[k][t] : down[partner(k)][t]);
    report.sum = std::accumulate(report.per_link.begin(), report.per_link.end(), 0.0);
    report.sum_stderr = moments(per_trial_sum).stderr_mean;
    return report;
}

RateReport hardening_bound_rate(const Scenario& s, const MonteCarlo& mc)
{
    s.validate();
    if (mc.trials < 1) throw InvalidParameter("trials must be >= 1");
    const int users = s.users();

    // Per user: uplink effective gain a_k = w_k^T F_r g_k and downlink gain
    // b_k' = mu g_k'^T F_t v_k, with their interference and noise terms.
    struct TrialResult {
        bool ok = false;
        std::size_t rejected = 0;
        std::vector<cplx> a, b;
        std::vector<double> up_mp, up_an, down_mp;
    };
    std::vector<TrialResult> results(mc.trials);

    parallel_for(mc.trials, mc.workers, [&](std::size_t i) {
        Rng rng = substream(mc.seed, mc.stream, i);
        TrialResult& r = results[i];
        auto draw = usable_draw(s, rng, r.rejected);
        if (!draw) return;
        const auto& w = draw->weights;
        const auto& G = draw->channel.G;
        const auto links = effective_links(w, G);
        const CMatrix& A = links.A;
        const CMatrix& H = links.H;
        r.a.resize(users);
        r.b.resize(users);
        r.up_mp.resize(users);
        r.up_an.resize(users);
        r.down_mp.resize(users);
        for (int k = 0; k < users; ++k) {
            r.a[k] = A(k, k);
            r.up_mp[k] = A.row(k).squaredNorm() - std::norm(A(k, k));
            r.up_an[k] = links.noise(k);
            const int stream = partner(k);
            r.b[k] = w.mu * H(k, stream);
            r.down_mp[k] = w.mu * w.mu * (H.row(k).squaredNorm() - std::norm(H(k, stream)));
        }
        r.ok = true;
    });

    RateReport report;
    report.method = RateMethod::HardeningBound;
    std::vector<cplx> mean_a(users, 0.0), mean_b(users, 0.0);
    std::vector<double> pow_a(users, 0.0), pow_b(users, 0.0), mp(users, 0.0), an(users, 0.0),
        dmp(users, 0.0);
    std::size_t used = 0;
    for (const auto& r : results) {
        report.singular_resamples += r.rejected;
        if (!r.ok) {
            ++report.failed_trials;
            continue;
        }
        ++used;
        for (int k = 0; k < users; ++k) {
            mean_a[k] += r.a[k];
            mean_b[k] += r.b[k];
            pow_a[k] += std::norm(r.a[k]);
            pow_b[k] += std::norm(r.b[k]);
            mp[k] += r.up_mp[k];
            an[k] += r.up_an[k];
            dmp[k] += r.down_mp[k];
        }
    }
    if (used == 0) throw SimulationFailure("hardening_bound_rate: every draw was singular");
    report.trials = used;
    const double n = static_cast<double>(used);

    report.uplink.resize(users);
    report.downlink.resize(users);
    for (int k = 0; k < users; ++k) {
        const double ma = std::norm(mean_a[k] / n);
        const double va = std::max(pow_a[k] / n - ma, 0.0);
        report.uplink[k] = std::log2(
            1.0 + s.user_power * ma / (s.user_power * (va + mp[k] / n) + an[k] / n));
        const double mb = std::norm(mean_b[k] / n);
        const double vb = std::max(pow_b[k] / n - mb, 0.0);
        report.downlink[k] =
            std::log2(1.0 + s.relay_power * mb / (s.relay_power * (vb + dmp[k] / n) + 1.0));
    }
    report.per_link.resize(users);
    for (int k = 0; k < users; ++k)
        report.per_link[k] = 0.5 * std::min(report.uplink[k], report.downlink[partner(k)]);
    report.sum = std::accumulate(report.per_link.begin(), report.per_link.end(), 0.0);
    return report;
}

double theorem1_x(const Scenario& s, int k)
{
    s.validate();
    const int users = s.users();
    if (k < 0 || k >= users) throw InvalidParameter("theorem1_x: user index out of range");
    std::vector<EstimationVariances> v(users);
    double eps_sum = 0.0;
    double inv_sigma_sum = 0.0;
    for (int j = 0; j < users; ++j) {
        v[j] = estimation_variances(s.betas[j], s.pilot_length, s.pilot_power);
        eps_sum += v[j].eps2;
        inv_sigma_sum += 1.0 / v[j].sigma2;
    }
    const int kp = partner(k);
    const double up = s.user_power * v[k].sigma2 / (1.0 + s.user_power * eps_sum);
    const double down = s.relay_power / ((1.0 + s.relay_power * v[kp].eps2) * inv_sigma_sum);
    return std::min(up, down);
}

ConditionCheck condition_check(int antennas, int rf_chains)
{
    if (antennas < 1 || rf_chains < 1)
        throw InvalidParameter("condition_check: N and L must be >= 1");
    ConditionCheck c;
    const double l = static_cast<double>(rf_chains);
    c.required_above = static_cast<long>(std::floor(4.0 * l * l / kPi));
    c.satisfied = antennas > c.required_above;
    c.max_rf_chains = static_cast<int>(std::floor(std::sqrt(kPi * antennas / 4.0)));
    return c;
}

RateReport closed_form_theorem1(const Scenario& s)
{
    s.validate();
    RateReport report;
    report.method = RateMethod::ClosedFormTheorem1;
    report.condition_satisfied = condition_check(s.antennas, s.rf_chains).satisfied;
    const int users = s.users();
    report.per_link.resize(users);
    for (int k = 0; k < users; ++k)
        report.per_link[k] = 0.5 * std::log2(1.0 + kPi * s.antennas * theorem1_x(s, k) / 4.0);
    report.sum = std::accumulate(report.per_link.begin(), report.per_link.end(), 0.0);
    return report;
}

RateReport full_digital_rate(const Scenario& s)
{
    s.validate();
    if (s.antennas <= s.users()) throw InvalidParameter("full_digital_rate requires N > 2K");
    RateReport report;
    report.method = RateMethod::ClosedFormFullDigital;
    const int users = s.users();
    report.per_link.resize(users);
    for (int k = 0; k < users; ++k)
        report.per_link[k] = 0.5 * std::log2(1.0 + (s.antennas - users) * theorem1_x(s, k));
    report.sum = std::accumulate(report.per_link.begin(), report.per_link.end(), 0.0);
    return report;
}

double equal_path_loss_sum_rate(int antennas, int pairs, double user_power, double relay_power,
                                double sigma2, double eps2)
{
    const double n = antennas;
    const double up = user_power * kPi * n * sigma2 / (4.0 * (1.0 + 2.0 * pairs * user_power * eps2));
    const double down = relay_power * kPi * n * sigma2 / (8.0 * pairs * (1.0 + relay_power * eps2));
    return pairs * std::log2(1.0 + std::min(up, down));
}

RateReport scaled_sum_rate(const Scenario& s, const ScalingSpec& spec)
{
    s.validate();
    if (!(spec.alpha > 0)) throw InvalidParameter("scaling exponent alpha must be > 0");
    if (!(spec.user_budget > 0) || !(spec.relay_budget > 0))
        throw InvalidParameter("power budgets E_s, E_r must be > 0");
    const double beta = s.betas.front();
    for (double b : s.betas)
        if (b != beta) throw InvalidParameter("scaled_sum_rate requires equal path loss");

    const double shrink = std::pow(static_cast<double>(s.antennas), spec.alpha);
    const double user_power = spec.user_budget / shrink;
    const double relay_power = 2.0 * s.pairs * spec.relay_budget / shrink;
    const double pilot_power = spec.scaling == ScalingCase::ScaledPilot ? user_power : s.pilot_power;
    const auto v = estimation_variances(beta, s.pilot_length, pilot_power);

    RateReport report;
    report.method = RateMethod::ScaledClosedForm;
    report.condition_satisfied = condition_check(s.antennas, s.rf_chains).satisfied;
    report.sum = equal_path_loss_sum_rate(s.antennas, s.pairs, user_power, relay_power, v.sigma2, v.eps2);
    report.per_link.assign(s.users(), report.sum / s.users());
    return report;
}

double fixed_pilot_limit(int pairs, double user_budget, double relay_budget, double sigma2)
{
    return pairs * std::log2(1.0 + std::min(user_budget, relay_budget) * kPi * sigma2 / 4.0);
}

double scaled_pilot_limit(int pairs, double user_budget, double relay_budget, int tau, double beta)
{
    const double common = kPi * tau * beta * beta / 4.0;
    return pairs * std::log2(1.0 + common * user_budget * std::min(user_budget, relay_budget));
}

double off_diagonal_ratio(const CMatrix& H)
{
    double x = 0.0;
    for (Eigen::Index k = 0; k < H.cols(); ++k) {
        const double d2 = std::norm(H(k, k));
        for (Eigen::Index j = 0; j < H.rows(); ++j)
            if (j != k) x += std::norm(H(j, k)) / d2;
    }
    return x;
}

ConvergenceStats convergence_diagnostic(const Scenario& s, const MonteCarlo& mc)
{
    s.validate();
    if (mc.trials < 2) throw InvalidParameter("convergence_diagnostic needs >= 2 trials");
    std::vector<double> xs(mc.trials);
    parallel_for(mc.trials, mc.workers, [&](std::size_t i) {
        Rng rng = substream(mc.seed, mc.stream, i);
        const auto ch = generate_channel(s, rng);
        CMatrix F = analog_combiner(ch.G_hat);
        if (s.phase_bits) F = quantize_phases(F, *s.phase_bits);
        xs[i] = off_diagonal_ratio(F * ch.G_hat);
    });

    ConvergenceStats st;
    st.trials = mc.trials;
    const auto m = moments(xs);
    st.mean = m.mean;
    st.mean_stderr = m.stderr_mean;
    double ss = 0.0;
    std::size_t below = 0;
    for (double x : xs) {
        ss += (x - m.mean) * (x - m.mean);
        if (x < 1.0) ++below;
    }
    st.variance = ss / static_cast<double>(xs.size() - 1);
    st.below_one = static_cast<double>(below) / static_cast<double>(xs.size());
    const double k = s.pairs;
    const double n = s.antennas;
    st.predicted_mean = 8.0 * k * (2.0 * k - 1.0) / (kPi * n);
    st.predicted_variance = 32.0 * k * (2.0 * k - 1.0) / (kPi * kPi * n * n);
    return st;
}

std::vector<RatioMomentRow> ratio_moment_check(double sigma, const std::vector<double>& a_values,
                                               const MonteCarlo& mc)
{
    if (!(sigma >= 0)) throw InvalidParameter("sigma must be >= 0");
    if (mc.trials < 2) throw InvalidParameter("ratio_moment_check needs >= 2 trials");
    std::vector<RatioMomentRow> rows;
    rows.reserve(a_values.size());
    for (std::size_t idx = 0; idx < a_values.size(); ++idx) {
        const double a = a_values[idx];
        if (!(a > 0)) throw InvalidParameter("every a must be > 0");
        RatioMomentRow row;
        row.a = a;
        row.first_correction = 3.0 * sigma * sigma / (a * a);
        if (sigma == 0.0) {
            row.estimate = 1.0;
            rows.push_back(row);
            continue;
        }
        Rng rng = substream(mc.seed, mc.stream, idx);
        std::normal_distribution<double> normal(0.0, sigma);
        std::vector<double> samples(mc.trials);
        const double a2 = a * a;
        for (auto& v : samples) {
            const double y = normal(rng);
            v = 0.5 * (a2 / ((a + y) * (a + y)) + a2 / ((a - y) * (a - y)));
        }
        const auto m = moments(samples);
        row.estimate = m.mean;
        row.stderr_estimate = m.stderr_mean;
        row.deviation = m.mean - 1.0;
        rows.push_back(row);
    }
    return rows;
}

double throughput_with_overhead(double rate, double coherence, int antennas, int pairs,
                                OverheadMode mode)
{
    if (!(rate >= 0)) throw InvalidParameter("rate must be >= 0");
    if (!(coherence > 0)) throw InvalidParameter("coherence time T must be > 0");
    const double training = mode == OverheadMode::Limited ? antennas : 2.0 * pairs;
    if (coherence < training)
        throw InvalidParameter("coherence time T is shorter than the training period");
    return rate * (coherence - training) / coherence;
}

} // namespace mimorelay
