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

#include "mimorelay/energy.hpp"

#include "mimorelay/rate.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace mimorelay {

namespace {

constexpr double kLn2 = std::numbers::ln2;

EstimationVariances equal_gain_variances(const Scenario& s)
{
    const double beta = s.betas.front();
    for (double b : s.betas)
        if (b != beta) throw InvalidParameter("energy efficiency requires equal large-scale gains");
    return estimation_variances(beta, s.pilot_length, s.pilot_power);
}

double spectral_log(double power, const EECoefficients& c)
{
    return std::log1p(c.a0 * power / (c.a1 * power + 4.0));
}

double line_power(double power, int pairs, const EECoefficients& c, double kappa)
{
    return 2.0 * pairs * power / kappa + c.P_c;
}

} // namespace

void PowerModel::validate() const
{
    if (!(kappa > 0 && kappa < 1)) throw InvalidParameter("PA efficiency kappa must lie in (0, 1)");
    if (!(P_0 >= 0) || !(P_const >= 0) || !(P_APS >= 0))
        throw InvalidParameter("circuit powers P_0, P_const, P_APS must be >= 0");
}

double total_power(double user_power, double relay_power, int pairs, int antennas,
                   const PowerModel& m)
{
    m.validate();
    if (!(user_power >= 0) || !(relay_power >= 0)) throw InvalidParameter("transmit powers must be >= 0");
    const double k2 = 2.0 * pairs;
    return 0.5 * (k2 * user_power + relay_power) / m.kappa + k2 * m.P_0 + m.P_const +
           k2 * antennas * m.P_APS;
}

EECoefficients ee_coefficients(const Scenario& s, const PowerModel& m)
{
    s.validate();
    m.validate();
    const auto v = equal_gain_variances(s);
    EECoefficients c;
    c.a0 = kPi * s.antennas * v.sigma2;
    c.a1 = 8.0 * s.pairs * v.eps2;
    c.P_c = 2.0 * s.pairs * m.P_0 + m.P_const + 2.0 * s.pairs * s.antennas * m.P_APS;
    return c;
}

EEReport energy_efficiency(double user_power, double relay_power, const Scenario& s,
                           const PowerModel& m)
{
    s.validate();
    const auto v = equal_gain_variances(s);
    const double k = s.pairs;
    const double up = 2.0 * k * user_power / (1.0 + 2.0 * k * user_power * v.eps2);
    const double down = relay_power / (1.0 + relay_power * v.eps2);
    EEReport r;
    r.se = k * std::log2(1.0 + kPi * s.antennas * v.sigma2 * std::min(up, down) / (8.0 * k));
    r.p_sum = total_power(user_power, relay_power, s.pairs, s.antennas, m);
    r.ee = r.se / r.p_sum;
    r.P_s = user_power;
    r.P_r = relay_power;
    r.pairs = s.pairs;
    r.antennas = s.antennas;
    return r;
}

double ee_on_line(double power, int pairs, const EECoefficients& c, double kappa)
{
    return pairs * spectral_log(power, c) / kLn2 / line_power(power, pairs, c, kappa);
}

double kkt_residual(double power, int pairs, const EECoefficients& c, double kappa)
{
    const double outer = (c.a0 + c.a1) * power + 4.0;
    const double inner = c.a1 * power + 4.0;
    return 2.0 * c.a0 * kappa * line_power(power, pairs, c, kappa) / (outer * inner) -
           pairs * spectral_log(power, c);
}

double stationary_ee(double power, const EECoefficients& c, double kappa)
{
    return 2.0 * c.a0 * kappa / (((c.a0 + c.a1) * power + 4.0) * (c.a1 * power + 4.0) * kLn2);
}

PowerSplit optimal_power_split(double total, const Scenario& s, const PowerModel& m)
{
    if (!(total > 0) || !std::isfinite(total)) throw InvalidParameter("total power P_T must be > 0");
    const double k2 = 2.0 * s.pairs;
    PowerSplit split;
    split.user_power = total / (2.0 * k2);
    split.relay_power = total / 2.0;
    split.split_ee = energy_efficiency(split.user_power, split.relay_power, s, m).ee;
    for (int i = 1; i <= 99; ++i) {
        const double relay = total * i / 100.0;
        const double ee = energy_efficiency((total - relay) / k2, relay, s, m).ee;
        split.best_sweep_ee = std::max(split.best_sweep_ee, ee);
    }
    return split;
}

EEReport optimize_Ps(const Scenario& s, const PowerModel& m)
{
    const auto c = ee_coefficients(s, m);
    const int k = s.pairs;
    auto residual = [&](double u) { return kkt_residual(std::exp(u), k, c, m.kappa); };
    // Relative residual; its sign must be clearly resolved at the bracket ends.
    auto relative = [&](double u) {
        const double p = std::exp(u);
        return kkt_residual(p, k, c, m.kappa) / (k * spectral_log(p, c));
    };
    auto objective = [&](double u) { return ee_on_line(std::exp(u), k, c, m.kappa); };

    double lo = std::log(1e-6);
    double hi = std::log(1e6);
    const double grow = std::log(1e3);
    int growths = 0;
    constexpr double kResolved = 1e-6;
    while (!(relative(lo) > kResolved && relative(hi) < -kResolved)) {
        if (++growths > 20) throw OptimizerFailure("optimize_Ps: no interior maximum in bracket");
        if (!(relative(lo) > kResolved)) lo -= grow;
        if (!(relative(hi) < -kResolved)) hi += grow;
    }

    EEReport r;
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
    double f1 = objective(x1), f2 = objective(x2);
    while (b - a > 1e-9 * std::max(1.0, std::abs(a) + std::abs(b)) && r.iterations < 500) {
        ++r.iterations;
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = objective(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = objective(x1);
        }
    }
    // Polish on the sign change of the stationarity residual.
    double left = a, right = b;
    if (!(residual(left) > 0 && residual(right) < 0)) {
        left = lo;
        right = hi;
    }
    for (int i = 0; i < 200 && right - left > 0; ++i) {
        ++r.iterations;
        const double mid = 0.5 * (left + right);
        if (mid <= left || mid >= right) break;
        (residual(mid) > 0 ? left : right) = mid;
    }
    const double u = std::abs(residual(left)) < std::abs(residual(right)) ? left : right;

    const double p = std::exp(u);
    const double scale = k * spectral_log(p, c);
    r.kkt_residual = std::abs(kkt_residual(p, k, c, m.kappa)) / scale;
    r.P_s = p;
    r.P_r = 2.0 * k * p;
    r.pairs = k;
    r.antennas = s.antennas;
    r.se = scale / kLn2;
    r.p_sum = line_power(p, k, c, m.kappa);
    r.ee = r.se / r.p_sum;
    if (!(r.kkt_residual < 1e-6)) {
        std::ostringstream os;
        os << "optimize_Ps: stationarity residual " << r.kkt_residual << " above 1e-6";
        throw OptimizerFailure(os.str());
    }
    if (!(std::abs(r.ee - stationary_ee(p, c, m.kappa)) <= 1e-9 * r.ee))
        throw OptimizerFailure("optimize_Ps: optimum does not satisfy the stationary EE identity");
    return r;
}

LineFit green_point_line(const Scenario& s, const std::vector<PowerModel>& models)
{
    if (!s.perfect_csi()) throw InvalidParameter("green_point_line requires perfect CSI");
    if (models.empty()) throw InvalidParameter("green_point_line needs at least one power model");
    const double kappa = models.front().kappa;
    LineFit fit;
    for (const auto& m : models) {
        if (m.kappa != kappa) throw InvalidParameter("green_point_line: all models must share kappa");
        const auto r = optimize_Ps(s, m);
        fit.points.push_back({r.se, std::log(r.ee), r.P_s});
    }
    const auto c = ee_coefficients(s, models.front());
    fit.predicted_slope = -kLn2 / s.pairs;
    fit.predicted_intercept = std::log(c.a0 * kappa / (8.0 * kLn2));

    const double n = static_cast<double>(fit.points.size());
    double mx = 0, my = 0;
    for (const auto& p : fit.points) {
        mx += p.se;
        my += p.log_ee;
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (const auto& p : fit.points) {
        sxx += (p.se - mx) * (p.se - mx);
        sxy += (p.se - mx) * (p.log_ee - my);
    }
    if (!(sxx > 0)) {
        fit.degenerate = true;
        fit.slope = 0.0;
        fit.intercept = my;
    } else {
        fit.slope = sxy / sxx;
        fit.intercept = my - fit.slope * mx;
    }
    for (const auto& p : fit.points)
        fit.max_residual = std::max(fit.max_residual, std::abs(p.log_ee - (fit.intercept + fit.slope * p.se)));
    if (fit.degenerate) fit.max_residual = 0.0;
    return fit;
}

double ee_versus_pairs(int pairs, int antennas, double user_power, double sigma2, double eps2,
                       const PowerModel& m)
{
    m.validate();
    if (pairs < 1 || antennas < 1) throw InvalidParameter("ee_versus_pairs: K and N must be >= 1");
    if (!(user_power > 0)) throw InvalidParameter("ee_versus_pairs: P_s must be > 0");
    const double k = pairs;
    const double n = antennas;
    const double d = 2.0 * user_power / m.kappa + 2.0 * m.P_0 + 2.0 * n * m.P_APS;
    const double mm = m.P_const / d;
    if (eps2 == 0.0) {
        const double se = k * std::log2(1.0 + kPi * n * sigma2 * user_power / 4.0);
        return se / (d * (k + mm));
    }
    const double a = 1.0 / (2.0 * user_power * eps2);
    const double b = kPi * n * sigma2 / (8.0 * eps2);
    return k * std::log2(1.0 + b / (k + a)) / (d * (k + mm));
}

bool is_unimodal(const std::vector<double>& v)
{
    bool descending = false;
    for (std::size_t i = 1; i < v.size(); ++i) {
        const double diff = v[i] - v[i - 1];
        if (diff < 0) descending = true;
        else if (diff > 0 && descending) return false;
    }
    return true;
}

RfChainResult search_rf_chains(int antennas, double user_power, const Scenario& tmpl,
                               const PowerModel& m, int max_pairs)
{
    if (max_pairs < 1) throw InvalidParameter("search_rf_chains: no admissible pair count");
    const auto v = equal_gain_variances(tmpl);
    RfChainResult res;
    std::vector<double> values;
    for (int k = 1; k <= max_pairs; ++k) {
        RfChainPoint p;
        p.pairs = k;
        p.rf_chains = 2 * k;
        p.ee = ee_versus_pairs(k, antennas, user_power, v.sigma2, v.eps2, m);
        p.condition_satisfied = condition_check(antennas, p.rf_chains).satisfied;
        values.push_back(p.ee);
        if (p.ee > res.best_ee) {
            res.best_ee = p.ee;
            res.best_pairs = k;
            res.best_rf_chains = 2 * k;
        }
        res.curve.push_back(p);
    }
    res.unimodal = is_unimodal(values);
    return res;
}

RfChainResult optimize_rf_chains(int antennas, double user_power, const Scenario& tmpl,
                                 const PowerModel& m)
{
    const int max_pairs = condition_check(antennas, 1).max_rf_chains / 2;
    return search_rf_chains(antennas, user_power, tmpl, m, max_pairs);
}

} // namespace mimorelay
