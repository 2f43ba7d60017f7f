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

#include "mimorelay/harness.hpp"

#include "mimorelay/rate.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace mimorelay {

namespace {

constexpr double kNone = std::numeric_limits<double>::quiet_NaN();

std::vector<double> db_range(double from, double to, double step)
{
    std::vector<double> out;
    const int count = static_cast<int>(std::lround((to - from) / step));
    for (int i = 0; i <= count; ++i) out.push_back(db_to_linear(from + i * step));
    return out;
}

std::vector<double> linear_range(double from, double to, double step)
{
    std::vector<double> out;
    const int count = static_cast<int>(std::lround((to - from) / step));
    for (int i = 0; i <= count; ++i) out.push_back(from + i * step);
    return out;
}

/// Reads config overrides on top of per-experiment defaults.
class Setup {
public:
    explicit Setup(const ExperimentConfig& cfg) : cfg_(cfg) {}

    std::vector<int> antennas(std::vector<int> desk, std::vector<int> full) const
    {
        if (cfg_.antennas) return *cfg_.antennas;
        return cfg_.full ? full : desk;
    }
    std::vector<double> user_powers(std::vector<double> desk, std::vector<double> full) const
    {
        if (cfg_.user_powers) return *cfg_.user_powers;
        return cfg_.full ? full : desk;
    }
    double user_power(double fallback) const { return cfg_.user_powers ? cfg_.user_powers->front() : fallback; }
    int pairs(int fallback) const { return cfg_.pairs.value_or(fallback); }
    double pilot_power(double fallback) const { return cfg_.pilot_power.value_or(fallback); }

    Scenario scenario(int antennas, int pairs, double user_power, double pilot_power) const
    {
        Scenario s = Scenario::symmetric(antennas, pairs, user_power, pilot_power, cfg_.beta.value_or(1.0));
        if (cfg_.relay_power) s.relay_power = *cfg_.relay_power;
        if (cfg_.pilot_length) s.pilot_length = *cfg_.pilot_length;
        s.validate();
        return s;
    }

    /// Independent substream family per experiment and sweep point.
    MonteCarlo monte_carlo(std::uint64_t point) const
    {
        MonteCarlo mc;
        mc.trials = cfg_.trials;
        mc.seed = cfg_.seed;
        mc.stream = splitmix64(hash_tag(cfg_.experiment) + point);
        mc.workers = cfg_.workers;
        return mc;
    }

    const ExperimentConfig& cfg() const { return cfg_; }

private:
    const ExperimentConfig& cfg_;
};

ResultRow row(std::vector<double> vars, std::string metric, double value, std::string method,
              std::optional<double> se = std::nullopt)
{
    return ResultRow{std::move(vars), std::move(metric), value, se, std::move(method)};
}

const std::string kMc = to_string(RateMethod::MonteCarlo);
const std::string kTheorem = to_string(RateMethod::ClosedFormTheorem1);
const std::string kFull = to_string(RateMethod::ClosedFormFullDigital);
const std::string kScaled = to_string(RateMethod::ScaledClosedForm);

// ---- spectral efficiency -------------------------------------------------

void rate_vs_snr(const Setup& st, ResultTable& t)
{
    t.variables = {"N", "snr_dB"};
    const int k = st.pairs(5);
    const double pp = st.pilot_power(db_to_linear(10));
    std::uint64_t point = 0;
    for (int n : st.antennas({64, 256}, {64, 128, 256, 512})) {
        for (double ps : st.user_powers(db_range(-10, 20, 5), db_range(-10, 20, 2.5))) {
            const auto s = st.scenario(n, k, ps, pp);
            const std::vector<double> v{double(n), linear_to_db(ps)};
            const auto mc = mc_sum_rate(s, st.monte_carlo(point++));
            t.rows.push_back(row(v, "sum_rate", mc.sum, kMc, mc.sum_stderr));
            t.rows.push_back(row(v, "sum_rate", closed_form_theorem1(s).sum, kTheorem));
            t.rows.push_back(row(v, "sum_rate", full_digital_rate(s).sum, kFull));
        }
    }
}

void power_scaling(const Setup& st, ResultTable& t)
{
    t.variables = {"N"};
    const auto& cfg = st.cfg();
    const int k = st.pairs(5);
    const double beta = cfg.beta.value_or(1.0);
    const double pp = st.pilot_power(db_to_linear(10));
    const double es = cfg.user_budget.value_or(db_to_linear(-10));
    const double er = cfg.relay_budget.value_or(db_to_linear(-10));
    std::vector<int> desk, full;
    for (int n = 64; n <= 4096; n *= 2) desk.push_back(n);
    for (int n = 16; n <= 16384; n *= 2) full.push_back(n);
    for (int n : st.antennas(desk, full)) {
        auto s = st.scenario(n, k, 1.0, pp);
        const std::vector<double> v{double(n)};
        const auto fixed = estimation_variances(beta, s.pilot_length, pp);

        ScalingSpec one{1.0, es, er, ScalingCase::FixedPilot};
        t.rows.push_back(row(v, "case1_sum_rate", scaled_sum_rate(s, one).sum, kScaled));
        t.rows.push_back(row(v, "case1_limit", fixed_pilot_limit(k, es, er, fixed.sigma2), kScaled));

        ScalingSpec two{0.5, es, er, ScalingCase::ScaledPilot};
        t.rows.push_back(row(v, "case2_sum_rate", scaled_sum_rate(s, two).sum, kScaled));
        t.rows.push_back(row(v, "case2_limit", scaled_pilot_limit(k, es, er, s.pilot_length, beta), kScaled));
    }
}

void quantization(const Setup& st, ResultTable& t)
{
    t.variables = {"B", "snr_dB"};
    const auto& cfg = st.cfg();
    const int k = st.pairs(5);
    const int n = st.antennas({256}, {256}).front();
    const double pp = st.pilot_power(db_to_linear(10));
    const std::vector<int> bits = cfg.phase_bits.value_or(std::vector<int>{0, 1, 2, 4});
    std::uint64_t point = 0;
    for (int b : bits) {
        for (double ps : st.user_powers(db_range(0, 20, 20), db_range(-10, 20, 2.5))) {
            auto s = st.scenario(n, k, ps, pp);
            if (b > 0) s.phase_bits = b;
            const auto mc = mc_sum_rate(s, st.monte_carlo(point++));
            t.rows.push_back(row({double(b), linear_to_db(ps)}, "sum_rate", mc.sum, kMc, mc.sum_stderr));
        }
    }
}

void overhead_throughput(const Setup& st, ResultTable& t)
{
    t.variables = {"snr_dB"};
    const auto& cfg = st.cfg();
    const int k = st.pairs(4);
    const int n = st.antennas({64}, {64}).front();
    const double coherence = cfg.coherence ? cfg.coherence->front() : 600.0;
    const double pp = st.pilot_power(db_to_linear(10));
    std::uint64_t point = 0;
    for (double ps : st.user_powers(db_range(-10, 20, 5), db_range(-10, 20, 2.5))) {
        const auto s = st.scenario(n, k, ps, pp);
        const std::vector<double> v{linear_to_db(ps)};
        const auto mc = mc_sum_rate(s, st.monte_carlo(point++));
        const double lim = throughput_with_overhead(1.0, coherence, n, k, OverheadMode::Limited);
        const double full = throughput_with_overhead(1.0, coherence, n, k, OverheadMode::Full);
        t.rows.push_back(row(v, "throughput_hybrid", mc.sum * lim, kMc, mc.sum_stderr * lim));
        t.rows.push_back(row(v, "throughput_hybrid", closed_form_theorem1(s).sum * lim, kTheorem));
        t.rows.push_back(row(v, "throughput_full_rf", full_digital_rate(s).sum * full, kFull));
    }
}

void coherence_time(const Setup& st, ResultTable& t)
{
    t.variables = {"T"};
    const auto& cfg = st.cfg();
    const int k = st.pairs(4);
    const int n = st.antennas({64}, {64}).front();
    const double ps = st.user_power(db_to_linear(5));
    const double pp = st.pilot_power(db_to_linear(5));
    const auto s = st.scenario(n, k, ps, pp);
    const auto mc = mc_sum_rate(s, st.monte_carlo(0));
    const double closed = closed_form_theorem1(s).sum;
    const double full = full_digital_rate(s).sum;
    const auto grid = cfg.coherence.value_or(cfg.full ? linear_range(100, 2000, 50) : linear_range(100, 1000, 100));
    for (double coh : grid) {
        const std::vector<double> v{coh};
        const double lim = throughput_with_overhead(1.0, coh, n, k, OverheadMode::Limited);
        t.rows.push_back(row(v, "throughput_hybrid", mc.sum * lim, kMc, mc.sum_stderr * lim));
        t.rows.push_back(row(v, "throughput_hybrid", closed * lim, kTheorem));
        t.rows.push_back(row(v, "throughput_full_rf",
                             full * throughput_with_overhead(1.0, coh, n, k, OverheadMode::Full), kFull));
    }
}

void mmwave_rate(const Setup& st, ResultTable& t)
{
    t.variables = {"N", "snr_dB"};
    const auto& cfg = st.cfg();
    const int k = st.pairs(5);
    const double pp = st.pilot_power(db_to_linear(10));
    MmWaveModel model;
    model.paths = cfg.paths.value_or(10);
    model.spacing = cfg.spacing.value_or(0.5);
    std::uint64_t point = 0;
    for (int n : st.antennas({64, 128}, {64, 128, 256})) {
        for (double ps : st.user_powers(db_range(-10, 20, 10), db_range(-10, 20, 5))) {
            auto s = st.scenario(n, k, ps, pp);
            s.model = model;
            const std::vector<double> v{double(n), linear_to_db(ps)};
            const auto mc = mc_sum_rate(s, st.monte_carlo(point++));
            t.rows.push_back(row(v, "sum_rate_mmwave", mc.sum, kMc, mc.sum_stderr));
            s.model = RayleighModel{};
            t.rows.push_back(row(v, "sum_rate_rayleigh", closed_form_theorem1(s).sum, kTheorem));
            t.rows.push_back(row(v, "sum_rate_rayleigh", full_digital_rate(s).sum, kFull));
        }
    }
}

// ---- energy efficiency ---------------------------------------------------

const std::string kEe = "closed-form-ee";

Scenario ee_scenario(const Setup& st, int default_n, double default_pp)
{
    const int n = st.antennas({default_n}, {default_n}).front();
    return st.scenario(n, st.pairs(5), 1.0, st.pilot_power(default_pp));
}

std::vector<double> surface_grid(const Setup& st)
{
    return st.cfg().full ? db_range(-20, 20, 0.5) : db_range(-20, 20, 1);
}

void ee_surface(const Setup& st, ResultTable& t)
{
    t.variables = {"P_s_dB", "P_r_dB"};
    const auto s = ee_scenario(st, 256, db_to_linear(10));
    const auto grid = surface_grid(st);
    double best = -1, best_s = 0, best_r = 0;
    for (double ps : grid) {
        for (double pr : grid) {
            const auto r = energy_efficiency(ps, pr, s, st.cfg().power);
            const std::vector<double> v{linear_to_db(ps), linear_to_db(pr)};
            t.rows.push_back(row(v, "ee", r.ee, kEe));
            t.rows.push_back(row(v, "se", r.se, kEe));
            if (r.ee > best) {
                best = r.ee;
                best_s = ps;
                best_r = pr;
            }
        }
    }
    t.rows.push_back(row({kNone, kNone}, "argmax_P_s_dB", linear_to_db(best_s), kEe));
    t.rows.push_back(row({kNone, kNone}, "argmax_P_r_dB", linear_to_db(best_r), kEe));
    t.rows.push_back(row({kNone, kNone}, "argmax_ee", best, kEe));
}

void ee_constraint(const Setup& st, ResultTable& t)
{
    t.variables = {"P_T", "relay_share"};
    const auto s = ee_scenario(st, 256, db_to_linear(10));
    const double k2 = 2.0 * s.pairs;
    const auto totals = st.cfg().total_powers.value_or(std::vector<double>{10, 20, 40});
    const int steps = st.cfg().full ? 999 : 99;
    for (double total : totals) {
        double best = -1, best_share = 0;
        for (int i = 1; i <= steps; ++i) {
            const double share = double(i) / (steps + 1);
            const double ee = energy_efficiency(total * (1 - share) / k2, total * share, s, st.cfg().power).ee;
            t.rows.push_back(row({total, share}, "ee", ee, kEe));
            if (ee > best) {
                best = ee;
                best_share = share;
            }
        }
        t.rows.push_back(row({total, kNone}, "best_relay_share", best_share, kEe));
    }
}

void ee_contour(const Setup& st, ResultTable& t)
{
    t.variables = {"P_T"};
    const auto s = ee_scenario(st, 256, db_to_linear(10));
    const double k2 = 2.0 * s.pairs;
    const auto totals = st.cfg().total_powers.value_or(db_range(0, 30, st.cfg().full ? 1 : 5));
    const int steps = 9999;
    for (double total : totals) {
        double best = -1, best_s = 0, best_r = 0;
        for (int i = 1; i <= steps; ++i) {
            const double pr = total * i / (steps + 1);
            const double ps = (total - pr) / k2;
            const double ee = energy_efficiency(ps, pr, s, st.cfg().power).ee;
            if (ee > best) {
                best = ee;
                best_s = ps;
                best_r = pr;
            }
        }
        const std::vector<double> v{total};
        t.rows.push_back(row(v, "tangent_P_s", best_s, kEe));
        t.rows.push_back(row(v, "tangent_P_r", best_r, kEe));
        t.rows.push_back(row(v, "tangent_ee", best, kEe));
        t.rows.push_back(row(v, "line_offset", (best_r - k2 * best_s) / total, kEe));
    }
}

void green_points(const Setup& st, ResultTable& t)
{
    t.variables = {"P_0", "P_const", "P_APS"};
    const int n = st.antennas({128}, {128}).front();
    const auto s = st.scenario(n, st.pairs(5), 1.0, kPerfectCsi);
    std::vector<PowerModel> models;
    const std::vector<double> p0s = st.cfg().full ? std::vector<double>{0.25, 0.5, 1, 2, 4} : std::vector<double>{0.5, 1, 2};
    const std::vector<double> consts = st.cfg().full ? std::vector<double>{5, 10, 20, 40, 80} : std::vector<double>{10, 20, 40};
    const std::vector<double> aps = {0.01, 0.02};
    for (double p0 : p0s)
        for (double pc : consts)
            for (double a : aps) {
                PowerModel m = st.cfg().power;
                m.P_0 = p0;
                m.P_const = pc;
                m.P_APS = a;
                models.push_back(m);
            }
    const auto fit = green_point_line(s, models);
    const std::string method = "optimizer";
    for (std::size_t i = 0; i < models.size(); ++i) {
        const std::vector<double> v{models[i].P_0, models[i].P_const, models[i].P_APS};
        t.rows.push_back(row(v, "se_opt", fit.points[i].se, method));
        t.rows.push_back(row(v, "log_ee_opt", fit.points[i].log_ee, method));
        t.rows.push_back(row(v, "P_s_opt", fit.points[i].user_power, method));
    }
    const std::vector<double> none{kNone, kNone, kNone};
    t.rows.push_back(row(none, "fit_slope", fit.slope, "least-squares"));
    t.rows.push_back(row(none, "fit_intercept", fit.intercept, "least-squares"));
    t.rows.push_back(row(none, "fit_max_residual", fit.max_residual, "least-squares"));
    t.rows.push_back(row(none, "predicted_slope", fit.predicted_slope, kEe));
    t.rows.push_back(row(none, "predicted_intercept", fit.predicted_intercept, kEe));
}

void ee_vs_rf_chains(const Setup& st, ResultTable& t)
{
    t.variables = {"N", "L"};
    const auto& cfg = st.cfg();
    const double ps = st.user_power(db_to_linear(5));
    const double pp = st.pilot_power(db_to_linear(5));
    const int max_pairs = cfg.full ? 32 : 20;
    for (int n : st.antennas({128, 256, 512}, {128, 256, 512})) {
        // Estimation quality of the template is held fixed while K varies.
        const auto tmpl = st.scenario(n, st.pairs(5), ps, pp);
        const auto curve = search_rf_chains(n, ps, tmpl, cfg.power, max_pairs);
        for (const auto& p : curve.curve) {
            const std::vector<double> v{double(n), double(p.rf_chains)};
            t.rows.push_back(row(v, "ee", p.ee, kEe));
            t.rows.push_back(row(v, "condition_satisfied", p.condition_satisfied ? 1 : 0, kEe));
        }
        const auto constrained = optimize_rf_chains(n, ps, tmpl, cfg.power);
        const std::vector<double> v{double(n), kNone};
        t.rows.push_back(row(v, "best_L", curve.best_rf_chains, kEe));
        t.rows.push_back(row(v, "best_L_condition_satisfied",
                             condition_check(n, curve.best_rf_chains).satisfied ? 1 : 0, kEe));
        t.rows.push_back(row(v, "best_L_constrained", constrained.best_rf_chains, kEe));
        t.rows.push_back(row(v, "unimodal", curve.unimodal ? 1 : 0, kEe));
    }
}

struct Entry {
    ExperimentInfo info;
    std::function<void(const Setup&, ResultTable&)> run;
};

const std::vector<Entry>& registry()
{
    static const std::vector<Entry> entries = {
        {{"rate-vs-snr", "sum rate vs SNR: Monte Carlo, closed form, full RF chains"}, rate_vs_snr},
        {{"power-scaling", "sum rate vs N with transmit power scaled down, both pilot cases"}, power_scaling},
        {{"quantization", "sum rate vs SNR for B-bit phase shifters"}, quantization},
        {{"overhead-throughput", "throughput vs SNR including training overhead"}, overhead_throughput},
        {{"coherence-time", "throughput vs coherence time T"}, coherence_time},
        {{"mmwave-rate", "sum rate vs SNR over a few-path mmWave channel"}, mmwave_rate},
        {{"ee-surface", "EE over the (P_s, P_r) grid"}, ee_surface},
        {{"ee-constraint", "EE vs relay share of a total power budget"}, ee_constraint},
        {{"ee-contour", "EE-maximizing split on each total power contour"}, ee_contour},
        {{"green-points", "optimal (SE, log EE) pairs under perfect CSI and their line fit"}, green_points},
        {{"ee-vs-L", "EE vs number of RF chains"}, ee_vs_rf_chains},
    };
    return entries;
}

} // namespace

const std::vector<ExperimentInfo>& experiments()
{
    static const std::vector<ExperimentInfo> infos = [] {
        std::vector<ExperimentInfo> out;
        for (const auto& e : registry()) out.push_back(e.info);
        return out;
    }();
    return infos;
}

bool is_experiment(std::string_view name)
{
    for (const auto& e : registry())
        if (e.info.name == name) return true;
    return false;
}

ResultTable run_experiment(const ExperimentConfig& cfg)
{
    if (cfg.trials < 1) throw InvalidParameter("trials must be >= 1");
    if (cfg.workers < 1) throw InvalidParameter("workers must be >= 1");
    for (const auto& e : registry()) {
        if (e.info.name != cfg.experiment) continue;
        ResultTable t;
        t.experiment = cfg.experiment;
        t.seed = cfg.seed;
        t.trials = cfg.trials;
        e.run(Setup(cfg), t);
        return t;
    }
    throw InvalidParameter("unknown experiment '" + cfg.experiment + "'");
}

} // namespace mimorelay
