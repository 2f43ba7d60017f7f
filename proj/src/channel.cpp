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

#include "mimorelay/channel.hpp"

#include <boost/random/normal_distribution.hpp>

#include <sstream>
#include <string>

namespace mimorelay {

namespace {

using Normal = boost::random::normal_distribution<double>;

void fill_complex_normal(CMatrix& m, Eigen::Index col, double variance, Rng& rng,
                         Normal& normal)
{
    const double scale = std::sqrt(variance / 2.0);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        m(i, col) = cplx(scale * re, scale * im);
    }
}

void fill_variances(const Scenario& s, ChannelRealization& r, double beta_override = -1.0)
{
    const int users = s.users();
    r.sigma2.resize(users);
    r.eps2.resize(users);
    for (int j = 0; j < users; ++j) {
        const double beta = beta_override > 0 ? beta_override : s.betas[j];
        const auto v = estimation_variances(beta, s.pilot_length, s.pilot_power);
        r.sigma2[j] = v.sigma2;
        r.eps2[j] = v.eps2;
    }
}

} // namespace

void Scenario::validate() const
{
    auto fail = [](const std::string& msg) { throw InvalidParameter(msg); };
    if (antennas < 1) fail("antenna count N must be >= 1");
    if (pairs < 1) fail("pair count K must be >= 1");
    if (rf_chains != 2 * pairs) {
        std::ostringstream os;
        os << "RF chain count L must equal 2K (got L=" << rf_chains << ", K=" << pairs << ")";
        fail(os.str());
    }
    if (!(user_power >= 0)) fail("user power P_s must be >= 0");
    if (!(relay_power >= 0)) fail("relay power P_r must be >= 0");
    if (!(pilot_power > 0)) fail("pilot power P_p must be > 0");
    if (pilot_length < 2 * pairs) fail("pilot length tau must be >= 2K");
    if (static_cast<int>(betas.size()) != users()) fail("betas must have exactly 2K entries");
    for (double b : betas)
        if (!(b > 0) || !std::isfinite(b)) fail("every large-scale gain beta_j must be > 0");
    if (phase_bits && *phase_bits < 1) fail("phase quantization bits B must be >= 1");
    if (const auto* mm = std::get_if<MmWaveModel>(&model)) {
        if (mm->paths < 1) fail("mmWave path count N_p must be >= 1");
        if (!(mm->spacing >= 0)) fail("mmWave antenna spacing d must be >= 0");
    }
}

Scenario Scenario::symmetric(int antennas, int pairs, double user_power, double pilot_power,
                             double beta)
{
    Scenario s;
    s.antennas = antennas;
    s.pairs = pairs;
    s.rf_chains = 2 * pairs;
    s.user_power = user_power;
    s.relay_power = 2.0 * pairs * user_power;
    s.pilot_power = pilot_power;
    s.pilot_length = 2 * pairs;
    s.betas.assign(2 * pairs, beta);
    return s;
}

EstimationVariances estimation_variances(double beta, int tau, double pilot_power)
{
    if (!(beta > 0) || !std::isfinite(beta)) throw InvalidParameter("beta must be > 0");
    if (tau < 1) throw InvalidParameter("pilot length tau must be >= 1");
    if (!(pilot_power > 0)) throw InvalidParameter("pilot power must be > 0");
    if (pilot_power == kPerfectCsi) return {beta, 0.0};
    const double snr = tau * pilot_power;
    const double sigma2 = snr * beta * beta / (snr * beta + 1.0);
    return {sigma2, beta - sigma2};
}

cplx complex_normal(Rng& rng, double variance)
{
    Normal normal;
    const double scale = std::sqrt(variance / 2.0);
    const double re = normal(rng);
    const double im = normal(rng);
    return {scale * re, scale * im};
}

ChannelRealization gen_rayleigh(const Scenario& s, Rng& rng)
{
    s.validate();
    const int n = s.antennas;
    const int users = s.users();
    ChannelRealization r;
    fill_variances(s, r);
    r.G_hat.resize(n, users);
    r.E.resize(n, users);
    Normal normal;
    for (int j = 0; j < users; ++j) fill_complex_normal(r.G_hat, j, r.sigma2[j], rng, normal);
    if (s.perfect_csi()) {
        r.E.setZero();
    } else {
        for (int j = 0; j < users; ++j) fill_complex_normal(r.E, j, r.eps2[j], rng, normal);
    }
    r.G = r.G_hat + r.E;
    return r;
}

CVector steering_vector(int antennas, double spacing, double theta)
{
    CVector a(antennas);
    const double step = -2.0 * kPi * spacing * std::sin(theta);
    const double norm = 1.0 / std::sqrt(static_cast<double>(antennas));
    for (int i = 0; i < antennas; ++i) a(i) = std::polar(norm, step * i);
    return a;
}

CVector mmwave_user_channel(int antennas, double spacing, const std::vector<cplx>& gains,
                            const std::vector<double>& angles)
{
    if (gains.empty() || gains.size() != angles.size())
        throw InvalidParameter("mmWave channel needs one angle per path gain and >= 1 path");
    CVector g = CVector::Zero(antennas);
    for (std::size_t l = 0; l < gains.size(); ++l)
        g += gains[l] * steering_vector(antennas, spacing, angles[l]).conjugate();
    return g * std::sqrt(static_cast<double>(antennas) / static_cast<double>(gains.size()));
}

ChannelRealization gen_mmwave(const Scenario& s, Rng& rng)
{
    s.validate();
    const auto* mm = std::get_if<MmWaveModel>(&s.model);
    if (!mm) throw InvalidParameter("gen_mmwave requires an mmWave channel model");
    const int n = s.antennas;
    const int users = s.users();

    ChannelRealization r;
    // Per-element average power of the path-sum model is 1.
    fill_variances(s, r, 1.0);
    r.G.resize(n, users);
    Normal normal;
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    std::vector<cplx> gains(mm->paths);
    std::vector<double> angles(mm->paths);
    for (int k = 0; k < users; ++k) {
        for (int l = 0; l < mm->paths; ++l) {
            const double re = normal(rng);
            const double im = normal(rng);
            gains[l] = cplx(re, im) * std::sqrt(0.5);
            angles[l] = angle(rng);
        }
        r.G.col(k) = mmwave_user_channel(n, mm->spacing, gains, angles);
    }

    if (s.perfect_csi()) {
        r.G_hat = r.G;
        r.E = CMatrix::Zero(n, users);
        return r;
    }
    // LMMSE from y = g + w / sqrt(tau P_p): g_hat = c y, c = tau P_p / (tau P_p + 1).
    const double snr = s.pilot_length * s.pilot_power;
    const double c = snr / (snr + 1.0);
    CMatrix noise(n, users);
    for (int k = 0; k < users; ++k) fill_complex_normal(noise, k, 1.0 / snr, rng, normal);
    r.G_hat = c * (r.G + noise);
    r.E = r.G - r.G_hat;
    r.G = r.G_hat + r.E;
    return r;
}

ChannelRealization generate_channel(const Scenario& s, Rng& rng)
{
    if (s.is_mmwave()) return gen_mmwave(s, rng);
    return gen_rayleigh(s, rng);
}

} // namespace mimorelay
