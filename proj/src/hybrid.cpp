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

#include "mimorelay/hybrid.hpp"

#include <sstream>
#include <vector>

namespace mimorelay {

CMatrix analog_combiner(const CMatrix& G_hat)
{
    const Eigen::Index n = G_hat.rows();
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    CMatrix F(G_hat.cols(), n);
    for (Eigen::Index j = 0; j < G_hat.cols(); ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const cplx g = G_hat(i, j);
            const double mag = std::sqrt(std::norm(g));
            F(j, i) = mag > 0 ? std::conj(g) * (scale / mag) : cplx(scale, 0.0);
        }
    }
    return F;
}

int quantize_phase_index(double phase, int bits)
{
    if (bits < 1) throw InvalidParameter("quantization bits B must be >= 1");
    const long levels = 1L << bits;
    const double step = 2.0 * kPi / static_cast<double>(levels);
    double wrapped = std::fmod(phase, 2.0 * kPi);
    if (wrapped < 0) wrapped += 2.0 * kPi;
    const double pos = wrapped / step;
    const long below = static_cast<long>(std::floor(pos));
    const double frac = pos - static_cast<double>(below);
    long lower = below % levels;
    long upper = (below + 1) % levels;
    if (frac < 0.5) return static_cast<int>(lower);
    if (frac > 0.5) return static_cast<int>(upper);
    return static_cast<int>(std::min(lower, upper));
}

CMatrix quantize_phases(const CMatrix& F_r, int bits)
{
    if (bits < 1) throw InvalidParameter("quantization bits B must be >= 1");
    const long levels = 1L << bits;
    const double step = 2.0 * kPi / static_cast<double>(levels);
    std::vector<cplx> codebook(levels);
    for (long m = 0; m < levels; ++m) codebook[m] = std::polar(1.0, step * m);
    CMatrix Q(F_r.rows(), F_r.cols());
    for (Eigen::Index c = 0; c < F_r.cols(); ++c) {
        for (Eigen::Index r = 0; r < F_r.rows(); ++r) {
            const cplx v = F_r(r, c);
            Q(r, c) = std::sqrt(std::norm(v)) * codebook[quantize_phase_index(std::arg(v), bits)];
        }
    }
    return Q;
}

CMatrix digital_combiner(const CMatrix& F_r, const CMatrix& G_hat, double* condition)
{
    if (F_r.cols() != G_hat.rows() || F_r.rows() != G_hat.cols())
        throw InvalidParameter("digital_combiner: F_r must be 2K x N and G_hat N x 2K");
    const CMatrix H = F_r * G_hat;
    CMatrix inv = H.partialPivLu().inverse();
    const double norm_h = H.cwiseAbs().colwise().sum().maxCoeff();
    const double norm_inv = inv.cwiseAbs().colwise().sum().maxCoeff();
    double cond = norm_h * norm_inv;
    if (!std::isfinite(cond)) cond = std::numeric_limits<double>::infinity();
    if (condition) *condition = cond;
    if (!(cond <= kMaxCondition)) {
        std::ostringstream os;
        os << "equivalent channel is near-singular (condition number " << cond << ")";
        throw SingularChannel(os.str(), cond);
    }
    return inv;
}

RMatrix pair_permutation(int pairs)
{
    if (pairs < 1) throw InvalidParameter("pair count K must be >= 1");
    RMatrix P = RMatrix::Zero(2 * pairs, 2 * pairs);
    for (int i = 0; i < pairs; ++i) {
        P(2 * i, 2 * i + 1) = 1.0;
        P(2 * i + 1, 2 * i) = 1.0;
    }
    return P;
}

DownlinkWeights downlink_weights(const CMatrix& F_r, const CMatrix& W_r, int pairs)
{
    if (W_r.rows() != 2 * pairs || W_r.cols() != 2 * pairs || F_r.rows() != 2 * pairs)
        throw InvalidParameter("downlink_weights: combiner dimensions do not match 2K");
    DownlinkWeights d;
    d.F_t = F_r.transpose();
    d.P = pair_permutation(pairs);
    // W_r^T P only swaps the columns of W_r^T within each pair.
    d.W_t = W_r.transpose() * d.P.cast<cplx>();
    return d;
}

double normalization(const CMatrix& F_t, const CMatrix& W_t)
{
    const double norm = (F_t * W_t).norm();
    if (!(norm > 0) || !std::isfinite(norm))
        throw InvalidState("normalization: precoder F_t W_t is zero or not finite");
    return 1.0 / norm;
}

HybridWeights build_hybrid_weights(const CMatrix& G_hat, int pairs, std::optional<int> phase_bits)
{
    if (G_hat.cols() != 2 * pairs) throw InvalidParameter("G_hat must have 2K columns");
    HybridWeights w;
    w.F_r = analog_combiner(G_hat);
    if (phase_bits) w.F_r = quantize_phases(w.F_r, *phase_bits);
    w.W_r = digital_combiner(w.F_r, G_hat, &w.condition);
    auto down = downlink_weights(w.F_r, w.W_r, pairs);
    w.F_t = std::move(down.F_t);
    w.W_t = std::move(down.W_t);
    w.P = std::move(down.P);
    w.mu = normalization(w.F_t, w.W_t);
    return w;
}

} // namespace mimorelay
