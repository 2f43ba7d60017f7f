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

#include <optional>

namespace mimorelay {

/// Analog/digital combining (uplink) and precoding (downlink) weights.
struct HybridWeights {
    CMatrix F_r;  // 2K x N, unit-modulus entries scaled by 1/sqrt(N)
    CMatrix W_r;  // 2K x 2K, inverse of the equivalent channel F_r * G_hat
    CMatrix F_t;  // N x 2K, F_r transposed
    CMatrix W_t;  // 2K x 2K, W_r^T * P
    RMatrix P;    // pair-swap permutation
    double mu = 1.0;
    double condition = 1.0;  // 1-norm condition number of F_r * G_hat
};

/// Equivalent channels with a larger condition number are rejected.
inline constexpr double kMaxCondition = 1e12;

/// Phase-only combiner: [F_r]_{j,i} = conj(g_hat_{i,j}) / (|g_hat_{i,j}| sqrt(N)).
/// A zero estimate entry maps to phase 0.
CMatrix analog_combiner(const CMatrix& G_hat);

/// Snaps every phase of F_r to the closest point of the 2^B-level uniform
/// codebook {2 pi m / 2^B}; equidistant phases go to the smaller index m.
CMatrix quantize_phases(const CMatrix& F_r, int bits);

/// Codebook index chosen for phase `phase` (radians, any range).
int quantize_phase_index(double phase, int bits);

/// W_r = (F_r G_hat)^{-1}. Throws SingularChannel when cond(F_r G_hat) > kMaxCondition.
CMatrix digital_combiner(const CMatrix& F_r, const CMatrix& G_hat, double* condition = nullptr);

/// Block-diagonal permutation with K blocks [[0,1],[1,0]].
RMatrix pair_permutation(int pairs);

struct DownlinkWeights {
    CMatrix F_t;
    CMatrix W_t;
    RMatrix P;
};

DownlinkWeights downlink_weights(const CMatrix& F_r, const CMatrix& W_r, int pairs);

/// mu = 1 / ||F_t W_t||_F, so that the relay signal has unit average power for
/// this channel draw.
double normalization(const CMatrix& F_t, const CMatrix& W_t);

/// Full construction chain for one channel estimate. `phase_bits` selects
/// quantized phase shifters.
HybridWeights build_hybrid_weights(const CMatrix& G_hat, int pairs,
                                   std::optional<int> phase_bits = std::nullopt);

} // namespace mimorelay
