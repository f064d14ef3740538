// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "nfmimo/types.hpp"

namespace nfmimo {

/// Water-filling power split over parallel subchannels.
struct PowerAllocation {
    std::vector<double> per_stream_power;  // p_i >= 0, sum = total_power
    double water_level = 0.0;              // 1/mu
    double total_power = 0.0;
    double noise_power = 0.0;
};

/// KKT-optimal allocation p_i = (water_level - noise/gain_i)^+ over positive
/// channel power gains (squared singular values). The water level is located
/// by bisection until the power residual falls below 1e-12 relative.
/// Throws "no usable subchannel" when no positive gain is supplied.
PowerAllocation water_fill(std::span<const double> gains, double total_power,
                           double noise_power);

}  // namespace nfmimo
