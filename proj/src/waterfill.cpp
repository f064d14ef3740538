// SPDX-License-Identifier: Apache-2.0
#include "nfmimo/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nfmimo {

PowerAllocation water_fill(std::span<const double> gains, double total_power,
                           double noise_power) {
    if (gains.empty()) throw std::invalid_argument("no usable subchannel");
    if (!(total_power > 0.0)) throw std::invalid_argument("total_power must be positive");
    if (!(noise_power > 0.0)) throw std::invalid_argument("noise_power must be positive");
    if (std::all_of(gains.begin(), gains.end(), [](double g) { return g <= 0.0; }))
        throw std::invalid_argument("no usable subchannel");
    for (double g : gains)
        if (!(g > 0.0)) throw std::invalid_argument("gains must be positive");

    const auto spent = [&](double level) {
        double sum = 0.0;
        for (double g : gains) sum += std::max(0.0, level - noise_power / g);
        return sum;
    };

    double lo = 0.0;
    double hi = 0.0;
    for (double g : gains) hi = std::max(hi, noise_power / g);
    hi += total_power;

    double level = hi;
    for (int iter = 0; iter < 200; ++iter) {
        level = 0.5 * (lo + hi);
        const double used = spent(level);
        if (std::abs(used - total_power) <= 1e-12 * total_power) break;
        (used > total_power ? hi : lo) = level;
    }

    PowerAllocation alloc;
    alloc.water_level = level;
    alloc.total_power = total_power;
    alloc.noise_power = noise_power;
    alloc.per_stream_power.reserve(gains.size());
    for (double g : gains)
        alloc.per_stream_power.push_back(std::max(0.0, level - noise_power / g));
    return alloc;
}

}  // namespace nfmimo
