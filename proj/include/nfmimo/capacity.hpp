// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "nfmimo/channel.hpp"
#include "nfmimo/pswf.hpp"
#include "nfmimo/waterfill.hpp"

namespace nfmimo {

enum class CapacityMethod { exact_svd, pswf_waterfill, equal_power_dof };

struct CapacityReport {
    double capacity_bits = 0.0;            // bits/s/Hz
    std::vector<double> singular_values;   // decreasing, >= 0
    PowerAllocation allocation;            // aligned with singular_values
    CapacityMethod method = CapacityMethod::exact_svd;
};

/// Squared singular values of a complex matrix, decreasing, clamped at zero.
/// Computed from the smaller Gram matrix; only the spectrum is formed.
std::vector<double> squared_singular_values(const CMatrix& m);

/// Shannon capacity of the channel: SVD + water-filling over the subchannel
/// gains. Gains below 1e-14 of the strongest are treated as numerical zeros.
CapacityReport exact_capacity(const ChannelMatrix& h, double total_power,
                              double noise_power);

/// Capacity estimate that sidesteps the SVD: subchannel gains are the sinc
/// kernel eigenvalues rescaled to carry the full channel power
/// (gain_n = v_n * channel_power / sum v), then water-filled as usual.
CapacityReport pswf_capacity_estimate(const PswfSpectrum& spectrum,
                                      double channel_power, double total_power,
                                      double noise_power);

/// Closed-form estimate assuming equal power over dof_estimate(link) equally
/// strong subchannels: N log2(1 + P * P_H / (sigma^2 N^2)).
double equal_power_capacity_approx(const LinkGeometry& link, double channel_power,
                                   double total_power, double noise_power);

struct OptimalDof {
    double n_star = 0.0;               // root of the transcendental condition
    double approximation = 0.0;        // sqrt(0.255 P P_H / sigma^2)
    double implied_coefficient = 0.0;  // n_star^2 sigma^2 / (P P_H), ~0.255
};

/// Stream count that maximizes the equal-power capacity expression, i.e. the
/// root N of (N^2 s^2/(P P_H) + 1) log2(1 + P P_H/(N^2 s^2)) = 2/ln2.
OptimalDof optimal_dof(double total_power, double channel_power, double noise_power);

}  // namespace nfmimo
