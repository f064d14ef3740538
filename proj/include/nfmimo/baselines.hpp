// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nfmimo/channel.hpp"
#include "nfmimo/precoding.hpp"

namespace nfmimo {

/// Unconstrained precoding benchmark: equals the channel capacity.
double fully_digital_precoder(const ChannelMatrix& h, double total_power,
                              double noise_power);

/// Simplified fully-connected hybrid stand-in: the analog matrix carries the
/// entrywise phases of the top rf_chains right singular vectors, the digital
/// matrix is the least-squares fit to the water-filled optimal precoder,
/// rescaled to the power budget.
double fully_connected_baseline(const ChannelMatrix& h, int rf_chains,
                                double total_power, double noise_power);

/// Contiguous equal blocks of Nt / rf_chains antennas; the last block absorbs
/// any remainder.
SubarrayPartition contiguous_blocks(int num_antennas, int rf_chains);

/// Simplified static sub-connected stand-in: fixed contiguous blocks with
/// per-block matched phasing and a water-filled digital stage.
double sub_connected_static_baseline(const ChannelMatrix& h, int rf_chains,
                                     double total_power, double noise_power);

}  // namespace nfmimo
