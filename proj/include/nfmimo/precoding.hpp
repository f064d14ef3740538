// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "nfmimo/capacity.hpp"
#include "nfmimo/channel.hpp"
#include "nfmimo/pswf.hpp"

namespace nfmimo {

/// Disjoint index sets S_1..S_Ns assigning every transmit antenna to exactly
/// one active RF chain; no set may exceed `bound` antennas.
struct SubarrayPartition {
    std::vector<std::vector<int>> sets;  // 0-based antenna indices, each sorted
    int bound = 0;

    int antenna_count() const;
};

/// Nt x Ns binary antenna-to-chain map with exactly one 1 per row. Stored as
/// the per-antenna chain index.
class SelectionMatrix {
  public:
    SelectionMatrix(std::vector<int> chain_of_antenna, int num_chains);

    int rows() const { return static_cast<int>(chain_of_antenna_.size()); }
    int cols() const { return num_chains_; }
    int chain_of(int antenna) const { return chain_of_antenna_[antenna]; }
    std::vector<int> column_sizes() const;
    Matrix dense() const;

  private:
    std::vector<int> chain_of_antenna_;
    int num_chains_;
};

/// Diagonal of the Nt x Nt analog precoder; every entry unit modulus.
struct AnalogPrecoder {
    CVector phases;
};

struct PrecoderTriple {
    AnalogPrecoder analog;
    SelectionMatrix selection;
    CMatrix digital;  // Ns x Ns
    int streams = 0;
};

/// Count of subchannels that receive nonzero water-filled power when the
/// sinc-kernel eigenvalues (rescaled to the channel power) are treated as the
/// subchannel gains. Always at least 1.
int select_stream_count(const PswfSpectrum& spectrum, double channel_power,
                        double total_power, double noise_power);

/// Normalized Minkowski l1 surrogate for the largest eigenvalue of the
/// principal submatrix: (1/|s|) sum_{i in s} sum_{j in s} r(i, j).
/// `r_abs` holds entry magnitudes.
double minkowski_surrogate(const Matrix& r_abs, std::span<const int> s);

/// Greedy partition of the transmit antennas into `streams` subarrays driven
/// by correlation magnitudes |(H^H H)_ij|: antennas join the set with the best
/// surrogate gain, overflowing sets shed their least coherent member, and a
/// final pass re-homes each set's weakest contributor. All ties break toward
/// the lowest index, so the result is deterministic.
SubarrayPartition partition_subarrays(const ChannelMatrix& h, int streams, int bound);

SelectionMatrix build_selection(const SubarrayPartition& partition);

/// Per-subarray constant-modulus phasing: each subarray is steered along the
/// dominant right singular vector of its column block, magnitudes discarded.
/// The vector's first nonzero entry is rotated to the positive real axis
/// before taking angles, fixing the global phase.
AnalogPrecoder build_analog(const ChannelMatrix& h, const SubarrayPartition& partition);

/// Digital stage: eigenmode transmission over the effective channel
/// H F_A F_S. The effective columns have disjoint support and squared norm
/// |S_i|, so the channel is first column-normalized by D^{-1/2},
/// D = diag(|S_i|); the water-filled power matrix then meets the total power
/// constraint with equality once D^{-1/2} is folded back into F_D.
CMatrix build_digital(const ChannelMatrix& h, const AnalogPrecoder& analog,
                      const SelectionMatrix& selection, double total_power,
                      double noise_power);

/// H * diag(phases) * F_S, assembled by gathering columns.
CMatrix effective_channel(const ChannelMatrix& h, const AnalogPrecoder& analog,
                          const SelectionMatrix& selection);

/// log2 det(I + H F_A F_S F_D F_D^H F_S^H F_A^H H^H / noise_power).
double spectrum_efficiency(const ChannelMatrix& h, const PrecoderTriple& p,
                           double noise_power);

struct DapResult {
    PrecoderTriple precoder;
    SubarrayPartition partition;
    double se_bits = 0.0;
    double bandwidth_parameter = 0.0;
};

/// End-to-end distance-aware precoding: sinc-kernel spectrum -> stream count
/// (water-filling), subarray partition, selection/analog/digital stages, and
/// the achieved spectrum efficiency. `forced_streams` > 0 bypasses the
/// water-filling stream selection. The subarray size bound defaults to
/// ceil(Nt / Ns) + bound_slack.
DapResult dap_pipeline(const LinkGeometry& link, double total_power,
                       double noise_power, int bound_slack = 2,
                       int quadrature_order = 512, int forced_streams = 0);

struct ConstraintReport {
    bool power_ok = false;         // ||F_A F_S F_D||_F^2 == total_power (1e-9 rel)
    bool unit_modulus_ok = false;  // analog entries
    bool selection_ok = false;     // binary, one chain per antenna
    double power_ratio = 0.0;      // measured / budget

    bool all_ok() const { return power_ok && unit_modulus_ok && selection_ok; }
};

ConstraintReport validate_triple(const PrecoderTriple& p, double total_power);

}  // namespace nfmimo
