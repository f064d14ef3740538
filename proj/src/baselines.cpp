// SPDX-License-Identifier: Apache-2.0
#include "nfmimo/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "nfmimo/capacity.hpp"
#include "nfmimo/waterfill.hpp"

namespace nfmimo {

double fully_digital_precoder(const ChannelMatrix& h, double total_power,
                              double noise_power) {
    return exact_capacity(h, total_power, noise_power).capacity_bits;
}

double fully_connected_baseline(const ChannelMatrix& h, int rf_chains,
                                double total_power, double noise_power) {
    const auto& entries = h.entries();
    const int nt = static_cast<int>(entries.cols());
    if (rf_chains < 1 || rf_chains > nt)
        throw std::invalid_argument("rf_chains must be in [1, Nt]");

    Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries.adjoint() * entries);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolve failed");

    // Top rf_chains right singular vectors.
    CMatrix v(nt, rf_chains);
    for (int k = 0; k < rf_chains; ++k) v.col(k) = solver.eigenvectors().col(nt - 1 - k);

    // Constant-modulus analog matrix from the singular-vector phases.
    CMatrix f_analog(nt, rf_chains);
    for (int i = 0; i < nt; ++i)
        for (int k = 0; k < rf_chains; ++k) {
            const double mag = std::abs(v(i, k));
            f_analog(i, k) = mag > 0.0 ? v(i, k) / mag : Complex(1.0, 0.0);
        }

    // Best digital stage for that analog matrix: orthonormalize the analog
    // columns, run eigenmode transmission with water-filling over the
    // effective channel, and fold the basis change back into F_D. Nested
    // analog spans make the rate monotone in the chain count.
    const Eigen::HouseholderQR<CMatrix> qr(f_analog);
    const CMatrix q = CMatrix(qr.householderQ()).leftCols(rf_chains);
    const CMatrix he = entries * q;

    Eigen::SelfAdjointEigenSolver<CMatrix> effective(he.adjoint() * he);
    if (effective.info() != Eigen::Success) throw std::runtime_error("eigensolve failed");
    std::vector<double> e_gains(rf_chains);
    CMatrix ve(rf_chains, rf_chains);
    for (int k = 0; k < rf_chains; ++k) {
        e_gains[k] = std::max(0.0, effective.eigenvalues()(rf_chains - 1 - k));
        ve.col(k) = effective.eigenvectors().col(rf_chains - 1 - k);
    }
    const double floor = kGainFloor * std::max(e_gains.front(), 0.0);
    std::vector<double> usable;
    for (double g : e_gains)
        if (g > floor) usable.push_back(g);
    if (usable.empty()) throw std::invalid_argument("no usable subchannel");
    const PowerAllocation alloc = water_fill(usable, total_power, noise_power);

    double bits = 0.0;
    for (std::size_t k = 0; k < usable.size(); ++k)
        bits += std::log2(1.0 + alloc.per_stream_power[k] * usable[k] / noise_power);
    return bits;
}

SubarrayPartition contiguous_blocks(int num_antennas, int rf_chains) {
    if (rf_chains < 1 || rf_chains > num_antennas)
        throw std::invalid_argument("rf_chains must be in [1, Nt]");
    const int base = num_antennas / rf_chains;
    SubarrayPartition partition;
    partition.sets.resize(rf_chains);
    for (int k = 0; k < rf_chains; ++k) {
        const int begin = k * base;
        const int end = (k == rf_chains - 1) ? num_antennas : begin + base;
        for (int j = begin; j < end; ++j) partition.sets[k].push_back(j);
    }
    partition.bound = static_cast<int>(partition.sets.back().size());
    return partition;
}

double sub_connected_static_baseline(const ChannelMatrix& h, int rf_chains,
                                     double total_power, double noise_power) {
    const SubarrayPartition partition =
        contiguous_blocks(static_cast<int>(h.tx_count()), rf_chains);
    SelectionMatrix selection = build_selection(partition);
    AnalogPrecoder analog = build_analog(h, partition);
    CMatrix digital = build_digital(h, analog, selection, total_power, noise_power);
    const PrecoderTriple triple{std::move(analog), std::move(selection),
                                std::move(digital), rf_chains};
    return spectrum_efficiency(h, triple, noise_power);
}

}  // namespace nfmimo
