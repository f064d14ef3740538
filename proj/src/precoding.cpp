// SPDX-License-Identifier: Apache-2.0
#include "nfmimo/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace nfmimo {

namespace {

constexpr double kNoGain = -std::numeric_limits<double>::infinity();

// Greedy working state for one partition run. Set membership and the
// pairwise-magnitude sums backing the surrogate are kept incrementally.
struct GreedyState {
    const Matrix& r_abs;
    std::vector<std::vector<int>> sets;
    std::vector<double> set_sum;  // sum of r_abs over set x set

    explicit GreedyState(const Matrix& r, int ns) : r_abs(r), sets(ns), set_sum(ns, 0.0) {}

    double cross(int set_index, int antenna) const {
        double sum = 0.0;
        for (int m : sets[set_index]) sum += r_abs(m, antenna);
        return sum;
    }

    // Surrogate improvement of adding `antenna` (not currently a member).
    double add_gain(int set_index, int antenna) const {
        const double size = double(sets[set_index].size());
        const double grown =
            set_sum[set_index] + 2.0 * cross(set_index, antenna) + r_abs(antenna, antenna);
        return grown / (size + 1.0) - set_sum[set_index] / size;
    }

    void add(int set_index, int antenna) {
        set_sum[set_index] +=
            2.0 * cross(set_index, antenna) + r_abs(antenna, antenna);
        sets[set_index].push_back(antenna);
    }

    void remove(int set_index, int antenna) {
        auto& s = sets[set_index];
        s.erase(std::find(s.begin(), s.end(), antenna));
        set_sum[set_index] -=
            2.0 * cross(set_index, antenna) + r_abs(antenna, antenna);
    }

    // Member whose row sum within the set is smallest; ties toward the lowest
    // antenna index.
    int least_contributor(int set_index) const {
        const auto& s = sets[set_index];
        int best = s.front();
        double best_sum = std::numeric_limits<double>::infinity();
        std::vector<int> sorted(s);
        std::sort(sorted.begin(), sorted.end());
        for (int m : sorted) {
            double sum = 0.0;
            for (int n : s) sum += r_abs(m, n);
            if (sum < best_sum) {
                best_sum = sum;
                best = m;
            }
        }
        return best;
    }
};

}  // namespace

int SubarrayPartition::antenna_count() const {
    int n = 0;
    for (const auto& s : sets) n += static_cast<int>(s.size());
    return n;
}

SelectionMatrix::SelectionMatrix(std::vector<int> chain_of_antenna, int num_chains)
    : chain_of_antenna_(std::move(chain_of_antenna)), num_chains_(num_chains) {
    if (num_chains_ < 1) throw std::invalid_argument("selection needs >= 1 chain");
    for (int c : chain_of_antenna_)
        if (c < 0 || c >= num_chains_)
            throw std::invalid_argument("antenna mapped to invalid RF chain");
}

std::vector<int> SelectionMatrix::column_sizes() const {
    std::vector<int> sizes(num_chains_, 0);
    for (int c : chain_of_antenna_) ++sizes[c];
    return sizes;
}

Matrix SelectionMatrix::dense() const {
    Matrix f = Matrix::Zero(rows(), cols());
    for (int j = 0; j < rows(); ++j) f(j, chain_of_antenna_[j]) = 1.0;
    return f;
}

int select_stream_count(const PswfSpectrum& spectrum, double channel_power,
                        double total_power, double noise_power) {
    if (spectrum.eigenvalues.empty()) throw std::invalid_argument("empty spectrum");
    const double scale = channel_power / spectrum.sum();
    std::vector<double> gains;
    gains.reserve(spectrum.eigenvalues.size());
    const double floor = kGainFloor * spectrum.eigenvalues.front() * scale;
    for (double v : spectrum.eigenvalues) {
        const double g = v * scale;
        if (g > floor) gains.push_back(g);
    }
    const PowerAllocation alloc = water_fill(gains, total_power, noise_power);
    int count = 0;
    for (double p : alloc.per_stream_power)
        if (p > 0.0) ++count;
    return std::max(1, count);
}

double minkowski_surrogate(const Matrix& r_abs, std::span<const int> s) {
    if (s.empty()) throw std::invalid_argument("empty subarray set");
    double sum = 0.0;
    for (int i : s)
        for (int j : s) sum += r_abs(i, j);
    return sum / double(s.size());
}

SubarrayPartition partition_subarrays(const ChannelMatrix& h, int streams, int bound) {
    const int nt = static_cast<int>(h.tx_count());
    if (streams < 1) throw std::invalid_argument("streams must be >= 1");
    if (nt < streams) throw std::invalid_argument("more streams than antennas");
    if (static_cast<long long>(bound) * streams < nt)
        throw std::invalid_argument("infeasible partition");

    const Matrix r_abs = (h.entries().adjoint() * h.entries()).cwiseAbs();
    GreedyState state(r_abs, streams);

    std::vector<char> selected(nt, 0);
    // Seed each set with one antenna at stride floor(Nt/Ns).
    const int group = nt / streams;
    for (int i = 0; i < streams; ++i) {
        const int seed = (i + 1) * group - 1;
        state.sets[i].push_back(seed);
        state.set_sum[i] = r_abs(seed, seed);
        selected[seed] = 1;
    }

    // best_link[j]: strongest |R_ij| from any already-selected antenna i.
    std::vector<double> best_link(nt, kNoGain);
    auto absorb = [&](int added) {
        for (int j = 0; j < nt; ++j)
            if (!selected[j]) best_link[j] = std::max(best_link[j], r_abs(added, j));
    };
    for (int i = 0; i < streams; ++i) absorb(state.sets[i].front());

    for (int step = 0; step < nt - streams; ++step) {
        int picked = -1;
        double picked_link = kNoGain;
        for (int j = 0; j < nt; ++j) {
            if (!selected[j] && best_link[j] > picked_link) {
                picked_link = best_link[j];
                picked = j;
            }
        }

        int target = 0;
        double target_gain = kNoGain;
        for (int r = 0; r < streams; ++r) {
            const double gain = state.add_gain(r, picked);
            if (gain > target_gain) {
                target_gain = gain;
                target = r;
            }
        }
        selected[picked] = 1;
        state.add(target, picked);
        absorb(picked);

        if (static_cast<int>(state.sets[target].size()) >= bound) {
            const int evicted = state.least_contributor(target);
            int new_home = -1;
            double best_gain = kNoGain;
            for (int r = 0; r < streams; ++r) {
                if (r == target || static_cast<int>(state.sets[r].size()) >= bound) continue;
                const double gain = state.add_gain(r, evicted);
                if (gain > best_gain) {
                    best_gain = gain;
                    new_home = r;
                }
            }
            // No set can take the antenna only when every other set is full,
            // in which case the bound already holds with equality.
            if (new_home >= 0) {
                state.remove(target, evicted);
                state.add(new_home, evicted);
            }
        }
    }

    // Re-home each set's weakest member once, undoing poor seed placement.
    for (int l = 0; l < streams; ++l) {
        if (state.sets[l].size() <= 1) continue;  // emptying a set is never allowed
        const int moved = state.least_contributor(l);
        int best_home = l;
        double best_gain = 0.0;  // staying put is the no-op baseline
        for (int r = 0; r < streams; ++r) {
            if (r == l || static_cast<int>(state.sets[r].size()) >= bound) continue;
            const double gain = state.add_gain(r, moved);
            if (gain > best_gain) {
                best_gain = gain;
                best_home = r;
            }
        }
        if (best_home != l) {
            state.remove(l, moved);
            state.add(best_home, moved);
        }
    }

    SubarrayPartition partition;
    partition.bound = bound;
    partition.sets = std::move(state.sets);
    for (auto& s : partition.sets) std::sort(s.begin(), s.end());
    return partition;
}

SelectionMatrix build_selection(const SubarrayPartition& partition) {
    const int nt = partition.antenna_count();
    std::vector<int> chain(nt, -1);
    for (std::size_t i = 0; i < partition.sets.size(); ++i) {
        for (int antenna : partition.sets[i]) {
            if (antenna < 0 || antenna >= nt || chain[antenna] != -1)
                throw std::invalid_argument("partition does not cover antennas exactly once");
            chain[antenna] = static_cast<int>(i);
        }
    }
    return SelectionMatrix(std::move(chain), static_cast<int>(partition.sets.size()));
}

AnalogPrecoder build_analog(const ChannelMatrix& h, const SubarrayPartition& partition) {
    const auto& entries = h.entries();
    AnalogPrecoder analog;
    analog.phases = CVector::Ones(entries.cols());

    for (const auto& s : partition.sets) {
        if (s.empty()) throw std::invalid_argument("empty subarray set");
        CMatrix block(entries.rows(), s.size());
        for (std::size_t k = 0; k < s.size(); ++k) block.col(k) = entries.col(s[k]);

        // Dominant right singular vector via the small Gram matrix.
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(block.adjoint() * block);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("subarray eigensolve failed");
        CVector v = solver.eigenvectors().col(s.size() - 1);

        const double scale = v.cwiseAbs().maxCoeff();
        Eigen::Index first = 0;
        while (first < v.size() && std::abs(v(first)) <= 1e-12 * scale) ++first;
        if (first < v.size()) v *= std::polar(1.0, -std::arg(v(first)));

        for (std::size_t k = 0; k < s.size(); ++k) {
            const double mag = std::abs(v(k));
            analog.phases(s[k]) = mag > 0.0 ? v(k) / mag : Complex(1.0, 0.0);
        }
    }
    return analog;
}

CMatrix effective_channel(const ChannelMatrix& h, const AnalogPrecoder& analog,
                          const SelectionMatrix& selection) {
    const auto& entries = h.entries();
    if (selection.rows() != entries.cols() || analog.phases.size() != entries.cols())
        throw std::invalid_argument("precoder dimensions do not match channel");
    CMatrix he = CMatrix::Zero(entries.rows(), selection.cols());
    for (int j = 0; j < selection.rows(); ++j)
        he.col(selection.chain_of(j)) += entries.col(j) * analog.phases(j);
    return he;
}

CMatrix build_digital(const ChannelMatrix& h, const AnalogPrecoder& analog,
                      const SelectionMatrix& selection, double total_power,
                      double noise_power) {
    const CMatrix he = effective_channel(h, analog, selection);
    const int ns = selection.cols();

    // Column k of F_A F_S stacks |S_k| unit-modulus entries on disjoint rows,
    // so D^{-1/2} with D = diag(|S_k|) makes those columns orthonormal and the
    // water-filled powers below are exact transmit powers.
    const std::vector<int> sizes = selection.column_sizes();
    Vector d_inv_sqrt(ns);
    for (int k = 0; k < ns; ++k) {
        if (sizes[k] == 0) throw std::invalid_argument("RF chain with no antennas");
        d_inv_sqrt(k) = 1.0 / std::sqrt(double(sizes[k]));
    }
    const CMatrix ht = he * d_inv_sqrt.asDiagonal();

    Eigen::SelfAdjointEigenSolver<CMatrix> solver(ht.adjoint() * ht);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("effective channel eigensolve failed");

    // Descending order.
    std::vector<double> gains(ns);
    CMatrix v(ns, ns);
    for (int k = 0; k < ns; ++k) {
        gains[k] = std::max(0.0, solver.eigenvalues()(ns - 1 - k));
        v.col(k) = solver.eigenvectors().col(ns - 1 - k);
    }

    const double floor = kGainFloor * std::max(gains.front(), 0.0);
    std::vector<double> usable;
    for (double g : gains)
        if (g > floor) usable.push_back(g);
    const PowerAllocation alloc = water_fill(usable, total_power, noise_power);

    Vector sqrt_power = Vector::Zero(ns);
    for (std::size_t k = 0; k < usable.size(); ++k)
        sqrt_power(static_cast<int>(k)) = std::sqrt(alloc.per_stream_power[k]);

    return d_inv_sqrt.asDiagonal() * v * sqrt_power.asDiagonal();
}

double spectrum_efficiency(const ChannelMatrix& h, const PrecoderTriple& p,
                           double noise_power) {
    if (p.digital.rows() != p.selection.cols())
        throw std::invalid_argument("digital precoder does not match selection");
    const CMatrix m = effective_channel(h, p.analog, p.selection) * p.digital;
    double bits = 0.0;
    for (double g : squared_singular_values(m)) bits += std::log2(1.0 + g / noise_power);
    return bits;
}

DapResult dap_pipeline(const LinkGeometry& link, double total_power, double noise_power,
                       int bound_slack, int quadrature_order, int forced_streams) {
    if (bound_slack < 0) throw std::invalid_argument("bound_slack must be >= 0");
    const int nt = link.tx().num_elements;
    const double channel_power = double(nt) * double(link.rx().num_elements);

    const double c_y = bandwidth_parameter(link);
    const PswfSpectrum spectrum = pswf_eigenvalues(
        c_y, default_eigenvalue_count(c_y, quadrature_order), quadrature_order);

    int ns = forced_streams > 0
                 ? forced_streams
                 : select_stream_count(spectrum, channel_power, total_power, noise_power);
    ns = std::min(ns, nt);

    const ChannelMatrix h = near_field_channel(link);
    const int bound = (nt + ns - 1) / ns + bound_slack;

    SubarrayPartition partition = partition_subarrays(h, ns, bound);
    SelectionMatrix selection = build_selection(partition);
    AnalogPrecoder analog = build_analog(h, partition);
    CMatrix digital = build_digital(h, analog, selection, total_power, noise_power);
    PrecoderTriple triple{std::move(analog), std::move(selection), std::move(digital), ns};
    const double se = spectrum_efficiency(h, triple, noise_power);
    return DapResult{std::move(triple), std::move(partition), se, c_y};
}

ConstraintReport validate_triple(const PrecoderTriple& p, double total_power) {
    ConstraintReport report;

    report.unit_modulus_ok = true;
    for (Eigen::Index i = 0; i < p.analog.phases.size(); ++i)
        if (std::abs(std::abs(p.analog.phases(i)) - 1.0) > 1e-12)
            report.unit_modulus_ok = false;

    // The selection representation is binary with one chain per antenna by
    // construction; check the dimensions line up with the digital stage.
    report.selection_ok = p.selection.cols() == p.streams &&
                          p.selection.rows() == p.analog.phases.size() &&
                          p.digital.rows() == p.selection.cols();

    // ||F_A F_S F_D||_F^2 = sum_j |phase_j|^2 ||F_D row(chain_j)||^2.
    double power = 0.0;
    for (int j = 0; j < p.selection.rows(); ++j)
        power += std::norm(p.analog.phases(j)) * p.digital.row(p.selection.chain_of(j)).squaredNorm();
    report.power_ratio = power / total_power;
    report.power_ok = std::abs(report.power_ratio - 1.0) <= 1e-9;
    return report;
}

}  // namespace nfmimo
