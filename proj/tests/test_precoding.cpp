// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "nfmimo/capacity.hpp"
#include "nfmimo/channel.hpp"
#include "nfmimo/precoding.hpp"
#include "nfmimo/sweep.hpp"
#include "oracles.hpp"

using namespace nfmimo;

namespace {

LinkGeometry paper_link(double r) {
    const double lambda = 3e-3;
    return LinkGeometry(ArrayGeometry(256, lambda / 2), ArrayGeometry(256, lambda / 2), r,
                        lambda);
}

LinkGeometry random_small_link(std::mt19937& rng, int max_tx = 10) {
    std::uniform_int_distribution<int> nt_dist(4, max_tx);
    std::uniform_int_distribution<int> nr_dist(4, 12);
    std::uniform_real_distribution<double> r_dist(0.05, 2.0);
    std::uniform_real_distribution<double> tilt_dist(-0.5, 0.5);
    const double lambda = 3e-3;
    return LinkGeometry(ArrayGeometry(nt_dist(rng), lambda / 2, tilt_dist(rng)),
                        ArrayGeometry(nr_dist(rng), lambda / 2, tilt_dist(rng)), r_dist(rng),
                        lambda);
}

void check_partition_invariants(const SubarrayPartition& partition, int nt) {
    std::set<int> seen;
    for (const auto& s : partition.sets) {
        CHECK(!s.empty());
        CHECK(int(s.size()) <= partition.bound);
        for (int antenna : s) {
            CHECK(antenna >= 0);
            CHECK(antenna < nt);
            CHECK(seen.insert(antenna).second);  // disjoint
        }
    }
    CHECK(int(seen.size()) == nt);  // coverage
}

double surrogate_objective(const Matrix& r_abs, const SubarrayPartition& partition) {
    double total = 0.0;
    for (const auto& s : partition.sets) total += minkowski_surrogate(r_abs, s);
    return total;
}

}  // namespace

TEST_CASE("minkowski surrogate") {
    Matrix ones = Matrix::Ones(3, 3);
    const std::vector<int> all = {0, 1, 2};
    CHECK(minkowski_surrogate(ones, all) == doctest::Approx(3.0));  // exact for rank one

    Matrix r(4, 4);
    r << 4, 1, 2, 0.5, 1, 3, 0.25, 1, 2, 0.25, 5, 2, 0.5, 1, 2, 6;
    const std::vector<int> singleton = {2};
    CHECK(minkowski_surrogate(r, singleton) == doctest::Approx(5.0));

    const std::vector<int> pair = {0, 1};
    double direct = 0.0;
    for (int i : pair)
        for (int j : pair) direct += r(i, j);
    CHECK(minkowski_surrogate(r, pair) == doctest::Approx(direct / 2.0).epsilon(1e-15));

    CHECK_THROWS(minkowski_surrogate(r, std::vector<int>{}));
}

TEST_CASE("select stream count") {
    SUBCASE("one dominant eigenvalue") {
        PswfSpectrum spectrum;
        spectrum.c_y = 0.5;
        spectrum.eigenvalues = {0.9, 1e-13, 1e-14};
        CHECK(select_stream_count(spectrum, 64.0, 1.0, 0.1) == 1);
    }
    SUBCASE("unbounded power activates every usable eigenvalue") {
        PswfSpectrum spectrum;
        spectrum.c_y = 2.0;
        spectrum.eigenvalues = {1.0, 0.5, 0.25};
        CHECK(select_stream_count(spectrum, 64.0, 1e12, 1.0) == 3);
    }
    SUBCASE("paper-scale operating point") {
        const LinkGeometry link = paper_link(5.0);
        const double c = bandwidth_parameter(link);
        const PswfSpectrum spectrum =
            pswf_eigenvalues(c, default_eigenvalue_count(c, 512), 512);
        const double noise = noise_power_for_snr(30.0, 256.0 * 256.0);
        const int ns = select_stream_count(spectrum, 256.0 * 256.0, 1.0, noise);
        // Knee sits at 2c/pi = 9.75; water-filling spills a little past it.
        CHECK(ns == 11);
    }
}

TEST_CASE("partition: one antenna per chain when Nt equals Ns") {
    const LinkGeometry link = random_small_link(*[] {
        static std::mt19937 rng(3);
        return &rng;
    }());
    const ChannelMatrix h = near_field_channel(link);
    const int nt = int(h.tx_count());
    const SubarrayPartition partition = partition_subarrays(h, nt, 4);
    check_partition_invariants(partition, nt);
    for (const auto& s : partition.sets) CHECK(s.size() == 1);
}

TEST_CASE("partition: rank-one channel yields a balanced split") {
    // All-ones correlation: any balanced 2+2 split reaches the optimum 4.
    const ChannelMatrix h(CMatrix::Ones(3, 4), 1.0, ChannelModel::near_field);
    const SubarrayPartition partition = partition_subarrays(h, 2, 2);
    check_partition_invariants(partition, 4);
    CHECK(partition.sets[0].size() == 2);
    CHECK(partition.sets[1].size() == 2);
    const Matrix r_abs = (h.entries().adjoint() * h.entries()).cwiseAbs();
    CHECK(surrogate_objective(r_abs, partition) == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("partition: infeasible bound is rejected") {
    const ChannelMatrix h(CMatrix::Ones(2, 8), 1.0, ChannelModel::near_field);
    CHECK_THROWS_WITH(partition_subarrays(h, 2, 3), doctest::Contains("infeasible partition"));
}

TEST_CASE("partition: greedy stays near the exhaustive optimum") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 10; ++trial) {
        const LinkGeometry link = random_small_link(rng);
        const ChannelMatrix h = near_field_channel(link);
        const int nt = int(h.tx_count());
        const int bound = (nt + 1) / 2 + 2;
        const SubarrayPartition partition = partition_subarrays(h, 2, bound);
        check_partition_invariants(partition, nt);

        const Matrix r_abs = (h.entries().adjoint() * h.entries()).cwiseAbs();
        const double greedy = surrogate_objective(r_abs, partition);
        const double best = oracles::best_two_set_objective(r_abs, bound);
        CHECK(greedy >= 0.95 * best);
    }
}

TEST_CASE("partition is deterministic") {
    const ChannelMatrix h = near_field_channel(paper_link(5.0));
    const SubarrayPartition a = partition_subarrays(h, 11, 26);
    const SubarrayPartition b = partition_subarrays(h, 11, 26);
    CHECK(a.sets == b.sets);
}

TEST_CASE("selection matrix") {
    SubarrayPartition identity;
    identity.bound = 1;
    identity.sets = {{0}, {1}};
    const SelectionMatrix s1 = build_selection(identity);
    CHECK(s1.dense() == Matrix::Identity(2, 2));

    SubarrayPartition mixed;
    mixed.bound = 2;
    mixed.sets = {{0, 2}, {1}};
    const SelectionMatrix s2 = build_selection(mixed);
    Matrix expected(3, 2);
    expected << 1, 0, 0, 1, 1, 0;
    CHECK(s2.dense() == expected);

    // Row sums one, column sums the set sizes.
    const Matrix dense = s2.dense();
    for (int r = 0; r < dense.rows(); ++r) CHECK(dense.row(r).sum() == doctest::Approx(1.0));
    CHECK(s2.column_sizes() == std::vector<int>{2, 1});

    SubarrayPartition overlapping;
    overlapping.bound = 2;
    overlapping.sets = {{0, 1}, {1}};
    CHECK_THROWS(build_selection(overlapping));
}

TEST_CASE("analog precoder phases") {
    std::mt19937 rng(77);
    const LinkGeometry link = random_small_link(rng);
    const ChannelMatrix h = near_field_channel(link);
    const int nt = int(h.tx_count());

    SubarrayPartition partition;
    partition.bound = nt;
    partition.sets = {{}, {}};
    for (int j = 0; j < nt; ++j) partition.sets[j % 2].push_back(j);

    const AnalogPrecoder analog = build_analog(h, partition);
    for (Eigen::Index i = 0; i < analog.phases.size(); ++i)
        CHECK(std::abs(std::abs(analog.phases(i)) - 1.0) < 1e-12);

    SUBCASE("singleton subarray reduces to zero phase") {
        SubarrayPartition singles;
        singles.bound = 1;
        singles.sets.resize(nt);
        for (int j = 0; j < nt; ++j) singles.sets[j] = {j};
        const AnalogPrecoder trivial = build_analog(h, singles);
        for (Eigen::Index i = 0; i < trivial.phases.size(); ++i)
            CHECK(std::abs(trivial.phases(i) - Complex(1.0, 0.0)) < 1e-12);
    }
}

TEST_CASE("analog precoder matches the analytic rank-one singular vector") {
    // H = a b^H: the dominant right singular vector is b up to a global phase.
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> phase(-3.0, 3.0);
    CVector a(6), b(8);
    for (int i = 0; i < 6; ++i) a(i) = std::polar(1.0, phase(rng));
    for (int i = 0; i < 8; ++i) b(i) = std::polar(1.0, phase(rng));
    const ChannelMatrix h(a * b.adjoint(), 1.0, ChannelModel::near_field);

    SubarrayPartition partition;
    partition.bound = 4;
    partition.sets = {{0, 1, 2, 3}, {4, 5, 6, 7}};
    const AnalogPrecoder analog = build_analog(h, partition);

    for (const auto& s : partition.sets) {
        // Compare phase differences within the set against b.
        for (std::size_t k = 1; k < s.size(); ++k) {
            const Complex measured = analog.phases(s[k]) * std::conj(analog.phases(s[0]));
            const Complex expected = b(s[k]) * std::conj(b(s[0]));
            CHECK(std::abs(measured - expected) < 1e-9);
        }
    }
}

TEST_CASE("digital precoder meets the power budget with equality") {
    CMatrix entries(2, 2);
    entries << Complex(2, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0);
    const ChannelMatrix h(entries, 1.0, ChannelModel::near_field);

    SubarrayPartition partition;
    partition.bound = 1;
    partition.sets = {{0}, {1}};
    const SelectionMatrix selection = build_selection(partition);
    const AnalogPrecoder analog = build_analog(h, partition);
    const CMatrix digital = build_digital(h, analog, selection, 1.0, 0.1);

    const PrecoderTriple triple{analog, selection, digital, 2};
    const ConstraintReport report = validate_triple(triple, 1.0);
    CHECK(report.power_ok);
    CHECK(report.unit_modulus_ok);
    CHECK(report.selection_ok);

    // Effective gains are 4 and 1: the two-channel closed form applies.
    const double se = spectrum_efficiency(h, triple, 0.1);
    const double expected =
        std::log2(1.0 + 0.5375 * 4.0 / 0.1) + std::log2(1.0 + 0.4625 * 1.0 / 0.1);
    CHECK(se == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("rank-deficient effective channel gets zero power on null streams") {
    const ChannelMatrix h(CMatrix::Ones(2, 2), 1.0, ChannelModel::near_field);
    SubarrayPartition partition;
    partition.bound = 1;
    partition.sets = {{0}, {1}};
    const SelectionMatrix selection = build_selection(partition);
    const AnalogPrecoder analog = build_analog(h, partition);
    const CMatrix digital = build_digital(h, analog, selection, 1.0, 0.1);

    // Identical columns: one usable direction, the budget still fully spent.
    const PrecoderTriple triple{analog, selection, digital, 2};
    CHECK(validate_triple(triple, 1.0).power_ok);
    CHECK(digital.col(1).norm() < 1e-12);
}

TEST_CASE("effective channel gathers columns") {
    std::mt19937 rng(9);
    const LinkGeometry link = random_small_link(rng);
    const ChannelMatrix h = near_field_channel(link);
    const int nt = int(h.tx_count());

    SubarrayPartition partition;
    partition.bound = nt;
    partition.sets = {{}, {}, {}};
    for (int j = 0; j < nt; ++j) partition.sets[j % 3].push_back(j);
    const SelectionMatrix selection = build_selection(partition);
    const AnalogPrecoder analog = build_analog(h, partition);

    const CMatrix gathered = effective_channel(h, analog, selection);
    const CMatrix dense = h.entries() * CMatrix(analog.phases.asDiagonal()) *
                          selection.dense().cast<Complex>();
    CHECK((gathered - dense).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("spectrum efficiency basics") {
    const ChannelMatrix h(CMatrix::Identity(2, 2), 1.0, ChannelModel::near_field);
    SubarrayPartition partition;
    partition.bound = 1;
    partition.sets = {{0}, {1}};
    const SelectionMatrix selection = build_selection(partition);
    const AnalogPrecoder analog = build_analog(h, partition);

    SUBCASE("zero digital precoder sends nothing") {
        const PrecoderTriple off{analog, selection, CMatrix::Zero(2, 2), 2};
        CHECK(spectrum_efficiency(h, off, 0.5) == doctest::Approx(0.0));
    }
    SUBCASE("single stream reduces to the scalar log") {
        SubarrayPartition whole;
        whole.bound = 2;
        whole.sets = {{0, 1}};
        const SelectionMatrix sel1 = build_selection(whole);
        const AnalogPrecoder an1 = build_analog(h, whole);
        const CMatrix dig1 = build_digital(h, an1, sel1, 1.0, 0.5);
        const PrecoderTriple triple{an1, sel1, dig1, 1};
        const CMatrix m = effective_channel(h, an1, sel1) * dig1;
        CHECK(spectrum_efficiency(h, triple, 0.5) ==
              doctest::Approx(std::log2(1.0 + m.squaredNorm() / 0.5)).epsilon(1e-12));
    }
}

TEST_CASE("dap pipeline on a far-field link degenerates to one stream") {
    const double lambda = 3e-3, d = lambda / 2;
    const double far = 50.0 * rayleigh_distance(63 * d, lambda);
    const LinkGeometry link(ArrayGeometry(64, d), ArrayGeometry(64, d), far, lambda);
    const double noise = noise_power_for_snr(30.0, 64.0 * 64.0);

    const DapResult result = dap_pipeline(link, 1.0, noise, 2, 256);
    CHECK(result.precoder.streams == 1);

    const ChannelMatrix h = near_field_channel(link);
    const double cap = exact_capacity(h, 1.0, noise).capacity_bits;
    const double cap_half = exact_capacity(h, 0.5, noise).capacity_bits;
    CHECK(result.se_bits <= cap * (1.0 + 1e-9));
    CHECK(result.se_bits >= cap_half);  // within the 3 dB-equivalent margin
    CHECK(validate_triple(result.precoder, 1.0).all_ok());
}

TEST_CASE("dap pipeline reproduces the frozen close-range operating point") {
    const LinkGeometry link = paper_link(2.0);
    const double noise = noise_power_for_snr(30.0, 256.0 * 256.0);
    const DapResult result = dap_pipeline(link, 1.0, noise);

    CHECK(result.precoder.streams == 25);
    CHECK(result.se_bits == doctest::Approx(29.53796991323096).epsilon(1e-6));
    CHECK(result.partition.bound == (256 + 24) / 25 + 2);
    CHECK(validate_triple(result.precoder, 1.0).all_ok());

    const ChannelMatrix h = near_field_channel(link);
    CHECK(result.se_bits <=
          exact_capacity(h, 1.0, noise).capacity_bits * (1.0 + 1e-9));

    SUBCASE("deterministic reruns") {
        const DapResult again = dap_pipeline(link, 1.0, noise);
        CHECK(again.se_bits == result.se_bits);
        CHECK(again.partition.sets == result.partition.sets);
        CHECK((again.precoder.digital - result.precoder.digital).cwiseAbs().maxCoeff() ==
              0.0);
    }
}

TEST_CASE("jensen bound on the stream gains") {
    std::mt19937 rng(21);
    const LinkGeometry link = random_small_link(rng, 8);
    const double channel_power =
        double(link.tx().num_elements) * double(link.rx().num_elements);
    const double noise = noise_power_for_snr(25.0, channel_power);
    const DapResult result = dap_pipeline(link, 1.0, noise, 2, 128);
    const ChannelMatrix h = near_field_channel(link);

    const CMatrix he = effective_channel(h, result.precoder.analog, result.precoder.selection);
    const auto gains = squared_singular_values(he);

    // Per-stream transmit powers sorted to pair strongest with strongest.
    std::vector<double> powers(result.precoder.streams, 0.0);
    for (int j = 0; j < result.precoder.selection.rows(); ++j) {
        const int chain = result.precoder.selection.chain_of(j);
        for (int i = 0; i < result.precoder.streams; ++i)
            powers[i] += std::norm(result.precoder.analog.phases(j) *
                                   result.precoder.digital(chain, i));
    }
    std::sort(powers.rbegin(), powers.rend());

    double mean_term = 0.0;
    const int ns = result.precoder.streams;
    for (int i = 0; i < ns; ++i) mean_term += gains[i] * powers[i] / noise;
    const double bound = ns * std::log2(1.0 + mean_term / ns);
    CHECK(result.se_bits <= bound + 1e-9);
}

TEST_CASE("disjoint column support: frobenius norm splits over subarrays") {
    std::mt19937 rng(31);
    const LinkGeometry link = random_small_link(rng, 9);
    const ChannelMatrix h = near_field_channel(link);
    const int nt = int(h.tx_count());
    const SubarrayPartition partition = partition_subarrays(h, 3, nt);
    const SelectionMatrix selection = build_selection(partition);
    const AnalogPrecoder analog = build_analog(h, partition);

    const double whole = effective_channel(h, analog, selection).squaredNorm();
    double split = 0.0;
    for (const auto& s : partition.sets) {
        CVector f(s.size());
        CMatrix block(h.rx_count(), s.size());
        for (std::size_t k = 0; k < s.size(); ++k) {
            f(k) = analog.phases(s[k]);
            block.col(k) = h.entries().col(s[k]);
        }
        split += (block * f).squaredNorm();
    }
    CHECK(whole == doctest::Approx(split).epsilon(1e-12));
}

TEST_CASE("diagonal and permutation matrices commute through conjugation") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> value(-4.0, 4.0);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + int(rng() % 7);
        Matrix diag = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i) diag(i, i) = value(rng);

        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Matrix p = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i) p(perm[i], i) = 1.0;

        const Matrix conjugated = p.transpose() * diag * p;
        CHECK(conjugated.isDiagonal(0.0));
        CHECK(diag * p == p * conjugated);  // exact, entries are only moved
    }
}
