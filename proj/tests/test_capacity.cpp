// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "nfmimo/capacity.hpp"
#include "nfmimo/channel.hpp"
#include "nfmimo/sweep.hpp"
#include "oracles.hpp"

using namespace nfmimo;

namespace {

LinkGeometry paper_link(double r) {
    const double lambda = 3e-3;
    return LinkGeometry(ArrayGeometry(256, lambda / 2), ArrayGeometry(256, lambda / 2), r,
                        lambda);
}

}  // namespace

TEST_CASE("squared singular values match JacobiSVD") {
    CMatrix m(3, 2);
    m << Complex(1, 2), Complex(0, -1), Complex(3, 0), Complex(1, 1), Complex(-2, 1),
        Complex(0.5, -0.5);
    const auto gains = squared_singular_values(m);
    Eigen::JacobiSVD<CMatrix> svd(m);
    REQUIRE(gains.size() == 2);
    for (int i = 0; i < 2; ++i)
        CHECK(gains[i] ==
              doctest::Approx(std::pow(svd.singularValues()(i), 2)).epsilon(1e-12));
}

TEST_CASE("rank-one channel: all power into the single subchannel") {
    const double lambda = 3e-3;
    const LinkGeometry link(ArrayGeometry(16, lambda / 2), ArrayGeometry(16, lambda / 2),
                            500.0, lambda);
    const ChannelMatrix h = far_field_channel(link, 0.0, 0.0);
    const CapacityReport report = exact_capacity(h, 2.0, 0.5);
    CHECK(report.capacity_bits ==
          doctest::Approx(std::log2(1.0 + 2.0 * 256.0 / 0.5)).epsilon(1e-12));
}

TEST_CASE("identity channel splits power evenly") {
    const ChannelMatrix h(CMatrix::Identity(2, 2), 1.0, ChannelModel::near_field);
    const CapacityReport report = exact_capacity(h, 2.0, 1.0);
    CHECK(report.capacity_bits == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("exact capacity agrees with an independent SVD + closed-form oracle") {
    const LinkGeometry link = paper_link(5.0);
    const ChannelMatrix h = near_field_channel(link);
    const double noise = noise_power_for_snr(15.0, 256.0 * 256.0);
    const CapacityReport report = exact_capacity(h, 1.0, noise);
    const double reference = oracles::capacity_jacobi_svd(h.entries(), 1.0, noise);
    CHECK(report.capacity_bits == doctest::Approx(reference).epsilon(1e-6));
    // Cross-implementation anchor for the same configuration.
    CHECK(report.capacity_bits == doctest::Approx(3.93297435098933).epsilon(1e-6));
}

TEST_CASE("pswf capacity estimate") {
    SUBCASE("single eigenvalue reduces to the scalar formula") {
        PswfSpectrum spectrum;
        spectrum.c_y = 0.1;
        spectrum.eigenvalues = {0.25};
        const CapacityReport report = pswf_capacity_estimate(spectrum, 16.0, 1.0, 0.5);
        CHECK(report.capacity_bits ==
              doctest::Approx(std::log2(1.0 + 16.0 / 0.5)).epsilon(1e-12));
    }
    SUBCASE("tracks the exact capacity at moderate distance") {
        const LinkGeometry link = paper_link(10.0);
        const ChannelMatrix h = near_field_channel(link);
        const double noise = noise_power_for_snr(15.0, 256.0 * 256.0);
        const double exact = exact_capacity(h, 1.0, noise).capacity_bits;
        const double c = bandwidth_parameter(link);
        const PswfSpectrum spectrum =
            pswf_eigenvalues(c, default_eigenvalue_count(c, 512), 512);
        const double estimate =
            pswf_capacity_estimate(spectrum, 256.0 * 256.0, 1.0, noise).capacity_bits;
        CHECK(std::abs(estimate - exact) / exact < 0.10);
    }
    SUBCASE("common eigenvalue scaling cancels") {
        PswfSpectrum a;
        a.c_y = 1.0;
        a.eigenvalues = {0.9, 0.4, 0.1};
        PswfSpectrum b = a;
        for (auto& v : b.eigenvalues) v *= 0.37;
        const double ca = pswf_capacity_estimate(a, 100.0, 1.0, 0.3).capacity_bits;
        const double cb = pswf_capacity_estimate(b, 100.0, 1.0, 0.3).capacity_bits;
        CHECK(ca == doctest::Approx(cb).epsilon(1e-12));
    }
}

TEST_CASE("equal-power capacity approximation") {
    const double channel_power = 256.0 * 256.0;
    const double noise = noise_power_for_snr(15.0, channel_power);

    // Unit DoF reduces to the scalar formula. dof = 1 at r = 65025 d^2/lambda.
    const double r_unit = 255.0 * 255.0 * 1.5e-3 * 1.5e-3 / 3e-3;
    const double value = equal_power_capacity_approx(paper_link(r_unit), channel_power, 1.0, noise);
    CHECK(value == doctest::Approx(std::log2(1.0 + channel_power / noise)).epsilon(1e-9));

    // Hand-evaluated formula at r = 5 m.
    const double n_dof = dof_estimate(paper_link(5.0));
    const double by_hand =
        n_dof * std::log2(1.0 + channel_power / (noise * n_dof * n_dof));
    CHECK(equal_power_capacity_approx(paper_link(5.0), channel_power, 1.0, noise) ==
          doctest::Approx(by_hand).epsilon(1e-12));

    // x log2(1 + a/x^2) -> 0 as the DoF estimate collapses.
    CHECK(equal_power_capacity_approx(paper_link(1e7), channel_power, 1.0, noise) < 1e-2);
}

TEST_CASE("optimal dof root and the 0.255 coefficient") {
    const OptimalDof result = optimal_dof(1.0, 1000.0, 1.0);
    CHECK(result.n_star == doctest::Approx(15.9687499).epsilon(1e-6));
    CHECK(result.approximation == doctest::Approx(std::sqrt(255.0)).epsilon(1e-9));
    CHECK(result.implied_coefficient >= 0.250);
    CHECK(result.implied_coefficient <= 0.260);

    // n_star scales with the square root of the power product.
    const OptimalDof quadrupled = optimal_dof(4.0, 1000.0, 1.0);
    CHECK(quadrupled.n_star == doctest::Approx(2.0 * result.n_star).epsilon(1e-9));
}

TEST_CASE("capacity is monotone in total power and in the gain set") {
    const LinkGeometry link = paper_link(20.0);
    const ChannelMatrix h = near_field_channel(link);
    const double noise = noise_power_for_snr(15.0, 256.0 * 256.0);
    const double base = exact_capacity(h, 1.0, noise).capacity_bits;
    CHECK(exact_capacity(h, 2.0, noise).capacity_bits > base);

    // Zeroing subchannels can only hurt: compare against the top-k truncation.
    PswfSpectrum full;
    full.c_y = 1.0;
    full.eigenvalues = {0.9, 0.5, 0.2, 0.05};
    PswfSpectrum truncated = full;
    truncated.eigenvalues.resize(2);
    const double p_h = 100.0;
    const double c_full = pswf_capacity_estimate(full, p_h, 1.0, 0.5).capacity_bits;
    // Same absolute gains for the surviving subchannels.
    const double c_trunc =
        pswf_capacity_estimate(truncated, p_h * (0.9 + 0.5) / full.sum(), 1.0, 0.5)
            .capacity_bits;
    CHECK(c_full >= c_trunc - 1e-12);
}

TEST_CASE("capacity peaks at an interior distance and matches the optimal dof") {
    // Coarse version of the distance sweep; the acceptance suite runs the
    // full grid.
    const double channel_power = 256.0 * 256.0;
    const double noise = noise_power_for_snr(15.0, channel_power);
    const std::vector<double> rs = {1.0, 3.0, 8.0, 15.0, 22.0, 35.0, 60.0, 100.0};
    std::vector<double> caps;
    for (double r : rs)
        caps.push_back(exact_capacity(near_field_channel(paper_link(r)), 1.0, noise).capacity_bits);
    const auto it = std::max_element(caps.begin(), caps.end());
    const std::size_t peak = std::size_t(it - caps.begin());
    CHECK(peak > 0);
    CHECK(peak + 1 < caps.size());

    const double dof_at_peak = dof_estimate(paper_link(rs[peak]));
    const double n_star = optimal_dof(1.0, channel_power, noise).n_star;
    CHECK(dof_at_peak <= 2.0 * n_star);
    CHECK(dof_at_peak >= 0.5 * n_star);
}
