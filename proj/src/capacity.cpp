// SPDX-License-Identifier: Apache-2.0
#include "nfmimo/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nfmimo {

namespace {

// Water-fills the usable subchannels and assembles the report. `gains` are
// squared singular values, descending; entries below the numerical floor get
// zero power.
CapacityReport report_from_gains(std::vector<double> gains, double total_power,
                                 double noise_power, CapacityMethod method) {
    if (gains.empty()) throw std::invalid_argument("no usable subchannel");
    const double floor = kGainFloor * gains.front();

    std::vector<double> usable;
    usable.reserve(gains.size());
    for (double g : gains)
        if (g > floor) usable.push_back(g);

    PowerAllocation alloc = water_fill(usable, total_power, noise_power);

    CapacityReport report;
    report.method = method;
    report.allocation.water_level = alloc.water_level;
    report.allocation.total_power = alloc.total_power;
    report.allocation.noise_power = alloc.noise_power;
    report.allocation.per_stream_power.assign(gains.size(), 0.0);
    report.singular_values.reserve(gains.size());
    for (double g : gains) report.singular_values.push_back(std::sqrt(std::max(g, 0.0)));

    double bits = 0.0;
    for (std::size_t i = 0; i < usable.size(); ++i) {
        report.allocation.per_stream_power[i] = alloc.per_stream_power[i];
        bits += std::log2(1.0 + alloc.per_stream_power[i] * usable[i] / noise_power);
    }
    report.capacity_bits = bits;
    return report;
}

}  // namespace

std::vector<double> squared_singular_values(const CMatrix& m) {
    // Spectrum of the smaller Gram matrix; the nonzero singular values agree.
    CMatrix gram;
    if (m.rows() <= m.cols())
        gram = m * m.adjoint();
    else
        gram = m.adjoint() * m;

    Eigen::SelfAdjointEigenSolver<CMatrix> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolve failed");

    const Vector& ev = solver.eigenvalues();
    std::vector<double> gains(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        gains[i] = std::max(0.0, ev(ev.size() - 1 - i));
    return gains;
}

CapacityReport exact_capacity(const ChannelMatrix& h, double total_power,
                              double noise_power) {
    return report_from_gains(squared_singular_values(h.entries()), total_power,
                             noise_power, CapacityMethod::exact_svd);
}

CapacityReport pswf_capacity_estimate(const PswfSpectrum& spectrum, double channel_power,
                                      double total_power, double noise_power) {
    if (spectrum.eigenvalues.empty()) throw std::invalid_argument("empty spectrum");
    const double scale = channel_power / spectrum.sum();
    std::vector<double> gains;
    gains.reserve(spectrum.eigenvalues.size());
    for (double v : spectrum.eigenvalues) gains.push_back(v * scale);
    return report_from_gains(std::move(gains), total_power, noise_power,
                             CapacityMethod::pswf_waterfill);
}

double equal_power_capacity_approx(const LinkGeometry& link, double channel_power,
                                   double total_power, double noise_power) {
    const double n_dof = dof_estimate(link);
    if (!(n_dof > 0.0)) return 0.0;
    return n_dof * std::log2(1.0 + total_power * channel_power / (noise_power * n_dof * n_dof));
}

OptimalDof optimal_dof(double total_power, double channel_power, double noise_power) {
    if (!(total_power > 0.0) || !(channel_power > 0.0) || !(noise_power > 0.0))
        throw std::invalid_argument("optimal_dof needs positive arguments");
    const double rho = total_power * channel_power / noise_power;

    // Decreasing in n; bracket on a log grid wide enough for any sane rho.
    const auto excess = [&](double n) {
        const double t = rho / (n * n);
        return (1.0 / t + 1.0) * std::log2(1.0 + t) - 2.0 / std::numbers::ln2;
    };

    double lo = 1e-9, hi = 1e12;
    for (int iter = 0; iter < 400 && hi / lo > 1.0 + 1e-15; ++iter) {
        const double mid = std::sqrt(lo * hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }

    OptimalDof result;
    result.n_star = std::sqrt(lo * hi);
    result.approximation = std::sqrt(0.255 * rho);
    result.implied_coefficient = result.n_star * result.n_star / rho;
    return result;
}

}  // namespace nfmimo
