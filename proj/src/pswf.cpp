// SPDX-License-Identifier: Apache-2.0
#include "nfmimo/pswf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace nfmimo {

namespace {

// Classic Newton iteration on the Legendre polynomial, seeded from the
// Chebyshev approximation of the roots. Symmetric rule, sum of weights = 2.
QuadratureRule compute_gauss_legendre(int order) {
    if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
    QuadratureRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
            }
            dp = order * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes(i) = -x;
        rule.nodes(order - 1 - i) = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights(i) = w;
        rule.weights(order - 1 - i) = w;
    }
    return rule;
}

double sinc_kernel(double c, double dx) {
    if (dx == 0.0) return c / std::numbers::pi;
    return std::sin(c * dx) / (std::numbers::pi * dx);
}

}  // namespace

const QuadratureRule& gauss_legendre(int order) {
    static std::mutex mutex;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
    return it->second;
}

double PswfSpectrum::sum() const {
    return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0);
}

double bandwidth_parameter(const LinkGeometry& link) {
    const auto& tx = link.tx();
    const auto& rx = link.rx();
    return std::numbers::pi * (tx.num_elements - 1) * (rx.num_elements - 1) * tx.spacing *
           rx.spacing * std::cos(tx.tilt) * std::cos(rx.tilt) /
           (2.0 * link.wavelength() * link.distance());
}

PswfSpectrum pswf_eigenvalues(double c_y, int count, int quadrature_order) {
    if (!(c_y > 0.0)) throw std::invalid_argument("empty spectrum");
    if (count < 1) throw std::invalid_argument("count must be >= 1");
    if (count > quadrature_order)
        throw std::invalid_argument("count must not exceed quadrature_order");

    const QuadratureRule& rule = gauss_legendre(quadrature_order);
    const int n = quadrature_order;
    Vector sw = rule.weights.cwiseSqrt();
    Matrix a(n, n);
    for (int i = 0; i < n; ++i) {
        a(i, i) = rule.weights(i) * c_y / std::numbers::pi;
        for (int j = 0; j < i; ++j) {
            const double v = sw(i) * sw(j) * sinc_kernel(c_y, rule.nodes(i) - rule.nodes(j));
            a(i, j) = v;
            a(j, i) = v;
        }
    }

    Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("sinc kernel eigensolve failed");

    PswfSpectrum spectrum;
    spectrum.c_y = c_y;
    spectrum.quadrature_order = quadrature_order;
    spectrum.eigenvalues.resize(count);
    const Vector& ev = solver.eigenvalues();  // ascending
    for (int i = 0; i < count; ++i) {
        // The kernel is a positive-definite contraction; tiny negative or
        // above-one values are roundoff.
        spectrum.eigenvalues[i] = std::clamp(ev(n - 1 - i), 1e-300, 1.0);
    }
    return spectrum;
}

int default_eigenvalue_count(double c_y, int quadrature_order) {
    const double knee = 2.0 * c_y / std::numbers::pi;
    const int count = static_cast<int>(std::ceil(knee)) + 40;
    return std::clamp(count, 1, quadrature_order);
}

double dof_estimate(const LinkGeometry& link) {
    return 2.0 * bandwidth_parameter(link) / std::numbers::pi;
}

}  // namespace nfmimo
