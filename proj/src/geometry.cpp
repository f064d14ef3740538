// SPDX-License-Identifier: Apache-2.0
#include "nfmimo/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nfmimo {

namespace {

void check_array(const ArrayGeometry& a) {
    if (a.num_elements < 1) throw std::invalid_argument("num_elements must be >= 1");
    if (!(a.spacing > 0.0) && a.num_elements > 1)
        throw std::invalid_argument("spacing must be positive");
    if (!(std::abs(a.tilt) < std::numbers::pi / 2))
        throw std::invalid_argument("|tilt| must be < pi/2");
}

Vec3 axis_of(double tilt) { return {std::sin(tilt), std::cos(tilt), 0.0}; }

}  // namespace

ArrayGeometry::ArrayGeometry(int n, double d, double tilt_rad, Vec3 c)
    : num_elements(n), spacing(d), tilt(tilt_rad), center(std::move(c)) {
    check_array(*this);
}

std::vector<Vec3> element_positions(const ArrayGeometry& a) {
    check_array(a);
    const Vec3 axis = axis_of(a.tilt);
    std::vector<Vec3> points;
    points.reserve(a.num_elements);
    const double mid = 0.5 * (a.num_elements - 1);
    for (int n = 0; n < a.num_elements; ++n)
        points.push_back(a.center + (n - mid) * a.spacing * axis);
    return points;
}

LinkGeometry::LinkGeometry(ArrayGeometry tx, ArrayGeometry rx, double distance,
                           double wavelength)
    : tx_(std::move(tx)), rx_(std::move(rx)), distance_(distance), wavelength_(wavelength) {
    check_array(tx_);
    check_array(rx_);
    if (!(distance_ > 0.0)) throw std::invalid_argument("distance must be positive");
    if (!(wavelength_ > 0.0)) throw std::invalid_argument("wavelength must be positive");
    tx_.center = Vec3::Zero();
    rx_.center = Vec3(distance_, 0.0, 0.0);
}

std::vector<Vec3> LinkGeometry::tx_positions() const { return element_positions(tx_); }

std::vector<Vec3> LinkGeometry::rx_positions() const {
    // Mirrored about the line of centers: swapping the two arrays then yields
    // the same set of pairwise distances, so the channel transposes.
    ArrayGeometry mirrored = rx_;
    mirrored.tilt = -rx_.tilt;
    return element_positions(mirrored);
}

double rayleigh_distance(double aperture, double wavelength) {
    if (!(aperture > 0.0) || !(wavelength > 0.0))
        throw std::invalid_argument("aperture and wavelength must be positive");
    return 2.0 * aperture * aperture / wavelength;
}

std::pair<double, double> los_angles(const LinkGeometry& link) {
    const Vec3 khat(1.0, 0.0, 0.0);  // tx center -> rx center by construction
    const Vec3 t_tx = axis_of(link.tx().tilt);
    const Vec3 t_rx(-std::sin(link.rx().tilt), std::cos(link.rx().tilt), 0.0);
    auto clamp1 = [](double v) { return std::max(-1.0, std::min(1.0, v)); };
    const double aod = -std::asin(clamp1(t_tx.dot(khat)));
    const double aoa = -std::asin(clamp1(t_rx.dot(khat)));
    return {aod, aoa};
}

}  // namespace nfmimo
