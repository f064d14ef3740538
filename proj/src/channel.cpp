// SPDX-License-Identifier: Apache-2.0
#include "nfmimo/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nfmimo {

ChannelMatrix::ChannelMatrix(CMatrix entries, double wavelength, ChannelModel model)
    : entries_(std::move(entries)), wavelength_(wavelength), model_(model) {
    if (entries_.size() == 0) throw std::invalid_argument("empty channel matrix");
    if (!(wavelength_ > 0.0)) throw std::invalid_argument("wavelength must be positive");
    if (!entries_.allFinite()) throw std::invalid_argument("channel entries must be finite");
}

ChannelMatrix near_field_channel(const LinkGeometry& link) {
    const auto tx = link.tx_positions();
    const auto rx = link.rx_positions();
    const double k = 2.0 * std::numbers::pi / link.wavelength();

    CMatrix h(rx.size(), tx.size());
    const double min_separation = 1e-9 * link.wavelength();
    for (std::size_t p = 0; p < rx.size(); ++p) {
        for (std::size_t q = 0; q < tx.size(); ++q) {
            const double r_pq = (rx[p] - tx[q]).norm();
            if (!(r_pq > min_separation)) throw std::invalid_argument("degenerate geometry");
            h(p, q) = std::polar(1.0, -k * r_pq);
        }
    }
    return ChannelMatrix(std::move(h), link.wavelength(), ChannelModel::near_field);
}

CVector steering_vector(int n, double spacing, double wavelength, double angle) {
    if (n < 1) throw std::invalid_argument("steering vector needs n >= 1");
    const double step = 2.0 * std::numbers::pi * spacing * std::sin(angle) / wavelength;
    CVector a(n);
    const double scale = 1.0 / std::sqrt(double(n));
    for (int i = 0; i < n; ++i) a(i) = std::polar(scale, step * i);
    return a;
}

ChannelMatrix far_field_channel(const LinkGeometry& link, double aod, double aoa) {
    const auto& tx = link.tx();
    const auto& rx = link.rx();
    const CVector at = steering_vector(tx.num_elements, tx.spacing, link.wavelength(), aod);
    const CVector ar = steering_vector(rx.num_elements, rx.spacing, link.wavelength(), aoa);
    const double gain = std::sqrt(double(tx.num_elements) * double(rx.num_elements));
    const Complex phase =
        std::polar(gain, -2.0 * std::numbers::pi * link.distance() / link.wavelength());
    CMatrix h = phase * (ar * at.adjoint());
    return ChannelMatrix(std::move(h), link.wavelength(), ChannelModel::far_field);
}

}  // namespace nfmimo
