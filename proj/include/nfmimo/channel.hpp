// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nfmimo/geometry.hpp"
#include "nfmimo/types.hpp"

namespace nfmimo {

enum class ChannelModel { near_field, far_field };

/// Complex Nr x Nt channel matrix. Under the unit path-gain convention every
/// entry has magnitude 1 and the squared Frobenius norm equals Nt * Nr.
class ChannelMatrix {
  public:
    ChannelMatrix(CMatrix entries, double wavelength, ChannelModel model);

    const CMatrix& entries() const { return entries_; }
    double wavelength() const { return wavelength_; }
    ChannelModel model() const { return model_; }

    Eigen::Index rx_count() const { return entries_.rows(); }
    Eigen::Index tx_count() const { return entries_.cols(); }
    double frobenius_sq() const { return entries_.squaredNorm(); }

  private:
    CMatrix entries_;
    double wavelength_;
    ChannelModel model_;
};

/// Spherical-wave LoS channel: entry (p, q) = exp(-j 2 pi r_pq / lambda) with
/// r_pq the Euclidean distance between rx element p and tx element q.
/// Throws on coincident elements ("degenerate geometry").
ChannelMatrix near_field_channel(const LinkGeometry& link);

/// Far-field ULA array response, 1/sqrt(N) normalized:
/// a(phi)_n = exp(j n 2 pi d sin(phi) / lambda) / sqrt(N), n = 0..N-1.
CVector steering_vector(int n, double spacing, double wavelength, double angle);

/// Planar-wave rank-1 LoS channel a_r(aoa) a_t(aod)^H, scaled so every entry
/// has unit magnitude, with the center-to-center propagation phase applied.
ChannelMatrix far_field_channel(const LinkGeometry& link, double aod, double aoa);

}  // namespace nfmimo
