// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "nfmimo/types.hpp"

namespace nfmimo {

/// A uniform linear array: elements on a line through `center`, tilted by
/// `tilt` radians away from the vertical (y) axis inside the x-y plane.
struct ArrayGeometry {
    int num_elements = 1;
    double spacing = 0.0;  // meters between adjacent elements
    double tilt = 0.0;     // radians, |tilt| < pi/2
    Vec3 center = Vec3::Zero();

    ArrayGeometry() = default;
    ArrayGeometry(int n, double d, double tilt_rad = 0.0, Vec3 c = Vec3::Zero());

    /// (num_elements - 1) * spacing
    double aperture() const { return (num_elements - 1) * spacing; }
};

/// Element coordinates, centered on `a.center`, consecutive separation
/// `a.spacing`, line direction (sin tilt, cos tilt, 0).
std::vector<Vec3> element_positions(const ArrayGeometry& a);

/// A transmit/receive array pair with center-to-center separation `distance`.
/// Centers are placed on the same level by construction: tx at the origin,
/// rx at (distance, 0, 0). The rx axis is mirrored about the line of centers
/// so that swapping tx and rx transposes the synthesized channel.
class LinkGeometry {
  public:
    LinkGeometry(ArrayGeometry tx, ArrayGeometry rx, double distance, double wavelength);

    const ArrayGeometry& tx() const { return tx_; }
    const ArrayGeometry& rx() const { return rx_; }
    double distance() const { return distance_; }
    double wavelength() const { return wavelength_; }

    std::vector<Vec3> tx_positions() const;
    std::vector<Vec3> rx_positions() const;

  private:
    ArrayGeometry tx_;
    ArrayGeometry rx_;
    double distance_;
    double wavelength_;
};

/// Classical Rayleigh (Fraunhofer) distance 2 D^2 / lambda.
double rayleigh_distance(double aperture, double wavelength);

/// Departure/arrival angles of the center-to-center ray, in the steering-vector
/// convention used by far_field_channel. Feeding these back into
/// far_field_channel reproduces the large-distance limit of the near-field
/// channel for the same link.
std::pair<double, double> los_angles(const LinkGeometry& link);

}  // namespace nfmimo
