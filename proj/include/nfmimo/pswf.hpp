// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "nfmimo/geometry.hpp"
#include "nfmimo/types.hpp"

namespace nfmimo {

/// Gauss-Legendre quadrature rule on [-1, 1].
struct QuadratureRule {
    Vector nodes;
    Vector weights;
};

/// Rules are cached per order; computing one is cheap but they are requested
/// once per sweep point.
const QuadratureRule& gauss_legendre(int order);

/// Leading spectrum of the sinc-kernel integral operator
///   (K f)(x) = int_{-1}^{1} sin(c_y (x - x')) / (pi (x - x')) f(x') dx'.
/// Eigenvalues lie in (0, 1], decrease monotonically and drop off sharply
/// around index 2 c_y / pi.
struct PswfSpectrum {
    double c_y = 0.0;
    std::vector<double> eigenvalues;  // decreasing
    int quadrature_order = 0;

    double sum() const;
};

/// Space-bandwidth product of a link:
/// c_y = pi (Nt-1)(Nr-1) d_t d_r cos(theta) cos(phi) / (2 lambda r).
double bandwidth_parameter(const LinkGeometry& link);

/// Top `count` eigenvalues of the sinc kernel on [-1,1], computed by Nystrom
/// discretization on a Gauss-Legendre grid, symmetrized as W^1/2 K W^1/2.
/// The removable singularity on the diagonal evaluates to c_y / pi.
PswfSpectrum pswf_eigenvalues(double c_y, int count, int quadrature_order = 512);

/// Number of eigenvalues worth keeping for a given c_y: the plunge region is
/// narrow, so everything past the knee plus a margin is numerically zero.
int default_eigenvalue_count(double c_y, int quadrature_order);

/// Estimated usable spatial streams, 2 c_y / pi.
double dof_estimate(const LinkGeometry& link);

}  // namespace nfmimo
