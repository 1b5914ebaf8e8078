#pragma once

#include <functional>

#include "impscat/hf_amplitude.hpp"
#include "impscat/impedance.hpp"
#include "impscat/quadrature.hpp"
#include "impscat/surface.hpp"

namespace impscat {

struct CrossSectionResult {
    double value = 0.0;      // units of length^2
    double est_error = 0.0;  // self-convergence estimate plus excluded-cap bound
    QuadratureSpec spec;
};

// Angular weight applied to a density over the direction sphere.
enum class SphereWeight {
    total,      // 1
    transport,  // 1 - <theta, theta_0>
};

// Quadrature of weight * density over the unit sphere minus the forward guard
// cap: Gauss-Legendre in cos(polar), uniform trapezoid in azimuth. The
// est_error combines a half-resolution self-convergence estimate with a bound
// on the excluded cap. Density evaluation failures are rethrown with the
// offending node attached.
CrossSectionResult integrate_sphere_weighted(const std::function<double(const Vec3&)>& density,
                                             SphereWeight weight, const QuadratureSpec& spec);

// Transport cross section of the high-frequency limit density, integrated over
// directions (the angular route).
CrossSectionResult transport_hf_angular(const ConvexSurface& surface, const Impedance& gamma,
                                        const QuadratureSpec& spec);

// Total cross section of the high-frequency limit density over directions.
CrossSectionResult total_hf_angular(const ConvexSurface& surface, const Impedance& gamma,
                                    const QuadratureSpec& spec);

// High-frequency transport limit as a planar functional over the shadow domain:
//   integral of [2/(1+|grad g|^2)] * [(gamma*s - 1)/(gamma*s + 1)]^2 dx,
// with s = sqrt(1 + |grad g|^2). Reduces to the classical resistance
// integrand for the Dirichlet/Neumann limits.
CrossSectionResult transport_limit_planar(const ConvexSurface& surface, const Impedance& gamma,
                                          const QuadratureSpec& spec);

// Classical total cross section: area of the shadow projection.
double classical_sigma(const ConvexSurface& surface);

}  // namespace impscat
