#pragma once

#include <complex>

#include "impscat/impedance.hpp"
#include "impscat/surface.hpp"

namespace impscat {

// Amplitude of the reflected ray for incidence cosine c = |<n, theta>|:
// (gamma - c)/(gamma + c). Returns +1 for the Dirichlet limit and -1 for
// Neumann with c > 0; gamma = 0 together with c = 0 is indeterminate.
double reflection_coefficient(const Impedance& gamma, double c);

struct AmplitudeSample {
    Vec3 theta;
    std::complex<double> f;  // units of length
    double density = 0.0;    // |f|^2
};

// Leading-order (physical-optics) scattering amplitude at wavenumber k:
//   f(theta) = 1/2 K(y+)^(-1/2) exp(i k <y+, theta - theta_0>) * rho_gamma.
// Valid away from the forward guard cap; the O(1/k) remainder is not modeled.
std::complex<double> amplitude_hf(const ConvexSurface& surface, const Vec3& theta,
                                  const Impedance& gamma, double k);

// k-independent limit density |f|^2 = (4 K(y+))^(-1) * rho_gamma^2.
double density_hf(const ConvexSurface& surface, const Vec3& theta, const Impedance& gamma);

AmplitudeSample amplitude_sample_hf(const ConvexSurface& surface, const Vec3& theta,
                                    const Impedance& gamma, double k);

}  // namespace impscat
