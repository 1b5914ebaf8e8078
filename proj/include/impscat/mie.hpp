#pragma once

#include <complex>
#include <vector>

#include "impscat/impedance.hpp"
#include "impscat/quadrature.hpp"

namespace impscat {

// Spherical Bessel functions of the first and second kind with derivatives,
// orders 0..l_max at a common argument.
struct SphericalBesselTable {
    std::vector<double> j, jp;  // j_l(x), d/dx j_l(x)
    std::vector<double> y, yp;  // y_l(x), d/dx y_l(x)
};

// j_l by Miller-style downward recurrence (renormalized against the closed
// forms of orders 0/1), y_l by stable upward recurrence. Throws RangeError
// with the failing order if y_l overflows.
SphericalBesselTable spherical_bessel_pair(double x, int l_max);

// Partial-wave truncation rule.
int default_l_max(double ka);

// Exact partial-wave solution for the unit sphere (lengths in units of the
// radius, so ka is the only parameter).
struct MieSolution {
    double ka = 0.0;
    Impedance gamma = Impedance::dirichlet();
    int l_max = 0;
    std::vector<std::complex<double>> c;  // c_0 .. c_{l_max}

    // |c_{l_max}| relative to the largest coefficient; small when truncation
    // has converged.
    double tail_ratio() const;
};

// Coefficients of the scattered field under the impedance condition
// du/dn + i k gamma u = 0 on r = 1 (outward normal, absorbing for gamma > 0):
//   c_l = -(j_l' + i gamma j_l) / (h_l' + i gamma h_l),  h_l = j_l + i y_l,
// with the Dirichlet limit -j_l/h_l and the Neumann limit -j_l'/h_l'.
// Throws PassivityViolation if any |1 + 2 c_l| exceeds 1 + 1e-10.
MieSolution mie_coefficients(double ka, const Impedance& gamma, int l_max);
MieSolution mie_coefficients(double ka, const Impedance& gamma);

// Far-field amplitude f(theta) = 1/(i k) sum (2l+1) c_l P_l(cos theta).
std::complex<double> amplitude_exact(const MieSolution& sol, double theta_polar);

struct ExactCrossSections {
    double scattering = 0.0;
    double extinction = 0.0;
    double absorption = 0.0;
};

// Series cross sections and the optical-theorem extinction. Throws
// PassivityViolation if absorption < -1e-10 (a coefficient bug).
ExactCrossSections cross_sections_exact(const MieSolution& sol);

// Transport cross section of the exact solution: integral of
// (1 - cos theta) |f|^2 over the sphere, Gauss-Legendre in cos theta with the
// azimuth handled exactly by symmetry. Requires n_polar >= 10 ka + 200 to
// resolve the forward lobe; refuses otherwise.
double transport_exact(const MieSolution& sol, const QuadratureSpec& spec);

struct SweepRecord {
    double ka = 0.0;
    double sigma_scat = 0.0;
    double sigma_ext = 0.0;
    double sigma_abs = 0.0;
    double transport = 0.0;
    int l_max = 0;
    double est_error = 0.0;  // transport self-convergence estimate
};

struct SweepResult {
    std::vector<SweepRecord> records;
    double c_emp = 0.0;  // max sigma_scat over the grid
};

// One record per ka, in grid order. Grid must be positive and ascending.
SweepResult sweep(const std::vector<double>& ka_grid, const Impedance& gamma,
                  const QuadratureSpec& spec);

}  // namespace impscat
