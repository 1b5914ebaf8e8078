#pragma once

#include <vector>

#include "impscat/errors.hpp"

namespace impscat {

// Gauss-Legendre rule on [-1, 1]. Nodes ascending; weights sum to 2.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Computed by Newton iteration on the Legendre recurrence; results are
// cached per node count (thread-safe).
const GaussLegendreRule& gauss_legendre(int n);

// Rule mapped to [a, b].
GaussLegendreRule gauss_legendre_on(int n, double a, double b);

// Node counts for the angular and planar quadratures.
//   n_polar    Gauss-Legendre nodes in cos(polar angle)
//   n_azimuth  uniform trapezoid nodes over the periodic azimuth
//   n_radial   Gauss-Legendre nodes for 1D radial planar integrals
//   eps_fwd    radius (radians) of the excluded cap around the incident direction
struct QuadratureSpec {
    int n_polar = 400;
    int n_azimuth = 256;
    int n_radial = 512;
    double eps_fwd = 1e-6;

    void validate() const {
        if (n_polar < 2) throw DomainError("QuadratureSpec: n_polar must be >= 2");
        if (n_azimuth < 4) throw DomainError("QuadratureSpec: n_azimuth must be >= 4");
        if (n_radial < 2) throw DomainError("QuadratureSpec: n_radial must be >= 2");
        if (eps_fwd <= 0.0) throw DomainError("QuadratureSpec: eps_fwd must be > 0");
    }

    QuadratureSpec halved() const {
        QuadratureSpec h = *this;
        h.n_polar = std::max(2, n_polar / 2);
        h.n_azimuth = std::max(4, n_azimuth / 2);
        h.n_radial = std::max(2, n_radial / 2);
        return h;
    }
};

// Compensated (Neumaier) accumulator: deterministic for a fixed evaluation
// order and accurate to ~1 ulp regardless of term count.
class KahanSum {
  public:
    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace impscat
