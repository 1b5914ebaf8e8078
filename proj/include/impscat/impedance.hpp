#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "impscat/errors.hpp"

namespace impscat {

// Boundary impedance parameter gamma, a nonnegative extended real.
// gamma = inf encodes the Dirichlet (sound-soft) limit, gamma = 0 Neumann.
class Impedance {
  public:
    explicit Impedance(double gamma) : gamma_(gamma) {
        if (std::isnan(gamma) || gamma < 0.0)
            throw DomainError("impedance gamma must be >= 0 or inf, got " + std::to_string(gamma));
    }

    static Impedance dirichlet() { return Impedance(std::numeric_limits<double>::infinity()); }
    static Impedance neumann() { return Impedance(0.0); }

    double value() const { return gamma_; }
    bool is_dirichlet() const { return std::isinf(gamma_); }
    bool is_neumann() const { return gamma_ == 0.0; }

  private:
    double gamma_;
};

}  // namespace impscat
