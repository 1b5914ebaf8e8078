#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "impscat/impedance.hpp"

namespace impscat {

// Pointwise transport integrand as a function of the slope u = |grad g|:
//   phi_gamma(u) = [2/(1+u^2)] * [(gamma*s - 1)/(gamma*s + 1)]^2,  s = sqrt(1+u^2).
struct PhiValue {
    double value = 0.0;
    double derivative = 0.0;  // d phi / d u, closed form
};

PhiValue integrand_phi(const Impedance& gamma, double u);

// Slope at which phi_gamma vanishes: sqrt(1/gamma^2 - 1) for 0 < gamma <= 1,
// nothing otherwise (including gamma = 0, where the bracket is -1 identically).
std::optional<double> zero_transport_slope(const Impedance& gamma);

struct ProfileConstraints {
    double u_lo = 0.0;
    double u_hi = std::numeric_limits<double>::infinity();
    bool monotone = false;  // nondecreasing slope across cells (convex body)
    std::optional<double> height_budget;  // sum_i u_i * drho_i
};

// Discretized slope field u(rho) on [0, rho_max]: cell i carries the constant
// slope u[i] on (rho[i], rho[i+1]]. The optimizer's decision variable.
struct RadialProfile {
    std::vector<double> rho;  // N+1 ascending nodes, rho[0] = 0
    std::vector<double> u;    // N cell slopes
    ProfileConstraints constraints;

    static RadialProfile uniform(int cells, double rho_max, double slope);

    int cells() const { return static_cast<int>(u.size()); }
    double cell_width(int i) const { return rho[i + 1] - rho[i]; }
    double cell_mid(int i) const { return 0.5 * (rho[i] + rho[i + 1]); }
    double height() const;  // sum u_i * drho_i

    void validate() const;
};

// 2*pi * integral of phi_gamma(u(rho)) rho drho by the midpoint rule on the
// profile grid.
double objective_radial(const RadialProfile& profile, const Impedance& gamma);

// Gradient of objective_radial with respect to the cell slopes.
std::vector<double> objective_radial_gradient(const RadialProfile& profile,
                                              const Impedance& gamma);

// Euclidean projection onto the profile's constraint set (bounds, monotone
// slope via pool-adjacent-violators, height budget), iterated Dykstra-style
// to joint feasibility. Throws FeasibilityError if the set is empty.
std::vector<double> project_feasible(const std::vector<double>& u, const RadialProfile& grid);

enum class Goal { minimize, maximize };

struct StepSchedule {
    double step_scale = 0.1;  // fraction of the inverse per-cell Lipschitz estimate
    int max_iterations = 50000;
    int max_halvings = 40;
};

struct OptimizeReport {
    RadialProfile profile;
    std::vector<double> objective_trace;  // initial value plus one per accepted step
    double projected_gradient_norm = 0.0;
    double constraint_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Projected gradient descent/ascent with a per-cell Lipschitz step estimate
// and step halving whenever a trial step would degrade the objective; the
// trace is monotone in the goal direction by construction.
OptimizeReport optimize_profile(const RadialProfile& init, const Impedance& gamma, Goal goal,
                                const StepSchedule& schedule = {}, double tol = 1e-10);

}  // namespace impscat
