#include "impscat/shape_opt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "impscat/errors.hpp"
#include "impscat/quadrature.hpp"

namespace impscat {

PhiValue integrand_phi(const Impedance& gamma, double u) {
    if (u < 0.0) throw DomainError("integrand_phi: slope must be nonnegative");
    double s2 = 1.0 + u * u;
    double s = std::sqrt(s2);
    PhiValue out;
    if (gamma.is_dirichlet() || gamma.is_neumann()) {
        // bracket is +-1; classical resistance integrand
        out.value = 2.0 / s2;
        out.derivative = -4.0 * u / (s2 * s2);
        return out;
    }
    double g = gamma.value();
    double denom = g * s + 1.0;
    double b = (g * s - 1.0) / denom;
    out.value = 2.0 / s2 * b * b;
    // d/du [2 s^-2 B^2] with dB/ds = 2 gamma / (gamma s + 1)^2, ds/du = u/s
    out.derivative = -4.0 * u * b * b / (s2 * s2) + 8.0 * g * u * b / (s2 * s * denom * denom);
    return out;
}

std::optional<double> zero_transport_slope(const Impedance& gamma) {
    if (gamma.is_dirichlet() || gamma.is_neumann()) return std::nullopt;
    double g = gamma.value();
    if (g > 1.0) return std::nullopt;
    return std::sqrt(1.0 / (g * g) - 1.0);
}

// ---------------------------------------------------------------------------
// RadialProfile

RadialProfile RadialProfile::uniform(int cells, double rho_max, double slope) {
    if (cells < 1) throw DomainError("RadialProfile::uniform: need at least one cell");
    if (!(rho_max > 0.0)) throw DomainError("RadialProfile::uniform: rho_max must be positive");
    RadialProfile p;
    p.rho.resize(cells + 1);
    for (int i = 0; i <= cells; ++i) p.rho[i] = rho_max * i / cells;
    p.u.assign(cells, slope);
    return p;
}

double RadialProfile::height() const {
    KahanSum s;
    for (int i = 0; i < cells(); ++i) s.add(u[i] * cell_width(i));
    return s.value();
}

void RadialProfile::validate() const {
    if (rho.size() < 2 || u.size() + 1 != rho.size())
        throw DomainError("RadialProfile: need N+1 nodes for N cells");
    if (rho.front() != 0.0) throw DomainError("RadialProfile: rho must start at 0");
    for (size_t i = 1; i < rho.size(); ++i)
        if (!(rho[i] > rho[i - 1])) throw DomainError("RadialProfile: rho must strictly increase");
    if (!(constraints.u_lo <= constraints.u_hi))
        throw FeasibilityError("RadialProfile: u_lo > u_hi");
}

double objective_radial(const RadialProfile& profile, const Impedance& gamma) {
    profile.validate();
    KahanSum s;
    for (int i = 0; i < profile.cells(); ++i)
        s.add(integrand_phi(gamma, profile.u[i]).value * profile.cell_mid(i) *
              profile.cell_width(i));
    return 2.0 * M_PI * s.value();
}

std::vector<double> objective_radial_gradient(const RadialProfile& profile,
                                              const Impedance& gamma) {
    profile.validate();
    std::vector<double> g(profile.cells());
    for (int i = 0; i < profile.cells(); ++i)
        g[i] = 2.0 * M_PI * integrand_phi(gamma, profile.u[i]).derivative * profile.cell_mid(i) *
               profile.cell_width(i);
    return g;
}

// ---------------------------------------------------------------------------
// Constraint projections

namespace {

void project_bounds(std::vector<double>& u, const ProfileConstraints& c) {
    for (double& v : u) v = std::clamp(v, c.u_lo, c.u_hi);
}

// Pool-adjacent-violators: Euclidean projection onto nondecreasing sequences.
void project_monotone(std::vector<double>& u) {
    const size_t n = u.size();
    std::vector<double> level(n), weight(n);
    std::vector<size_t> count(n);
    size_t blocks = 0;
    for (size_t i = 0; i < n; ++i) {
        level[blocks] = u[i];
        weight[blocks] = 1.0;
        count[blocks] = 1;
        ++blocks;
        while (blocks > 1 && level[blocks - 2] > level[blocks - 1]) {
            double w = weight[blocks - 2] + weight[blocks - 1];
            level[blocks - 2] =
                (level[blocks - 2] * weight[blocks - 2] + level[blocks - 1] * weight[blocks - 1]) /
                w;
            weight[blocks - 2] = w;
            count[blocks - 2] += count[blocks - 1];
            --blocks;
        }
    }
    size_t k = 0;
    for (size_t b = 0; b < blocks; ++b)
        for (size_t i = 0; i < count[b]; ++i) u[k++] = level[b];
}

void project_budget(std::vector<double>& u, const std::vector<double>& widths, double budget) {
    double cur = 0.0, wsq = 0.0;
    for (size_t i = 0; i < u.size(); ++i) {
        cur += u[i] * widths[i];
        wsq += widths[i] * widths[i];
    }
    double shift = (budget - cur) / wsq;
    for (size_t i = 0; i < u.size(); ++i) u[i] += shift * widths[i];
}

double feasibility_residual(const std::vector<double>& u, const std::vector<double>& widths,
                            const ProfileConstraints& c) {
    double r = 0.0;
    for (double v : u) {
        r = std::max(r, c.u_lo - v);
        r = std::max(r, v - c.u_hi);
    }
    if (c.monotone)
        for (size_t i = 1; i < u.size(); ++i) r = std::max(r, u[i - 1] - u[i]);
    if (c.height_budget) {
        double h = 0.0;
        for (size_t i = 0; i < u.size(); ++i) h += u[i] * widths[i];
        r = std::max(r, std::abs(h - *c.height_budget));
    }
    return r;
}

}  // namespace

std::vector<double> project_feasible(const std::vector<double>& u, const RadialProfile& grid) {
    grid.validate();
    const ProfileConstraints& c = grid.constraints;
    std::vector<double> widths(grid.cells());
    for (int i = 0; i < grid.cells(); ++i) widths[i] = grid.cell_width(i);

    if (c.height_budget) {
        double lo = c.u_lo * (grid.rho.back() - grid.rho.front());
        double hi = c.u_hi * (grid.rho.back() - grid.rho.front());
        if (*c.height_budget < lo - 1e-12 || *c.height_budget > hi + 1e-12) {
            std::ostringstream os;
            os << "height budget " << *c.height_budget << " outside the attainable range ["
               << lo << ", " << hi << "]";
            throw FeasibilityError(os.str());
        }
    }

    std::vector<double> x = u;
    std::vector<double> p1(x.size(), 0.0), p2(x.size(), 0.0), p3(x.size(), 0.0);
    for (int pass = 0; pass < 50; ++pass) {
        auto apply = [&](std::vector<double>& corr, auto&& proj) {
            std::vector<double> z(x.size());
            for (size_t i = 0; i < x.size(); ++i) z[i] = x[i] + corr[i];
            std::vector<double> y = z;
            proj(y);
            for (size_t i = 0; i < x.size(); ++i) corr[i] = z[i] - y[i];
            x = y;
        };
        apply(p1, [&](std::vector<double>& v) { project_bounds(v, c); });
        if (c.monotone) apply(p2, [&](std::vector<double>& v) { project_monotone(v); });
        if (c.height_budget)
            apply(p3, [&](std::vector<double>& v) { project_budget(v, widths, *c.height_budget); });
        if (feasibility_residual(x, widths, c) < 1e-13) return x;
    }
    double res = feasibility_residual(x, widths, c);
    if (res < 1e-10) return x;
    std::ostringstream os;
    os << "projection did not reach joint feasibility (residual " << res << " after 50 passes)";
    throw FeasibilityError(os.str());
}

// ---------------------------------------------------------------------------
// Optimizer

namespace {

// Curvature scale of phi over the working slope range, by sampled differences
// of the closed-form derivative.
double phi_curvature_scale(const Impedance& gamma, double u_lo, double u_hi) {
    double lo = std::max(0.0, u_lo);
    double hi = std::isfinite(u_hi) ? u_hi : std::max(10.0, lo + 10.0);
    if (hi <= lo) hi = lo + 1.0;
    const int kSamples = 200;
    double h = (hi - lo) / kSamples;
    double scale = 0.0;
    double prev = integrand_phi(gamma, lo).derivative;
    for (int i = 1; i <= kSamples; ++i) {
        double cur = integrand_phi(gamma, lo + i * h).derivative;
        scale = std::max(scale, std::abs(cur - prev) / h);
        prev = cur;
    }
    return std::max(scale, 1e-8);
}

}  // namespace

OptimizeReport optimize_profile(const RadialProfile& init, const Impedance& gamma, Goal goal,
                                const StepSchedule& schedule, double tol) {
    init.validate();
    RadialProfile grid = init;

    OptimizeReport report;
    report.profile = grid;
    report.profile.u = project_feasible(init.u, grid);

    const double sign = goal == Goal::minimize ? 1.0 : -1.0;
    const int n = grid.cells();

    // Per-cell inverse Lipschitz estimate: the objective is separable with
    // d2J/du_i^2 = 2 pi rho_mid drho phi''(u_i).
    double lphi = phi_curvature_scale(gamma, grid.constraints.u_lo, grid.constraints.u_hi);
    std::vector<double> base_step(n);
    for (int i = 0; i < n; ++i)
        base_step[i] =
            schedule.step_scale / (2.0 * M_PI * grid.cell_mid(i) * grid.cell_width(i) * lphi);

    double objective = objective_radial(report.profile, gamma);
    report.objective_trace.push_back(objective);

    std::vector<double> trial(n);
    for (int it = 0; it < schedule.max_iterations; ++it) {
        std::vector<double> g = objective_radial_gradient(report.profile, gamma);

        // projected-gradient stationarity measure at the base step
        for (int i = 0; i < n; ++i) trial[i] = report.profile.u[i] - sign * base_step[i] * g[i];
        std::vector<double> probe = project_feasible(trial, grid);
        double pg = 0.0;
        for (int i = 0; i < n; ++i) {
            double d = (report.profile.u[i] - probe[i]) / base_step[i];
            pg += d * d;
        }
        pg = std::sqrt(pg);
        report.projected_gradient_norm = pg;
        report.iterations = it;
        if (pg <= tol) {
            report.converged = true;
            break;
        }

        double damp = 1.0;
        bool accepted = false;
        for (int half = 0; half < schedule.max_halvings; ++half) {
            std::vector<double> cand;
            if (half == 0) {
                cand = probe;  // reuse the stationarity probe
            } else {
                for (int i = 0; i < n; ++i)
                    trial[i] = report.profile.u[i] - sign * damp * base_step[i] * g[i];
                cand = project_feasible(trial, grid);
            }
            RadialProfile candidate = grid;
            candidate.u = cand;
            double cobj = objective_radial(candidate, gamma);
            if (sign * (cobj - objective) <= 0.0) {
                report.profile.u = std::move(cand);
                objective = cobj;
                report.objective_trace.push_back(objective);
                accepted = true;
                break;
            }
            damp *= 0.5;
        }
        if (!accepted) {
            if (pg > 100.0 * tol) {
                std::ostringstream os;
                os << "step halving exhausted away from stationarity (projected gradient " << pg
                   << ", objective " << objective << ", iteration " << it << ")";
                throw StepScheduleError(os.str());
            }
            report.converged = true;
            break;
        }
    }

    std::vector<double> widths(n);
    for (int i = 0; i < n; ++i) widths[i] = grid.cell_width(i);
    report.constraint_residual =
        feasibility_residual(report.profile.u, widths, grid.constraints);
    return report;
}

}  // namespace impscat
