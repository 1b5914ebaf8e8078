#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "impscat/cross_sections.hpp"
#include "impscat/shape_opt.hpp"
#include "support/oracles.hpp"

using namespace impscat;

TEST_CASE("integrand phi: special values") {
    CHECK(integrand_phi(Impedance::dirichlet(), 0.0).value == doctest::Approx(2.0));
    CHECK(integrand_phi(Impedance(1.0), 0.0).value == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(integrand_phi(Impedance(0.5), std::sqrt(3.0)).value ==
          doctest::Approx(0.0).epsilon(1e-15));
    CHECK(integrand_phi(Impedance::neumann(), 0.0).value == doctest::Approx(2.0));
    CHECK_THROWS_AS(integrand_phi(Impedance(1.0), -0.5), DomainError);
}

TEST_CASE("integrand phi: derivative matches central differences") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ug(0.05, 6.0), uu(0.0, 5.0);
    const double h = 1e-6;
    for (int i = 0; i < 100; ++i) {
        double gamma = ug(rng);
        double u = uu(rng) + h;  // keep u - h >= 0
        Impedance g(gamma);
        PhiValue p = integrand_phi(g, u);
        double fd = (integrand_phi(g, u + h).value - integrand_phi(g, u - h).value) / (2.0 * h);
        double scale = std::max({1e-8, std::abs(fd), std::abs(p.derivative)});
        CHECK(std::abs(p.derivative - fd) / scale <= 1e-7);
    }
    // Dirichlet branch too
    for (double u : {0.3, 1.0, 2.7}) {
        PhiValue p = integrand_phi(Impedance::dirichlet(), u);
        double fd = (integrand_phi(Impedance::dirichlet(), u + h).value -
                     integrand_phi(Impedance::dirichlet(), u - h).value) /
                    (2.0 * h);
        CHECK(std::abs(p.derivative - fd) <= 1e-7 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("zero transport slope") {
    CHECK(*zero_transport_slope(Impedance(0.5)) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(*zero_transport_slope(Impedance(1.0)) == doctest::Approx(0.0));
    CHECK(!zero_transport_slope(Impedance(2.0)).has_value());
    CHECK(!zero_transport_slope(Impedance::neumann()).has_value());
    CHECK(!zero_transport_slope(Impedance::dirichlet()).has_value());
}

TEST_CASE("radial objective: reference profiles") {
    // flat disk, gamma = 3 -> pi/2
    auto flat = RadialProfile::uniform(64, 1.0, 0.0);
    CHECK(objective_radial(flat, Impedance(3.0)) == doctest::Approx(M_PI / 2.0).epsilon(1e-12));

    // uniform slope sqrt(3), gamma = 0.5 -> 0
    auto cone = RadialProfile::uniform(64, 1.0, std::sqrt(3.0));
    CHECK(objective_radial(cone, Impedance(0.5)) == doctest::Approx(0.0).epsilon(1e-15));

    // hemisphere-sampled slope field, Dirichlet -> pi up to grid error
    int n = 1024;
    RadialProfile hemi = RadialProfile::uniform(n, 1.0, 0.0);
    for (int i = 0; i < n; ++i) {
        double r = hemi.cell_mid(i);
        hemi.u[i] = r / std::sqrt(1.0 - r * r);
    }
    CHECK(std::abs(objective_radial(hemi, Impedance::dirichlet()) - M_PI) <= 2e-5);
}

TEST_CASE("radial objective agrees with the planar functional") {
    // same body, two different discretizations: cell slopes vs analytic graph
    int n = 4096;
    RadialProfile prof = RadialProfile::uniform(n, 1.0, 0.0);
    for (int i = 0; i < n; ++i) prof.u[i] = prof.cell_mid(i);  // paraboloid slope u = rho

    auto par = ConvexSurface::paraboloid(1.0, 1.0);
    QuadratureSpec spec;
    for (double gamma : {0.7, 2.0, std::numeric_limits<double>::infinity()}) {
        double a = objective_radial(prof, Impedance(gamma));
        double b = transport_limit_planar(par, Impedance(gamma), spec).value;
        CHECK(std::abs(a / b - 1.0) <= 1e-4);
    }
}

TEST_CASE("projection: idempotent on feasible profiles") {
    RadialProfile p = RadialProfile::uniform(32, 1.0, 0.5);
    p.constraints.u_lo = 0.0;
    p.constraints.u_hi = 2.0;
    p.constraints.monotone = true;
    p.constraints.height_budget = 0.5;
    for (int i = 0; i < 32; ++i) p.u[i] = 0.5;  // feasible: monotone, in bounds, height 0.5
    auto proj = project_feasible(p.u, p);
    for (int i = 0; i < 32; ++i) CHECK(std::abs(proj[i] - p.u[i]) <= 1e-14);
}

TEST_CASE("projection: restores feasibility") {
    RadialProfile p = RadialProfile::uniform(6, 1.0, 0.0);
    p.constraints.u_lo = 0.0;
    p.constraints.u_hi = 1.0;
    p.constraints.monotone = true;
    p.constraints.height_budget = 0.5;
    p.u = {0.9, -0.3, 0.8, 0.2, 1.4, 0.1};
    auto proj = project_feasible(p.u, p);
    double h = 0.0;
    for (int i = 0; i < 6; ++i) {
        CHECK(proj[i] >= -1e-12);
        CHECK(proj[i] <= 1.0 + 1e-12);
        if (i) CHECK(proj[i] >= proj[i - 1] - 1e-12);
        h += proj[i] * p.cell_width(i);
    }
    CHECK(h == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("projection: infeasible budget") {
    RadialProfile p = RadialProfile::uniform(8, 1.0, 0.0);
    p.constraints.u_lo = 0.0;
    p.constraints.u_hi = 1.0;
    p.constraints.height_budget = 2.0;  // exceeds u_hi * rho_max
    CHECK_THROWS_AS(project_feasible(p.u, p), FeasibilityError);
}

TEST_CASE("optimizer: gamma = 0.5 reaches the analytic zero") {
    RadialProfile init = RadialProfile::uniform(128, 1.0, 1.0);
    init.constraints.u_lo = 0.0;
    init.constraints.u_hi = 3.0;
    auto report = optimize_profile(init, Impedance(0.5), Goal::minimize);
    CHECK(report.objective_trace.back() <= 1e-8);
    for (double u : report.profile.u) CHECK(std::abs(u - std::sqrt(3.0)) <= 1e-4);
    for (size_t i = 1; i < report.objective_trace.size(); ++i)
        CHECK(report.objective_trace[i] <= report.objective_trace[i - 1] + 1e-15);
}

TEST_CASE("optimizer: Dirichlet pushes the slope to the upper bound") {
    RadialProfile init = RadialProfile::uniform(64, 1.0, 1.0);
    init.constraints.u_lo = 0.0;
    init.constraints.u_hi = 8.0;
    auto report = optimize_profile(init, Impedance::dirichlet(), Goal::minimize);
    for (double u : report.profile.u) CHECK(u == doctest::Approx(8.0).epsilon(1e-10));
}

TEST_CASE("optimizer: height budget beats flat disk and straight cone") {
    const double budget = 0.5;
    Impedance gamma(2.0);

    auto flat = RadialProfile::uniform(256, 1.0, 0.0);
    double flat_obj = objective_radial(flat, gamma);
    auto cone = RadialProfile::uniform(256, 1.0, budget);
    double cone_obj = objective_radial(cone, gamma);

    RadialProfile init = RadialProfile::uniform(256, 1.0, budget);
    init.constraints.u_lo = 0.0;
    init.constraints.u_hi = 3.0;
    init.constraints.monotone = true;
    init.constraints.height_budget = budget;
    auto report = optimize_profile(init, gamma, Goal::minimize);

    CHECK(report.profile.height() == doctest::Approx(budget).epsilon(1e-9));
    CHECK(report.objective_trace.back() < flat_obj);
    CHECK(report.objective_trace.back() < cone_obj);
}

TEST_CASE("optimizer: maximization raises the objective") {
    RadialProfile init = RadialProfile::uniform(64, 1.0, 1.0);
    init.constraints.u_lo = 0.0;
    init.constraints.u_hi = 3.0;
    Impedance gamma(0.5);
    double before = objective_radial(init, gamma);
    auto report = optimize_profile(init, gamma, Goal::maximize);
    CHECK(report.objective_trace.back() > before);
    for (size_t i = 1; i < report.objective_trace.size(); ++i)
        CHECK(report.objective_trace[i] >= report.objective_trace[i - 1] - 1e-15);
}

TEST_CASE("profile validation") {
    RadialProfile p;
    p.rho = {0.0, 0.5};
    p.u = {1.0, 2.0};
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = RadialProfile::uniform(4, 1.0, 0.0);
    p.constraints.u_lo = 2.0;
    p.constraints.u_hi = 1.0;
    CHECK_THROWS_AS(p.validate(), FeasibilityError);
}
