#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "impscat/hf_amplitude.hpp"
#include "support/oracles.hpp"

using namespace impscat;

TEST_CASE("reflection coefficient") {
    CHECK(reflection_coefficient(Impedance(2.0), 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    for (double c : {0.2, 0.5, 1.0})
        CHECK(reflection_coefficient(Impedance(c), c) == doctest::Approx(0.0).epsilon(1e-15));
    for (double c : {0.0, 0.3, 1.0})
        CHECK(reflection_coefficient(Impedance::dirichlet(), c) == 1.0);
    CHECK(reflection_coefficient(Impedance::neumann(), 0.5) == -1.0);

    CHECK_THROWS_AS(reflection_coefficient(Impedance::neumann(), 0.0), DomainError);
    CHECK_THROWS_AS(reflection_coefficient(Impedance(1.0), 1.5), DomainError);
    CHECK_THROWS_AS(Impedance(-0.1), DomainError);
}

TEST_CASE("amplitude modulus on the unit sphere") {
    auto sph = ConvexSurface::sphere(1.0);
    Vec3 back{0.0, 0.0, -1.0};

    auto f = amplitude_hf(sph, back, Impedance::dirichlet(), 1.0);
    CHECK(std::abs(f) == doctest::Approx(0.5).epsilon(1e-10));

    // gamma = 1 kills normal-incidence reflection
    auto f1 = amplitude_hf(sph, back, Impedance(1.0), 1.0);
    CHECK(std::abs(f1) <= 1e-12);
    CHECK(density_hf(sph, back, Impedance(1.0)) <= 1e-12);
}

TEST_CASE("density values on spheres") {
    auto sph = ConvexSurface::sphere(1.0);
    for (double mu : {-0.95, -0.5, 0.2, 0.8}) {
        double s = std::sqrt(1.0 - mu * mu);
        Vec3 theta{s, 0.0, mu};
        CHECK(density_hf(sph, theta, Impedance::dirichlet()) == doctest::Approx(0.25).epsilon(1e-10));
    }
    auto big = ConvexSurface::sphere(2.0);
    CHECK(density_hf(big, {0.0, 0.0, -1.0}, Impedance::dirichlet()) ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("ellipsoid density cross-checked against closed-form curvature") {
    auto ell = ConvexSurface::ellipsoid(1.0, 1.3, 0.7);
    Vec3 theta{-1.0, 0.0, 0.0};
    Vec3 nu = (theta - incident_direction()).normalized();
    double k_oracle = oracle::ellipsoid_curvature_of_normal(1.0, 1.3, 0.7, nu);
    double c = std::sqrt(0.5);  // incidence cosine at 90 degree scattering
    double rho = (2.0 - c) / (2.0 + c);

    double f = std::abs(amplitude_hf(ell, theta, Impedance(2.0), 3.0));
    CHECK(f == doctest::Approx(0.5 / std::sqrt(k_oracle) * rho).epsilon(1e-9));
    CHECK(density_hf(ell, theta, Impedance(2.0)) ==
          doctest::Approx(0.25 / k_oracle * rho * rho).epsilon(1e-9));
}

TEST_CASE("density equals squared amplitude and is k independent") {
    auto ell = ConvexSurface::ellipsoid(1.0, 1.3, 0.7);
    for (double gamma : {0.5, 2.0}) {
        Impedance g(gamma);
        for (double mu : {-0.9, -0.3, 0.5}) {
            for (double phi : {0.3, 2.2, 4.4}) {
                double s = std::sqrt(1.0 - mu * mu);
                Vec3 theta{s * std::cos(phi), s * std::sin(phi), mu};
                double d = density_hf(ell, theta, g);
                double f1 = std::norm(amplitude_hf(ell, theta, g, 1.0));
                double f2 = std::norm(amplitude_hf(ell, theta, g, 37.5));
                CHECK(d == doctest::Approx(f1).epsilon(1e-12));
                CHECK(d == doctest::Approx(f2).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("Dirichlet and Neumann densities coincide; impedance lies below") {
    auto sph = ConvexSurface::sphere(1.0);
    for (double mu : {-0.99, -0.4, 0.3, 0.9}) {
        double s = std::sqrt(1.0 - mu * mu);
        Vec3 theta{s, 0.0, mu};
        double dirichlet = density_hf(sph, theta, Impedance::dirichlet());
        double neumann = density_hf(sph, theta, Impedance::neumann());
        CHECK(dirichlet == doctest::Approx(neumann).epsilon(1e-12));
        for (double gamma : {0.25, 1.0, 3.0}) {
            double d = density_hf(sph, theta, Impedance(gamma));
            CHECK(d >= -1e-15);
            CHECK(d <= dirichlet + 1e-15);
        }
    }
}

TEST_CASE("amplitude sample invariant") {
    auto sph = ConvexSurface::sphere(1.0);
    auto s = amplitude_sample_hf(sph, {0.6, 0.0, -0.8}, Impedance(2.0), 5.0);
    CHECK(s.density == doctest::Approx(std::norm(s.f)).epsilon(1e-15));
}

TEST_CASE("forward guard propagates") {
    auto sph = ConvexSurface::sphere(1.0);
    CHECK_THROWS_AS(density_hf(sph, {0.0, 0.0, 1.0}, Impedance(1.0)), ForwardSingularityError);
    CHECK_THROWS_AS(amplitude_hf(sph, {0.0, 0.0, 1.0}, Impedance(1.0), 1.0),
                    ForwardSingularityError);
    CHECK_THROWS_AS(amplitude_hf(sph, {0.0, 0.0, -1.0}, Impedance(1.0), 0.0), DomainError);
}
