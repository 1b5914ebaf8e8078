#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "impscat/surface.hpp"
#include "support/oracles.hpp"

using namespace impscat;

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool vec_close(const Vec3& a, const Vec3& b, double tol) {
    return (a - b).norm() <= tol;
}

}  // namespace

TEST_CASE("outward normal") {
    auto sph = ConvexSurface::sphere(1.0);
    CHECK(vec_close(outward_normal(sph, {0.0, 0.0}), {0.0, 0.0, -1.0}, 1e-15));

    auto flat = ConvexSurface::graph([](Vec2) { return 2.0; }, [](Vec2) { return Vec2{0, 0}; },
                                     [](Vec2) { return Mat2{}; },
                                     PlanarDomain::rectangle(0, 1, 0, 1), "flat");
    CHECK(vec_close(outward_normal(flat, {0.5, 0.5}), {0.0, 0.0, -1.0}, 1e-15));

    auto par = ConvexSurface::paraboloid(1.0, 2.0);
    Vec3 n = outward_normal(par, {1.0, 0.0});
    CHECK(vec_close(n, {1.0 / std::sqrt(2.0), 0.0, -1.0 / std::sqrt(2.0)}, 1e-15));
    CHECK(n.dot(incident_direction()) < 0.0);  // illuminated-side convention
    CHECK(close(n.norm(), 1.0, 1e-12));

    CHECK_THROWS_AS(outward_normal(par, {3.0, 0.0}), DomainError);
}

TEST_CASE("gauss curvature") {
    for (double a : {0.5, 1.0, 2.0}) {
        auto sph = ConvexSurface::sphere(a);
        CHECK(close(gauss_curvature(sph, {0.0, 0.0}), 1.0 / (a * a), 1e-12));
        CHECK(close(gauss_curvature(sph, {0.3 * a, -0.5 * a}), 1.0 / (a * a), 1e-12));
    }
    auto par = ConvexSurface::paraboloid(1.0, 2.0);
    CHECK(close(gauss_curvature(par, {0.0, 0.0}), 1.0, 1e-15));
    CHECK(close(gauss_curvature(par, {1.0, 0.0}), 0.25, 1e-15));

    auto flat = ConvexSurface::graph([](Vec2) { return 0.0; }, [](Vec2) { return Vec2{0, 0}; },
                                     [](Vec2) { return Mat2{}; },
                                     PlanarDomain::rectangle(0, 1, 0, 1), "flat");
    CHECK_THROWS_AS(gauss_curvature(flat, {0.5, 0.5}), ConvexityViolation);
}

TEST_CASE("reflection direction") {
    auto sph = ConvexSurface::sphere(1.0);
    CHECK(vec_close(reflection_direction(sph, {0.0, 0.0}), {0.0, 0.0, -1.0}, 1e-15));

    // point with outward normal (-1/sqrt2, 0, -1/sqrt2): 45 degree specular law
    double r = std::sqrt(0.5);
    CHECK(vec_close(reflection_direction(sph, {-r, 0.0}), {-1.0, 0.0, 0.0}, 1e-12));

    auto flat = ConvexSurface::graph([](Vec2) { return 0.0; }, [](Vec2) { return Vec2{0, 0}; },
                                     [](Vec2) { return Mat2{}; },
                                     PlanarDomain::rectangle(-1, 1, -1, 1), "flat");
    CHECK(vec_close(reflection_direction(flat, {0.3, -0.6}), {0.0, 0.0, -1.0}, 1e-15));
}

TEST_CASE("specular law on a grid") {
    auto ell = ConvexSurface::ellipsoid(1.0, 1.3, 0.7);
    Vec3 theta0 = incident_direction();
    for (double rx : {-0.9, -0.4, 0.0, 0.55, 0.85}) {
        for (double ry : {-0.8, -0.2, 0.35, 0.75}) {
            Vec2 x{rx * 1.0 * 0.7, ry * 1.3 * 0.7};
            Vec3 n = outward_normal(ell, x);
            Vec3 t = reflection_direction(ell, x);
            CHECK(close(t.norm(), 1.0, 1e-12));
            CHECK(close(t.dot(n), -theta0.dot(n), 1e-12));  // incidence = reflection
        }
    }
}

TEST_CASE("invert reflection map: sphere closed form") {
    for (double a : {1.0, 2.5}) {
        auto sph = ConvexSurface::sphere(a);
        SurfacePoint p = invert_reflection_map(sph, {0.0, 0.0, -1.0});
        CHECK(vec_close(p.y, {0.0, 0.0, -a}, 1e-10));

        // Gauss map of the sphere is radial: y+ = a * (theta - theta0)/|theta - theta0|
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int i = 0; i < 25; ++i) {
            Vec3 theta = Vec3{u(rng), u(rng), u(rng)}.normalized();
            if (angle_between(theta, incident_direction()) < 1e-2) continue;
            Vec3 nu = (theta - incident_direction()).normalized();
            SurfacePoint q = invert_reflection_map(sph, theta);
            CHECK(vec_close(q.y, a * nu, 1e-9));
            CHECK((q.n - nu).norm() <= 1e-10);
            CHECK(close(q.curvature, 1.0 / (a * a), 1e-9));
        }
    }
}

TEST_CASE("invert reflection map: ellipsoid vs closed-form Gauss inverse") {
    auto ell = ConvexSurface::ellipsoid(1.0, 1.3, 0.7);
    SurfacePoint p = invert_reflection_map(ell, {-1.0, 0.0, 0.0});
    Vec3 nu = (Vec3{-1, 0, 0} - incident_direction()).normalized();
    CHECK((p.n - nu).norm() <= 1e-10);
    CHECK(vec_close(p.y, oracle::ellipsoid_gauss_inverse(1.0, 1.3, 0.7, nu), 1e-9));
    CHECK(close(p.curvature, oracle::ellipsoid_curvature_of_normal(1.0, 1.3, 0.7, nu), 1e-9));

    // re-applying the reflection recovers theta
    Vec3 back = reflection_direction(ell, p.x);
    CHECK(vec_close(back, {-1.0, 0.0, 0.0}, 1e-9));
}

TEST_CASE("invert reflection map: round trip over the sphere of directions") {
    auto ell = ConvexSurface::ellipsoid(1.0, 1.3, 0.7);
    for (double mu : {-0.999, -0.6, -0.1, 0.4, 0.9, 0.9999}) {
        for (double phi : {0.1, 1.7, 3.3, 5.2}) {
            double s = std::sqrt(1.0 - mu * mu);
            Vec3 theta{s * std::cos(phi), s * std::sin(phi), mu};
            SurfacePoint p = invert_reflection_map(ell, theta);
            CHECK(vec_close(reflection_direction(ell, p.x), theta, 1e-9));
        }
    }
}

TEST_CASE("invert reflection map: forward guard and convergence errors") {
    auto sph = ConvexSurface::sphere(1.0);
    CHECK_THROWS_AS(invert_reflection_map(sph, {0.0, 0.0, 1.0}), ForwardSingularityError);
    CHECK_THROWS_AS(invert_reflection_map(sph, {1e-9, 0.0, 1.0}), ForwardSingularityError);

    // direction outside the image of a rim-bounded graph
    auto par = ConvexSurface::paraboloid(1.0, 1.0);  // slopes bounded by 1
    CHECK_THROWS_AS(invert_reflection_map(par, {std::sin(0.3), 0.0, std::cos(0.3)}),
                    ConvergenceError);
}

TEST_CASE("monotone injectivity of the reflection map") {
    auto ell = ConvexSurface::ellipsoid(1.0, 1.3, 0.7);
    std::vector<Vec3> dirs;
    for (int i = 0; i < 12; ++i) {
        for (int j = 0; j < 16; ++j) {
            double r = 0.92 * (i + 0.5) / 12;
            double phi = 2.0 * M_PI * j / 16;
            Vec2 x{1.0 * r * std::cos(phi), 1.3 * r * std::sin(phi)};
            dirs.push_back(reflection_direction(ell, x));
        }
    }
    for (size_t i = 0; i < dirs.size(); ++i)
        for (size_t j = i + 1; j < dirs.size(); ++j)
            CHECK((dirs[i] - dirs[j]).norm() > 1e-8);
}

TEST_CASE("numeric reflection jacobian matches 4K") {
    auto sph = ConvexSurface::sphere(1.0);
    // point with |grad g| = 1: rho = 1/sqrt(2)
    double rho = std::sqrt(0.5);
    double j = reflection_jacobian_numeric(sph, {rho, 0.0}, 1e-5);
    CHECK(close(std::abs(j), 4.0, 1e-6));

    auto par = ConvexSurface::paraboloid(1.0, 2.0);
    j = reflection_jacobian_numeric(par, {1.0, 0.0}, 1e-5);
    CHECK(close(std::abs(j), 1.0, 1e-6));  // 4K = 1 there

    auto ell = ConvexSurface::ellipsoid(1.0, 1.3, 0.7);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        double r = std::sqrt(0.01 + 0.8 * u(rng));
        double phi = 2.0 * M_PI * u(rng);
        Vec2 x{1.0 * r * std::cos(phi), 1.3 * r * std::sin(phi)};
        double jac = reflection_jacobian_numeric(ell, x, 1e-5);
        double fourk = 4.0 * gauss_curvature(ell, x);
        CHECK(close(std::abs(jac) / fourk, 1.0, 1e-6));
    }

    CHECK_THROWS_AS(reflection_jacobian_numeric(sph, {0.0, 0.0}, 1e-5),
                    DegenerateCoordinatesError);
}

TEST_CASE("radial profile surface from samples") {
    // hemisphere sampled on a fine grid; spline should recover slope/curvature
    std::vector<double> rho, g;
    for (int i = 0; i <= 400; ++i) {
        double r = 0.95 * i / 400;
        rho.push_back(r);
        g.push_back(-std::sqrt(1.0 - r * r));
    }
    auto surf = ConvexSurface::radial_profile(rho, g);
    CHECK(surf.kind() == SurfaceKind::radial_profile);
    CHECK(surf.radially_symmetric());
    CHECK(close(surf.height({0.5, 0.0}), -std::sqrt(0.75), 1e-8));
    CHECK(close(gauss_curvature(surf, {0.4, 0.3}), 1.0, 1e-4));

    CHECK_THROWS_AS(ConvexSurface::radial_profile({0.1, 0.2}, {0.0, 0.0}), ParseError);
    CHECK_THROWS_AS(ConvexSurface::radial_profile({0.0, 0.2, 0.1}, {0.0, 0.0, 0.0}), ParseError);
}

TEST_CASE("ellipsoid classical projection and domain") {
    auto ell = ConvexSurface::ellipsoid(2.0, 0.5, 1.0);
    CHECK(close(ell.domain().area(), M_PI * 2.0 * 0.5, 1e-14));
    CHECK(ell.domain().contains({1.9, 0.0}));
    CHECK(!ell.domain().contains({2.0, 0.1}));
}
