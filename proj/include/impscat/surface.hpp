#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "impscat/errors.hpp"
#include "impscat/vec.hpp"

namespace impscat {

// Incident direction theta_0. The illuminated (visible) side of a body is the
// cap whose outward normal n satisfies <n, theta_0> < 0; it is represented
// throughout as a graph y = (x1, x2, g(x1, x2)) over a bounded planar domain.
inline Vec3 incident_direction() { return {0.0, 0.0, 1.0}; }

// Guard radius (radians) around the forward direction. The reflected-ray
// machinery is singular at theta = theta_0 (the rim limit), so directions
// closer than this are rejected.
inline constexpr double kForwardGuard = 1e-6;

enum class SurfaceKind { sphere, ellipsoid, graph, radial_profile };

std::string to_string(SurfaceKind kind);

// Bounded planar domain underneath the visible cap.
class PlanarDomain {
  public:
    enum class Shape { ellipse, rectangle };

    static PlanarDomain disk(double radius) { return ellipse(radius, radius); }
    static PlanarDomain ellipse(double semi_a, double semi_b);
    static PlanarDomain rectangle(double x1_min, double x1_max, double x2_min, double x2_max);

    Shape shape() const { return shape_; }
    bool contains(const Vec2& x) const;
    double area() const;

    // Ellipse semi-axes (only meaningful for Shape::ellipse).
    double semi_a() const { return a_; }
    double semi_b() const { return b_; }
    // Rectangle bounds (only meaningful for Shape::rectangle).
    double x1_min() const { return x1_min_; }
    double x1_max() const { return x1_max_; }
    double x2_min() const { return x2_min_; }
    double x2_max() const { return x2_max_; }

  private:
    Shape shape_ = Shape::ellipse;
    double a_ = 1.0, b_ = 1.0;
    double x1_min_ = 0.0, x1_max_ = 0.0, x2_min_ = 0.0, x2_max_ = 0.0;
};

// A point on the visible cap: planar coordinates, 3D position, outward unit
// normal and Gaussian curvature.
struct SurfacePoint {
    Vec2 x;
    Vec3 y;
    Vec3 n;
    double curvature = 0.0;
};

// A strictly convex body seen from the incident direction. Immutable; copies
// share the underlying description, so passing by value is cheap and all
// operations are safe to call concurrently.
class ConvexSurface {
  public:
    static ConvexSurface sphere(double radius);
    static ConvexSurface ellipsoid(double a, double b, double c);
    // Graph g(x) = 0.5 * curvature * |x|^2 over a disk of the given radius.
    static ConvexSurface paraboloid(double curvature, double rim_radius);
    static ConvexSurface graph(std::function<double(Vec2)> height,
                               std::function<Vec2(Vec2)> gradient,
                               std::function<Mat2(Vec2)> hessian, PlanarDomain domain,
                               std::string label, bool radially_symmetric = false);
    // Clamped cubic spline through (rho_i, g_i); rho strictly increasing from 0.
    static ConvexSurface radial_profile(const std::vector<double>& rho,
                                        const std::vector<double>& g, std::string label = "");

    SurfaceKind kind() const;
    const std::string& label() const;
    const PlanarDomain& domain() const;
    bool radially_symmetric() const;

    // Height, gradient and Hessian of the visible graph. Throw DomainError
    // outside the domain.
    double height(const Vec2& x) const;
    Vec2 slope(const Vec2& x) const;
    Mat2 hessian(const Vec2& x) const;

    class Impl;
    const Impl& impl() const { return *impl_; }

  private:
    explicit ConvexSurface(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

// Outward unit normal of the visible cap at planar coordinates x;
// satisfies <n, theta_0> < 0.
Vec3 outward_normal(const ConvexSurface& surface, const Vec2& x);

// Gaussian curvature of the graph at x. Throws ConvexityViolation if K <= 0.
double gauss_curvature(const ConvexSurface& surface, const Vec2& x);

// Full sample at x.
SurfacePoint surface_point(const ConvexSurface& surface, const Vec2& x);

// Specularly reflected direction theta(x) = theta_0 - 2 <n, theta_0> n.
Vec3 reflection_direction(const ConvexSurface& surface, const Vec2& x);

// Preimage of the reflected direction: the visible-cap point whose outward
// normal is (theta - theta_0)/|theta - theta_0|. Solved by damped Newton on
// the planar coordinates, initialized from a cached 64x64 coarse grid (or
// from `hint` when given). The returned normal satisfies
// |n(y+) - (theta - theta_0)/|theta - theta_0|| <= 1e-10.
SurfacePoint invert_reflection_map(const ConvexSurface& surface, const Vec3& theta,
                                   std::optional<Vec2> hint = std::nullopt);

// Central-difference Jacobian determinant of (cos(polar), azimuth) of the
// reflected direction with respect to (x1, x2); its absolute value
// approaches 4K(x) as h -> 0.
double reflection_jacobian_numeric(const ConvexSurface& surface, const Vec2& x, double h);

}  // namespace impscat
