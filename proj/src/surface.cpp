#include "impscat/surface.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

namespace impscat {

std::string to_string(SurfaceKind kind) {
    switch (kind) {
        case SurfaceKind::sphere: return "sphere";
        case SurfaceKind::ellipsoid: return "ellipsoid";
        case SurfaceKind::graph: return "graph";
        case SurfaceKind::radial_profile: return "radial-profile";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// PlanarDomain

PlanarDomain PlanarDomain::ellipse(double semi_a, double semi_b) {
    if (!(semi_a > 0.0) || !(semi_b > 0.0))
        throw DomainError("PlanarDomain::ellipse: semi-axes must be positive");
    PlanarDomain d;
    d.shape_ = Shape::ellipse;
    d.a_ = semi_a;
    d.b_ = semi_b;
    return d;
}

PlanarDomain PlanarDomain::rectangle(double x1_min, double x1_max, double x2_min, double x2_max) {
    if (!(x1_max > x1_min) || !(x2_max > x2_min))
        throw DomainError("PlanarDomain::rectangle: empty rectangle");
    PlanarDomain d;
    d.shape_ = Shape::rectangle;
    d.x1_min_ = x1_min;
    d.x1_max_ = x1_max;
    d.x2_min_ = x2_min;
    d.x2_max_ = x2_max;
    return d;
}

bool PlanarDomain::contains(const Vec2& x) const {
    if (shape_ == Shape::ellipse) {
        double u = x.x / a_, v = x.y / b_;
        return u * u + v * v < 1.0;
    }
    return x.x > x1_min_ && x.x < x1_max_ && x.y > x2_min_ && x.y < x2_max_;
}

double PlanarDomain::area() const {
    if (shape_ == Shape::ellipse) return M_PI * a_ * b_;
    return (x1_max_ - x1_min_) * (x2_max_ - x2_min_);
}

// ---------------------------------------------------------------------------
// Surface implementations

class ConvexSurface::Impl {
  public:
    Impl(SurfaceKind kind, std::string label, PlanarDomain domain, bool radial)
        : kind_(kind), label_(std::move(label)), domain_(domain), radial_(radial) {}
    virtual ~Impl() = default;

    virtual double height(const Vec2& x) const = 0;
    virtual Vec2 slope(const Vec2& x) const = 0;
    virtual Mat2 hessian(const Vec2& x) const = 0;

    SurfaceKind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    const PlanarDomain& domain() const { return domain_; }
    bool radially_symmetric() const { return radial_; }

    void require_inside(const Vec2& x) const {
        if (!domain_.contains(x)) {
            std::ostringstream os;
            os << "point (" << x.x << ", " << x.y << ") outside the planar domain of " << label_;
            throw DomainError(os.str());
        }
    }

    // Coarse sample of the visible cap used to initialize the Gauss-map
    // inversion; built on first use.
    const std::vector<SurfacePoint>& coarse_grid() const;

  private:
    SurfaceKind kind_;
    std::string label_;
    PlanarDomain domain_;
    bool radial_;

    mutable std::once_flag grid_once_;
    mutable std::vector<SurfacePoint> grid_;
};

namespace {

Vec3 normal_from_slope(const Vec2& grad) {
    double s = std::sqrt(1.0 + grad.dot(grad));
    return {grad.x / s, grad.y / s, -1.0 / s};
}

// Visible cap of an ellipsoid with semi-axes (a, b, c), incident direction
// along the c axis: g(x) = -c * sqrt(1 - (x1/a)^2 - (x2/b)^2).
class EllipsoidImpl final : public ConvexSurface::Impl {
  public:
    EllipsoidImpl(double a, double b, double c, SurfaceKind kind, std::string label)
        : Impl(kind, std::move(label), PlanarDomain::ellipse(a, b), a == b), a_(a), b_(b), c_(c) {}

    double height(const Vec2& x) const override {
        require_inside(x);
        return -c_ * w(x);
    }

    Vec2 slope(const Vec2& x) const override {
        require_inside(x);
        double ww = w(x);
        return {c_ * x.x / (a_ * a_ * ww), c_ * x.y / (b_ * b_ * ww)};
    }

    Mat2 hessian(const Vec2& x) const override {
        require_inside(x);
        double ww = w(x);
        double w3 = ww * ww * ww;
        Mat2 h;
        h.a11 = c_ / (a_ * a_ * ww) + c_ * x.x * x.x / (a_ * a_ * a_ * a_ * w3);
        h.a12 = c_ * x.x * x.y / (a_ * a_ * b_ * b_ * w3);
        h.a22 = c_ / (b_ * b_ * ww) + c_ * x.y * x.y / (b_ * b_ * b_ * b_ * w3);
        return h;
    }

  private:
    double w(const Vec2& x) const {
        double u = x.x / a_, v = x.y / b_;
        return std::sqrt(1.0 - u * u - v * v);
    }
    double a_, b_, c_;
};

class GraphImpl final : public ConvexSurface::Impl {
  public:
    GraphImpl(std::function<double(Vec2)> h, std::function<Vec2(Vec2)> g,
              std::function<Mat2(Vec2)> hess, PlanarDomain domain, std::string label, bool radial)
        : Impl(SurfaceKind::graph, std::move(label), domain, radial),
          height_(std::move(h)),
          grad_(std::move(g)),
          hess_(std::move(hess)) {}

    double height(const Vec2& x) const override {
        require_inside(x);
        return height_(x);
    }
    Vec2 slope(const Vec2& x) const override {
        require_inside(x);
        return grad_(x);
    }
    Mat2 hessian(const Vec2& x) const override {
        require_inside(x);
        return hess_(x);
    }

  private:
    std::function<double(Vec2)> height_;
    std::function<Vec2(Vec2)> grad_;
    std::function<Mat2(Vec2)> hess_;
};

// Natural cubic spline with end slopes pinned to one-sided three-point
// estimates, so linear and quadratic data are reproduced exactly.
class CubicSpline {
  public:
    CubicSpline(const std::vector<double>& t, const std::vector<double>& v) : t_(t), v_(v) {
        const size_t n = t.size();
        m_.assign(n, 0.0);
        if (n == 2) {
            // linear segment; second derivatives stay zero
            return;
        }
        double d_left = end_slope(t[0], t[1], t[2], v[0], v[1], v[2]);
        double d_right =
            end_slope(t[n - 1], t[n - 2], t[n - 3], v[n - 1], v[n - 2], v[n - 3]);

        std::vector<double> diag(n), sub(n), sup(n), rhs(n);
        double h0 = t[1] - t[0];
        diag[0] = 2.0 * h0;
        sup[0] = h0;
        rhs[0] = 6.0 * ((v[1] - v[0]) / h0 - d_left);
        for (size_t i = 1; i + 1 < n; ++i) {
            double hm = t[i] - t[i - 1], hp = t[i + 1] - t[i];
            sub[i] = hm;
            diag[i] = 2.0 * (hm + hp);
            sup[i] = hp;
            rhs[i] = 6.0 * ((v[i + 1] - v[i]) / hp - (v[i] - v[i - 1]) / hm);
        }
        double hn = t[n - 1] - t[n - 2];
        sub[n - 1] = hn;
        diag[n - 1] = 2.0 * hn;
        rhs[n - 1] = 6.0 * (d_right - (v[n - 1] - v[n - 2]) / hn);

        // Thomas algorithm
        for (size_t i = 1; i < n; ++i) {
            double m = sub[i] / diag[i - 1];
            diag[i] -= m * sup[i - 1];
            rhs[i] -= m * rhs[i - 1];
        }
        m_[n - 1] = rhs[n - 1] / diag[n - 1];
        for (size_t i = n - 1; i-- > 0;) m_[i] = (rhs[i] - sup[i] * m_[i + 1]) / diag[i];
    }

    void eval(double x, double& f, double& df, double& d2f) const {
        size_t i = interval(x);
        double h = t_[i + 1] - t_[i];
        double A = (t_[i + 1] - x) / h, B = (x - t_[i]) / h;
        f = A * v_[i] + B * v_[i + 1] +
            ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
        df = (v_[i + 1] - v_[i]) / h +
             (-(3.0 * A * A - 1.0) * m_[i] + (3.0 * B * B - 1.0) * m_[i + 1]) * h / 6.0;
        d2f = A * m_[i] + B * m_[i + 1];
    }

  private:
    static double end_slope(double t0, double t1, double t2, double v0, double v1, double v2) {
        double h0 = t1 - t0, h1 = t2 - t1;
        return -(2.0 * h0 + h1) / (h0 * (h0 + h1)) * v0 + (h0 + h1) / (h0 * h1) * v1 -
               h0 / (h1 * (h0 + h1)) * v2;
    }

    size_t interval(double x) const {
        auto it = std::upper_bound(t_.begin(), t_.end(), x);
        size_t i = static_cast<size_t>(std::distance(t_.begin(), it));
        if (i == 0) return 0;
        if (i >= t_.size()) return t_.size() - 2;
        return i - 1;
    }

    std::vector<double> t_, v_;
    std::vector<double> m_;  // second derivatives at knots
};

class RadialProfileImpl final : public ConvexSurface::Impl {
  public:
    RadialProfileImpl(const std::vector<double>& rho, const std::vector<double>& g,
                      std::string label)
        : Impl(SurfaceKind::radial_profile, std::move(label), PlanarDomain::disk(rho.back()),
               true),
          spline_(rho, g) {}

    double height(const Vec2& x) const override {
        require_inside(x);
        double f, df, d2f;
        spline_.eval(x.norm(), f, df, d2f);
        return f;
    }

    Vec2 slope(const Vec2& x) const override {
        require_inside(x);
        double r = x.norm();
        if (r < kAxisEps) return {0.0, 0.0};
        double f, df, d2f;
        spline_.eval(r, f, df, d2f);
        return {df * x.x / r, df * x.y / r};
    }

    Mat2 hessian(const Vec2& x) const override {
        require_inside(x);
        double r = x.norm();
        double f, df, d2f;
        spline_.eval(r, f, df, d2f);
        Mat2 h;
        if (r < kAxisEps) {
            h.a11 = h.a22 = d2f;
            h.a12 = 0.0;
            return h;
        }
        // radial/tangential split: H = g'' rr^T + (g'/r)(I - rr^T)
        double cx = x.x / r, cy = x.y / r;
        double tang = df / r;
        h.a11 = d2f * cx * cx + tang * cy * cy;
        h.a12 = (d2f - tang) * cx * cy;
        h.a22 = d2f * cy * cy + tang * cx * cx;
        return h;
    }

  private:
    static constexpr double kAxisEps = 1e-12;
    CubicSpline spline_;
};

}  // namespace

const std::vector<SurfacePoint>& ConvexSurface::Impl::coarse_grid() const {
    std::call_once(grid_once_, [this] {
        constexpr int kN = 64;
        grid_.reserve(kN * kN);
        auto push = [this](const Vec2& x) {
            SurfacePoint p;
            p.x = x;
            Vec2 grad = slope(x);
            p.n = normal_from_slope(grad);
            p.y = {x.x, x.y, height(x)};
            p.curvature = 0.0;  // not needed for initialization
            grid_.push_back(p);
        };
        if (domain().shape() == PlanarDomain::Shape::ellipse) {
            for (int i = 0; i < kN; ++i) {
                double r = (i + 0.5) / kN;
                for (int j = 0; j < kN; ++j) {
                    double phi = 2.0 * M_PI * j / kN;
                    push({domain().semi_a() * r * std::cos(phi),
                          domain().semi_b() * r * std::sin(phi)});
                }
            }
        } else {
            double w1 = domain().x1_max() - domain().x1_min();
            double w2 = domain().x2_max() - domain().x2_min();
            for (int i = 0; i < kN; ++i)
                for (int j = 0; j < kN; ++j)
                    push({domain().x1_min() + w1 * (i + 0.5) / kN,
                          domain().x2_min() + w2 * (j + 0.5) / kN});
        }
    });
    return grid_;
}

// ---------------------------------------------------------------------------
// Factories

ConvexSurface ConvexSurface::sphere(double radius) {
    if (!(radius > 0.0)) throw DomainError("sphere: radius must be positive");
    std::ostringstream os;
    os << "sphere(a=" << radius << ")";
    return ConvexSurface(std::make_shared<EllipsoidImpl>(radius, radius, radius,
                                                         SurfaceKind::sphere, os.str()));
}

ConvexSurface ConvexSurface::ellipsoid(double a, double b, double c) {
    if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
        throw DomainError("ellipsoid: semi-axes must be positive");
    std::ostringstream os;
    os << "ellipsoid(" << a << "," << b << "," << c << ")";
    return ConvexSurface(
        std::make_shared<EllipsoidImpl>(a, b, c, SurfaceKind::ellipsoid, os.str()));
}

ConvexSurface ConvexSurface::paraboloid(double curvature, double rim_radius) {
    if (!(curvature > 0.0)) throw DomainError("paraboloid: curvature must be positive");
    std::ostringstream os;
    os << "paraboloid(c=" << curvature << ",R=" << rim_radius << ")";
    double c0 = curvature;
    return ConvexSurface(std::make_shared<GraphImpl>(
        [c0](Vec2 x) { return 0.5 * c0 * x.dot(x); }, [c0](Vec2 x) { return c0 * x; },
        [c0](Vec2) {
            Mat2 h;
            h.a11 = h.a22 = c0;
            h.a12 = 0.0;
            return h;
        },
        PlanarDomain::disk(rim_radius), os.str(), /*radially_symmetric=*/true));
}

ConvexSurface ConvexSurface::graph(std::function<double(Vec2)> height,
                                   std::function<Vec2(Vec2)> gradient,
                                   std::function<Mat2(Vec2)> hessian, PlanarDomain domain,
                                   std::string label, bool radially_symmetric) {
    return ConvexSurface(std::make_shared<GraphImpl>(std::move(height), std::move(gradient),
                                                     std::move(hessian), domain, std::move(label),
                                                     radially_symmetric));
}

ConvexSurface ConvexSurface::radial_profile(const std::vector<double>& rho,
                                            const std::vector<double>& g, std::string label) {
    if (rho.size() != g.size() || rho.size() < 2)
        throw ParseError("radial_profile: need matching rho/g arrays with at least 2 samples");
    if (rho.front() != 0.0) throw ParseError("radial_profile: rho must start at 0");
    for (size_t i = 1; i < rho.size(); ++i)
        if (!(rho[i] > rho[i - 1])) throw ParseError("radial_profile: rho must strictly increase");
    if (label.empty()) {
        std::ostringstream os;
        os << "radial-profile(n=" << rho.size() << ",rho_max=" << rho.back() << ")";
        label = os.str();
    }
    return ConvexSurface(std::make_shared<RadialProfileImpl>(rho, g, std::move(label)));
}

SurfaceKind ConvexSurface::kind() const { return impl_->kind(); }
const std::string& ConvexSurface::label() const { return impl_->label(); }
const PlanarDomain& ConvexSurface::domain() const { return impl_->domain(); }
bool ConvexSurface::radially_symmetric() const { return impl_->radially_symmetric(); }
double ConvexSurface::height(const Vec2& x) const { return impl_->height(x); }
Vec2 ConvexSurface::slope(const Vec2& x) const { return impl_->slope(x); }
Mat2 ConvexSurface::hessian(const Vec2& x) const { return impl_->hessian(x); }

// ---------------------------------------------------------------------------
// Operations

Vec3 outward_normal(const ConvexSurface& surface, const Vec2& x) {
    return normal_from_slope(surface.slope(x));
}

double gauss_curvature(const ConvexSurface& surface, const Vec2& x) {
    Vec2 grad = surface.slope(x);
    double q = 1.0 + grad.dot(grad);
    double k = surface.hessian(x).det() / (q * q);
    if (!(k > 0.0)) {
        std::ostringstream os;
        os << "non-positive Gaussian curvature " << k << " at (" << x.x << ", " << x.y << ") on "
           << surface.label();
        throw ConvexityViolation(os.str());
    }
    return k;
}

SurfacePoint surface_point(const ConvexSurface& surface, const Vec2& x) {
    SurfacePoint p;
    p.x = x;
    p.y = {x.x, x.y, surface.height(x)};
    p.n = outward_normal(surface, x);
    p.curvature = gauss_curvature(surface, x);
    return p;
}

Vec3 reflection_direction(const ConvexSurface& surface, const Vec2& x) {
    Vec3 n = outward_normal(surface, x);
    Vec3 theta0 = incident_direction();
    double c = n.dot(theta0);
    if (c >= 0.0) throw DomainError("reflection_direction: shadowed point");
    return theta0 - 2.0 * c * n;
}

namespace {

struct NewtonResult {
    Vec2 x;
    bool converged = false;
    double residual = 0.0;
};

// Damped Newton for slope(x) = target. Equivalent to minimizing the strictly
// convex merit psi(x) = g(x) - <target, x>; steps that leave the domain or
// increase both the merit and the residual are halved.
NewtonResult newton_slope_solve(const ConvexSurface& surface, Vec2 x, const Vec2& target) {
    constexpr int kMaxIter = 100;
    auto merit = [&](const Vec2& p) { return surface.height(p) - target.dot(p); };
    auto residual = [&](const Vec2& p) { return (surface.slope(p) - target).norm(); };

    double res = residual(x);
    double psi = merit(x);
    NewtonResult out;
    for (int it = 0; it < kMaxIter; ++it) {
        if (res <= 1e-13) break;
        Vec2 f = surface.slope(x) - target;
        Vec2 step = -surface.hessian(x).solve(f);
        double alpha = 1.0;
        bool moved = false;
        for (int damp = 0; damp < 60; ++damp) {
            Vec2 cand = x + alpha * step;
            if (surface.domain().contains(cand)) {
                double cres = residual(cand);
                double cpsi = merit(cand);
                if (cres < res || cpsi < psi) {
                    x = cand;
                    res = cres;
                    psi = cpsi;
                    moved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!moved) break;
    }
    out.x = x;
    out.residual = res;
    out.converged = res <= 1e-13 || res <= 1e-10 * std::max(1.0, target.norm());
    return out;
}

}  // namespace

SurfacePoint invert_reflection_map(const ConvexSurface& surface, const Vec3& theta,
                                   std::optional<Vec2> hint) {
    Vec3 dir = theta.normalized();
    Vec3 theta0 = incident_direction();
    double delta = angle_between(dir, theta0);
    if (delta < kForwardGuard) {
        std::ostringstream os;
        os << "direction within " << kForwardGuard << " rad of the forward direction (angle "
           << delta << ")";
        throw ForwardSingularityError(os.str());
    }

    Vec3 nu = (dir - theta0).normalized();  // desired outward normal, nu.z < 0
    Vec2 target{-nu.x / nu.z, -nu.y / nu.z};

    Vec2 init;
    if (hint && surface.domain().contains(*hint)) {
        init = *hint;
    } else {
        double best = -2.0;
        for (const SurfacePoint& p : surface.impl().coarse_grid()) {
            double d = p.n.dot(nu);
            if (d > best) {
                best = d;
                init = p.x;
            }
        }
    }

    NewtonResult r = newton_slope_solve(surface, init, target);
    if (!r.converged && hint) {
        // hint may have been poor; retry from the coarse grid
        double best = -2.0;
        for (const SurfacePoint& p : surface.impl().coarse_grid()) {
            double d = p.n.dot(nu);
            if (d > best) {
                best = d;
                init = p.x;
            }
        }
        r = newton_slope_solve(surface, init, target);
    }

    SurfacePoint p = surface_point(surface, r.x);
    double normal_residual = (p.n - nu).norm();
    if (normal_residual > 1e-10) {
        std::ostringstream os;
        os << "Gauss-map inversion did not converge: normal residual " << normal_residual
           << " (slope residual " << r.residual << ") for direction (" << dir.x << ", " << dir.y
           << ", " << dir.z << ")";
        throw ConvergenceError(os.str());
    }
    return p;
}

double reflection_jacobian_numeric(const ConvexSurface& surface, const Vec2& x, double h) {
    if (!(h > 0.0)) throw DomainError("reflection_jacobian_numeric: h must be positive");
    if (surface.slope(x).norm() < 1e-7)
        throw DegenerateCoordinatesError(
            "reflection_jacobian_numeric: spherical angles degenerate where the gradient "
            "vanishes");

    auto angles = [&](const Vec2& p) {
        Vec3 t = reflection_direction(surface, p);
        return Vec2{t.z, std::atan2(t.y, t.x)};  // (cos polar, azimuth)
    };

    Vec2 xp1 = angles({x.x + h, x.y});
    Vec2 xm1 = angles({x.x - h, x.y});
    Vec2 xp2 = angles({x.x, x.y + h});
    Vec2 xm2 = angles({x.x, x.y - h});

    double dmu_d1 = (xp1.x - xm1.x) / (2.0 * h);
    double dmu_d2 = (xp2.x - xm2.x) / (2.0 * h);
    // azimuth differences unwrapped across the branch cut
    double dphi_d1 = std::remainder(xp1.y - xm1.y, 2.0 * M_PI) / (2.0 * h);
    double dphi_d2 = std::remainder(xp2.y - xm2.y, 2.0 * M_PI) / (2.0 * h);

    return dmu_d1 * dphi_d2 - dmu_d2 * dphi_d1;
}

}  // namespace impscat
