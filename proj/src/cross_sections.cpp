#include "impscat/cross_sections.hpp"

#include <cmath>
#include <sstream>

namespace impscat {

namespace {

double weight_value(SphereWeight w, double mu) {
    return w == SphereWeight::total ? 1.0 : 1.0 - mu;
}

struct SpherePass {
    double value = 0.0;
    double max_density = 0.0;
};

SpherePass sphere_pass(const std::function<double(const Vec3&)>& density, SphereWeight weight,
                       int n_polar, int n_azimuth, double eps_fwd) {
    const double mu_max = std::cos(eps_fwd);
    GaussLegendreRule polar = gauss_legendre_on(n_polar, -1.0, mu_max);
    const double dphi = 2.0 * M_PI / n_azimuth;

    SpherePass out;
    KahanSum sum;
    // azimuth outer / polar inner: consecutive evaluations sweep one meridian
    // from backscatter toward the rim, which keeps specular points contiguous
    for (int j = 0; j < n_azimuth; ++j) {
        double phi = dphi * j;
        double cphi = std::cos(phi), sphi = std::sin(phi);
        for (int i = 0; i < n_polar; ++i) {
            double mu = polar.nodes[i];
            double smu = std::sqrt(std::max(0.0, 1.0 - mu * mu));
            Vec3 theta{smu * cphi, smu * sphi, mu};
            double d;
            try {
                d = density(theta);
            } catch (const Error& e) {
                std::ostringstream os;
                os << "density evaluation failed at quadrature node theta=(" << theta.x << ", "
                   << theta.y << ", " << theta.z << "), cos_polar=" << mu << ", azimuth=" << phi
                   << ": " << e.what();
                throw Error(os.str());
            }
            out.max_density = std::max(out.max_density, std::abs(d));
            sum.add(polar.weights[i] * dphi * weight_value(weight, mu) * d);
        }
    }
    out.value = sum.value();
    return out;
}

}  // namespace

CrossSectionResult integrate_sphere_weighted(const std::function<double(const Vec3&)>& density,
                                             SphereWeight weight, const QuadratureSpec& spec) {
    spec.validate();
    SpherePass full = sphere_pass(density, weight, spec.n_polar, spec.n_azimuth, spec.eps_fwd);
    QuadratureSpec half = spec.halved();
    SpherePass coarse = sphere_pass(density, weight, half.n_polar, half.n_azimuth, spec.eps_fwd);

    // Excluded cap: area 2*pi*(1 - cos eps); the transport weight adds another
    // factor (1 - mu) <= (1 - cos eps) there.
    double cap = 1.0 - std::cos(spec.eps_fwd);
    double cap_measure = 2.0 * M_PI * cap * (weight == SphereWeight::transport ? cap * 0.5 : 1.0);

    CrossSectionResult res;
    res.value = full.value;
    res.est_error = std::abs(full.value - coarse.value) + cap_measure * full.max_density;
    res.spec = spec;
    return res;
}

namespace {

std::function<double(const Vec3&)> hf_density_with_continuation(const ConvexSurface& surface,
                                                                const Impedance& gamma) {
    // The hint threads the previous specular point through the meridian sweep.
    auto hint = std::make_shared<std::optional<Vec2>>();
    return [surface, gamma, hint](const Vec3& theta) {
        SurfacePoint p = invert_reflection_map(surface, theta, *hint);
        *hint = p.x;
        double c = std::abs(p.n.dot(theta.normalized()));
        double rho = reflection_coefficient(gamma, c);
        return 0.25 / p.curvature * rho * rho;
    };
}

}  // namespace

CrossSectionResult transport_hf_angular(const ConvexSurface& surface, const Impedance& gamma,
                                        const QuadratureSpec& spec) {
    return integrate_sphere_weighted(hf_density_with_continuation(surface, gamma),
                                     SphereWeight::transport, spec);
}

CrossSectionResult total_hf_angular(const ConvexSurface& surface, const Impedance& gamma,
                                    const QuadratureSpec& spec) {
    return integrate_sphere_weighted(hf_density_with_continuation(surface, gamma),
                                     SphereWeight::total, spec);
}

namespace {

// Planar transport integrand via the incidence cosine c = 1/sqrt(1+|grad g|^2):
// 2 c^2 rho_gamma(c)^2.
double planar_integrand(const ConvexSurface& surface, const Impedance& gamma, const Vec2& x) {
    Vec2 grad = surface.slope(x);
    double c = 1.0 / std::sqrt(1.0 + grad.dot(grad));
    double rho = reflection_coefficient(gamma, c);
    return 2.0 * c * c * rho * rho;
}

double planar_pass(const ConvexSurface& surface, const Impedance& gamma, int n_radial,
                   int n_azimuth) {
    const PlanarDomain& dom = surface.domain();
    KahanSum sum;
    if (dom.shape() == PlanarDomain::Shape::ellipse) {
        GaussLegendreRule radial = gauss_legendre_on(n_radial, 0.0, 1.0);
        double a = dom.semi_a(), b = dom.semi_b();
        if (surface.radially_symmetric() && a == b) {
            // exact azimuth factor 2*pi
            for (int i = 0; i < n_radial; ++i) {
                double r = radial.nodes[i];
                sum.add(radial.weights[i] * r *
                        planar_integrand(surface, gamma, {a * r, 0.0}));
            }
            return 2.0 * M_PI * a * a * sum.value();
        }
        const double dphi = 2.0 * M_PI / n_azimuth;
        for (int j = 0; j < n_azimuth; ++j) {
            double phi = dphi * j;
            double cphi = std::cos(phi), sphi = std::sin(phi);
            for (int i = 0; i < n_radial; ++i) {
                double r = radial.nodes[i];
                Vec2 x{a * r * cphi, b * r * sphi};
                sum.add(radial.weights[i] * dphi * r * planar_integrand(surface, gamma, x));
            }
        }
        return a * b * sum.value();
    }
    GaussLegendreRule g1 = gauss_legendre_on(n_radial, dom.x1_min(), dom.x1_max());
    GaussLegendreRule g2 = gauss_legendre_on(n_radial, dom.x2_min(), dom.x2_max());
    for (int i = 0; i < n_radial; ++i)
        for (int j = 0; j < n_radial; ++j)
            sum.add(g1.weights[i] * g2.weights[j] *
                    planar_integrand(surface, gamma, {g1.nodes[i], g2.nodes[j]}));
    return sum.value();
}

}  // namespace

CrossSectionResult transport_limit_planar(const ConvexSurface& surface, const Impedance& gamma,
                                          const QuadratureSpec& spec) {
    spec.validate();
    // every supported kind exposes its visible part as a graph; reject any
    // future kind that does not
    switch (surface.kind()) {
        case SurfaceKind::sphere:
        case SurfaceKind::ellipsoid:
        case SurfaceKind::graph:
        case SurfaceKind::radial_profile: break;
        default:
            throw UnsupportedSurfaceError(
                "transport_limit_planar: visible part is not available as a graph");
    }
    CrossSectionResult res;
    res.value = planar_pass(surface, gamma, spec.n_radial, spec.n_azimuth);
    QuadratureSpec half = spec.halved();
    res.est_error =
        std::abs(res.value - planar_pass(surface, gamma, half.n_radial, half.n_azimuth));
    res.spec = spec;
    return res;
}

double classical_sigma(const ConvexSurface& surface) { return surface.domain().area(); }

}  // namespace impscat
