#include "impscat/hf_amplitude.hpp"

#include <cmath>
#include <sstream>

namespace impscat {

double reflection_coefficient(const Impedance& gamma, double c) {
    if (c < 0.0 || c > 1.0 + 1e-12)
        throw DomainError("reflection_coefficient: incidence cosine must lie in [0, 1]");
    if (gamma.is_dirichlet()) return 1.0;
    double g = gamma.value();
    if (g == 0.0 && c == 0.0)
        throw DomainError("reflection_coefficient: gamma = 0 with grazing incidence is "
                          "indeterminate");
    return (g - c) / (g + c);
}

namespace {

// Specular point and incidence cosine for the direction theta.
struct SpecularData {
    SurfacePoint point;
    double incidence_cos;  // |<n(theta), theta>|
};

SpecularData specular_for(const ConvexSurface& surface, const Vec3& theta) {
    SpecularData d;
    d.point = invert_reflection_map(surface, theta);
    d.incidence_cos = std::abs(d.point.n.dot(theta.normalized()));
    return d;
}

}  // namespace

std::complex<double> amplitude_hf(const ConvexSurface& surface, const Vec3& theta,
                                  const Impedance& gamma, double k) {
    if (!(k > 0.0)) throw DomainError("amplitude_hf: wavenumber must be positive");
    SpecularData d = specular_for(surface, theta);
    double rho = reflection_coefficient(gamma, d.incidence_cos);
    Vec3 diff = theta.normalized() - incident_direction();
    double phase = k * d.point.y.dot(diff);
    return 0.5 / std::sqrt(d.point.curvature) * rho *
           std::complex<double>(std::cos(phase), std::sin(phase));
}

double density_hf(const ConvexSurface& surface, const Vec3& theta, const Impedance& gamma) {
    SpecularData d = specular_for(surface, theta);
    double rho = reflection_coefficient(gamma, d.incidence_cos);
    return 0.25 / d.point.curvature * rho * rho;
}

AmplitudeSample amplitude_sample_hf(const ConvexSurface& surface, const Vec3& theta,
                                    const Impedance& gamma, double k) {
    AmplitudeSample s;
    s.theta = theta.normalized();
    s.f = amplitude_hf(surface, theta, gamma, k);
    s.density = std::norm(s.f);
    return s;
}

}  // namespace impscat
