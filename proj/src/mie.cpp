#include "impscat/mie.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace impscat {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// Downward (Miller) recurrence for j_l, starting far enough above both l_max
// and the turning point l ~ x that the minimal solution dominates. The start
// order is bumped if the Wronskian against y_l comes out degraded.
std::vector<double> bessel_j_downward(double x, int l_max, int start) {
    std::vector<double> f(start + 2, 0.0);
    f[start + 1] = 0.0;
    f[start] = 1e-280;
    for (int l = start; l >= 1; --l) {
        f[l - 1] = (2.0 * l + 1.0) / x * f[l] - f[l + 1];
        if (std::abs(f[l - 1]) > 1e250) {
            for (int m = l - 1; m <= start + 1; ++m) f[m] *= 1e-250;
        }
    }
    // normalize against the closed form of order 0 or 1, whichever is far
    // from a zero
    double j0 = std::sin(x) / x;
    double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
    double scale;
    if (std::abs(j0) >= std::abs(j1))
        scale = j0 / f[0];
    else
        scale = j1 / f[1];
    f.resize(l_max + 1);
    for (double& v : f) v *= scale;
    return f;
}

}  // namespace

SphericalBesselTable spherical_bessel_pair(double x, int l_max) {
    if (!(x > 0.0)) throw DomainError("spherical_bessel_pair: need x > 0");
    if (l_max < 0) throw DomainError("spherical_bessel_pair: need l_max >= 0");

    SphericalBesselTable t;
    const int n = l_max + 1;

    // y_l: upward recurrence is stable (dominant solution)
    t.y.resize(n);
    t.y[0] = -std::cos(x) / x;
    if (l_max >= 1) t.y[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
    for (int l = 1; l + 1 <= l_max; ++l) {
        t.y[l + 1] = (2.0 * l + 1.0) / x * t.y[l] - t.y[l - 1];
        if (!std::isfinite(t.y[l + 1])) {
            std::ostringstream os;
            os << "spherical_bessel_pair: y_l overflow at order " << l + 1 << " for x = " << x;
            throw RangeError(os.str(), l + 1);
        }
    }

    // j_l: downward recurrence; enlarge the start order until the cross
    // product against y at the top order is clean
    int extra = 25 + static_cast<int>(2.5 * std::cbrt(x));
    for (int attempt = 0; attempt < 4; ++attempt) {
        int start = std::max(l_max, static_cast<int>(std::ceil(x))) + extra;
        t.j = bessel_j_downward(x, l_max, start);
        if (l_max == 0) break;  // order 0 is normalized to the closed form
        // j_{l-1} y_l - j_l y_{l-1} = -1/x^2
        double cross = t.j[l_max - 1] * t.y[l_max] - t.j[l_max] * t.y[l_max - 1];
        if (std::abs(cross * x * x + 1.0) < 1e-12) break;
        extra *= 2;
    }

    t.jp.resize(n);
    t.yp.resize(n);
    if (l_max == 0) {
        t.jp[0] = (x * std::cos(x) - std::sin(x)) / (x * x);
        t.yp[0] = (x * std::sin(x) + std::cos(x)) / (x * x);
    } else {
        t.jp[0] = -t.j[1];
        t.yp[0] = -t.y[1];
        for (int l = 1; l <= l_max; ++l) {
            t.jp[l] = t.j[l - 1] - (l + 1.0) / x * t.j[l];
            t.yp[l] = t.y[l - 1] - (l + 1.0) / x * t.y[l];
        }
    }
    return t;
}

int default_l_max(double ka) {
    return static_cast<int>(std::ceil(ka + 8.0 * std::cbrt(ka) + 20.0));
}

double MieSolution::tail_ratio() const {
    double mx = 0.0;
    for (const auto& v : c) mx = std::max(mx, std::abs(v));
    if (mx == 0.0) return 0.0;
    return std::abs(c.back()) / mx;
}

MieSolution mie_coefficients(double ka, const Impedance& gamma, int l_max) {
    if (!(ka > 0.0)) throw DomainError("mie_coefficients: need ka > 0");
    SphericalBesselTable t = spherical_bessel_pair(ka, l_max);

    MieSolution sol;
    sol.ka = ka;
    sol.gamma = gamma;
    sol.l_max = l_max;
    sol.c.resize(l_max + 1);
    for (int l = 0; l <= l_max; ++l) {
        std::complex<double> h{t.j[l], t.y[l]};
        std::complex<double> hp{t.jp[l], t.yp[l]};
        std::complex<double> cl;
        if (gamma.is_dirichlet()) {
            cl = -t.j[l] / h;
        } else {
            double g = gamma.value();
            cl = -(t.jp[l] + kI * g * t.j[l]) / (hp + kI * g * h);
        }
        double smod = std::abs(1.0 + 2.0 * cl);
        if (smod > 1.0 + 1e-10) {
            std::ostringstream os;
            os << "mie_coefficients: |1 + 2 c_l| = " << smod << " > 1 at l = " << l
               << " (ka = " << ka << ", gamma = " << gamma.value() << ")";
            throw PassivityViolation(os.str());
        }
        sol.c[l] = cl;
    }
    return sol;
}

MieSolution mie_coefficients(double ka, const Impedance& gamma) {
    return mie_coefficients(ka, gamma, default_l_max(ka));
}

namespace {

std::complex<double> amplitude_at_mu(const MieSolution& sol, double mu) {
    std::complex<double> acc = sol.c[0];
    if (sol.l_max >= 1) acc += 3.0 * mu * sol.c[1];
    double pm1 = 1.0, p = mu;
    for (int l = 2; l <= sol.l_max; ++l) {
        double pn = ((2.0 * l - 1.0) * mu * p - (l - 1.0) * pm1) / l;
        pm1 = p;
        p = pn;
        acc += (2.0 * l + 1.0) * p * sol.c[l];
    }
    return acc / (kI * sol.ka);
}

double transport_pass(const MieSolution& sol, int n_polar) {
    GaussLegendreRule rule = gauss_legendre(n_polar);
    KahanSum sum;
    for (int i = 0; i < n_polar; ++i) {
        double mu = rule.nodes[i];
        sum.add(rule.weights[i] * (1.0 - mu) * std::norm(amplitude_at_mu(sol, mu)));
    }
    return 2.0 * M_PI * sum.value();
}

}  // namespace

std::complex<double> amplitude_exact(const MieSolution& sol, double theta_polar) {
    return amplitude_at_mu(sol, std::cos(theta_polar));
}

ExactCrossSections cross_sections_exact(const MieSolution& sol) {
    const double k2 = sol.ka * sol.ka;
    KahanSum scat, ext;
    for (int l = 0; l <= sol.l_max; ++l) {
        scat.add((2.0 * l + 1.0) * std::norm(sol.c[l]));
        ext.add(-(2.0 * l + 1.0) * sol.c[l].real());
    }
    ExactCrossSections xs;
    xs.scattering = 4.0 * M_PI / k2 * scat.value();
    xs.extinction = 4.0 * M_PI / k2 * ext.value();
    xs.absorption = xs.extinction - xs.scattering;
    if (xs.absorption < -1e-10) {
        std::ostringstream os;
        os << "cross_sections_exact: negative absorption " << xs.absorption << " at ka = " << sol.ka
           << ", gamma = " << sol.gamma.value();
        throw PassivityViolation(os.str());
    }
    return xs;
}

double transport_exact(const MieSolution& sol, const QuadratureSpec& spec) {
    int required = static_cast<int>(std::ceil(10.0 * sol.ka + 200.0));
    if (spec.n_polar < required) {
        std::ostringstream os;
        os << "transport_exact: n_polar = " << spec.n_polar << " does not resolve the forward "
           << "lobe at ka = " << sol.ka << "; need at least " << required;
        throw UnderResolvedError(os.str(), required);
    }
    return transport_pass(sol, spec.n_polar);
}

SweepResult sweep(const std::vector<double>& ka_grid, const Impedance& gamma,
                  const QuadratureSpec& spec) {
    for (size_t i = 0; i < ka_grid.size(); ++i) {
        if (!(ka_grid[i] > 0.0)) throw DomainError("sweep: ka grid must be positive");
        if (i > 0 && !(ka_grid[i] > ka_grid[i - 1]))
            throw DomainError("sweep: ka grid must be strictly ascending");
    }

    SweepResult out;
    out.records.reserve(ka_grid.size());
    for (double ka : ka_grid) {
        try {
            MieSolution sol = mie_coefficients(ka, gamma);
            ExactCrossSections xs = cross_sections_exact(sol);
            int n = std::max(spec.n_polar, static_cast<int>(std::ceil(10.0 * ka + 200.0)));
            SweepRecord rec;
            rec.ka = ka;
            rec.sigma_scat = xs.scattering;
            rec.sigma_ext = xs.extinction;
            rec.sigma_abs = xs.absorption;
            rec.transport = transport_pass(sol, n);
            rec.est_error = std::abs(rec.transport - transport_pass(sol, n / 2));
            rec.l_max = sol.l_max;
            out.records.push_back(rec);
            out.c_emp = std::max(out.c_emp, rec.sigma_scat);
        } catch (const Error& e) {
            std::ostringstream os;
            os << "sweep failed at ka = " << ka << ": " << e.what();
            throw Error(os.str());
        }
    }
    return out;
}

}  // namespace impscat
