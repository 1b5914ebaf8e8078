// Command-line front end: parses surface/config specs, dispatches the
// computations and emits CSV/JSON tables. Outputs are deterministic for a
// fixed config; timestamps only ever go to the sidecar log.
//
// Exit status: 0 success, 1 usage/config error, 2 numerical failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "impscat/cross_sections.hpp"
#include "impscat/hf_amplitude.hpp"
#include "impscat/io.hpp"
#include "impscat/mie.hpp"
#include "impscat/shape_opt.hpp"
#include "impscat/surface.hpp"

namespace {

using impscat::ConvexSurface;
using impscat::Impedance;
using impscat::QuadratureSpec;
using impscat::Vec2;
using impscat::Vec3;
namespace io = impscat::io;

std::string fd(double v) { return io::format_double(v); }

// ---------------------------------------------------------------------------
// Options

struct SurfaceOptions {
    std::string kind = "sphere";
    double radius = 1.0;                  // sphere
    double a = 1.0, b = 1.3, c = 0.7;     // ellipsoid
    double curvature = 1.0, rim = 1.0;    // paraboloid
    std::string profile_csv;              // radial-profile

    ConvexSurface build() const {
        if (kind == "sphere") return ConvexSurface::sphere(radius);
        if (kind == "ellipsoid") return ConvexSurface::ellipsoid(a, b, c);
        if (kind == "paraboloid") return ConvexSurface::paraboloid(curvature, rim);
        if (kind == "radial-profile") {
            if (profile_csv.empty())
                throw impscat::ParseError("surface-kind radial-profile requires --profile");
            return io::load_radial_surface_csv(profile_csv);
        }
        throw impscat::ParseError("unknown surface kind '" + kind +
                                  "' (sphere|ellipsoid|paraboloid|radial-profile)");
    }
};

struct OutputOptions {
    std::string path;  // empty = stdout
    std::string format = "csv";
};

Impedance parse_gamma(const std::string& s) {
    if (s == "inf" || s == "infinity" || s == "dirichlet")
        return Impedance::dirichlet();
    if (s == "neumann") return Impedance::neumann();
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return Impedance(v);
    } catch (const std::exception&) {
        throw impscat::ParseError("cannot parse gamma '" + s + "' (number, inf, or neumann)");
    }
}

std::string gamma_str(const Impedance& g) {
    return g.is_dirichlet() ? "inf" : fd(g.value());
}

void emit(const io::Table& table, const OutputOptions& out, const std::string& command,
          std::chrono::steady_clock::time_point t0) {
    if (out.path.empty()) {
        if (io::parse_format(out.format) == io::Format::csv)
            io::write_csv(table, std::cout);
        else
            io::write_json(table, std::cout);
        return;
    }
    io::write_table(table, out.path, io::parse_format(out.format));
    // sidecar log keeps the timing/timestamp noise out of the data file
    std::ofstream log(out.path + ".log");
    if (log) {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        std::time_t now = std::time(nullptr);
        char stamp[64];
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%S", std::gmtime(&now));
        log << "command: " << command << "\nwritten: " << out.path << "\nelapsed_ms: " << ms
            << "\ntimestamp: " << stamp << "Z\n";
    }
}

std::vector<double> make_grid(double lo, double hi, int count, const std::string& spacing) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
        throw impscat::ParseError("grid requires 0 < min < max and count >= 2");
    std::vector<double> g(count);
    if (spacing == "log") {
        double l0 = std::log(lo), l1 = std::log(hi);
        for (int i = 0; i < count; ++i)
            g[i] = std::exp(l0 + (l1 - l0) * i / (count - 1));
    } else if (spacing == "linear") {
        for (int i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / (count - 1);
    } else {
        throw impscat::ParseError("spacing must be log or linear");
    }
    return g;
}

// ---------------------------------------------------------------------------
// Runners

int run_density(const SurfaceOptions& sopt, const std::string& gamma_s, QuadratureSpec spec,
                const OutputOptions& out, const std::string& cmdline,
                std::chrono::steady_clock::time_point t0) {
    ConvexSurface surface = sopt.build();
    Impedance gamma = parse_gamma(gamma_s);
    spec.validate();

    io::Table t;
    t.comments = {"surface: " + surface.label(), "gamma: " + gamma_str(gamma),
                  "density of the high-frequency limit amplitude, units a^2"};
    t.columns = {"cos_polar", "azimuth", "density", "units"};
    impscat::GaussLegendreRule polar =
        impscat::gauss_legendre_on(spec.n_polar, -1.0, std::cos(spec.eps_fwd));
    for (int j = 0; j < spec.n_azimuth; ++j) {
        double phi = 2.0 * M_PI * j / spec.n_azimuth;
        for (int i = 0; i < spec.n_polar; ++i) {
            double mu = polar.nodes[i];
            double smu = std::sqrt(std::max(0.0, 1.0 - mu * mu));
            Vec3 theta{smu * std::cos(phi), smu * std::sin(phi), mu};
            double d = impscat::density_hf(surface, theta, gamma);
            t.rows.push_back({fd(mu), fd(phi), fd(d), "a^2"});
        }
    }
    emit(t, out, cmdline, t0);
    return 0;
}

int run_cross_section(const SurfaceOptions& sopt, const std::string& gamma_s,
                      const std::string& quantity, QuadratureSpec spec, const OutputOptions& out,
                      const std::string& cmdline, std::chrono::steady_clock::time_point t0) {
    ConvexSurface surface = sopt.build();
    Impedance gamma = parse_gamma(gamma_s);

    io::Table t;
    t.columns = {"surface-id", "gamma", "quantity", "value", "est_error", "nodes", "units"};
    auto add = [&](const std::string& q, double value, double err, const std::string& nodes) {
        t.rows.push_back(
            {surface.label(), gamma_str(gamma), q, fd(value), fd(err), nodes, "a^2"});
    };
    std::string angular_nodes =
        std::to_string(spec.n_polar) + "x" + std::to_string(spec.n_azimuth);
    std::string planar_nodes = surface.radially_symmetric()
                                   ? std::to_string(spec.n_radial)
                                   : std::to_string(spec.n_radial) + "x" +
                                         std::to_string(spec.n_azimuth);

    bool all = quantity == "all";
    if (all || quantity == "total-hf") {
        auto r = impscat::total_hf_angular(surface, gamma, spec);
        add("total-hf", r.value, r.est_error, angular_nodes);
    }
    if (all || quantity == "transport-hf") {
        auto r = impscat::transport_hf_angular(surface, gamma, spec);
        add("transport-hf", r.value, r.est_error, angular_nodes);
    }
    if (all || quantity == "transport-limit") {
        auto r = impscat::transport_limit_planar(surface, gamma, spec);
        add("transport-limit", r.value, r.est_error, planar_nodes);
    }
    if (all || quantity == "classical") {
        add("classical", impscat::classical_sigma(surface), 0.0, "-");
    }
    if (t.rows.empty())
        throw impscat::ParseError("unknown quantity '" + quantity +
                                  "' (total-hf|transport-hf|transport-limit|classical|all)");
    emit(t, out, cmdline, t0);
    return 0;
}

int run_transport_limit(const SurfaceOptions& sopt, const std::string& gamma_s,
                        QuadratureSpec spec, const OutputOptions& out, const std::string& cmdline,
                        std::chrono::steady_clock::time_point t0) {
    return run_cross_section(sopt, gamma_s, "transport-limit", spec, out, cmdline, t0);
}

int run_mie_sweep(const std::string& gamma_s, double ka_min, double ka_max, int ka_count,
                  const std::string& spacing, QuadratureSpec spec, const OutputOptions& out,
                  const std::string& cmdline, std::chrono::steady_clock::time_point t0) {
    Impedance gamma = parse_gamma(gamma_s);
    std::vector<double> grid = make_grid(ka_min, ka_max, ka_count, spacing);
    impscat::SweepResult sweep = impscat::sweep(grid, gamma, spec);

    io::Table t;
    t.comments = {"gamma: " + gamma_str(gamma),
                  "units: a = 1; cross sections in a^2",
                  "C_emp (max sigma_scat over grid): " + fd(sweep.c_emp)};
    t.columns = {"ka", "sigma_scat", "sigma_ext", "sigma_abs", "transport", "l_max", "est_error"};
    for (const auto& r : sweep.records)
        t.rows.push_back({fd(r.ka), fd(r.sigma_scat), fd(r.sigma_ext), fd(r.sigma_abs),
                          fd(r.transport), std::to_string(r.l_max), fd(r.est_error)});
    emit(t, out, cmdline, t0);
    return 0;
}

int run_limit_check(const SurfaceOptions& sopt, const std::string& gamma_s,
                    std::vector<double> ka_values, QuadratureSpec spec, const OutputOptions& out,
                    const std::string& cmdline, std::chrono::steady_clock::time_point t0) {
    ConvexSurface surface = sopt.build();
    if (surface.kind() != impscat::SurfaceKind::sphere)
        throw impscat::ParseError(
            "limit-check compares against the exact sphere series; use --surface-kind sphere");
    Impedance gamma = parse_gamma(gamma_s);
    if (ka_values.empty()) ka_values = {80.0};

    auto limit = impscat::transport_limit_planar(surface, gamma, spec);

    io::Table t;
    t.comments = {"surface: " + surface.label(), "gamma: " + gamma_str(gamma),
                  "transport limit (planar functional): " + fd(limit.value),
                  "units: cross sections in a^2"};
    t.columns = {"gamma", "ka", "transport_exact", "transport_limit", "rel_error", "units"};
    for (double ka : ka_values) {
        // radius folds into ka; the series is for a unit sphere
        double a = surface.domain().semi_a();
        impscat::MieSolution sol = impscat::mie_coefficients(ka, gamma);
        QuadratureSpec mspec = spec;
        mspec.n_polar =
            std::max(spec.n_polar, static_cast<int>(std::ceil(10.0 * ka + 200.0)));
        double exact = impscat::transport_exact(sol, mspec) * a * a;
        double rel = std::abs(exact / limit.value - 1.0);
        t.rows.push_back({gamma_str(gamma), fd(ka), fd(exact), fd(limit.value), fd(rel), "a^2"});
    }
    emit(t, out, cmdline, t0);
    return 0;
}

int run_jacobian_check(const SurfaceOptions& sopt, int points, double h, unsigned long seed,
                       const OutputOptions& out, const std::string& cmdline,
                       std::chrono::steady_clock::time_point t0) {
    ConvexSurface surface = sopt.build();
    if (surface.domain().shape() != impscat::PlanarDomain::Shape::ellipse)
        throw impscat::ParseError("jacobian-check expects a surface over an elliptical domain");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    io::Table t;
    t.comments = {"surface: " + surface.label(), "h: " + fd(h),
                  "seed: " + std::to_string(seed)};
    t.columns = {"x1", "x2", "jacobian", "four_curvature", "ratio_minus_one"};
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        // uniform over the illuminated cap away from the pole (degenerate
        // azimuth) and the rim (blowing derivatives)
        double r = std::sqrt(0.01 + 0.80 * unif(rng));
        double phi = 2.0 * M_PI * unif(rng);
        Vec2 x{surface.domain().semi_a() * r * std::cos(phi),
               surface.domain().semi_b() * r * std::sin(phi)};
        double jac = impscat::reflection_jacobian_numeric(surface, x, h);
        double fourk = 4.0 * impscat::gauss_curvature(surface, x);
        double dev = std::abs(jac) / fourk - 1.0;
        worst = std::max(worst, std::abs(dev));
        t.rows.push_back({fd(x.x), fd(x.y), fd(jac), fd(fourk), fd(dev)});
    }
    t.comments.push_back("max |ratio - 1|: " + fd(worst));
    emit(t, out, cmdline, t0);
    std::cerr << "jacobian-check: max ||J|/(4K) - 1| = " << worst << " over " << points
              << " points\n";
    return 0;
}

int run_optimize(const std::string& gamma_s, const std::string& goal_s, int cells, double rho_max,
                 double u_lo, double u_hi, bool monotone, std::optional<double> budget,
                 double init_slope, const std::string& init_profile, double tol, int max_iters,
                 const OutputOptions& out, const std::string& profile_out,
                 const std::string& cmdline, std::chrono::steady_clock::time_point t0) {
    Impedance gamma = parse_gamma(gamma_s);
    impscat::Goal goal;
    if (goal_s == "min")
        goal = impscat::Goal::minimize;
    else if (goal_s == "max")
        goal = impscat::Goal::maximize;
    else
        throw impscat::ParseError("goal must be min or max");

    impscat::RadialProfile init;
    if (!init_profile.empty())
        init = io::load_profile_csv(init_profile);
    else
        init = impscat::RadialProfile::uniform(cells, rho_max, init_slope);
    init.constraints.u_lo = u_lo;
    init.constraints.u_hi = u_hi;
    init.constraints.monotone = monotone;
    init.constraints.height_budget = budget;

    impscat::StepSchedule schedule;
    schedule.max_iterations = max_iters;
    impscat::OptimizeReport report = impscat::optimize_profile(init, gamma, goal, schedule, tol);

    nlohmann::ordered_json doc;
    doc["gamma"] = gamma_str(gamma);
    doc["goal"] = goal_s;
    doc["cells"] = report.profile.cells();
    doc["converged"] = report.converged;
    doc["iterations"] = report.iterations;
    doc["final_objective"] = fd(report.objective_trace.back());
    doc["projected_gradient_norm"] = fd(report.projected_gradient_norm);
    doc["constraint_residual"] = fd(report.constraint_residual);
    nlohmann::ordered_json trace = nlohmann::ordered_json::array();
    for (double v : report.objective_trace) trace.push_back(fd(v));
    doc["objective_trace"] = trace;
    nlohmann::ordered_json rho = nlohmann::ordered_json::array(),
                           u = nlohmann::ordered_json::array();
    for (double v : report.profile.rho) rho.push_back(fd(v));
    for (double v : report.profile.u) u.push_back(fd(v));
    doc["profile"] = {{"rho", rho}, {"u", u}};

    if (out.path.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream os(out.path);
        if (!os) throw impscat::ParseError("cannot open output file '" + out.path + "'");
        os << doc.dump(2) << "\n";
        std::ofstream log(out.path + ".log");
        if (log) {
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
            log << "command: " << cmdline << "\nelapsed_ms: " << ms << "\n";
        }
    }
    if (!profile_out.empty()) io::save_profile_csv(report.profile, profile_out);
    return 0;
}

// Apply config-file values as defaults; explicit flags win because CLI11 only
// writes bound variables for options actually given.
template <typename T>
void config_set(const std::map<std::string, std::string>& cfg, const std::string& key, T& var) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return;
    std::istringstream is(it->second);
    T v;
    if constexpr (std::is_same_v<T, std::string>) {
        v = it->second;
    } else if constexpr (std::is_same_v<T, bool>) {
        v = (it->second == "true" || it->second == "1" || it->second == "yes");
    } else {
        if (!(is >> v)) throw impscat::ParseError("config: cannot parse " + key + " = " + it->second);
    }
    var = v;
}

}  // namespace

int main(int argc, char** argv) {
    std::string cmdline;
    for (int i = 0; i < argc; ++i) {
        if (i) cmdline += " ";
        cmdline += argv[i];
    }
    auto t0 = std::chrono::steady_clock::now();

    // pre-scan for --config so file values can seed the option defaults
    std::map<std::string, std::string> cfg;
    std::string config_path;
    try {
        for (int i = 1; i + 1 < argc; ++i)
            if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
        if (!config_path.empty()) cfg = io::load_config(config_path);
    } catch (const impscat::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App app{"High-frequency impedance scattering toolkit"};
    app.require_subcommand(0, 1);
    std::string config_dummy;
    app.add_option("--config", config_dummy, "flat key=value config file; flags override");

    SurfaceOptions sopt;
    OutputOptions out;
    QuadratureSpec spec;
    std::string gamma_s = "inf";
    std::string quantity = "all";
    double ka_min = 0.1, ka_max = 100.0;
    int ka_count = 400;
    std::string spacing = "log";
    std::vector<double> ka_values;
    int points = 100;
    double fd_h = 1e-5;
    unsigned long seed = 12345;
    std::string goal_s = "min";
    int cells = 256;
    double rho_max = 1.0, u_lo = 0.0, u_hi = 1e6, init_slope = 0.0;
    bool monotone = false;
    double budget_val = std::nan("");
    std::string init_profile, profile_out;
    double tol = 1e-10;
    int max_iters = 50000;

    // config defaults (shared keys; unknown keys are ignored so one file can
    // drive several commands)
    try {
        config_set(cfg, "surface-kind", sopt.kind);
        config_set(cfg, "radius", sopt.radius);
        config_set(cfg, "a", sopt.a);
        config_set(cfg, "b", sopt.b);
        config_set(cfg, "c", sopt.c);
        config_set(cfg, "curvature", sopt.curvature);
        config_set(cfg, "rim", sopt.rim);
        config_set(cfg, "profile", sopt.profile_csv);
        config_set(cfg, "gamma", gamma_s);
        config_set(cfg, "quantity", quantity);
        config_set(cfg, "n-polar", spec.n_polar);
        config_set(cfg, "n-azimuth", spec.n_azimuth);
        config_set(cfg, "n-radial", spec.n_radial);
        config_set(cfg, "eps-fwd", spec.eps_fwd);
        config_set(cfg, "out", out.path);
        config_set(cfg, "format", out.format);
        config_set(cfg, "ka-min", ka_min);
        config_set(cfg, "ka-max", ka_max);
        config_set(cfg, "ka-count", ka_count);
        config_set(cfg, "spacing", spacing);
        config_set(cfg, "points", points);
        config_set(cfg, "h", fd_h);
        config_set(cfg, "seed", seed);
        config_set(cfg, "goal", goal_s);
        config_set(cfg, "cells", cells);
        config_set(cfg, "rho-max", rho_max);
        config_set(cfg, "u-lo", u_lo);
        config_set(cfg, "u-hi", u_hi);
        config_set(cfg, "monotone", monotone);
        config_set(cfg, "height-budget", budget_val);
        config_set(cfg, "init-slope", init_slope);
        config_set(cfg, "init-profile", init_profile);
        config_set(cfg, "profile-out", profile_out);
        config_set(cfg, "tol", tol);
        config_set(cfg, "max-iters", max_iters);
        if (cfg.count("ka")) {
            std::istringstream is(cfg.at("ka"));
            double v;
            ka_values.clear();
            while (is >> v) ka_values.push_back(v);
        }
    } catch (const impscat::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    auto add_surface = [&](CLI::App* sub) {
        sub->add_option("--surface-kind", sopt.kind,
                        "sphere|ellipsoid|paraboloid|radial-profile");
        sub->add_option("--radius", sopt.radius, "sphere radius");
        sub->add_option("--a", sopt.a, "ellipsoid semi-axis a");
        sub->add_option("--b", sopt.b, "ellipsoid semi-axis b");
        sub->add_option("--c", sopt.c, "ellipsoid semi-axis c (incident axis)");
        sub->add_option("--curvature", sopt.curvature, "paraboloid curvature");
        sub->add_option("--rim", sopt.rim, "paraboloid rim radius");
        sub->add_option("--profile", sopt.profile_csv, "radial profile CSV (rho, g)");
    };
    auto add_quad = [&](CLI::App* sub) {
        sub->add_option("--n-polar", spec.n_polar, "Gauss-Legendre nodes in cos(polar)");
        sub->add_option("--n-azimuth", spec.n_azimuth, "trapezoid nodes in azimuth");
        sub->add_option("--n-radial", spec.n_radial, "radial Gauss-Legendre nodes");
        sub->add_option("--eps-fwd", spec.eps_fwd, "forward exclusion radius (rad)");
    };
    auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out", out.path, "output file (default stdout)");
        sub->add_option("--format", out.format, "csv|json");
        sub->add_option("--config", config_dummy, "config file");
    };

    CLI::App* c_density = app.add_subcommand("density", "high-frequency density over directions");
    add_surface(c_density);
    add_quad(c_density);
    add_out(c_density);
    c_density->add_option("--gamma", gamma_s, "impedance (number, inf, neumann)");

    CLI::App* c_xsec = app.add_subcommand("cross-section", "angular/planar cross sections");
    add_surface(c_xsec);
    add_quad(c_xsec);
    add_out(c_xsec);
    c_xsec->add_option("--gamma", gamma_s, "impedance");
    c_xsec->add_option("--quantity", quantity, "total-hf|transport-hf|transport-limit|classical|all");

    CLI::App* c_tl = app.add_subcommand("transport-limit", "planar transport-limit functional");
    add_surface(c_tl);
    add_quad(c_tl);
    add_out(c_tl);
    c_tl->add_option("--gamma", gamma_s, "impedance");

    CLI::App* c_sweep = app.add_subcommand("mie-sweep", "exact sphere sweep over ka");
    add_quad(c_sweep);
    add_out(c_sweep);
    c_sweep->add_option("--gamma", gamma_s, "impedance");
    c_sweep->add_option("--ka-min", ka_min, "grid start");
    c_sweep->add_option("--ka-max", ka_max, "grid end");
    c_sweep->add_option("--ka-count", ka_count, "grid size");
    c_sweep->add_option("--spacing", spacing, "log|linear");

    CLI::App* c_limit = app.add_subcommand("limit-check",
                                           "exact sphere transport vs planar limit");
    add_surface(c_limit);
    add_quad(c_limit);
    add_out(c_limit);
    c_limit->add_option("--gamma", gamma_s, "impedance");
    c_limit->add_option("--ka", ka_values, "ka values for the exact series");

    CLI::App* c_jac = app.add_subcommand("jacobian-check",
                                         "reflection-map Jacobian vs curvature identity");
    add_surface(c_jac);
    add_out(c_jac);
    c_jac->add_option("--points", points, "number of random illuminated points");
    c_jac->add_option("--h", fd_h, "central-difference step");
    c_jac->add_option("--seed", seed, "RNG seed");

    CLI::App* c_opt = app.add_subcommand("optimize", "optimize the transport functional over "
                                                     "convex radial profiles");
    add_out(c_opt);
    c_opt->add_option("--gamma", gamma_s, "impedance");
    c_opt->add_option("--goal", goal_s, "min|max");
    c_opt->add_option("--cells", cells, "number of radial cells");
    c_opt->add_option("--rho-max", rho_max, "profile radius");
    c_opt->add_option("--u-lo", u_lo, "slope lower bound");
    c_opt->add_option("--u-hi", u_hi, "slope upper bound");
    c_opt->add_flag("--monotone", monotone, "enforce nondecreasing slope (convexity)");
    c_opt->add_option("--height-budget", budget_val, "fixed total height");
    c_opt->add_option("--init-slope", init_slope, "uniform initial slope");
    c_opt->add_option("--init-profile", init_profile, "initial profile CSV (rho, u)");
    c_opt->add_option("--profile-out", profile_out, "write final profile CSV here");
    c_opt->add_option("--tol", tol, "projected-gradient tolerance");
    c_opt->add_option("--max-iters", max_iters, "iteration cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints usage or help text
        return code == 0 ? 0 : 1;
    }

    std::string command;
    if (c_density->parsed()) command = "density";
    else if (c_xsec->parsed()) command = "cross-section";
    else if (c_tl->parsed()) command = "transport-limit";
    else if (c_sweep->parsed()) command = "mie-sweep";
    else if (c_limit->parsed()) command = "limit-check";
    else if (c_jac->parsed()) command = "jacobian-check";
    else if (c_opt->parsed()) command = "optimize";
    else if (cfg.count("command")) command = cfg.at("command");

    if (command.empty()) {
        std::cerr << app.help() << "\n";
        return 1;
    }

    try {
        std::optional<double> budget;
        if (!std::isnan(budget_val)) budget = budget_val;
        if (command == "density")
            return run_density(sopt, gamma_s, spec, out, cmdline, t0);
        if (command == "cross-section")
            return run_cross_section(sopt, gamma_s, quantity, spec, out, cmdline, t0);
        if (command == "transport-limit")
            return run_transport_limit(sopt, gamma_s, spec, out, cmdline, t0);
        if (command == "mie-sweep")
            return run_mie_sweep(gamma_s, ka_min, ka_max, ka_count, spacing, spec, out, cmdline,
                                 t0);
        if (command == "limit-check")
            return run_limit_check(sopt, gamma_s, ka_values, spec, out, cmdline, t0);
        if (command == "jacobian-check")
            return run_jacobian_check(sopt, points, fd_h, seed, out, cmdline, t0);
        if (command == "optimize")
            return run_optimize(gamma_s, goal_s, cells, rho_max, u_lo, u_hi, monotone, budget,
                                init_slope, init_profile, tol, max_iters, out, profile_out,
                                cmdline, t0);
        std::cerr << "error: unknown command '" << command << "'\n";
        return 1;
    } catch (const impscat::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const impscat::Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    }
}
