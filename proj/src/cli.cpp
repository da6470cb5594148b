#include "abwave/cli.hpp"

#include "abwave/diffraction.hpp"
#include "abwave/domains.hpp"
#include "abwave/errors.hpp"
#include "abwave/mode_sum.hpp"
#include "abwave/probe.hpp"
#include "abwave/special_fn.hpp"
#include "abwave/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <locale>
#include <sstream>

namespace abwave::cli {

using nlohmann::json;

namespace {

std::string num(double v) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s.precision(17);
    s << v;
    return s.str();
}

// A small table written as CSV (header + rows) or as a JSON array of row objects.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void write(std::ostream& out, const std::string& format) const {
        if (format == "json") {
            json arr = json::array();
            for (const auto& row : rows) {
                json o = json::object();
                for (std::size_t i = 0; i < columns.size(); ++i) o[columns[i]] = row[i];
                arr.push_back(o);
            }
            out << arr.dump(2) << "\n";
            return;
        }
        for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
        out << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << num(row[i]);
            out << "\n";
        }
    }
};

json complex_pair(const std::string& key, cplx z, json j = json::object()) {
    j[key + "_re"] = z.real();
    j[key + "_im"] = z.imag();
    return j;
}

FrequencyWindow make_window(const RunConfig& c) {
    return FrequencyWindow::make(c.window == "bump" ? WindowShape::smooth_bump : WindowShape::gaussian,
                                 c.lambda_center, c.lambda_halfwidth);
}

ModeSpec make_modes(const RunConfig& c, const FrequencyWindow& g) {
    const int k = c.k_max_value();
    return k > 0 ? ModeSpec::make(k, c.tail_tol) : mode_truncation_bound(g, c.r1, c.r2, c.tail_tol);
}

std::pair<PolarPoint, PolarPoint> points(const RunConfig& c) {
    const double d = c.dtheta();
    if (pi - std::fabs(d) <= c.excluded_guard) {
        std::ostringstream msg;
        msg << "dtheta = " << num(d) << " lies in the excluded set |dtheta| = pi (guard " << c.excluded_guard
            << "); the kernel is not conormal there";
        throw ExcludedDirectionError(msg.str());
    }
    return {PolarPoint::make(c.r1, c.theta1), PolarPoint::make(c.r2, c.theta2)};
}

std::vector<double> grid_times(const RunConfig& c, double default_half_width) {
    const double t0 = c.t_center > 0.0 ? c.t_center : c.r1 + c.r2;
    const double hw = c.t_half_width > 0.0 ? c.t_half_width : default_half_width;
    if (t0 - hw <= 0.0) throw ConfigError("time grid must stay at t > 0 (t_center - t_half_width <= 0)");
    std::vector<double> ts(static_cast<std::size_t>(c.n));
    for (int i = 0; i < c.n; ++i) ts[i] = t0 - hw + 2.0 * hw * i / (c.n - 1);
    return ts;
}

int cmd_coeff(const RunConfig& c, std::ostream& out) {
    const auto [q1, q2] = points(c);
    const Flux a(c.alpha);
    const cplx a0 = diffraction_coefficient(a, q1, q2);
    const cplx dform = diffraction_series_closed(a, c.dtheta()) / (2.0 * std::sqrt(c.r1 * c.r2));
    const cplx assembled = assemble_from_stationary_phase(a, q1, q2);
    json j = {{"alpha", c.alpha}, {"r1", c.r1}, {"r2", c.r2}, {"theta1", c.theta1}, {"theta2", c.theta2},
              {"dtheta", c.dtheta()}};
    j = complex_pair("a0", a0, j);
    j = complex_pair("closed_dtheta_form", dform, j);
    j = complex_pair("stationary_phase", assembled, j);
    j["forms_agreement"] = std::max(std::abs(a0 - dform), std::abs(a0 - assembled));
    out << j.dump(2) << "\n";
    return exit_ok;
}

int cmd_kernel(const RunConfig& c, std::ostream& out) {
    const auto g = make_window(c);
    const auto modes = make_modes(c, g);
    const auto ts = grid_times(c, 1.2);
    ModeSumKernel k(c.alpha, c.r1, c.r2, c.dtheta(), g, modes, ts.back());
    Table t{{"t", "re", "im", "mode_tail", "quad_err"}, {}};
    for (const auto& s : k.sample(ts)) t.rows.push_back({s.t, s.value.real(), s.value.imag(), s.est_mode_tail,
                                                         s.est_quad_err});
    t.write(out, c.format);
    return exit_ok;
}

int cmd_probe(const RunConfig& c, std::ostream& out) {
    if (c.window != "gaussian") throw ConfigError("probe uses the gaussian window");
    const auto [q1, q2] = points(c);
    ProbeConfig p;
    p.alpha = c.alpha;
    p.q1 = q1;
    p.q2 = q2;
    p.lambda_center = c.lambda_center;
    p.lambda_halfwidth = c.lambda_halfwidth;
    p.band_lo = c.band_lo;
    p.band_hi = c.band_hi;
    p.half_width = c.t_half_width;
    p.k_max = c.k_max_value();
    p.tail_tol = c.tail_tol;
    p.subtract_geometric = c.subtract_geometric;
    const auto r = run_probe(p);
    const bool pass = r.rel_mag_err <= c.tolerance;
    json j = json::object();
    j = complex_pair("a_hat", r.estimate.a0, j);
    j = complex_pair("a1_hat", r.estimate.a1, j);
    j = complex_pair("theory", r.theory, j);
    j["rel_mag_err"] = r.rel_mag_err;
    j["phase_err"] = r.phase_err;
    j["gate_err"] = r.gate_err;
    j["fit_residual"] = r.estimate.residual;
    j["band_lo"] = r.estimate.band_lo;
    j["band_hi"] = r.estimate.band_hi;
    j["method"] = r.estimate.method;
    j["mode_tail"] = r.mode_tail;
    j["quad_err"] = r.quad_err;
    j["k_max"] = r.k_max;
    j["window_center"] = r.window_center;
    j["window_halfwidth"] = r.window_halfwidth;
    j["subtract_geometric"] = c.subtract_geometric;
    j["tolerance"] = c.tolerance;
    j["pass"] = pass;
    out << j.dump(2) << "\n";
    return pass ? exit_ok : exit_criterion;
}

int cmd_verify(const std::string& suite, std::ostream& out) {
    const auto results = run_suite(parse_suite(suite));
    json arr = json::array();
    bool all = true;
    for (const auto& r : results) {
        arr.push_back({{"criterion_id", r.criterion_id},
                       {"description", r.description},
                       {"paper_anchor", r.paper_anchor},
                       {"measured", r.measured},
                       {"tolerance", r.tolerance},
                       {"pass", r.pass},
                       {"detail", r.detail}});
        all = all && r.pass;
    }
    json j = {{"suite", suite}, {"pass", all}, {"criteria", arr}};
    out << j.dump(2) << "\n";
    return all ? exit_ok : exit_criterion;
}

const char* method_name(BesselMethod m) {
    switch (m) {
        case BesselMethod::power_series: return "power_series";
        case BesselMethod::hankel_asymptotic: return "hankel_asymptotic";
        case BesselMethod::forward_recurrence: return "forward_recurrence";
        case BesselMethod::continued_fraction: return "continued_fraction";
    }
    return "unknown";
}

int cmd_bessel(const std::string& kind, double nu, double x, double x_im, std::ostream& out) {
    json j = {{"kind", kind}, {"nu", nu}, {"x_re", x}, {"x_im", x_im}};
    if (kind == "j") {
        if (x_im != 0.0) throw ConfigError("bessel j takes a real argument");
        const auto r = bessel_j_detailed(nu, x);
        j["value_re"] = r.value;
        j["value_im"] = 0.0;
        j["error_bound"] = r.error_bound;
        j["method"] = method_name(r.method);
    } else {
        j = complex_pair("value", bessel_k(nu, cplx(x, x_im)), j);
    }
    out << j.dump(2) << "\n";
    return exit_ok;
}

int cmd_pairing(const RunConfig& c, const std::string& method, double epsilon, int n_quad, double r_on,
                double r_off, std::ostream& out) {
    const Flux a(c.alpha);
    json j = {{"alpha", c.alpha}, {"reference", -4.0 * pi * c.alpha * (1.0 - c.alpha)}};
    if (method != "area") {
        j = complex_pair("contour", commutator_pairing_contour(a, epsilon, n_quad), j);
        j["epsilon"] = epsilon;
    }
    if (method != "contour") {
        const auto p = commutator_pairing_area(a, CutoffProfile::make(r_on, r_off));
        j = complex_pair("area", p.value, j);
        j["area_convergence_gap"] = p.convergence_gap;
    }
    out << j.dump(2) << "\n";
    return exit_ok;
}

int cmd_lkernel(const RunConfig& c, int jj, int pairs, const std::string& rep, std::ostream& out) {
    const auto g = make_window(c);
    const auto spec = LKernelSpec::make(jj, pairs, rep == "conormal" ? LKernelRepresentation::conormal_symbol
                                                                     : LKernelRepresentation::exact_bessel_limit);
    Table t{{"t", "value", "error"}, {}};
    for (double time : grid_times(c, 1.2)) {
        const auto v = l_kernel(spec, time, c.r1, Flux(c.alpha), g);
        t.rows.push_back({time, v.value, v.error});
    }
    t.write(out, c.format);
    return exit_ok;
}

int cmd_abel(const RunConfig& c, double eps, long terms, std::ostream& out) {
    const Flux a(c.alpha);
    Table t{{"dtheta", "series_re", "series_im", "closed_re", "closed_im", "abs_err"}, {}};
    for (double d : {-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0}) {
        const cplx s = abel_diffraction_series(a, d, eps, terms);
        const cplx z = diffraction_series_closed(a, d);
        t.rows.push_back({d, s.real(), s.imag(), z.real(), z.imag(), std::abs(s - z)});
    }
    t.write(out, c.format);
    return exit_ok;
}

}  // namespace

void RunConfig::validate() const {
    auto need = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError("invalid configuration: " + what);
    };
    need(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    need(r1 > 0.0 && std::isfinite(r1) && r2 > 0.0 && std::isfinite(r2), "r1 and r2 must be positive");
    need(std::isfinite(theta1) && std::isfinite(theta2), "angles must be finite");
    need(window == "gaussian" || window == "bump", "window must be gaussian or bump");
    need(lambda_center > 0.0 && lambda_halfwidth > 0.0, "lambda_center and lambda_halfwidth must be positive");
    if (window == "gaussian") need(lambda_center >= 6.0 * lambda_halfwidth, "gaussian window needs lambda_center >= 6 sigma");
    else need(lambda_center > 3.0 * lambda_halfwidth, "bump window needs lambda_center > 3 w");
    need(k_max == "auto" || k_max_value() > 0, "k_max must be 'auto' or a positive integer");
    need(tail_tol > 0.0, "tail_tol must be positive");
    need(t_center >= 0.0 && t_half_width >= 0.0, "t_center and t_half_width must be nonnegative");
    need(n >= 2 && n <= 1000000, "n must lie in [2, 1e6]");
    need(band_lo > 0.0 && band_hi > band_lo, "band must satisfy 0 < band_lo < band_hi");
    need(tolerance > 0.0, "tolerance must be positive");
    need(excluded_guard >= 0.0, "excluded_guard must be nonnegative");
    need(format == "csv" || format == "json", "format must be csv or json");
}

double RunConfig::dtheta() const { return reduce_angle(theta1 - theta2); }

int RunConfig::k_max_value() const {
    if (k_max == "auto") return 0;
    int v = 0;
    const auto [p, ec] = std::from_chars(k_max.data(), k_max.data() + k_max.size(), v);
    if (ec != std::errc() || p != k_max.data() + k_max.size() || v <= 0) return -1;
    return v;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    double dtheta = 0.0;
    CLI::App app{"Aharonov-Bohm wave kernel: diffraction coefficient, mode sums, probes and checks", "abwave"};
    app.set_config("--config", "", "line-oriented 'key = value' file; flags override it");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    app.add_option("--alpha", c.alpha, "flux in (0, 1)");
    app.add_option("--r1", c.r1);
    app.add_option("--r2", c.r2);
    auto* o_t1 = app.add_option("--theta1", c.theta1);
    auto* o_t2 = app.add_option("--theta2", c.theta2);
    auto* o_dt = app.add_option("--dtheta", dtheta, "sets theta1 = dtheta / 2, theta2 = -dtheta / 2");
    o_dt->excludes(o_t1)->excludes(o_t2);
    app.add_option("--window", c.window, "gaussian | bump");
    app.add_option("--lambda_center", c.lambda_center);
    app.add_option("--lambda_halfwidth", c.lambda_halfwidth);
    app.add_option("--k_max", c.k_max, "auto or a positive integer");
    app.add_option("--tail_tol", c.tail_tol);
    app.add_option("--t_center", c.t_center, "grid center (0: r1 + r2)");
    app.add_option("--t_half_width", c.t_half_width, "grid half-width (0: command default)");
    app.add_option("--n", c.n, "grid points for kernel and lkernel");
    app.add_option("--band_lo", c.band_lo);
    app.add_option("--band_hi", c.band_hi);
    app.add_option("--subtract_geometric", c.subtract_geometric);
    app.add_option("--tolerance", c.tolerance, "probe pass/fail tolerance on rel_mag_err");
    app.add_option("--excluded_guard", c.excluded_guard);
    app.add_option("--output", c.output, "output file (default stdout)");
    app.add_option("--format", c.format, "csv | json for tabular output");

    auto sub = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->fallthrough();
        return s;
    };
    auto* s_coeff = sub("coeff", "closed-form diffraction coefficient (JSON)");
    auto* s_kernel = sub("kernel", "windowed mode-sum kernel on a time grid (CSV: t, re, im, mode_tail, quad_err)");
    auto* s_probe = sub("probe", "extract the conormal amplitude near t = r1 + r2 (JSON)");
    auto* s_verify = sub("verify", "run the acceptance suite (JSON)");
    std::string suite = "fast";
    s_verify->add_option("--suite", suite, "fast | full");
    auto* s_bessel = sub("bessel", "point evaluation of J_nu(x) or K_nu(z) (JSON)");
    std::string kind = "j";
    double nu = 0.0, x = 1.0, x_im = 0.0;
    s_bessel->add_option("--kind", kind)->check(CLI::IsMember({"j", "k"}));
    s_bessel->add_option("--nu", nu)->required();
    s_bessel->add_option("--x", x)->required();
    s_bessel->add_option("--x_im", x_im, "imaginary part of the K argument");
    auto* s_pairing = sub("pairing", "commutator pairing by contour and area quadrature (JSON)");
    std::string method = "both";
    double epsilon = 1e-3, r_on = 0.5, r_off = 1.0;
    int n_quad = 64;
    s_pairing->add_option("--method", method)->check(CLI::IsMember({"contour", "area", "both"}));
    s_pairing->add_option("--epsilon", epsilon);
    s_pairing->add_option("--n_quad", n_quad);
    s_pairing->add_option("--r_on", r_on);
    s_pairing->add_option("--r_off", r_off);
    auto* s_lkernel = sub("lkernel", "propagated boundary-functional kernels at r = r1 (CSV: t, value, error)");
    int jj = -1, pairs = 3;
    std::string rep = "exact";
    s_lkernel->add_option("--j", jj)->check(CLI::IsMember({-1, 0}));
    s_lkernel->add_option("--pairs", pairs, "P/Q truncation in order pairs (conormal)");
    s_lkernel->add_option("--rep", rep)->check(CLI::IsMember({"exact", "conormal"}));
    auto* s_abel = sub("abel", "Abel-weighted diffraction series against its closed form (CSV)");
    double eps = 1.0 - 1e-4;
    long terms = 1000000;
    s_abel->add_option("--eps", eps);
    s_abel->add_option("--terms", terms);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return exit_ok;
        }
        err << "error: " << e.what() << "\n";
        return exit_config;
    }

    try {
        if (o_dt->count() > 0) {  // from the command line or the config file
            c.theta1 = 0.5 * dtheta;
            c.theta2 = -0.5 * dtheta;
        }
        c.validate();
        if (s_pairing->parsed() && !(epsilon > 0.0 && n_quad >= 8 && 0.0 < r_on && r_on < r_off))
            throw ConfigError("invalid configuration: pairing needs epsilon > 0, n_quad >= 8, 0 < r_on < r_off");
        if (s_abel->parsed() && !(eps > 0.0 && eps <= 1.0 && terms > 0))
            throw ConfigError("invalid configuration: abel needs 0 < eps <= 1 and terms > 0");
        if (s_lkernel->parsed() && pairs < 0) throw ConfigError("invalid configuration: pairs must be >= 0");

        std::ofstream file;
        if (!c.output.empty()) {
            file.open(c.output);
            if (!file) throw ConfigError("cannot open output file " + c.output);
        }
        std::ostream& sink = c.output.empty() ? out : file;

        if (s_coeff->parsed()) return cmd_coeff(c, sink);
        if (s_kernel->parsed()) return cmd_kernel(c, sink);
        if (s_probe->parsed()) return cmd_probe(c, sink);
        if (s_verify->parsed()) return cmd_verify(suite, sink);
        if (s_bessel->parsed()) return cmd_bessel(kind, nu, x, x_im, sink);
        if (s_pairing->parsed()) return cmd_pairing(c, method, epsilon, n_quad, r_on, r_off, sink);
        if (s_lkernel->parsed()) return cmd_lkernel(c, jj, pairs, rep, sink);
        if (s_abel->parsed()) return cmd_abel(c, eps, terms, sink);
        return exit_config;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return exit_domain;
    } catch (const AccuracyError& e) {
        err << "error: " << e.what() << " (best estimate " << num(e.best_estimate()) << ", error bound "
            << num(e.error_bound()) << ")\n";
        return exit_accuracy;
    }
}

}  // namespace abwave::cli
