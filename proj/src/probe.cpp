#include "abwave/probe.hpp"

#include "abwave/diffraction.hpp"
#include "abwave/errors.hpp"
#include "abwave/parallel.hpp"
#include "abwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace abwave {

namespace {

constexpr int band_samples = 41;

// The 1/l^2 term may not outweigh the 1/l term anywhere in the band.
constexpr double max_subleading_ratio = 0.5;

std::vector<double> offsets(const std::vector<double>& t, double t0) {
    std::vector<double> tau(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) tau[i] = t[i] - t0;
    return tau;
}

}  // namespace

TimeGrid TimeGrid::make(double t0, double half_width, double lambda_hi) {
    if (!(half_width > 0.0) || !(lambda_hi > 0.0) || !std::isfinite(t0))
        throw DomainError("time grid needs half_width > 0 and lambda_hi > 0");
    TimeGrid g;
    g.t0 = t0;
    g.half_width = half_width;
    g.step = (two_pi / lambda_hi) / 8.0;
    g.taper = PlateauTaper{half_width, 0.6};
    return g;
}

std::size_t TimeGrid::size() const { return 2 * static_cast<std::size_t>(std::floor(half_width / step)) + 1; }

std::vector<double> TimeGrid::times() const {
    const long m = static_cast<long>(std::floor(half_width / step));
    std::vector<double> t;
    t.reserve(size());
    for (long i = -m; i <= m; ++i) t.push_back(t0 + i * step);
    return t;
}

std::vector<KernelSample> kernel_time_series(const PolarPoint& q1, const PolarPoint& q2, const Flux& alpha,
                                             const FrequencyWindow& g, const ModeSpec& modes, const TimeGrid& grid,
                                             KernelPart part) {
    const auto t = grid.times();
    double t_max = 0.0;
    for (double v : t) t_max = std::max(t_max, std::abs(v));
    const ModeSumKernel kernel(alpha.value(), q1.r, q2.r, reduce_angle(q1.theta - q2.theta), g, modes, t_max, part);
    return kernel.sample(t);
}

ConormalAmplitude extract_conormal_amplitude(std::span<const KernelSample> series, const TimeGrid& grid,
                                             const FrequencyWindow& g, double band_lo, double band_hi,
                                             double max_residual) {
    g.require_band(band_lo, band_hi);
    if (band_hi > (two_pi / grid.step) / 8.0 * (1.0 + 1e-12))
        throw ConfigurationError("time grid does not resolve the upper band edge");
    const auto t = grid.times();
    if (series.size() != t.size()) throw DomainError("series does not match the time grid");
    std::vector<cplx> f(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) f[i] = series[i].value;
    const auto tau = offsets(t, grid.t0);
    const auto band = band_points(band_lo, band_hi, band_samples);
    std::vector<cplx> a(band.size());
    const double w0 = grid.taper(0.0);
    for (std::size_t i = 0; i < band.size(); ++i)
        a[i] = band[i] * tapered_transform(tau, f, grid.taper, grid.step, band[i]) / (g(band[i]) * w0);
    const auto fit = fit_symbol(band, a);

    ConormalAmplitude out;
    out.a0 = fit.c0;
    out.a1 = fit.c1;
    out.band_lo = band_lo;
    out.band_hi = band_hi;
    out.residual = fit.residual;
    if (fit.residual > max_residual) {
        std::ostringstream msg;
        msg << "symbol fit residual " << fit.residual << " exceeds " << max_residual;
        throw FitError(msg.str(), std::abs(fit.c0), fit.residual);
    }
    if (std::abs(fit.c1) > max_subleading_ratio * band_lo * std::abs(fit.c0)) {
        std::ostringstream msg;
        msg << "fitted 1/lambda^2 term dominates at the band edge (|a1| = " << std::abs(fit.c1)
            << ", |a0| = " << std::abs(fit.c0) << "): input is not a 1/lambda symbol";
        throw FitError(msg.str(), std::abs(fit.c0), fit.residual);
    }
    return out;
}

std::vector<KernelSample> manufactured_series(const TimeGrid& grid, const FrequencyWindow& g,
                                              const std::function<cplx(double)>& symbol) {
    const auto t = grid.times();
    std::vector<KernelSample> out(t.size());
    // Symbols like c/l are singular at 0; below a tenth of the centre g is far under 1e-13 of its peak
    // for the windows the probe accepts.
    const double lo = std::max(g.lower(), 0.1 * g.center());
    // Far from t0 the result is pure cancellation, so the floor scales with the integrand.
    const double floor = 1e-14 * g.mass() * std::abs(symbol(g.center()));
    parallel_for(t.size(), [&](std::size_t i) {
        const double tau = t[i] - grid.t0;
        auto f = [&](double l) { return g(l) * std::polar(1.0, l * tau) * symbol(l); };
        const auto q = integrate_adaptive(f, lo, g.upper(), AccuracyBudget{floor, 1e-12, 2000000});
        out[i] = KernelSample{t[i], q.value / two_pi, 0.0, q.error / two_pi};
    });
    return out;
}

double manufactured_gate(const FrequencyWindow& g, double band_lo, double band_hi, double tolerance,
                         double half_width) {
    const cplx planted(-0.37, 0.21);
    const auto grid = TimeGrid::make(0.0, half_width, band_hi);
    const auto series = manufactured_series(grid, g, [&](double l) { return planted / l; });
    const auto est = extract_conormal_amplitude(series, grid, g, band_lo, band_hi);
    const double err = std::abs(est.a0 - planted) / std::abs(planted);
    if (err > tolerance) {
        std::ostringstream msg;
        msg << "manufactured-solution gate failed: relative error " << err;
        throw AccuracyError(msg.str(), std::abs(est.a0), err);
    }
    return err;
}

ProbeReport compare_to_theory(const ConormalAmplitude& estimate, const Flux& alpha, const PolarPoint& q1,
                              const PolarPoint& q2) {
    ProbeReport r;
    r.estimate = estimate;
    r.theory = diffraction_coefficient(alpha, q1, q2);
    r.rel_mag_err = std::abs(std::abs(estimate.a0) - std::abs(r.theory)) / std::abs(r.theory);
    r.phase_err = std::arg(estimate.a0 / r.theory);
    return r;
}

double probe_front_guard(const FrequencyWindow& g) { return 8.0 / g.halfwidth(); }

ProbeReport run_probe(const ProbeConfig& c) {
    const Flux alpha(c.alpha);
    const auto g = FrequencyWindow::gaussian(c.lambda_center, c.lambda_halfwidth);
    g.require_band(c.band_lo, c.band_hi);
    normalize_configuration(c.q1, c.q2);
    const double R = c.q1.r + c.q2.r;
    const double rho = separation(c.q1, c.q2);
    // Without subtraction the taper must keep the geometric front out of the grid.
    const double guard = probe_front_guard(g);
    if (!c.subtract_geometric && R - rho < guard) {
        std::ostringstream msg;
        msg << "fronts too close: r1 + r2 - |q1 - q2| = " << R - rho << " < " << guard;
        throw ConfigurationError(msg.str());
    }
    // Auto width: wide enough for the front profile, clear of the origin and (unsubtracted) of rho.
    double half_width = c.half_width;
    if (half_width <= 0.0) {
        const double limit = c.subtract_geometric ? 0.9 * R : R - rho - 4.0 / g.halfwidth();
        half_width = std::min(std::max(1.2, 8.0 / g.halfwidth()), limit);
    }
    if (half_width >= R) throw ConfigurationError("probe half-width must be below r1 + r2");

    const double gate = manufactured_gate(g, c.band_lo, c.band_hi, 0.01, half_width);

    const ModeSpec modes =
        c.k_max > 0 ? ModeSpec::make(c.k_max, c.tail_tol) : mode_truncation_bound(g, c.q1.r, c.q2.r, c.tail_tol);
    const auto grid = TimeGrid::make(R, half_width, c.band_hi);
    const auto series = kernel_time_series(c.q1, c.q2, alpha, g, modes, grid,
                                           c.subtract_geometric ? KernelPart::diffractive : KernelPart::full);

    const double expected = std::abs(diffraction_coefficient(alpha, c.q1, c.q2)) * g.mass() / (two_pi * g.center());
    double tail = 0.0, quad = 0.0;
    for (const auto& s : series) {
        tail = std::max(tail, s.est_mode_tail);
        quad = std::max(quad, s.est_quad_err);
    }
    if (std::max(tail, quad) > 0.01 * expected) {
        std::ostringstream msg;
        msg << "kernel error estimates (tail " << tail << ", quadrature " << quad
            << ") exceed 1% of the expected signal " << expected;
        throw AccuracyError(msg.str(), 0.0, std::max(tail, quad));
    }

    auto report = compare_to_theory(extract_conormal_amplitude(series, grid, g, c.band_lo, c.band_hi,
                                                               c.max_fit_residual),
                                    alpha, c.q1, c.q2);
    report.gate_err = gate;
    report.mode_tail = tail;
    report.quad_err = quad;
    report.k_max = modes.k_max;
    report.window_center = c.lambda_center;
    report.window_halfwidth = c.lambda_halfwidth;
    return report;
}

GeometricFrontReport geometric_front_check(const Flux& alpha, const PolarPoint& q1, const PolarPoint& q2,
                                           const FrequencyWindow& g, double tail_tol) {
    const auto nc = normalize_configuration(q1, q2);
    const double R = q1.r + q2.r;
    const double rho = separation(q1, q2);
    const double sigma = g.halfwidth();
    if (R - rho < 8.0 / sigma) {
        std::ostringstream msg;
        msg << "fronts too close: r1 + r2 - |q1 - q2| = " << R - rho << " < " << 8.0 / sigma;
        throw ConfigurationError(msg.str());
    }
    const double hw = std::min(3.0 / sigma, 0.9 * rho);
    const auto grid = TimeGrid::make(rho, hw, g.upper());
    const auto modes = mode_truncation_bound(g, q1.r, q2.r, tail_tol);
    const auto series = kernel_time_series(nc.q1, nc.q2, alpha, g, modes, grid, KernelPart::full);

    const auto t = grid.times();
    std::vector<double> free(t.size());
    parallel_for(t.size(), [&](std::size_t i) { free[i] = mode_sum_scale * windowed_free_kernel(t[i], rho, g); });

    cplx num = 0.0;
    double den = 0.0, peak_e = 0.0, peak_f = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        num += series[i].value * free[i];
        den += free[i] * free[i];
        peak_e = std::max(peak_e, std::abs(series[i].value));
        peak_f = std::max(peak_f, std::abs(free[i]));
    }
    GeometricFrontReport r;
    r.factor = num / den;
    r.mag_err = std::abs(std::abs(r.factor) - 1.0);
    r.measured_phase = -std::arg(r.factor);
    r.expected_phase = reduce_angle(alpha.value() * reduce_angle(q1.theta - q2.theta));
    r.phase_err = std::abs(reduce_angle(r.measured_phase - r.expected_phase));
    r.peak_ratio = peak_e / peak_f;
    return r;
}

}  // namespace abwave
