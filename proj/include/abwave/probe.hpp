#pragma once

#include "abwave/extraction.hpp"
#include "abwave/mode_sum.hpp"
#include "abwave/types.hpp"
#include "abwave/window.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace abwave {

// Samples t0 + m * step, |m step| <= half_width, with step = (2 pi / lambda_hi) / 8.
struct TimeGrid {
    double t0 = 0.0;
    double half_width = 1.2;
    double step = 0.0;
    PlateauTaper taper;

    static TimeGrid make(double t0, double half_width, double lambda_hi);
    std::vector<double> times() const;
    std::size_t size() const;
};

struct ConormalAmplitude {
    cplx a0;  // coefficient of 1/lambda
    cplx a1;  // coefficient of 1/lambda^2, absorbs the next symbol order
    double band_lo = 0.0;
    double band_hi = 0.0;
    double residual = 0.0;
    std::string method = "tapered-transform-lsq";
};

// Windowed mode-sum kernel on the grid, in the mode-sum normalization (2 pi times the physical kernel).
std::vector<KernelSample> kernel_time_series(const PolarPoint& q1, const PolarPoint& q2, const Flux& alpha,
                                             const FrequencyWindow& g, const ModeSpec& modes, const TimeGrid& grid,
                                             KernelPart part = KernelPart::full);

inline constexpr double default_max_fit_residual = 0.05;

// F(l) = sum w(t - t0) E(t) e^{-il(t - t0)} dt, a(l) = l F(l) / (g(l) w(0)), a ~ a0 + a1/l by least squares
// on 41 band points. Throws FitError when the relative misfit exceeds max_residual or when the 1/l^2 term
// dominates at the lower band edge (wrong symbol order), ConfigurationError for an invalid band.
ConormalAmplitude extract_conormal_amplitude(std::span<const KernelSample> series, const TimeGrid& grid,
                                             const FrequencyWindow& g, double band_lo, double band_hi,
                                             double max_residual = default_max_fit_residual);

// int g(l) e^{il(t - t0)} s(l) dl / (2 pi) by adaptive quadrature, for planted symbols s.
std::vector<KernelSample> manufactured_series(const TimeGrid& grid, const FrequencyWindow& g,
                                              const std::function<cplx(double)>& symbol);

// Plants a(l) = c / l, recovers it on a grid of the given half-width; returns |c_hat - c| / |c|.
// Throws AccuracyError above tolerance.
double manufactured_gate(const FrequencyWindow& g, double band_lo, double band_hi, double tolerance = 0.01,
                         double half_width = 1.2);

struct ProbeReport {
    ConormalAmplitude estimate;
    cplx theory;
    double rel_mag_err = 0.0;
    double phase_err = 0.0;  // arg(a_hat / a0), reported only
    double gate_err = 0.0;
    double mode_tail = 0.0;
    double quad_err = 0.0;
    int k_max = 0;
    double window_center = 0.0;
    double window_halfwidth = 0.0;
};

ProbeReport compare_to_theory(const ConormalAmplitude& estimate, const Flux& alpha, const PolarPoint& q1,
                              const PolarPoint& q2);

struct ProbeConfig {
    double alpha = 0.5;
    PolarPoint q1{1.0, pi / 6};
    PolarPoint q2{1.0, -pi / 6};
    double lambda_center = 30.0;
    double lambda_halfwidth = 5.0;
    double band_lo = 20.0;
    double band_hi = 40.0;
    double half_width = 0.0;  // 0: max(1.2, 8 / sigma), kept clear of the origin and the geometric front
    int k_max = 0;  // 0: choose from tail_tol
    double tail_tol = 1e-10;
    double max_fit_residual = default_max_fit_residual;
    // Remove e^{-i alpha dtheta} J_0(l |q1 - q2|) from the spectral density before sampling. The geometric
    // front is then absent and the separation guard is not needed.
    bool subtract_geometric = true;
};

// Front separation 8 / sigma required when the geometric wave is left in.
double probe_front_guard(const FrequencyWindow& g);

// Full pipeline: guard and band checks, manufactured gate, kernel series near t = r1 + r2,
// mode-tail and quadrature gating at 1% of the expected signal, extraction and comparison.
ProbeReport run_probe(const ProbeConfig& config);

struct GeometricFrontReport {
    cplx factor;  // least-squares z with E ~ z * 2 pi * (windowed free kernel)
    double mag_err = 0.0;
    double measured_phase = 0.0;  // -arg z
    double expected_phase = 0.0;  // alpha (theta1 - theta2), reduced
    double phase_err = 0.0;
    double peak_ratio = 0.0;  // max |E| / max |2 pi free| on the grid
};

// Compares the kernel near t = |q1 - q2| with e^{-i alpha dtheta} times the windowed free kernel.
// Throws ConfigurationError when |r1 + r2 - |q1 - q2|| < 8 / sigma.
GeometricFrontReport geometric_front_check(const Flux& alpha, const PolarPoint& q1, const PolarPoint& q2,
                                           const FrequencyWindow& g, double tail_tol = 1e-10);

}  // namespace abwave
