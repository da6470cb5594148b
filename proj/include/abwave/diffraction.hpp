#pragma once

#include "abwave/quadrature.hpp"
#include "abwave/types.hpp"
#include "abwave/window.hpp"

#include <vector>

namespace abwave {

inline constexpr double default_excluded_guard = 0.2;

// Rotation placing the angle pair symmetrically about 0: theta1' = dtheta/2, theta2' = -dtheta/2.
struct NormalizedConfiguration {
    double rotation = 0.0;
    PolarPoint q1;
    PolarPoint q2;
    bool near_excluded = false;  // within the guard band of |dtheta| = pi
};

// Throws ExcludedDirectionError when |dtheta| = pi.
NormalizedConfiguration normalize_configuration(const PolarPoint& q1, const PolarPoint& q2,
                                                double guard = default_excluded_guard);

// Both points moved by s along +x (equivalently the solenoid moved to -s).
struct TranslationState {
    double s = 0.0;
    PolarPoint q1s;
    PolarPoint q2s;
    double dtheta_total = 0.0;  // (theta1(s) - theta1) - (theta2(s) - theta2)
    cplx phase{1.0, 0.0};       // e^{i alpha dtheta_total}
};

// Requires a normalized configuration (x1, x2 > 0).
TranslationState translate(const PolarPoint& q1, const PolarPoint& q2, double s, const Flux& alpha);

enum class LKernelRepresentation { conormal_symbol, exact_bessel_limit };

struct LKernelSpec {
    int j = -1;  // -1 or 0
    int N = 3;   // P/Q truncation in order pairs
    LKernelRepresentation representation = LKernelRepresentation::exact_bessel_limit;

    static LKernelSpec make(int j, int N, LKernelRepresentation rep);
};

struct LKernelValue {
    double value = 0.0;
    double error = 0.0;
    // The kernel carries e^{i angular_power theta}; propagating the functional instead conjugates it.
    int angular_power = 0;
};

// Radial part of the propagated boundary functional L_j, windowed by g.
// exact_bessel_limit: (1/(2^nu Gamma(nu+1))) int sin(l t) l^nu J_nu(l r) g(l) dl, nu = 1 - alpha (j = -1)
// or alpha (j = 0). conormal_symbol: twice the real part of l_kernel_positive_frequency, i.e. the
// same kernel with J_nu replaced by its N-pair Hankel expansion and the e^{il(t + r)} branch dropped.
LKernelValue l_kernel(const LKernelSpec& spec, double t, double r, const Flux& alpha, const FrequencyWindow& g,
                      const AccuracyBudget& budget = {});

// (1/(i 2^nu Gamma(nu+1) sqrt(8 pi r))) int e^{il(t-r)} e^{i(nu pi/2 + pi/4)} l^{nu-1/2} (P_N - iQ_N)(l r) g dl
cplx l_kernel_positive_frequency(int j, int N, double t, double r, const Flux& alpha, const FrequencyWindow& g,
                                 const AccuracyBudget& budget = {});

// Exact-bessel-limit kernel on many times from one set of spectral nodes.
class LKernelTable {
public:
    LKernelTable(int j, double r, const Flux& alpha, const FrequencyWindow& g, double t_max);
    double operator()(double t) const;

private:
    std::vector<double> lambda_;
    std::vector<double> weight_;
};

// (sin pi alpha / (4 pi sqrt(r1 r2))) (e^{-i theta1} + e^{i theta2})
cplx upsilon0_principal(const PolarPoint& q1, const PolarPoint& q2, const Flux& alpha);

// 2 alpha(1-alpha) int_0^t [l_-1(t-s, r1) l_0(s, r2) e^{-i theta1} + l_0(t-s, r1) l_-1(s, r2) e^{i theta2}] ds
// with windowed exact-bessel-limit kernels (so the result carries g^2), trapezoid rule in s.
cplx upsilon0_duhamel(double t, const PolarPoint& q1, const PolarPoint& q2, const Flux& alpha,
                      const FrequencyWindow& g, const AccuracyBudget& budget = {});

// The same on the grid t_m = m * step inside [t_lo, t_hi], reusing kernel tables.
struct TimeSeries {
    std::vector<double> t;
    std::vector<cplx> value;
};
TimeSeries upsilon0_duhamel_series(const PolarPoint& q1, const PolarPoint& q2, const Flux& alpha,
                                   const FrequencyWindow& g, double t_lo, double t_hi, double step);

// lambda^0 amplitude of upsilon0_duhamel near t = r1 + r2: tapered transform F(l), A(l) = F / (2 pi g(l)^2),
// fit A ~ c0 + c1/l over the band.
struct Upsilon0Amplitude {
    cplx amplitude;
    cplx principal;
    double rel_err = 0.0;
    double fit_residual = 0.0;
};
Upsilon0Amplitude upsilon0_amplitude(const PolarPoint& q1, const PolarPoint& q2, const Flux& alpha,
                                     const FrequencyWindow& g, double band_lo, double band_hi);

// Coefficient of 1/lambda: -(sin pi alpha / (2 sqrt(r1 r2))) (e^{-i theta1} + e^{i theta2}) / (cos theta1 + cos theta2),
// evaluated in the normalized configuration. Throws ExcludedDirectionError at |dtheta| = pi.
cplx diffraction_coefficient(const Flux& alpha, const PolarPoint& q1, const PolarPoint& q2);

// Assembled from the principal amplitude, the stationary-phase factor 2 pi / (r1'(0) + r2'(0)) and the
// overall minus sign of E_D = -int Upsilon_s ds. Throws AccuracyError if it disagrees with
// diffraction_coefficient beyond 1e-14.
cplx assemble_from_stationary_phase(const Flux& alpha, const PolarPoint& q1, const PolarPoint& q2);

}  // namespace abwave
