#pragma once

#include "abwave/quadrature.hpp"
#include "abwave/types.hpp"
#include "abwave/window.hpp"

#include <span>
#include <vector>

namespace abwave {

// The mode sum sum_k e^{ik dtheta} int sin(t l) J J dl equals this factor times the
// physical sine-propagator kernel (whose free-space limit is free_kernel_closed).
inline constexpr double mode_sum_scale = two_pi;

struct ModeSpec {
    int k_max = 1;
    double tail_tol = 1e-10;

    static ModeSpec make(int k_max, double tail_tol);
};

struct KernelSample {
    double t = 0.0;
    cplx value;
    double est_mode_tail = 0.0;
    double est_quad_err = 0.0;
};

BesselOrder mode_order(int k, const Flux& alpha);

// int_0^inf g(l) sin(t l) J_nu(l r1) J_nu(l r2) dl by adaptive quadrature.
QuadResult<double> per_mode_windowed_integral_detailed(BesselOrder nu, double r1, double r2, double t,
                                                       const FrequencyWindow& g,
                                                       const AccuracyBudget& budget = {});
double per_mode_windowed_integral(BesselOrder nu, double r1, double r2, double t, const FrequencyWindow& g,
                                  const AccuracyBudget& budget = {});

// Envelope bound on sum_{|k| > k_max} sup_{l <= upper} |J_{nu_k}(l r1) J_{nu_k}(l r2)| * int g,
// using |J_nu(x)| <= min(1, (x/2)^nu / Gamma(nu+1)) and nu_k >= |k| - 1.
double mode_tail_bound(const FrequencyWindow& g, double r1, double r2, int k_max);

// Smallest k_max whose envelope tail is below tail_tol (1 if tail_tol is infinite).
ModeSpec mode_truncation_bound(const FrequencyWindow& g, double r1, double r2, double tail_tol);

enum class KernelPart {
    full,
    // full kernel minus e^{-i alpha dtheta} times the free spectral density (geometric front removed)
    diffractive,
};

// Windowed mode-sum kernel at fixed (alpha, r1, r2, dtheta), many times.
// The per-node spectral sums S(l) = sum_k e^{ik dtheta} J_{|k+alpha|}(l r1) J_{|k+alpha|}(l r2)
// are built once; each time sample is then a weighted sine transform.
// alpha may be any real number here (gauge and reflection identities); physical code passes a Flux.
class ModeSumKernel {
public:
    ModeSumKernel(double alpha, double r1, double r2, double dtheta, const FrequencyWindow& g,
                  const ModeSpec& modes, double t_max, KernelPart part = KernelPart::full);

    KernelSample operator()(double t) const;
    std::vector<KernelSample> sample(std::span<const double> times) const;

    double mode_tail() const { return tail_; }
    int k_max() const { return k_max_; }

private:
    struct Rule {
        std::vector<double> lambda;
        std::vector<double> weight;  // quadrature weight * g(lambda)
        std::vector<cplx> spectral;
    };
    void fill(Rule& rule, double width) const;
    cplx apply(const Rule& rule, double t) const;

    double alpha_, r1_, r2_, dtheta_;
    FrequencyWindow g_;
    int k_max_;
    double tail_;
    double t_max_;
    KernelPart part_;
    Rule fine_, coarse_;
};

// Windowed kernel at one query. Throws TailOverflowError if k_max cannot meet tail_tol.
KernelSample windowed_kernel(const SpacetimeQuery& query, const Flux& alpha, const FrequencyWindow& g,
                             const ModeSpec& modes, const AccuracyBudget& budget = {});

// Same, unrestricted flux (for the gauge-shift and reflection identities).
KernelSample windowed_kernel_any_flux(const SpacetimeQuery& query, double alpha, const FrequencyWindow& g,
                                      const ModeSpec& modes);

// Free 2-D sine kernel: 0 for t < rho, 1/(2 pi sqrt(t^2 - rho^2)) for t > rho.
double free_kernel_closed(double t, double rho);

// Free kernel with the window inserted in frequency, by time-domain convolution of
// free_kernel_closed (extended oddly in t) with the window profile G.
double windowed_free_kernel(double t, double rho, const FrequencyWindow& g);

// The same quantity through (1/2pi) int g(l) sin(t l) J_0(l rho) dl.
double windowed_free_kernel_spectral(double t, double rho, const FrequencyWindow& g);

// -i sum_{|k| <= k_max} e^{-i pi |k+alpha|} e^{ik dtheta} eps^{|k|}.
cplx abel_diffraction_series(const Flux& alpha, double dtheta, double eps, long k_max);

// Closed form of the eps-weighted series (k_max -> infinity) at fixed eps < 1.
cplx abel_series_closed(const Flux& alpha, double dtheta, double eps);

// -sin(pi alpha) e^{-i dtheta/2} / cos(dtheta/2).
cplx diffraction_series_closed(const Flux& alpha, double dtheta);

}  // namespace abwave
