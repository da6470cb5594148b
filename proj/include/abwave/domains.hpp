#pragma once

#include "abwave/types.hpp"

#include <functional>
#include <vector>

namespace abwave {

using PolarFunction = std::function<cplx(double r, double theta)>;
using RadialFunction = std::function<cplx(double r)>;

// rho(r) = 1 - S((r - r_on)/(r_off - r_on)), S(x) = 6x^5 - 15x^4 + 10x^3 clamped to [0,1].
struct CutoffProfile {
    double r_on = 0.5;
    double r_off = 1.0;

    static CutoffProfile make(double r_on, double r_off);
    double operator()(double r) const;
    double d1(double r) const;
    double d2(double r) const;
};

enum class DeficiencySign { plus, minus };

struct DeficiencyFrequency {
    DeficiencySign sign = DeficiencySign::plus;
    // beta_plus = e^{-i pi/4}, beta_minus = e^{+i pi/4}
    cplx beta() const;
};

struct BoundaryCoefficients {
    cplx c0;
    cplx c_minus1;
};

// u sampled on radii x uniform angles theta_j = 2 pi j / n_theta; values[ir * n_theta + j].
struct AnnulusSamples {
    std::vector<double> r;
    int n_theta = 0;
    std::vector<cplx> values;
};

AnnulusSamples sample_annulus(const PolarFunction& u, const std::vector<double>& radii, int n_theta);

struct RadialModeFunction {
    int k = 0;
    std::vector<double> r;
    std::vector<cplx> values;
    std::vector<double> magnitude;  // max |u| on each ring, sets the rounding floor; may be empty
};

// [Pi_j u](r) = (1/sqrt(2 pi)) int u(r, theta) e^{-i j theta} dtheta by the trapezoid rule.
// Needs n_theta >= 8 (|j| + 1), else AliasingError.
RadialModeFunction mode_project(const AnnulusSamples& u, int j);

// Radii r_n = 0.1 * 2^{-n}, n = 0..6, at which boundary_L expects its samples.
std::vector<double> boundary_radii();

struct BoundaryLimit {
    cplx value;
    double residual = 0.0;
};

// Richardson limit of (1/sqrt(2 pi)) r^{-p} [Pi_j u](r), p = alpha (j = 0) or 1 - alpha (j = -1).
// Throws DivergenceError when the scaled values do not settle.
BoundaryLimit boundary_L_detailed(int j, const RadialModeFunction& u_mode, const Flux& alpha);
cplx boundary_L(int j, const RadialModeFunction& u_mode, const Flux& alpha);

// Both functionals of a function given on the plane (samples at boundary_radii, n_theta angles).
BoundaryCoefficients boundary_coefficients(const PolarFunction& u, const Flux& alpha, int n_theta = 64);

// u(r, theta) = K_nu(beta r) e^{ik theta}, nu = alpha (k = 0) or 1 - alpha (k = -1).
PolarFunction deficiency_solution(const Flux& alpha, DeficiencyFrequency freq, int k);
RadialFunction deficiency_radial(const Flux& alpha, DeficiencyFrequency freq, int k);

// -u'' - u'/r + ((k + alpha)^2 / r^2) u + beta^2 u by central differences with step h.
cplx ode_residual(const Flux& alpha, int k, cplx beta, const RadialFunction& u_mode, double r, double h = 1e-3);

// int_eps^R |K_nu(beta r)|^2 r dr with R large enough that the remainder is below 1e-30.
double deficiency_partial_norm(double nu, cplx beta, double eps);

struct L2Classification {
    bool integrable = false;
    double growth_exponent = 0.0;  // partial integral ~ eps^{-growth_exponent} when divergent
};

// Decides square-integrability near r = 0 from partial integrals at eps = 1e-2 .. 1e-6.
L2Classification classify_l2(double nu, cplx beta);

// (2/i) contour integral over |z| = eps of d_zbar(zbar^alpha) d_zbar(zbar^{1-alpha}) dzbar.
cplx commutator_pairing_contour(const Flux& alpha, double epsilon, int n_quad);

struct AreaPairing {
    cplx value;
    cplx coarse_value;
    double convergence_gap = 0.0;  // |value - coarse_value|
};

// -int (Lap(vb0) d_zbar(v_-1) + d_zbar(vb0) Lap(v_-1)) dx dy with vb0 = zbar^alpha rho,
// v_-1 = zbar^{1-alpha} rho and Lap = -(d_x^2 + d_y^2). The integrand vanishes where rho is constant, so only the annulus
// [r_on, r_off] contributes. Evaluated on a Gauss(r) x trapezoid(theta) grid at n_r and n_r/2.
AreaPairing commutator_pairing_area(const Flux& alpha, const CutoffProfile& cutoff, int n_r = 64,
                                    int n_theta = 64, double tol = 1e-6);

}  // namespace abwave
