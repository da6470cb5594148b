#pragma once

#include "abwave/types.hpp"

#include <span>
#include <vector>

namespace abwave {

// 1 for |tau| <= plateau * H, then a degree-9 smoothstep down to 0 at |tau| = H
// (first four derivatives vanish at both joins).
struct PlateauTaper {
    double half_width = 1.2;
    double plateau = 0.6;

    double operator()(double tau) const;
    // int w(tau) dtau
    double mass() const;
};

// sum_m w(tau_m) f_m e^{-i lambda tau_m} dt
cplx tapered_transform(std::span<const double> tau, std::span<const cplx> f, const PlateauTaper& w, double dt,
                       double lambda);

// Least-squares fit v(lambda) ~ c0 + c1 / lambda. residual is the rms misfit relative to rms |v|.
struct SymbolFit {
    cplx c0;
    cplx c1;
    double residual = 0.0;
};
SymbolFit fit_symbol(std::span<const double> lambda, std::span<const cplx> values);

// n equally spaced points on [lo, hi].
std::vector<double> band_points(double lo, double hi, int n);

}  // namespace abwave
