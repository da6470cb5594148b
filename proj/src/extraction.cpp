#include "abwave/extraction.hpp"

#include "abwave/errors.hpp"

#include <cmath>

namespace abwave {

namespace {

// 1 - S9(s): S9 is the degree-9 smoothstep with four vanishing derivatives at 0 and 1.
double falloff(double s) {
    const double s5 = s * s * s * s * s;
    return 1.0 - s5 * (126.0 + s * (-420.0 + s * (540.0 + s * (-315.0 + s * 70.0))));
}

}  // namespace

double PlateauTaper::operator()(double tau) const {
    const double u = std::abs(tau) / half_width;
    if (u <= plateau) return 1.0;
    if (u >= 1.0) return 0.0;
    return falloff((u - plateau) / (1.0 - plateau));
}

double PlateauTaper::mass() const {
    // int_0^1 S9 = 1/2 by symmetry S9(s) + S9(1 - s) = 1
    return 2.0 * half_width * (plateau + 0.5 * (1.0 - plateau));
}

cplx tapered_transform(std::span<const double> tau, std::span<const cplx> f, const PlateauTaper& w, double dt,
                       double lambda) {
    cplx acc = 0.0;
    for (std::size_t m = 0; m < tau.size(); ++m) acc += w(tau[m]) * f[m] * std::polar(1.0, -lambda * tau[m]);
    return acc * dt;
}

SymbolFit fit_symbol(std::span<const double> lambda, std::span<const cplx> values) {
    if (lambda.size() != values.size() || lambda.size() < 3)
        throw DomainError("symbol fit needs at least three matching samples");
    // normal equations for the real design matrix [1, 1/lambda]
    double s00 = 0.0, s01 = 0.0, s11 = 0.0;
    cplx b0 = 0.0, b1 = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        const double x = 1.0 / lambda[i];
        s00 += 1.0;
        s01 += x;
        s11 += x * x;
        b0 += values[i];
        b1 += x * values[i];
    }
    const double det = s00 * s11 - s01 * s01;
    if (!(std::abs(det) > 1e-14 * s00 * s11)) throw FitError("symbol fit is singular", 0.0, 0.0);
    SymbolFit fit;
    fit.c0 = (s11 * b0 - s01 * b1) / det;
    fit.c1 = (s00 * b1 - s01 * b0) / det;
    double mis = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        mis += std::norm(values[i] - fit.c0 - fit.c1 / lambda[i]);
        norm += std::norm(values[i]);
    }
    fit.residual = norm > 0.0 ? std::sqrt(mis / norm) : 0.0;
    return fit;
}

std::vector<double> band_points(double lo, double hi, int n) {
    if (n < 2 || !(hi > lo)) throw DomainError("band needs lo < hi and at least two points");
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
    return out;
}

}  // namespace abwave
