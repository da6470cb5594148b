#include "abwave/oracles.hpp"

#include "abwave/errors.hpp"
#include "abwave/quadrature.hpp"
#include "abwave/special_fn.hpp"

#include <cmath>

namespace abwave::oracle {

namespace {
const AccuracyBudget tight{5e-16, 1e-14, 4000000};
}

double bessel_j_integral(double nu, double x) {
    auto osc = [nu, x](double tau) { return std::cos(nu * tau - x * std::sin(tau)); };
    // split [0, pi] so each piece holds a bounded number of oscillations
    const int pieces = 1 + static_cast<int>((x + nu) / 4.0);
    double first = 0.0;
    for (int p = 0; p < pieces; ++p) {
        const double a = pi * p / pieces, b = pi * (p + 1) / pieces;
        first += integrate_adaptive(osc, a, b, tight).value;
    }
    first /= pi;
    const double s = sinpi(nu);
    if (s == 0.0) return first;
    // tail cut where nu*tau + x*sinh(tau) exceeds 42
    double upper = 0.0;
    while (nu * upper + x * std::sinh(upper) < 42.0) upper += 0.25;
    auto decay = [nu, x](double tau) { return std::exp(-nu * tau - x * std::sinh(tau)); };
    const double second = integrate_adaptive(decay, 0.0, upper, tight).value;
    return first - s / pi * second;
}

cplx bessel_k_integral(double nu, cplx z) {
    if (!(z.real() > 0.0)) throw DomainError("oracle K needs Re z > 0");
    // t = 1 + u^2
    auto f = [nu, z](double u) {
        const double u2 = u * u;
        return 2.0 * std::pow(u, 2.0 * nu) * std::pow(2.0 + u2, nu - 0.5) * std::exp(-z * u2);
    };
    double upper = 1.0;
    while (z.real() * upper * upper - (2.0 * nu) * std::log(upper + 1.0) < 44.0) upper *= 1.25;
    auto r = integrate_adaptive(f, 0.0, upper, AccuracyBudget{1e-300, 1e-15, 4000000});
    return std::sqrt(pi) * std::pow(0.5 * z, nu) / gamma_real(nu + 0.5) * std::exp(-z) * r.value;
}

cplx bessel_k_series(double nu, cplx z) {
    const double s = sinpi(nu);
    if (s == 0.0) throw DomainError("series oracle needs non-integer order");
    auto i_series = [z](double order) {
        const cplx h = 0.5 * z;
        const cplx q = h * h;
        cplx term = std::pow(h, order) / gamma_real(order + 1.0);
        cplx sum = term;
        for (int k = 1; k < 400; ++k) {
            term *= q / (k * (order + k));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    };
    return 0.5 * pi * (i_series(-nu) - i_series(nu)) / s;
}

}  // namespace abwave::oracle
