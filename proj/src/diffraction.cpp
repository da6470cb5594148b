#include "abwave/diffraction.hpp"

#include "abwave/errors.hpp"
#include "abwave/extraction.hpp"
#include "abwave/parallel.hpp"
#include "abwave/special_fn.hpp"

#include <algorithm>
#include <cmath>

namespace abwave {

namespace {

double l_order(int j, const Flux& alpha) {
    if (j == -1) return 1.0 - alpha.value();
    if (j == 0) return alpha.value();
    throw DomainError("l-kernels exist for j = -1 and j = 0 only");
}

// 1 / (2^nu Gamma(nu + 1)), the small-argument constant of J_nu
double l_constant(double nu) { return 1.0 / (std::pow(2.0, nu) * gamma_real(nu + 1.0)); }

void require_positive(double t, double r) {
    if (!(t > 0.0) || !(r > 0.0) || !std::isfinite(t) || !std::isfinite(r))
        throw DomainError("l-kernels need t > 0 and r > 0");
}

// Sampling step resolving every frequency the window lets through.
double duhamel_step(const FrequencyWindow& g) { return (two_pi / g.upper()) / 8.0; }

}  // namespace

NormalizedConfiguration normalize_configuration(const PolarPoint& q1, const PolarPoint& q2, double guard) {
    if (!(q1.r > 0.0) || !(q2.r > 0.0)) throw DomainError("points must differ from the origin");
    const double d = reduce_angle(q1.theta - q2.theta);
    if (pi - std::abs(d) <= 1e-12)
        throw ExcludedDirectionError("|theta1 - theta2| = pi lies in the excluded set");
    NormalizedConfiguration c;
    c.rotation = reduce_angle(-(q2.theta + 0.5 * d));
    c.q1 = PolarPoint{q1.r, 0.5 * d};
    c.q2 = PolarPoint{q2.r, -0.5 * d};
    c.near_excluded = pi - std::abs(d) < guard;
    return c;
}

TranslationState translate(const PolarPoint& q1, const PolarPoint& q2, double s, const Flux& alpha) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("translation parameter must be >= 0");
    auto moved = [s](const PolarPoint& q, double& shift) {
        const double x = q.x(), y = q.y();
        if (y == 0.0 && x <= 0.0) throw DomainError("translation ray meets the point");
        const double th = std::atan2(y, x + s);
        shift = th - std::atan2(y, x);
        return PolarPoint{std::hypot(x + s, y), th};
    };
    TranslationState st;
    st.s = s;
    double d1 = 0.0, d2 = 0.0;
    st.q1s = moved(q1, d1);
    st.q2s = moved(q2, d2);
    st.dtheta_total = d1 - d2;
    st.phase = std::polar(1.0, alpha.value() * st.dtheta_total);
    return st;
}

LKernelSpec LKernelSpec::make(int j, int N, LKernelRepresentation rep) {
    if (j != 0 && j != -1) throw DomainError("l-kernels exist for j = -1 and j = 0 only");
    if (N < 0) throw DomainError("P/Q truncation depth must be >= 0");
    return LKernelSpec{j, N, rep};
}

cplx l_kernel_positive_frequency(int j, int N, double t, double r, const Flux& alpha, const FrequencyWindow& g,
                                 const AccuracyBudget& budget) {
    require_positive(t, r);
    if (N < 0) throw DomainError("P/Q truncation depth must be >= 0");
    const double nu = l_order(j, alpha);
    const cplx pre = l_constant(nu) / (cplx(0.0, 1.0) * std::sqrt(8.0 * pi * r)) *
                     std::polar(1.0, 0.5 * pi * nu + 0.25 * pi);
    // The Hankel expansion is meaningless at small l r; the window makes that range negligible.
    const double lo = std::max(g.lower(), (2.0 + N) / r);
    const double hi = g.upper();
    if (!(hi > lo)) return 0.0;
    auto f = [&](double l) {
        const PQ pq = pq_partial_sums(nu, l * r, N);
        return std::polar(g(l) * std::pow(l, nu - 0.5), l * (t - r)) * cplx(pq.p, -pq.q);
    };
    return pre * integrate_adaptive(f, lo, hi, budget).value;
}

LKernelValue l_kernel(const LKernelSpec& spec, double t, double r, const Flux& alpha, const FrequencyWindow& g,
                      const AccuracyBudget& budget) {
    require_positive(t, r);
    const double nu = l_order(spec.j, alpha);
    LKernelValue out;
    out.angular_power = spec.j == -1 ? 1 : 0;
    if (spec.representation == LKernelRepresentation::conormal_symbol) {
        out.value = 2.0 * l_kernel_positive_frequency(spec.j, spec.N, t, r, alpha, g, budget).real();
        return out;
    }
    const double c = l_constant(nu);
    auto f = [&](double l) { return g(l) * std::sin(l * t) * std::pow(l, nu) * bessel_j(nu, l * r); };
    const auto q = integrate_adaptive(f, g.lower(), g.upper(), budget);
    out.value = c * q.value;
    out.error = c * q.error;
    return out;
}

LKernelTable::LKernelTable(int j, double r, const Flux& alpha, const FrequencyWindow& g, double t_max) {
    if (!(r > 0.0) || !(t_max >= 0.0)) throw DomainError("l-kernel table needs r > 0 and t_max >= 0");
    const double nu = l_order(j, alpha);
    const double width = std::min(g.halfwidth(), pi / (t_max + r));
    const auto rule = composite_gauss_legendre(g.lower(), g.upper(), width);
    const double c = l_constant(nu);
    lambda_ = rule.nodes;
    weight_.resize(lambda_.size());
    parallel_for(lambda_.size(), [&](std::size_t i) {
        const double l = lambda_[i];
        weight_[i] = l > 0.0 ? c * rule.weights[i] * g(l) * std::pow(l, nu) * bessel_j(nu, l * r) : 0.0;
    });
}

double LKernelTable::operator()(double t) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < lambda_.size(); ++i) acc += weight_[i] * std::sin(lambda_[i] * t);
    return acc;
}

cplx upsilon0_principal(const PolarPoint& q1, const PolarPoint& q2, const Flux& alpha) {
    return sinpi(alpha.value()) / (4.0 * pi * std::sqrt(q1.r * q2.r)) *
           (std::polar(1.0, -q1.theta) + std::polar(1.0, q2.theta));
}

cplx upsilon0_duhamel(double t, const PolarPoint& q1, const PolarPoint& q2, const Flux& alpha,
                      const FrequencyWindow& g, const AccuracyBudget&) {
    if (!(t > 0.0)) throw DomainError("upsilon0_duhamel needs t > 0");
    const double a = alpha.value();
    const int n = std::max(2, static_cast<int>(std::ceil(t / duhamel_step(g))));
    const double h = t / n;
    const LKernelTable m1_r1(-1, q1.r, alpha, g, t), z_r1(0, q1.r, alpha, g, t);
    const LKernelTable m1_r2(-1, q2.r, alpha, g, t), z_r2(0, q2.r, alpha, g, t);
    const cplx e1 = std::polar(1.0, -q1.theta), e2 = std::polar(1.0, q2.theta);
    std::vector<cplx> terms(n + 1);
    parallel_for(n + 1, [&](std::size_t k) {
        const double s = h * static_cast<double>(k);
        const double u = t - s;
        const double wk = (k == 0 || static_cast<int>(k) == n) ? 0.5 : 1.0;
        terms[k] = wk * (m1_r1(u) * z_r2(s) * e1 + z_r1(u) * m1_r2(s) * e2);
    });
    cplx acc = 0.0;
    for (const auto& v : terms) acc += v;
    return 2.0 * a * (1.0 - a) * h * acc;
}

TimeSeries upsilon0_duhamel_series(const PolarPoint& q1, const PolarPoint& q2, const Flux& alpha,
                                   const FrequencyWindow& g, double t_lo, double t_hi, double step) {
    if (!(step > 0.0) || !(t_hi > t_lo) || !(t_lo >= 0.0)) throw DomainError("bad Duhamel time range");
    const double a = alpha.value();
    const long m_lo = static_cast<long>(std::ceil(t_lo / step));
    const long m_hi = static_cast<long>(std::floor(t_hi / step));
    if (m_hi < m_lo) throw DomainError("Duhamel time range holds no grid point");
    const double t_max = m_hi * step;
    const LKernelTable m1_r1(-1, q1.r, alpha, g, t_max), z_r1(0, q1.r, alpha, g, t_max);
    const LKernelTable m1_r2(-1, q2.r, alpha, g, t_max), z_r2(0, q2.r, alpha, g, t_max);

    // Every s_k and t_m - s_k lies on the same grid, so four tables of samples suffice.
    const std::size_t M = static_cast<std::size_t>(m_hi) + 1;
    std::vector<double> A(M), B(M), C(M), D(M);
    parallel_for(M, [&](std::size_t k) {
        const double s = step * static_cast<double>(k);
        A[k] = m1_r1(s);
        B[k] = z_r2(s);
        C[k] = z_r1(s);
        D[k] = m1_r2(s);
    });
    const cplx e1 = std::polar(1.0, -q1.theta), e2 = std::polar(1.0, q2.theta);
    TimeSeries out;
    for (long m = m_lo; m <= m_hi; ++m) {
        // the kernels vanish at zero time, so the trapezoid end corrections drop out
        double sa = 0.0, sb = 0.0;
        for (long k = 0; k <= m; ++k) {
            sa += A[m - k] * B[k];
            sb += C[m - k] * D[k];
        }
        out.t.push_back(m * step);
        out.value.push_back(2.0 * a * (1.0 - a) * step * (sa * e1 + sb * e2));
    }
    return out;
}

Upsilon0Amplitude upsilon0_amplitude(const PolarPoint& q1, const PolarPoint& q2, const Flux& alpha,
                                     const FrequencyWindow& g, double band_lo, double band_hi) {
    g.require_band(band_lo, band_hi);
    const double R = q1.r + q2.r;
    const PlateauTaper taper{std::min(1.2, 0.9 * R), 0.6};
    const double step = (two_pi / band_hi) / 8.0;
    const auto series = upsilon0_duhamel_series(q1, q2, alpha, g, R - taper.half_width, R + taper.half_width, step);
    std::vector<double> tau(series.t.size());
    for (std::size_t m = 0; m < tau.size(); ++m) tau[m] = series.t[m] - R;
    const auto band = band_points(band_lo, band_hi, 41);
    std::vector<cplx> A(band.size());
    for (std::size_t i = 0; i < band.size(); ++i) {
        const double gl = g(band[i]);
        A[i] = tapered_transform(tau, series.value, taper, step, band[i]) / (two_pi * gl * gl);
    }
    const auto fit = fit_symbol(band, A);
    Upsilon0Amplitude out;
    out.amplitude = fit.c0;
    out.principal = upsilon0_principal(q1, q2, alpha);
    out.rel_err = std::abs(out.amplitude - out.principal) / std::abs(out.principal);
    out.fit_residual = fit.residual;
    return out;
}

cplx diffraction_coefficient(const Flux& alpha, const PolarPoint& q1, const PolarPoint& q2) {
    const auto c = normalize_configuration(q1, q2);
    const double t1 = c.q1.theta, t2 = c.q2.theta;
    return -sinpi(alpha.value()) / (2.0 * std::sqrt(q1.r * q2.r)) *
           (std::polar(1.0, -t1) + std::polar(1.0, t2)) / (std::cos(t1) + std::cos(t2));
}

cplx assemble_from_stationary_phase(const Flux& alpha, const PolarPoint& q1, const PolarPoint& q2) {
    const auto c = normalize_configuration(q1, q2);
    // r_i'(0) = x_i / r_i for the translation along +x
    const double mu = c.q1.x() / c.q1.r + c.q2.x() / c.q2.r;
    const cplx assembled = -upsilon0_principal(c.q1, c.q2, alpha) * (two_pi / mu);
    const cplx direct = diffraction_coefficient(alpha, q1, q2);
    const double gap = std::abs(assembled - direct);
    if (gap > 1e-14 * std::max(1.0, std::abs(direct)))
        throw AccuracyError("stationary-phase assembly disagrees with the closed coefficient", assembled.real(), gap);
    return assembled;
}

}  // namespace abwave
