#include "abwave/mode_sum.hpp"

#include "abwave/errors.hpp"
#include "abwave/parallel.hpp"
#include "abwave/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace abwave {

namespace {

double envelope(double nu, double x) {
    if (x <= 0.0) return nu == 0.0 ? 1.0 : 0.0;
    const double log_env = nu * std::log(0.5 * x) - std::lgamma(nu + 1.0);
    return log_env >= 0.0 ? 1.0 : std::exp(log_env);
}

// Tail terms T_k = 2 env(k-1, x1) env(k-1, x2) * mass for k = 1, 2, ... until negligible.
std::vector<double> tail_terms(const FrequencyWindow& g, double r1, double r2) {
    const double x1 = g.upper() * r1, x2 = g.upper() * r2;
    const double mass = g.mass();
    const double xmax = std::max(x1, x2);
    std::vector<double> terms{0.0};  // index 0 unused
    for (int k = 1; k < 1000000; ++k) {
        const double nu = std::max(0.0, k - 1.0);
        const double tk = 2.0 * envelope(nu, x1) * envelope(nu, x2) * mass;
        terms.push_back(tk);
        if (nu > xmax && tk < 1e-300) break;
    }
    return terms;
}

void check_radii(double r1, double r2) {
    if (!(r1 > 0.0) || !(r2 > 0.0) || !std::isfinite(r1) || !std::isfinite(r2))
        throw DomainError("radii must be positive and finite");
}

double spectral_panel_width(double t_max, double r1, double r2, const FrequencyWindow& g) {
    return std::min(two_pi / (std::fabs(t_max) + r1 + r2), g.halfwidth());
}

}  // namespace

ModeSpec ModeSpec::make(int k_max, double tail_tol) {
    if (k_max < 1) throw DomainError("k_max must be at least 1");
    if (!(tail_tol > 0.0)) throw DomainError("tail tolerance must be positive");
    return ModeSpec{k_max, tail_tol};
}

BesselOrder mode_order(int k, const Flux& alpha) { return BesselOrder(std::fabs(k + alpha.value())); }

QuadResult<double> per_mode_windowed_integral_detailed(BesselOrder nu, double r1, double r2, double t,
                                                       const FrequencyWindow& g, const AccuracyBudget& budget) {
    check_radii(r1, r2);
    if (!(t > 0.0)) throw DomainError("time must be positive");
    auto f = [&](double l) {
        if (l <= 0.0) return 0.0;
        return g(l) * std::sin(t * l) * bessel_j(nu, l * r1) * bessel_j(nu, l * r2);
    };
    return integrate_adaptive(f, g.lower(), g.upper(), budget);
}

double per_mode_windowed_integral(BesselOrder nu, double r1, double r2, double t, const FrequencyWindow& g,
                                  const AccuracyBudget& budget) {
    return per_mode_windowed_integral_detailed(nu, r1, r2, t, g, budget).value;
}

double mode_tail_bound(const FrequencyWindow& g, double r1, double r2, int k_max) {
    check_radii(r1, r2);
    const auto terms = tail_terms(g, r1, r2);
    double sum = 0.0;
    for (std::size_t k = terms.size() - 1; k > static_cast<std::size_t>(std::max(k_max, 0)); --k) sum += terms[k];
    return sum;
}

ModeSpec mode_truncation_bound(const FrequencyWindow& g, double r1, double r2, double tail_tol) {
    check_radii(r1, r2);
    if (!(tail_tol > 0.0)) throw DomainError("tail tolerance must be positive");
    if (std::isinf(tail_tol)) return ModeSpec{1, tail_tol};
    const auto terms = tail_terms(g, r1, r2);
    // suffix sums from the far end
    std::vector<double> suffix(terms.size() + 1, 0.0);
    for (std::size_t k = terms.size(); k-- > 1;) suffix[k] = suffix[k + 1] + terms[k];
    for (std::size_t k = 1; k < terms.size(); ++k) {
        if (suffix[k + 1] < tail_tol) return ModeSpec{static_cast<int>(k), tail_tol};
    }
    return ModeSpec{static_cast<int>(terms.size()), tail_tol};
}

ModeSumKernel::ModeSumKernel(double alpha, double r1, double r2, double dtheta, const FrequencyWindow& g,
                             const ModeSpec& modes, double t_max, KernelPart part)
    : alpha_(alpha), r1_(r1), r2_(r2), dtheta_(dtheta), g_(g), k_max_(modes.k_max), tail_(0.0),
      t_max_(std::fabs(t_max)), part_(part) {
    check_radii(r1, r2);
    if (!std::isfinite(alpha)) throw DomainError("flux must be finite");
    if (!(t_max_ > 0.0) || !std::isfinite(t_max_)) throw DomainError("time range must be positive");
    if (modes.k_max < 1) throw DomainError("k_max must be at least 1");
    tail_ = mode_tail_bound(g, r1, r2, k_max_);
    if (tail_ > modes.tail_tol) {
        const int need = mode_truncation_bound(g, r1, r2, modes.tail_tol).k_max;
        std::ostringstream os;
        os << "mode tail bound " << tail_ << " exceeds tolerance " << modes.tail_tol << " at k_max = " << k_max_
           << "; use k_max >= " << need;
        throw TailOverflowError(os.str(), tail_, need);
    }
    const double h = spectral_panel_width(t_max_, r1, r2, g);
    fill(fine_, h);
    fill(coarse_, 2.0 * h);
}

void ModeSumKernel::fill(Rule& rule, double width) const {
    const CompositeRule cr = composite_gauss_legendre(g_.lower(), g_.upper(), width, 20);
    const std::size_t n = cr.nodes.size();
    rule.lambda = cr.nodes;
    rule.weight.resize(n);
    rule.spectral.assign(n, cplx(0.0, 0.0));

    const int K = k_max_;
    const double fl = std::floor(alpha_);
    const double f = alpha_ - fl;
    const long shift = static_cast<long>(fl);
    // k + alpha = m + f with m = k + shift
    const long m_lo = -K + shift, m_hi = K + shift;
    const long count_a = std::max<long>(0, m_hi + 1);       // m >= 0: nu = m + f
    const long count_b = std::max<long>(0, -m_lo);          // m <= -1: nu = (-m-1) + (1-f)
    std::vector<cplx> phase(2 * K + 1);
    for (int k = -K; k <= K; ++k) phase[k + K] = std::polar(1.0, k * dtheta_);
    const double rho = separation(PolarPoint{r1_, dtheta_}, PolarPoint{r2_, 0.0});
    const cplx geo_phase = std::polar(1.0, -alpha_ * dtheta_);

    parallel_for(n, [&](std::size_t i) {
        const double l = rule.lambda[i];
        rule.weight[i] = cr.weights[i] * g_(l);
        if (rule.weight[i] == 0.0) return;
        const double x1 = l * r1_, x2 = l * r2_;
        std::vector<double> a1(count_a), a2(count_a), b1(count_b), b2(count_b);
        if (count_a > 0) {
            bessel_j_ladder(f, x1, a1);
            bessel_j_ladder(f, x2, a2);
        }
        if (count_b > 0) {
            bessel_j_ladder(1.0 - f, x1, b1);
            bessel_j_ladder(1.0 - f, x2, b2);
        }
        cplx s = 0.0;
        for (int k = -K; k <= K; ++k) {
            const long m = k + shift;
            double prod;
            if (m >= 0) prod = a1[m] * a2[m];
            else prod = b1[-m - 1] * b2[-m - 1];
            s += phase[k + K] * prod;
        }
        if (part_ == KernelPart::diffractive) {
            const double j0 = (l * rho > 0.0) ? bessel_j(0.0, l * rho) : 1.0;
            s -= geo_phase * j0;
        }
        rule.spectral[i] = s;
    });
}

cplx ModeSumKernel::apply(const Rule& rule, double t) const {
    cplx sum = 0.0;
    for (std::size_t i = 0; i < rule.lambda.size(); ++i) {
        if (rule.weight[i] == 0.0) continue;
        sum += (rule.weight[i] * std::sin(t * rule.lambda[i])) * rule.spectral[i];
    }
    return sum;
}

KernelSample ModeSumKernel::operator()(double t) const {
    if (!std::isfinite(t) || std::fabs(t) > t_max_ * (1.0 + 1e-12))
        throw DomainError("sample time outside the range this kernel was built for");
    KernelSample out;
    out.t = t;
    out.value = apply(fine_, t);
    out.est_quad_err = std::abs(out.value - apply(coarse_, t));
    out.est_mode_tail = tail_;
    return out;
}

std::vector<KernelSample> ModeSumKernel::sample(std::span<const double> times) const {
    std::vector<KernelSample> out(times.size());
    parallel_for(times.size(), [&](std::size_t i) { out[i] = (*this)(times[i]); });
    return out;
}

KernelSample windowed_kernel_any_flux(const SpacetimeQuery& query, double alpha, const FrequencyWindow& g,
                                      const ModeSpec& modes) {
    ModeSumKernel kernel(alpha, query.q1.r, query.q2.r, query.dtheta(), g, modes, query.t);
    return kernel(query.t);
}

KernelSample windowed_kernel(const SpacetimeQuery& query, const Flux& alpha, const FrequencyWindow& g,
                             const ModeSpec& modes, const AccuracyBudget&) {
    return windowed_kernel_any_flux(query, alpha.value(), g, modes);
}

double free_kernel_closed(double t, double rho) {
    if (!(t > 0.0) || !(rho > 0.0)) throw DomainError("free kernel needs t > 0 and rho > 0");
    if (t == rho) throw DomainError("free kernel is singular on the light cone t = rho");
    if (t < rho) return 0.0;
    return 1.0 / (two_pi * std::sqrt((t - rho) * (t + rho)));
}

double windowed_free_kernel(double t, double rho, const FrequencyWindow& g) {
    if (!(rho > 0.0)) throw DomainError("windowed free kernel needs rho > 0");
    const double reach = g.time_reach();
    const double a = t - reach, b = t + reach;
    const AccuracyBudget qb{1e-13 * g.mass(), 1e-12, 2000000};
    auto G = [&](double s) { return g.time_profile(t - s); };
    cplx total = 0.0;
    // |s| < rho, s = rho cos(phi)
    const double lo = std::max(a, -rho), hi = std::min(b, rho);
    if (hi > lo) {
        const double phi_lo = std::acos(std::clamp(hi / rho, -1.0, 1.0));
        const double phi_hi = std::acos(std::clamp(lo / rho, -1.0, 1.0));
        total += integrate_adaptive([&](double phi) { return G(rho * std::cos(phi)); }, phi_lo, phi_hi, qb).value;
    }
    // s > rho, s = rho + u^2
    if (b > rho) {
        const double u_lo = std::sqrt(std::max(0.0, a - rho)), u_hi = std::sqrt(b - rho);
        total += cplx(0.0, 1.0) * integrate_adaptive(
                                      [&](double u) { return G(rho + u * u) * (2.0 / std::sqrt(2.0 * rho + u * u)); },
                                      u_lo, u_hi, qb)
                                      .value;
    }
    // s < -rho, s = -rho - u^2
    if (a < -rho) {
        const double u_lo = std::sqrt(std::max(0.0, -rho - b)), u_hi = std::sqrt(-rho - a);
        total -= cplx(0.0, 1.0) * integrate_adaptive(
                                      [&](double u) { return G(-rho - u * u) * (2.0 / std::sqrt(2.0 * rho + u * u)); },
                                      u_lo, u_hi, qb)
                                      .value;
    }
    return total.imag() / (two_pi * two_pi);
}

double windowed_free_kernel_spectral(double t, double rho, const FrequencyWindow& g) {
    if (!(rho >= 0.0)) throw DomainError("separation must be non-negative");
    auto f = [&](double l) {
        if (l <= 0.0) return 0.0;
        const double j0 = (l * rho > 0.0) ? bessel_j(0.0, l * rho) : 1.0;
        return g(l) * std::sin(t * l) * j0;
    };
    auto r = integrate_adaptive(f, g.lower(), g.upper(), AccuracyBudget{1e-14 * g.mass(), 1e-12, 2000000});
    return r.value / two_pi;
}

cplx abel_diffraction_series(const Flux& alpha, double dtheta, double eps, long k_max) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("Abel parameter must lie in (0,1)");
    if (k_max < 0) throw DomainError("k_max must be non-negative");
    const double d = reduce_angle(dtheta);
    if (std::fabs(d) == pi) throw ExcludedDirectionError("excluded direction |dtheta| = pi");
    const double a = alpha.value();
    // k >= 0 and k <= -1 accumulated separately, smallest terms first
    cplx pos = 0.0, neg = 0.0;
    for (long k = k_max; k >= 1; --k) {
        const double w = std::pow(eps, static_cast<double>(k));
        if (w == 0.0) continue;
        const double kk = static_cast<double>(k);
        pos += w * std::polar(1.0, -pi * (kk + a) + kk * d);
        neg += w * std::polar(1.0, -pi * (kk - a) - kk * d);
    }
    pos += std::polar(1.0, -pi * a);
    return cplx(0.0, -1.0) * (pos + neg);
}

cplx abel_series_closed(const Flux& alpha, double dtheta, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("Abel parameter must lie in (0,1)");
    const double a = alpha.value();
    const cplx e1 = std::polar(1.0, dtheta), e2 = std::polar(1.0, -dtheta);
    const cplx pos = std::polar(1.0, -pi * a) / (1.0 + eps * e1);
    const cplx neg = std::polar(1.0, pi * a) * (eps * e2) / (1.0 + eps * e2);
    return cplx(0.0, -1.0) * (pos - neg);
}

cplx diffraction_series_closed(const Flux& alpha, double dtheta) {
    const double d = reduce_angle(dtheta);
    if (std::fabs(d) == pi) throw ExcludedDirectionError("excluded direction |dtheta| = pi");
    return -sinpi(alpha.value()) * std::polar(1.0, -0.5 * d) / std::cos(0.5 * d);
}

}  // namespace abwave
