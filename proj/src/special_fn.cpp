#include "abwave/special_fn.hpp"

#include "abwave/errors.hpp"
#include "abwave/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace abwave {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

// Lanczos approximation, g = 7, n = 9.
constexpr std::array<double, 9> lanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double gamma_lanczos(double x) {  // x >= 0.5
    x -= 1.0;
    double a = lanczos[0];
    const double t = x + 7.5;
    for (int i = 1; i < 9; ++i) a += lanczos[i] / (x + i);
    // split the power to postpone overflow
    const double p = std::pow(t, 0.5 * (x + 0.5));
    return std::sqrt(two_pi) * p * (p * std::exp(-t)) * a;
}

// Taylor coefficients of 1/Gamma(z) about 0: 1/Gamma(z) = sum_k c[k] z^k, c[0] unused.
constexpr std::array<double, 27> rgamma_c = {
    0.0,
    1.0,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
    0.0000000061160950,
    0.0000000050020075,
    -0.0000000011812746,
    0.0000000001043427,
    0.0000000000077823,
    -0.0000000000036968,
    0.0000000000005100,
    -0.0000000000000206,
    -0.0000000000000054,
    0.0000000000000014,
    0.0000000000000001};

// gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu), gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2.
void temme_gammas(double mu, double& gam1, double& gam2) {
    const double m2 = mu * mu;
    double even = 0.0;
    for (int k = 26; k >= 2; k -= 2) even = even * m2 + rgamma_c[k];
    double odd = 0.0;
    for (int k = 25; k >= 1; k -= 2) odd = odd * m2 + rgamma_c[k];
    gam1 = -even;
    gam2 = odd;
}

// (x/2)^nu / Gamma(nu+1) without intermediate overflow.
double small_arg_prefactor(double nu, double x) {
    const double n = std::floor(nu);
    const double f = nu - n;
    const double h = 0.5 * x;
    double v = std::pow(h, f) / gamma_real(f + 1.0);
    for (int j = 1; j <= static_cast<int>(n); ++j) v *= h / (f + j);
    return v;
}

BesselResult j_series(double nu, double x) {
    const double pref = small_arg_prefactor(nu, x);
    const double q = -0.25 * x * x;
    double term = 1.0, sum = 1.0, abs_sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (k * (nu + k));
        sum += term;
        abs_sum += std::fabs(term);
        if (std::fabs(term) < 0.25 * eps * std::fabs(sum)) break;
    }
    return {pref * sum, 4.0 * eps * std::fabs(pref) * abs_sum, BesselMethod::power_series};
}

// Hankel expansion with truncation at the smallest term. Returns false if the bound misses tol.
bool j_hankel(double nu, double x, const AccuracyBudget& budget, BesselResult& out) {
    const double mu4 = 4.0 * nu * nu;
    double p = 1.0, q = 0.0;
    double term = 1.0;
    double omitted = 0.0;
    for (int k = 1;; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = term * (mu4 - odd * odd) / (8.0 * k * x);
        if (next == 0.0) {
            omitted = 0.0;
            break;
        }
        if (std::fabs(next) >= std::fabs(term) || k > 200) {
            omitted = std::fabs(next);
            break;
        }
        term = next;
        switch (k % 4) {
            case 1: q += term; break;
            case 2: p -= term; break;
            case 3: q -= term; break;
            default: p += term; break;
        }
        if (std::fabs(term) < 0.1 * eps) {
            omitted = std::fabs(term);
            break;
        }
    }
    const double phase = 0.5 * nu + 0.25;
    const double cp = cospi(phase), sp = sinpi(phase);
    const double cx = std::cos(x), sx = std::sin(x);
    const double cw = cx * cp + sx * sp;
    const double sw = sx * cp - cx * sp;
    const double amp = std::sqrt(2.0 / (pi * x));
    const double value = amp * (p * cw - q * sw);
    const double bound = amp * (omitted + 4.0 * eps * (std::fabs(p) + std::fabs(q)) + eps * x * eps);
    if (bound > 0.5 * budget.tolerance(std::fabs(value))) return false;
    out = {value, bound, BesselMethod::hankel_asymptotic};
    return true;
}

// Forward recurrence from two low orders obtained by the Hankel expansion; stable for nu < x.
bool j_forward(double nu, double x, BesselResult& out) {
    const int n = static_cast<int>(std::floor(nu));
    const double f = nu - n;
    const AccuracyBudget strict{16.0 * eps * std::sqrt(2.0 / (pi * x)), 1e-15, 1};
    BesselResult a, b;
    if (!j_hankel(f, x, strict, a) || !j_hankel(f + 1.0, x, strict, b)) return false;
    if (n == 0) {
        out = a;
        return true;
    }
    double jm = a.value, j = b.value;
    for (int k = 1; k < n; ++k) {
        const double jp = 2.0 * (f + k) / x * j - jm;
        jm = j;
        j = jp;
    }
    const double amp = std::sqrt(2.0 / (pi * x));
    out = {j, (n + 4) * 4.0 * eps * amp + a.error_bound + b.error_bound, BesselMethod::forward_recurrence};
    return true;
}

// Continued-fraction method (Steed CF1/CF2, Temme series for small x).
BesselResult j_continued_fraction(double nu, double x, const AccuracyBudget& budget) {
    const double fpmin = std::numeric_limits<double>::min() / eps;
    const long maxit = budget.max_evals;
    const int nl = x < 2.0 ? static_cast<int>(nu + 0.5) : std::max(0, static_cast<int>(nu - x + 1.5));
    const double xmu = nu - nl;
    const double xmu2 = xmu * xmu;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;
    const double w = xi2 / pi;

    // CF1: J'_nu/J_nu
    int isign = 1;
    double h = nu * xi;
    if (h < fpmin) h = fpmin;
    double b = xi2 * nu, d = 0.0, c = h;
    long i = 0;
    double del = 0.0;
    for (; i < maxit; ++i) {
        b += xi2;
        d = b - d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b - 1.0 / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        del = c * d;
        h = del * h;
        if (d < 0.0) isign = -isign;
        if (std::fabs(del - 1.0) <= eps) break;
    }
    if (i >= maxit)
        throw AccuracyError("Bessel J continued fraction exhausted the evaluation budget", 0.0,
                            std::fabs(del - 1.0));

    double rjl = isign * fpmin;
    double rjpl = h * rjl;
    double rjl1 = rjl;
    double rjp1 = rjpl;
    double fact = nu * xi;
    for (int l = nl - 1; l >= 0; --l) {
        const double rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if (std::fabs(rjl) > 1e250) {
            rjl *= 1e-250;
            rjpl *= 1e-250;
            rjl1 *= 1e-250;
            rjp1 *= 1e-250;
        }
    }
    if (rjl == 0.0) rjl = eps;
    const double f = rjpl / rjl;

    double rjmu = 0.0;
    if (x < 2.0) {
        const double x2 = 0.5 * x;
        const double pimu = pi * xmu;
        const double fct = std::fabs(pimu) < eps ? 1.0 : pimu / std::sin(pimu);
        double dd = -std::log(x2);
        double e = xmu * dd;
        const double fact2 = std::fabs(e) < eps ? 1.0 : std::sinh(e) / e;
        double gam1 = 0.0, gam2 = 0.0;
        temme_gammas(xmu, gam1, gam2);
        const double gampl = gam2 - xmu * gam1;
        const double gammi = gam2 + xmu * gam1;
        double ff = 2.0 / pi * fct * (gam1 * std::cosh(e) + gam2 * fact2 * dd);
        e = std::exp(e);
        double p = e / (gampl * pi);
        double q = 1.0 / (e * pi * gammi);
        const double pimu2 = 0.5 * pimu;
        const double fact3 = std::fabs(pimu2) < eps ? 1.0 : std::sin(pimu2) / pimu2;
        const double r = pi * pimu2 * fact3 * fact3;
        double cc = 1.0;
        dd = -x2 * x2;
        double sum = ff + r * q;
        double sum1 = p;
        long k = 1;
        for (; k <= maxit; ++k) {
            ff = (k * ff + p + q) / (k * static_cast<double>(k) - xmu2);
            cc *= dd / k;
            p /= (k - xmu);
            q /= (k + xmu);
            const double dl = cc * (ff + r * q);
            sum += dl;
            const double dl1 = cc * p - k * dl;
            sum1 += dl1;
            if (std::fabs(dl) < (1.0 + std::fabs(sum)) * eps) break;
        }
        if (k > maxit) throw AccuracyError("Temme series exhausted the evaluation budget", 0.0, 1.0);
        const double rymu = -sum;
        const double ry1 = -sum1 * xi2;
        const double rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        double a = 0.25 - xmu2;
        double p = -0.5 * xi;
        double q = 1.0;
        const double br = 2.0 * x;
        double bi = 2.0;
        double fct = a * xi / (p * p + q * q);
        double cr = br + q * fct;
        double ci = bi + p * fct;
        double den = br * br + bi * bi;
        double dr = br / den;
        double di = -bi / den;
        double dlr = cr * dr - ci * di;
        double dli = cr * di + ci * dr;
        double temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        long k = 1;
        for (; k < maxit; ++k) {
            a += 2.0 * k;
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if (std::fabs(dr) + std::fabs(di) < fpmin) dr = fpmin;
            fct = a / (cr * cr + ci * ci);
            cr = br + cr * fct;
            ci = bi - ci * fct;
            if (std::fabs(cr) + std::fabs(ci) < fpmin) cr = fpmin;
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (std::fabs(dlr - 1.0) + std::fabs(dli) <= eps) break;
        }
        if (k >= maxit) throw AccuracyError("Steed continued fraction exhausted the evaluation budget", 0.0, 1.0);
        const double gam = (p - f) / q;
        rjmu = std::sqrt(w / ((p - f) * gam + q));
        rjmu = std::copysign(rjmu, rjl);
    }
    const double value = rjl1 * (rjmu / rjl);
    const double scale = x >= nu ? std::sqrt(2.0 / (pi * x)) : 0.0;
    const double bound = eps * ((16.0 + 2.0 * nl) * std::fabs(value) + 16.0 * scale);
    return {value, bound, BesselMethod::continued_fraction};
}

}  // namespace

double gamma_real(double x) {
    if (!std::isfinite(x)) throw DomainError("gamma_real: argument must be finite");
    if (x <= 0.0 && x == std::floor(x))
        throw DomainError("gamma_real: pole at non-positive integer " + std::to_string(x));
    if (x < 0.5) return pi / (sinpi(x) * gamma_lanczos(1.0 - x));
    return gamma_lanczos(x);
}

BesselResult bessel_j_detailed(BesselOrder order, double x, const AccuracyBudget& budget) {
    const double nu = order.value();
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("bessel_j: argument must be positive and finite");
    if (x * x <= 4.0 * (nu + 1.0)) return j_series(nu, x);
    BesselResult out;
    if (x >= 30.0 && j_hankel(nu, x, budget, out)) return out;
    if (x >= 30.0 && nu < x && j_forward(nu, x, out)) return out;
    return j_continued_fraction(nu, x, budget);
}

double bessel_j(BesselOrder nu, double x, const AccuracyBudget& budget) {
    return bessel_j_detailed(nu, x, budget).value;
}

void bessel_j_ladder(double mu, double x, std::span<double> out) {
    if (out.empty()) return;
    if (!(mu >= 0.0)) throw DomainError("bessel_j_ladder: base order must be non-negative");
    if (!(x > 0.0)) throw DomainError("bessel_j_ladder: argument must be positive");
    const std::size_t count = out.size();
    const double reach = std::max(static_cast<double>(count), x);
    const long start = static_cast<long>(reach + 30.0 + 10.0 * std::cbrt(reach));
    std::fill(out.begin(), out.end(), 0.0);
    double jp1 = 0.0;   // order n+1
    double jn = 1e-280;  // order n
    for (long n = start; n >= 0; --n) {
        if (static_cast<std::size_t>(n) < count) out[n] = jn;
        if (n == 0) break;
        const double jm1 = 2.0 * (mu + n) / x * jn - jp1;
        jp1 = jn;
        jn = jm1;
        if (std::fabs(jn) > 1e250) {
            jn *= 1e-250;
            jp1 *= 1e-250;
            const std::size_t hi = std::min<std::size_t>(count, static_cast<std::size_t>(start) + 1);
            for (std::size_t i = static_cast<std::size_t>(n); i < hi; ++i) out[i] *= 1e-250;
        }
    }
    // jn holds order mu, jp1 holds order mu+1
    const double j0 = bessel_j(mu, x);
    const double j1 = bessel_j(mu + 1.0, x);
    const double m = std::max(std::fabs(jn), std::fabs(jp1));
    const double u0 = jn / m, u1 = jp1 / m;
    const double s = (u0 * j0 + u1 * j1) / (u0 * u0 + u1 * u1) / m;
    for (double& v : out) v *= s;
}

double asym_coeff(BesselOrder order, int k) {
    if (k < 0) throw DomainError("asym_coeff: index must be non-negative");
    const double mu4 = 4.0 * order.value() * order.value();
    double a = 1.0;
    for (int j = 1; j <= k; ++j) {
        const double odd = 2.0 * j - 1.0;
        a = a * (mu4 - odd * odd) / (8.0 * j);
    }
    return a;
}

SymbolSeries SymbolSeries::make(BesselOrder nu, int depth) {
    if (depth < 0) throw DomainError("symbol series depth must be non-negative");
    SymbolSeries s{nu, {}};
    s.coeffs.resize(depth + 1);
    for (int k = 0; k <= depth; ++k) s.coeffs[k] = asym_coeff(nu, k);
    return s;
}

PQ pq_partial_sums(BesselOrder nu, double x, int n_pairs) {
    if (!(x > 0.0)) throw DomainError("pq_partial_sums: argument must be positive");
    if (n_pairs < 0) throw DomainError("pq_partial_sums: depth must be non-negative");
    PQ out{0.0, 0.0};
    const double mu4 = 4.0 * nu.value() * nu.value();
    double term = 1.0;  // a_k / x^k
    for (int k = 0; k <= 2 * n_pairs; ++k) {
        if (k > 0) {
            const double odd = 2.0 * k - 1.0;
            term = term * (mu4 - odd * odd) / (8.0 * k * x);
        }
        const int m = k / 2;
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) out.p += sign * term;
        else out.q += sign * term;
    }
    return out;
}

cplx bessel_k(BesselOrder order, cplx z, const AccuracyBudget& budget) {
    const double nu = order.value();
    if (!(z.real() > 0.0) || !std::isfinite(std::abs(z)))
        throw DomainError("bessel_k: argument must have positive real part");
    const double az = std::abs(z);
    const double target = std::min(budget.rel_tol, 1e-13);

    if (az >= 17.0) {
        const double mu4 = 4.0 * nu * nu;
        cplx sum = 1.0, term = 1.0;
        double omitted = 0.0;
        for (int k = 1; k < 200; ++k) {
            const double odd = 2.0 * k - 1.0;
            const cplx next = term * ((mu4 - odd * odd) / (8.0 * k)) / z;
            if (std::abs(next) == 0.0) {
                omitted = 0.0;
                break;
            }
            if (std::abs(next) >= std::abs(term)) {
                omitted = std::abs(next);
                break;
            }
            term = next;
            sum += term;
            if (std::abs(term) < 0.1 * eps) {
                omitted = std::abs(term);
                break;
            }
        }
        if (omitted <= 0.5 * target) return std::sqrt(pi / (2.0 * z)) * std::exp(-z) * sum;
    }

    // K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt
    const double rz = z.real();
    auto log_mod = [&](double t) {
        return -rz * std::cosh(t) + nu * t + std::log1p(std::exp(-2.0 * nu * t)) - std::log(2.0);
    };
    double tpk = nu > rz ? std::asinh(nu / rz) : 0.0;
    const double peak = log_mod(tpk);
    double upper = tpk + 0.5;
    while (log_mod(upper) > peak - 42.0) upper += 0.5;
    auto integrand = [&](double t) { return std::exp(-z * std::cosh(t)) * std::cosh(nu * t); };
    AccuracyBudget qb{std::numeric_limits<double>::min(), target, budget.max_evals};
    QuadResult<cplx> r;
    if (tpk > 0.0) {
        auto r1 = integrate_adaptive(integrand, 0.0, tpk, qb);
        auto r2 = integrate_adaptive(integrand, tpk, upper, qb);
        r.value = r1.value + r2.value;
    } else {
        r = integrate_adaptive(integrand, 0.0, upper, qb);
    }
    return r.value;
}

}  // namespace abwave
