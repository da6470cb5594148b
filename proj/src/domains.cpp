#include "abwave/domains.hpp"

#include "abwave/errors.hpp"
#include "abwave/parallel.hpp"
#include "abwave/quadrature.hpp"
#include "abwave/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace abwave {

namespace {

constexpr double boundary_r0 = 0.1;
constexpr int boundary_depth = 6;

double smoothstep5(double x) { return x * x * x * (10.0 + x * (-15.0 + 6.0 * x)); }
double smoothstep5_d1(double x) { return 30.0 * x * x * (1.0 - x) * (1.0 - x); }
double smoothstep5_d2(double x) { return 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x); }

// zbar^a on a branch that is continuous near the anchor point (ax, ay). The anchor's own value
// uses arg(zbar) = -phi with phi in [0, 2 pi), which is all the callers need since only
// single-valued products are integrated.
struct LocalPower {
    double a;
    cplx zb0;
    cplx base;

    LocalPower(double a_, double ax, double ay) : a(a_), zb0(ax, -ay) {
        double phi = std::atan2(ay, ax);
        if (phi < 0.0) phi += two_pi;
        base = std::polar(std::pow(std::abs(zb0), a), -a * phi);
    }

    cplx operator()(double x, double y) const {
        const cplx zb(x, -y);
        return base * std::pow(1.0 + (zb - zb0) / zb0, a);
    }
};

// Fourth-order central first and second differences.
template <class F>
cplx d1_4(F& f, double h) {
    return (-f(2 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2 * h)) / (12.0 * h);
}
template <class F>
cplx d2_4(F& f, double h) {
    return (-f(2 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2 * h)) / (12.0 * h * h);
}

template <class G>
cplx dzbar(const G& g, double x, double y, double h) {
    auto fx = [&](double s) { return g(x + s, y); };
    auto fy = [&](double s) { return g(x, y + s); };
    return 0.5 * (d1_4(fx, h) + cplx(0.0, 1.0) * d1_4(fy, h));
}

template <class G>
cplx laplacian(const G& g, double x, double y, double h) {
    auto fx = [&](double s) { return g(x + s, y); };
    auto fy = [&](double s) { return g(x, y + s); };
    return d2_4(fx, h) + d2_4(fy, h);
}

double order_for_mode(double alpha, int k) { return std::abs(k + alpha); }

}  // namespace

CutoffProfile CutoffProfile::make(double r_on, double r_off) {
    if (!(r_on > 0.0) || !(r_off > r_on) || !std::isfinite(r_off))
        throw DomainError("cutoff profile needs 0 < r_on < r_off");
    return CutoffProfile{r_on, r_off};
}

double CutoffProfile::operator()(double r) const {
    if (r <= r_on) return 1.0;
    if (r >= r_off) return 0.0;
    return 1.0 - smoothstep5((r - r_on) / (r_off - r_on));
}

double CutoffProfile::d1(double r) const {
    if (r <= r_on || r >= r_off) return 0.0;
    const double w = r_off - r_on;
    return -smoothstep5_d1((r - r_on) / w) / w;
}

double CutoffProfile::d2(double r) const {
    if (r <= r_on || r >= r_off) return 0.0;
    const double w = r_off - r_on;
    return -smoothstep5_d2((r - r_on) / w) / (w * w);
}

cplx DeficiencyFrequency::beta() const {
    return std::polar(1.0, sign == DeficiencySign::plus ? -0.25 * pi : 0.25 * pi);
}

AnnulusSamples sample_annulus(const PolarFunction& u, const std::vector<double>& radii, int n_theta) {
    if (n_theta < 1) throw DomainError("sample_annulus needs at least one angle");
    AnnulusSamples s;
    s.r = radii;
    s.n_theta = n_theta;
    s.values.resize(radii.size() * static_cast<std::size_t>(n_theta));
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw DomainError("sample radii must be positive");
        for (int j = 0; j < n_theta; ++j)
            s.values[i * n_theta + j] = u(radii[i], two_pi * j / n_theta);
    }
    return s;
}

RadialModeFunction mode_project(const AnnulusSamples& u, int j) {
    const int n = u.n_theta;
    const int need = 8 * (std::abs(j) + 1);
    if (n < need) {
        std::ostringstream msg;
        msg << "mode " << j << " needs at least " << need << " angles, got " << n;
        throw AliasingError(msg.str(), 0.0, 0.0);
    }
    RadialModeFunction out;
    out.k = j;
    out.r = u.r;
    out.values.resize(u.r.size());
    out.magnitude.assign(u.r.size(), 0.0);
    const double w = two_pi / n / std::sqrt(two_pi);
    for (std::size_t i = 0; i < u.r.size(); ++i) {
        cplx acc = 0.0;
        for (int m = 0; m < n; ++m) {
            // exact phase reduction: (j*m) mod n
            const long jm = (static_cast<long>(j) * m) % n;
            out.magnitude[i] = std::max(out.magnitude[i], std::abs(u.values[i * n + m]));
            acc += u.values[i * n + m] * std::polar(1.0, -two_pi * static_cast<double>(jm) / n);
        }
        out.values[i] = acc * w;
    }
    return out;
}

std::vector<double> boundary_radii() {
    std::vector<double> r(boundary_depth + 1);
    for (int n = 0; n <= boundary_depth; ++n) r[n] = std::ldexp(boundary_r0, -n);
    return r;
}

BoundaryLimit boundary_L_detailed(int j, const RadialModeFunction& u_mode, const Flux& alpha) {
    if (j != 0 && j != -1) throw DomainError("boundary functionals exist for j = 0 and j = -1 only");
    if (u_mode.k != j) throw DomainError("mode function index does not match the functional");
    const auto radii = boundary_radii();
    if (u_mode.r.size() != radii.size() || u_mode.values.size() != radii.size())
        throw DomainError("boundary_L expects samples at boundary_radii()");
    for (std::size_t n = 0; n < radii.size(); ++n)
        if (std::abs(u_mode.r[n] - radii[n]) > 1e-15 * radii[n])
            throw DomainError("boundary_L expects samples at boundary_radii()");

    const double a = alpha.value();
    const double p = j == 0 ? a : 1.0 - a;
    // Leading correction exponent for a Friedrichs function with an r^2-smooth remainder.
    const double e1 = j == 0 ? 2.0 - a : 1.0 + a;

    const int N = boundary_depth;
    std::vector<cplx> s(N + 1);
    double scale = 0.0;
    for (int n = 0; n <= N; ++n) {
        const double w = std::pow(radii[n], -p) / std::sqrt(two_pi);
        s[n] = u_mode.values[n] * w;
        if (!u_mode.magnitude.empty()) scale = std::max(scale, u_mode.magnitude[n] * w);
        if (!std::isfinite(s[n].real()) || !std::isfinite(s[n].imag()))
            throw DivergenceError("non-finite scaled boundary value");
        scale = std::max(scale, std::abs(s[n]));
    }

    // Growth of the scaled values signals a non-Friedrichs input. A slow power r^{-delta}
    // never grows 10x over six halvings, so persistently growing increments also count.
    const bool blown_up = std::abs(s[N]) > 10.0 * std::abs(s[0]) && std::abs(s[N]) > 1e-12 * scale;
    const double d2 = std::abs(s[N - 2] - s[N - 3]);
    const double d1 = std::abs(s[N - 1] - s[N - 2]);
    const double d0 = std::abs(s[N] - s[N - 1]);
    const bool increments_grow = d0 > d1 && d1 > d2 && d0 > 1e-12 * scale;
    if (blown_up || increments_grow) throw DivergenceError("scaled boundary values do not converge");

    std::vector<std::vector<cplx>> T(N + 1, std::vector<cplx>(N + 1));
    for (int n = 0; n <= N; ++n) T[n][0] = s[n];
    for (int m = 1; m <= N; ++m) {
        const double f = std::pow(2.0, e1 + (m - 1));
        for (int n = m; n <= N; ++n) T[n][m] = (f * T[n][m - 1] - T[n - 1][m - 1]) / (f - 1.0);
    }
    return BoundaryLimit{T[N][N], std::abs(T[N][N] - T[N - 1][N - 1])};
}

cplx boundary_L(int j, const RadialModeFunction& u_mode, const Flux& alpha) {
    return boundary_L_detailed(j, u_mode, alpha).value;
}

BoundaryCoefficients boundary_coefficients(const PolarFunction& u, const Flux& alpha, int n_theta) {
    const auto samples = sample_annulus(u, boundary_radii(), n_theta);
    return BoundaryCoefficients{boundary_L(0, mode_project(samples, 0), alpha),
                                boundary_L(-1, mode_project(samples, -1), alpha)};
}

RadialFunction deficiency_radial(const Flux& alpha, DeficiencyFrequency freq, int k) {
    if (k != 0 && k != -1) throw DomainError("deficiency solutions exist for k = 0 and k = -1 only");
    const double nu = order_for_mode(alpha.value(), k);
    const cplx beta = freq.beta();
    return [nu, beta](double r) { return bessel_k(nu, beta * r); };
}

PolarFunction deficiency_solution(const Flux& alpha, DeficiencyFrequency freq, int k) {
    auto radial = deficiency_radial(alpha, freq, k);
    return [radial, k](double r, double theta) { return radial(r) * std::polar(1.0, k * theta); };
}

cplx ode_residual(const Flux& alpha, int k, cplx beta, const RadialFunction& u_mode, double r, double h) {
    if (!(r > 0.0) || !(h > 0.0) || h >= r) throw DomainError("ode_residual needs 0 < h < r");
    const cplx up = u_mode(r + h);
    const cplx u0 = u_mode(r);
    const cplx um = u_mode(r - h);
    const cplx d2 = (up - 2.0 * u0 + um) / (h * h);
    const cplx d1 = (up - um) / (2.0 * h);
    const double nu = k + alpha.value();
    return -d2 - d1 / r + (nu * nu / (r * r)) * u0 + beta * beta * u0;
}

double deficiency_partial_norm(double nu, cplx beta, double eps) {
    if (!(eps > 0.0)) throw DomainError("inner radius must be positive");
    // |K_nu(beta r)|^2 ~ (pi / 2r) exp(-2 r Re beta): r = 60 leaves less than 1e-30 for |beta| = 1.
    const double R = std::max(60.0, 80.0 / std::max(beta.real(), 1e-3));
    if (eps >= R) return 0.0;
    auto f = [nu, beta](double x) {
        const double r = std::exp(x);
        return std::norm(bessel_k(nu, beta * r)) * r * r;
    };
    return integrate_adaptive(f, std::log(eps), std::log(R), AccuracyBudget{1e-300, 1e-11, 400000}).value;
}

L2Classification classify_l2(double nu, cplx beta) {
    std::vector<double> I;
    for (int n = 2; n <= 6; ++n) I.push_back(deficiency_partial_norm(nu, beta, std::pow(10.0, -n)));
    const std::size_t m = I.size();
    const double d_prev = I[m - 2] - I[m - 3];
    const double d_last = I[m - 1] - I[m - 2];
    const double q = d_last / d_prev;
    L2Classification c;
    // Increments shrink geometrically (ratio 10^{2 nu - 2}) exactly when nu < 1; nu = 1 is logarithmic.
    c.integrable = q < 0.95;
    c.growth_exponent = std::log10(q);
    return c;
}

cplx commutator_pairing_contour(const Flux& alpha, double epsilon, int n_quad) {
    if (!(epsilon > 0.0)) throw DomainError("contour radius must be positive");
    if (n_quad < 2) throw DomainError("contour quadrature needs at least two nodes");
    const double a = alpha.value();
    const double h = epsilon * 1e-3;
    std::vector<cplx> terms(n_quad);
    parallel_for(n_quad, [&](std::size_t k) {
        const double phi = two_pi * static_cast<double>(k) / n_quad;
        const double x = epsilon * std::cos(phi);
        const double y = epsilon * std::sin(phi);
        const LocalPower v0(a, x, y);
        const LocalPower vm1(1.0 - a, x, y);
        const cplx dzb_dphi = cplx(0.0, -epsilon) * std::polar(1.0, -phi);
        terms[k] = dzbar(v0, x, y, h) * dzbar(vm1, x, y, h) * dzb_dphi;
    });
    cplx sum = 0.0;
    for (const auto& t : terms) sum += t;
    return (2.0 / cplx(0.0, 1.0)) * sum * (two_pi / n_quad);
}

namespace {

cplx area_pairing_at(double a, const CutoffProfile& cutoff, int panels, int n_theta) {
    constexpr int order = 16;
    const double width = (cutoff.r_off - cutoff.r_on) / panels;
    const auto rule = composite_gauss_legendre(cutoff.r_on, cutoff.r_off, width * (1.0 + 1e-12), order);
    const std::size_t nr = rule.nodes.size();
    std::vector<cplx> ring(nr);
    parallel_for(nr, [&](std::size_t i) {
        const double r = rule.nodes[i];
        // Keep stencils clear of r_on and r_off, where the cutoff is only C^2.
        const double gap = std::min(r - cutoff.r_on, cutoff.r_off - r);
        const double h = std::min(2e-3, gap / 3.0);
        cplx acc = 0.0;
        for (int m = 0; m < n_theta; ++m) {
            const double th = two_pi * m / n_theta;
            const double x = r * std::cos(th);
            const double y = r * std::sin(th);
            const LocalPower p0(a, x, y);
            const LocalPower p1(1.0 - a, x, y);
            auto vb0 = [&](double xx, double yy) { return p0(xx, yy) * cutoff(std::hypot(xx, yy)); };
            auto vm1 = [&](double xx, double yy) { return p1(xx, yy) * cutoff(std::hypot(xx, yy)); };
            acc += laplacian(vb0, x, y, h) * dzbar(vm1, x, y, h) + dzbar(vb0, x, y, h) * laplacian(vm1, x, y, h);
        }
        // Delta is the nonnegative Laplacian -(d_x^2 + d_y^2), hence the sign flip.
        ring[i] = -acc * (two_pi / n_theta) * r * rule.weights[i];
    });
    cplx sum = 0.0;
    for (const auto& v : ring) sum += v;
    return -sum;
}

}  // namespace

AreaPairing commutator_pairing_area(const Flux& alpha, const CutoffProfile& cutoff, int n_r, int n_theta,
                                    double tol) {
    if (n_r < 32 || n_r % 16 != 0) throw DomainError("n_r must be a multiple of 16, at least 32");
    if (n_theta < 2 || n_theta % 2 != 0) throw DomainError("n_theta must be even");
    const double a = alpha.value();
    const int panels = n_r / 16;
    // The integrand vanishes for r < r_on (both factors are harmonic there), so the inner disk
    // contributes exactly zero and the annulus carries the whole pairing.
    AreaPairing out;
    out.value = area_pairing_at(a, cutoff, panels, n_theta);
    out.coarse_value = area_pairing_at(a, cutoff, panels / 2, n_theta / 2);
    out.convergence_gap = std::abs(out.value - out.coarse_value);
    if (out.convergence_gap > tol) {
        double observed = 0.0;
        if (panels >= 4) {
            const cplx coarser = area_pairing_at(a, cutoff, panels / 4, std::max(2, n_theta / 4));
            observed = std::log2(std::abs(coarser - out.coarse_value) / out.convergence_gap);
        }
        std::ostringstream msg;
        msg << "area pairing not resolved: gap " << out.convergence_gap << ", observed order " << observed;
        throw AccuracyError(msg.str(), out.value.real(), out.convergence_gap);
    }
    return out;
}

}  // namespace abwave
