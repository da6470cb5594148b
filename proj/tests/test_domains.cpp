#include "doctest.h"

#include "abwave/domains.hpp"
#include "abwave/errors.hpp"
#include "abwave/quadrature.hpp"
#include "abwave/special_fn.hpp"

#include <cmath>
#include <random>

using namespace abwave;

namespace {

const cplx I1(0.0, 1.0);

RadialModeFunction project_at_boundary(const PolarFunction& u, int j, int n_theta = 64) {
    return mode_project(sample_annulus(u, boundary_radii(), n_theta), j);
}

// Area pairing from closed-form derivatives of zbar^a rho(r): with
// A_a = 2a rho'/r + rho'' + rho'/r and B_a = a rho + r rho'/2 the plane integrand is radial,
// (Lap vb0) (d_zbar v_-1) = -zbar (...) collapses to -(A_alpha B_{1-alpha} + B_alpha A_{1-alpha}).
double area_pairing_closed_derivatives(double a, const CutoffProfile& c) {
    const double b = 1.0 - a;
    auto f = [&](double r) {
        const double p = c(r), p1 = c.d1(r), p2 = c.d2(r);
        auto A = [&](double s) { return 2.0 * s * p1 / r + p2 + p1 / r; };
        auto B = [&](double s) { return s * p + r * p1 / 2.0; };
        return (A(a) * B(b) + B(a) * A(b)) * r;
    };
    const double inner = integrate_adaptive(f, c.r_on, c.r_off, AccuracyBudget{1e-15, 1e-14, 200000}).value;
    return two_pi * inner;  // minus from the pairing, minus from the Laplacian sign
}

}  // namespace

TEST_CASE("cutoff profile") {
    const auto c = CutoffProfile::make(0.5, 1.0);
    CHECK(c(0.2) == 1.0);
    CHECK(c(0.5) == 1.0);
    CHECK(c(1.0) == 0.0);
    CHECK(c(0.75) == doctest::Approx(0.5).epsilon(1e-15));
    for (double r = 0.5; r <= 1.0; r += 0.01) {
        CHECK(c(r) >= 0.0);
        CHECK(c(r) <= 1.0);
        CHECK(c.d1(r) <= 0.0);
        const double h = 1e-5;
        if (r > 0.51 && r < 0.99) {
            CHECK(c.d1(r) == doctest::Approx((c(r + h) - c(r - h)) / (2 * h)).epsilon(1e-8));
            CHECK(c.d2(r) == doctest::Approx((c.d1(r + h) - c.d1(r - h)) / (2 * h)).epsilon(1e-7));
        }
    }
    CHECK_THROWS_AS(CutoffProfile::make(1.0, 0.5), DomainError);
    CHECK_THROWS_AS(CutoffProfile::make(0.0, 0.5), DomainError);
}

TEST_CASE("deficiency frequencies") {
    for (auto s : {DeficiencySign::plus, DeficiencySign::minus}) {
        const cplx b = DeficiencyFrequency{s}.beta();
        CHECK(std::abs(std::pow(b, 4) + 1.0) < 1e-15);
        CHECK(b.real() > 0.0);
    }
    CHECK(DeficiencyFrequency{DeficiencySign::plus}.beta().imag() < 0.0);
}

TEST_CASE("mode projection") {
    auto f = [](double r) { return cplx(std::exp(-r), r * r); };
    const std::vector<double> radii{0.1, 0.5, 1.3};
    for (int j : {-3, -1, 0, 2}) {
        const auto on = sample_annulus([&](double r, double t) { return f(r) * std::polar(1.0, j * t); }, radii, 64);
        const auto off =
            sample_annulus([&](double r, double t) { return f(r) * std::polar(1.0, (j + 1) * t); }, radii, 64);
        const auto p_on = mode_project(on, j);
        const auto p_off = mode_project(off, j);
        for (std::size_t i = 0; i < radii.size(); ++i) {
            CHECK(std::abs(p_on.values[i] - std::sqrt(two_pi) * f(radii[i])) < 1e-14);
            CHECK(std::abs(p_off.values[i]) < 1e-14);
        }
    }
    const auto radial = sample_annulus([](double r, double) { return cplx(std::cos(r), 0.0); }, radii, 32);
    for (auto v : mode_project(radial, -1).values) CHECK(std::abs(v) < 1e-15);

    // smooth non-trigonometric angular dependence: e^{cos t} has modes I_j(1)
    const auto smooth = sample_annulus([](double, double t) { return cplx(std::exp(std::cos(t)), 0.0); }, {1.0}, 32);
    CHECK(mode_project(smooth, 1).values[0].real() ==
          doctest::Approx(std::sqrt(two_pi) * 0.565159103992485).epsilon(1e-13));

    CHECK_THROWS_AS(mode_project(radial, 4), AliasingError);
    CHECK_THROWS_AS(mode_project(radial, -4), AliasingError);
    CHECK_NOTHROW(mode_project(radial, 3));  // 32 = 8 (3 + 1) is the boundary
}

TEST_CASE("boundary functionals on the basis functions") {
    const auto rho = CutoffProfile::make(0.5, 1.0);
    for (double a : {0.1, 0.3, 0.5, 0.9}) {
        const Flux alpha(a);
        PolarFunction u0 = [&](double r, double) { return cplx(std::pow(r, a) * rho(r), 0.0); };
        PolarFunction um1 = [&](double r, double t) { return std::pow(r, 1.0 - a) * rho(r) * std::polar(1.0, -t); };
        PolarFunction smooth = [&](double r, double t) {
            const double x = r * std::cos(t), y = r * std::sin(t);
            return r * r * cplx(1.0 + x - 2.0 * y * x, 0.5 * y + x * x);
        };
        CHECK(std::abs(boundary_L(0, project_at_boundary(u0, 0), alpha) - 1.0) < 1e-13);
        CHECK(std::abs(boundary_L(-1, project_at_boundary(um1, -1), alpha) - 1.0) < 1e-13);
        CHECK(std::abs(boundary_L(0, project_at_boundary(um1, 0), alpha)) < 1e-13);
        CHECK(std::abs(boundary_L(-1, project_at_boundary(u0, -1), alpha)) < 1e-13);
        CHECK(std::abs(boundary_L(0, project_at_boundary(smooth, 0), alpha)) < 1e-8);
        CHECK(std::abs(boundary_L(-1, project_at_boundary(smooth, -1), alpha)) < 1e-8);
    }
}

TEST_CASE("boundary functionals recover random Friedrichs coefficients") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const auto rho = CutoffProfile::make(0.5, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = 0.05 + 0.9 * (U(rng) + 1.0) / 2.0;
        const cplx c0(U(rng), U(rng)), cm1(U(rng), U(rng));
        const cplx s0(U(rng), U(rng)), s1(U(rng), U(rng)), s2(U(rng), U(rng)), s3(U(rng), U(rng));
        PolarFunction u = [&](double r, double t) {
            const double x = r * std::cos(t), y = r * std::sin(t);
            const cplx smooth = s0 + s1 * x + s2 * y + s3 * x * y + std::exp(x) * 0.1;
            return c0 * std::pow(r, a) * rho(r) + cm1 * std::pow(r, 1.0 - a) * rho(r) * std::polar(1.0, -t) +
                   r * r * smooth;
        };
        const auto c = boundary_coefficients(u, Flux(a));
        CHECK(std::abs(c.c0 - c0) < 1e-8);
        CHECK(std::abs(c.c_minus1 - cm1) < 1e-8);

        // linearity
        PolarFunction w = [&](double r, double t) { return std::pow(r, a) * std::cos(r) * std::polar(1.0, 0.0 * t); };
        PolarFunction comb = [&](double r, double t) { return 2.5 * u(r, t) - I1 * w(r, t); };
        const auto lu = boundary_L(0, project_at_boundary(u, 0), Flux(a));
        const auto lw = boundary_L(0, project_at_boundary(w, 0), Flux(a));
        const auto lc = boundary_L(0, project_at_boundary(comb, 0), Flux(a));
        CHECK(std::abs(lc - (2.5 * lu - I1 * lw)) < 1e-13);
    }
}

TEST_CASE("boundary functionals reject non-Friedrichs input") {
    for (double a : {0.1, 0.5, 0.9}) {
        PolarFunction constant = [](double, double) { return cplx(1.0, 0.0); };
        CHECK_THROWS_AS(boundary_L(0, project_at_boundary(constant, 0), Flux(a)), DivergenceError);
        PolarFunction singular = [&](double r, double) { return cplx(std::pow(r, -a), 0.0); };
        CHECK_THROWS_AS(boundary_L(0, project_at_boundary(singular, 0), Flux(a)), DivergenceError);
        PolarFunction xlike = [](double, double t) { return std::polar(1.0, -t); };
        CHECK_THROWS_AS(boundary_L(-1, project_at_boundary(xlike, -1), Flux(a)), DivergenceError);
    }
    const auto wrong = sample_annulus([](double, double) { return cplx(1.0); }, {0.1, 0.05}, 16);
    CHECK_THROWS_AS(boundary_L(0, mode_project(wrong, 0), Flux(0.3)), DomainError);
    CHECK_THROWS_AS(boundary_L(1, mode_project(wrong, 1), Flux(0.3)), DomainError);
}

TEST_CASE("boundary limit reports a residual") {
    const auto rho = CutoffProfile::make(0.5, 1.0);
    PolarFunction u = [&](double r, double t) {
        return std::pow(r, 0.3) * rho(r) + r * r * std::cos(t) * std::cos(t) * 3.0;
    };
    const auto lim = boundary_L_detailed(0, project_at_boundary(u, 0), Flux(0.3));
    CHECK(std::abs(lim.value - 1.0) < 1e-9);
    CHECK(lim.residual < 1e-8);
    CHECK(lim.residual >= 0.0);
}

TEST_CASE("deficiency solutions solve the radial equation") {
    const DeficiencyFrequency plus{DeficiencySign::plus}, minus{DeficiencySign::minus};
    for (double a : {0.3, 0.7}) {
        for (auto f : {plus, minus}) {
            for (int k : {0, -1}) {
                const auto u = deficiency_radial(Flux(a), f, k);
                const cplx r1 = ode_residual(Flux(a), k, f.beta(), u, 1.0, 1e-3);
                const cplx r2 = ode_residual(Flux(a), k, f.beta(), u, 1.0, 5e-4);
                CHECK(std::abs(r1) < 1e-5);
                // second order: halving h quarters the residual
                CHECK(std::abs(r1) / std::abs(r2) == doctest::Approx(4.0).epsilon(0.05));
            }
        }
    }
    // polar form carries the angular factor
    const auto u = deficiency_solution(Flux(0.3), plus, -1);
    CHECK(std::abs(u(0.7, 1.1) - bessel_k(0.7, plus.beta() * 0.7) * std::polar(1.0, -1.1)) < 1e-15);
    CHECK_THROWS_AS(deficiency_solution(Flux(0.3), plus, 1), DomainError);
}

TEST_CASE("ode residual of homogeneous powers") {
    for (double a : {0.2, 0.6}) {
        for (int k : {0, -1, 1}) {
            const double nu = std::abs(k + a);
            RadialFunction u = [nu](double r) { return cplx(std::pow(r, nu), 0.0); };
            const cplx r1 = ode_residual(Flux(a), k, 0.0, u, 1.0, 1e-2);
            const cplx r2 = ode_residual(Flux(a), k, 0.0, u, 1.0, 5e-3);
            CHECK(std::abs(r1) < 1e-4);
            CHECK(std::abs(r1) / std::abs(r2) == doctest::Approx(4.0).epsilon(0.05));
        }
    }
    // central differences are exact on quadratics: -2 - 2 + 6.25
    RadialFunction sq = [](double r) { return cplx(r * r, 0.0); };
    CHECK(std::abs(ode_residual(Flux(0.5), 2, 0.0, sq, 1.0, 1e-2) - (-4.0 + 6.25)) < 1e-10);
}

TEST_CASE("square integrability of deficiency modes") {
    const cplx b = DeficiencyFrequency{DeficiencySign::plus}.beta();
    for (double a : {0.2, 0.5, 0.8}) {
        for (int k : {0, -1}) {
            const auto c = classify_l2(std::abs(k + a), b);
            CHECK(c.integrable);
        }
        for (int k : {1, -2}) {
            const double nu = std::abs(k + a);
            const auto c = classify_l2(nu, b);
            CHECK_FALSE(c.integrable);
            // partial integral grows like eps^{-(2 nu - 2)}
            CHECK(c.growth_exponent == doctest::Approx(2.0 * nu - 2.0).epsilon(0.02));
        }
    }
    // total norm is finite and insensitive to the inner radius for nu < 1
    const double n1 = deficiency_partial_norm(0.3, b, 1e-8);
    const double n2 = deficiency_partial_norm(0.3, b, 1e-10);
    CHECK(std::abs(n1 - n2) < 1e-10 * n1);
}

TEST_CASE("commutator pairing on small circles") {
    CHECK(commutator_pairing_contour(Flux(0.5), 1e-3, 64).real() == doctest::Approx(-pi).epsilon(1e-10));
    CHECK(commutator_pairing_contour(Flux(0.25), 1e-3, 64).real() == doctest::Approx(-0.75 * pi).epsilon(1e-10));
    for (double a : {0.1, 0.3, 0.5, 0.77}) {
        const cplx ref = -4.0 * pi * a * (1.0 - a);
        const cplx v2 = commutator_pairing_contour(Flux(a), 1e-2, 32);
        const cplx v3 = commutator_pairing_contour(Flux(a), 1e-3, 32);
        const cplx v4 = commutator_pairing_contour(Flux(a), 1e-4, 32);
        CHECK(std::abs(v2 - ref) < 1e-9);
        CHECK(std::abs(v3 - v2) < 1e-8);
        CHECK(std::abs(v4 - v2) < 1e-8);
        CHECK(std::abs(commutator_pairing_contour(Flux(1.0 - a), 1e-3, 32) - v3) < 1e-10);
    }
}

TEST_CASE("commutator pairing as an area integral") {
    const auto c1 = CutoffProfile::make(0.5, 1.0);
    const auto c2 = CutoffProfile::make(0.3, 0.8);
    for (double a : {0.1, 0.5, 0.8}) {
        const double oracle = area_pairing_closed_derivatives(a, c1);
        CHECK(oracle == doctest::Approx(-4.0 * pi * a * (1.0 - a)).epsilon(1e-12));
        const auto p1 = commutator_pairing_area(Flux(a), c1);
        const auto p2 = commutator_pairing_area(Flux(a), c2);
        const cplx contour = commutator_pairing_contour(Flux(a), 1e-3, 64);
        CHECK(std::abs(p1.value - oracle) < 1e-6);
        CHECK(std::abs(p1.value - contour) < 1e-4);
        CHECK(std::abs(p2.value - contour) < 1e-4);
        CHECK(std::abs(p1.value - p2.value) < 1e-6);
        CHECK(p1.convergence_gap < 1e-6);
    }
    CHECK(commutator_pairing_area(Flux(0.1), c1).value.real() == doctest::Approx(-1.13097).epsilon(1e-5));
    CHECK_THROWS_AS(commutator_pairing_area(Flux(0.3), c1, 32, 8, 1e-30), AccuracyError);
}
