#include "doctest.h"

#include "abwave/errors.hpp"
#include "abwave/oracles.hpp"
#include "abwave/special_fn.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace abwave;

namespace {

double j_half(int m, double x) {
    const double a = std::sqrt(2.0 / (pi * x));
    const double s = std::sin(x), c = std::cos(x);
    switch (m) {
        case 0: return a * s;
        case 1: return a * (s / x - c);
        default: return a * ((3.0 / (x * x) - 1.0) * s - 3.0 * c / x);
    }
}

}  // namespace

TEST_CASE("gamma_real anchors") {
    CHECK(gamma_real(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-15));
    CHECK(gamma_real(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    double fact = 1.0;
    for (int n = 1; n <= 20; ++n) {
        CHECK(gamma_real(n) == doctest::Approx(fact).epsilon(1e-14));
        fact *= n;
    }
    const double a = 0.3;
    const double reflected = a * (1.0 - a) * pi / std::sin(pi * a);
    CHECK(gamma_real(2.0 - a) * gamma_real(1.0 + a) == doctest::Approx(reflected).epsilon(1e-14));
    CHECK(reflected == doctest::Approx(0.8155).epsilon(1e-4));
}

TEST_CASE("gamma_real matches the C library on [-10, 30]") {
    double worst = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        const double x = -10.0 + 40.0 * i / 4000.0 + 1e-3;
        if (x <= 0.0 && std::fabs(x - std::round(x)) < 1e-9) continue;
        const double ref = std::tgamma(x);
        worst = std::max(worst, std::fabs(gamma_real(x) - ref) / std::fabs(ref));
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("gamma_real rejects poles") {
    for (double x : {0.0, -1.0, -2.0, -7.0}) CHECK_THROWS_AS(gamma_real(x), DomainError);
}

TEST_CASE("bessel_j half-integer closed forms") {
    CHECK(bessel_j(0.5, pi / 2) == doctest::Approx(2.0 / pi).epsilon(1e-15));
    for (int m = 0; m <= 2; ++m) {
        for (double x : {0.05, 0.3, 1.0, 2.5, 7.0, 19.0, 33.0, 80.0, 450.0, 9000.0}) {
            CHECK(std::fabs(bessel_j(m + 0.5, x) - j_half(m, x)) < 1e-12);
        }
    }
}

TEST_CASE("bessel_j small-argument law") {
    for (double nu : {0.0, 0.3, 0.5, 1.0, 1.7, 2.0}) {
        for (double x : {1e-8, 1e-4, 1e-2, 0.05, 0.1}) {
            const double lead = std::pow(0.5 * x, nu) / gamma_real(nu + 1.0);
            const double ratio = bessel_j(nu, x) / lead;
            CHECK(ratio <= 1.0 + 1e-15);
            CHECK(ratio >= 1.0 - x * x);
        }
    }
}

TEST_CASE("bessel_j against the integral-representation oracle") {
    CHECK(std::fabs(bessel_j(0.3, 10.0) - oracle::bessel_j_integral(0.3, 10.0)) < 1e-12);

    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unu(0.0, 20.0), ux(0.0, 100.0);
    int checked = 0;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double nu = unu(rng);
        const double x = std::max(1e-3, ux(rng));
        const double j = bessel_j(nu, x);
        const double o = oracle::bessel_j_integral(nu, x);
        const double scaled = std::fabs(j - o) / (1e-10 * std::fabs(o) + 1e-14);
        worst = std::max(worst, scaled);
        ++checked;
    }
    CHECK(checked == 200);
    CHECK(worst <= 1.0);
}

TEST_CASE("bessel_j oracle agreement on the low-order band") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unu(0.0, 2.0), ux(0.5, 50.0);
    for (int i = 0; i < 200; ++i) {
        const double nu = unu(rng), x = ux(rng);
        const double o = oracle::bessel_j_integral(nu, x);
        CHECK(std::fabs(bessel_j(nu, x) - o) <= 1e-10 * std::fabs(o) + 1e-14);
    }
}

TEST_CASE("bessel_j three-term recurrence across all evaluation regimes") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unu(1.0, 199.0), ulx(-3.0, 4.0);
    for (int i = 0; i < 2000; ++i) {
        const double nu = unu(rng);
        const double x = std::pow(10.0, ulx(rng));
        const double jm = bessel_j(nu - 1.0, x), j0 = bessel_j(nu, x), jp = bessel_j(nu + 1.0, x);
        const double lhs = jm + jp, rhs = 2.0 * nu / x * j0;
        const double scale = std::max({std::fabs(jm), std::fabs(jp), std::fabs(rhs)});
        if (scale < 1e-250) continue;
        CHECK(std::fabs(lhs - rhs) <= 1e-12 * scale);
    }
}

TEST_CASE("bessel_j detailed result reports method and bound") {
    auto s = bessel_j_detailed(2.0, 0.5);
    CHECK(s.method == BesselMethod::power_series);
    auto h = bessel_j_detailed(0.25, 500.0);
    CHECK(h.method == BesselMethod::hankel_asymptotic);
    CHECK(h.error_bound < 1e-14);
    auto c = bessel_j_detailed(40.0, 35.0);
    CHECK(c.method == BesselMethod::continued_fraction);
    CHECK_THROWS_AS(bessel_j(0.5, 0.0), DomainError);
    CHECK_THROWS_AS(bessel_j(-0.5, 1.0), DomainError);
}

TEST_CASE("bessel_j budget exhaustion raises an accuracy error") {
    CHECK_THROWS_AS(bessel_j(0.3, 25.0, AccuracyBudget{1e-14, 1e-13, 10}), AccuracyError);
}

TEST_CASE("bessel_j_ladder matches direct evaluation") {
    for (double mu : {0.0, 0.3, 0.7}) {
        for (double x : {0.01, 0.9, 7.3, 42.0, 140.0}) {
            std::vector<double> lad(260);
            bessel_j_ladder(mu, x, lad);
            for (int n = 0; n < 260; n += 7) {
                const double d = bessel_j(mu + n, x);
                CHECK(std::fabs(lad[n] - d) <= 1e-13 * std::max(1.0, std::fabs(d)) + 1e-300);
                if (std::fabs(d) > 1e-200) CHECK(std::fabs(lad[n] - d) <= 1e-11 * std::fabs(d));
            }
        }
    }
}

TEST_CASE("bessel_k closed form and limits") {
    for (double x : {0.01, 0.5, 3.0, 17.5, 40.0}) {
        const double exact = std::sqrt(pi / (2.0 * x)) * std::exp(-x);
        CHECK(std::abs(bessel_k(0.5, cplx(x, 0.0)) - exact) <= 1e-12 * exact);
    }
    for (double nu : {0.3, 0.7, 1.3}) {
        const cplx z(1e-9, 1e-9);
        const cplx lead = 0.5 * gamma_real(nu) * std::pow(0.5 * z, -nu);
        CHECK(std::abs(bessel_k(nu, z) / lead - 1.0) < 1e-3);
    }
    CHECK(std::abs(bessel_k(0.3, cplx(40.0, 0.0))) < 1e-17);
    CHECK_THROWS_AS(bessel_k(0.3, cplx(0.0, 1.0)), DomainError);
}

TEST_CASE("bessel_k against the oracles") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unu(0.0, 2.0), ulr(-4.0, std::log10(50.0)), uarg(-0.79, 0.79);
    for (int i = 0; i < 150; ++i) {
        const double nu = unu(rng);
        const cplx z = std::polar(std::pow(10.0, ulr(rng)), uarg(rng));
        const cplx k = bessel_k(nu, z);
        const cplx o = oracle::bessel_k_integral(nu, z);
        CHECK(std::abs(k - o) <= 1e-10 * std::abs(o));
    }
    const cplx beta_plus = std::polar(1.0, -pi / 4), beta_minus = std::polar(1.0, pi / 4);
    for (double nu : {0.3, 0.7, 1.3}) {
        for (double r : {0.01, 0.4, 1.0, 2.7}) {
            for (cplx b : {beta_plus, beta_minus}) {
                const cplx k = bessel_k(nu, b * r);
                const cplx s = oracle::bessel_k_series(nu, b * r);
                CHECK(std::abs(k - s) <= 1e-10 * std::abs(s));
            }
        }
    }
}

TEST_CASE("asymptotic coefficient ladder") {
    CHECK(asym_coeff(0.3, 0) == 1.0);
    CHECK(asym_coeff(0.5, 1) == 0.0);
    CHECK(asym_coeff(0.7, 2) == doctest::Approx((0.96 * -7.04) / 128.0).epsilon(1e-14));
    CHECK(asym_coeff(0.7, 2) == doctest::Approx(-0.0528).epsilon(1e-3));
    for (int i = 0; i <= 50; ++i) {
        const double nu = 5.0 * i / 50.0;
        for (int k = 1; k <= 20; ++k) {
            const double lhs = asym_coeff(nu, k) * 8.0 * k;
            const double odd = 2.0 * k - 1.0;
            const double rhs = asym_coeff(nu, k - 1) * (4.0 * nu * nu - odd * odd);
            CHECK(std::fabs(lhs - rhs) <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(rhs));
        }
    }
    auto s = SymbolSeries::make(1.25, 6);
    CHECK(s.depth() == 6);
    CHECK(s.coeffs[0] == 1.0);
    for (int k = 0; k <= 6; ++k) CHECK(s.coeffs[k] == asym_coeff(1.25, k));
}

TEST_CASE("P/Q partial sums") {
    auto z = pq_partial_sums(0.7, 3.0, 0);
    CHECK(z.p == 1.0);
    CHECK(z.q == 0.0);
    for (int n = 0; n < 6; ++n) {
        auto h = pq_partial_sums(0.5, 2.0, n);
        CHECK(h.p == 1.0);
        CHECK(h.q == 0.0);
    }
    // parity: P even and Q odd in the argument
    auto a = pq_partial_sums(1.3, 4.0, 3);
    const double x = 4.0;
    double p = 0.0, q = 0.0;
    for (int k = 0; k <= 3; ++k) p += ((k % 2) ? -1.0 : 1.0) * asym_coeff(1.3, 2 * k) / std::pow(x, 2 * k);
    for (int k = 0; k <= 2; ++k) q += ((k % 2) ? -1.0 : 1.0) * asym_coeff(1.3, 2 * k + 1) / std::pow(x, 2 * k + 1);
    CHECK(a.p == doctest::Approx(p).epsilon(1e-15));
    CHECK(a.q == doctest::Approx(q).epsilon(1e-15));
}

TEST_CASE("Hankel reconstruction from P/Q converges at the omitted-term rate") {
    for (double nu : {0.0, 0.3, 1.7}) {
        for (double x : {30.0, 60.0, 120.0}) {
            const double j = bessel_j(nu, x);
            const double w = x - (0.5 * nu + 0.25) * pi;
            const double amp = std::sqrt(2.0 / (pi * x));
            for (int n = 0; n <= 3; ++n) {
                auto pq = pq_partial_sums(nu, x, n);
                const double approx = amp * (std::cos(w) * pq.p - std::sin(w) * pq.q);
                const double omitted = std::fabs(asym_coeff(nu, 2 * n + 1)) / std::pow(x, 2 * n + 1) +
                                       std::fabs(asym_coeff(nu, 2 * n + 2)) / std::pow(x, 2 * n + 2);
                CHECK(std::fabs(approx - j) <= 2.0 * amp * omitted + 1e-15);
            }
        }
    }
}

TEST_CASE("bessel_j over the full declared range against the oracle") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unu(0.0, 200.0), ulx(-2.0, 4.0);
    for (int i = 0; i < 40; ++i) {
        const double nu = unu(rng);
        const double x = std::pow(10.0, ulx(rng));
        const double o = oracle::bessel_j_integral(nu, x);
        CHECK(std::fabs(bessel_j(nu, x) - o) <= 1e-10 * std::fabs(o) + 1e-13);
    }
}
