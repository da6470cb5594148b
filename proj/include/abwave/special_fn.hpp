#pragma once

#include "abwave/types.hpp"

#include <span>
#include <vector>

namespace abwave {

// Gamma function for real x; throws DomainError at 0, -1, -2, ...
double gamma_real(double x);

enum class BesselMethod { power_series, hankel_asymptotic, forward_recurrence, continued_fraction };

struct BesselResult {
    double value = 0.0;
    double error_bound = 0.0;
    BesselMethod method = BesselMethod::power_series;
};

// J_nu(x) for nu >= 0, x > 0.
double bessel_j(BesselOrder nu, double x, const AccuracyBudget& budget = {});
BesselResult bessel_j_detailed(BesselOrder nu, double x, const AccuracyBudget& budget = {});

// out[n] = J_{mu+n}(x) for n = 0 .. out.size()-1, mu >= 0, x > 0.
// Miller backward recurrence normalised against two directly evaluated orders.
void bessel_j_ladder(double mu, double x, std::span<double> out);

// K_nu(z) for Re z > 0.
cplx bessel_k(BesselOrder nu, cplx z, const AccuracyBudget& budget = {});

// a_k(nu) = prod_{j=1..k} (4 nu^2 - (2j-1)^2) / (k! 8^k).
double asym_coeff(BesselOrder nu, int k);

struct SymbolSeries {
    BesselOrder nu;
    std::vector<double> coeffs;  // a_0 .. a_N

    static SymbolSeries make(BesselOrder nu, int depth);
    int depth() const { return static_cast<int>(coeffs.size()) - 1; }
};

struct PQ {
    double p = 1.0;
    double q = 0.0;
};

// P_N = sum_{k=0}^{N} (-1)^k a_{2k}/x^{2k},  Q_N = sum_{k=0}^{N-1} (-1)^k a_{2k+1}/x^{2k+1}.
PQ pq_partial_sums(BesselOrder nu, double x, int n_pairs);

}  // namespace abwave
