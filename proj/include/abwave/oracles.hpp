#pragma once

// Slow reference evaluations used only by tests and the verification suite.

#include "abwave/types.hpp"

namespace abwave::oracle {

// J_nu(x) from the Schlaefli integral representation, adaptive quadrature.
double bessel_j_integral(double nu, double x);

// K_nu(z) = sqrt(pi) (z/2)^nu / Gamma(nu+1/2) int_1^inf e^{-z t} (t^2-1)^{nu-1/2} dt.
cplx bessel_k_integral(double nu, cplx z);

// K_nu(z) = (pi/2)(I_{-nu}(z) - I_nu(z)) / sin(nu pi); non-integer nu, modest |z|.
cplx bessel_k_series(double nu, cplx z);

}  // namespace abwave::oracle
