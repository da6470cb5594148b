#include "abwave/types.hpp"

#include "abwave/errors.hpp"

#include <cmath>
#include <string>

namespace abwave {

double reduce_angle(double theta) {
    if (!std::isfinite(theta)) throw DomainError("angle must be finite");
    double r = std::remainder(theta, two_pi);  // [-pi, pi]
    if (r <= -pi) r += two_pi;
    return r;
}

double sinpi(double x) {
    double r = std::fmod(x, 2.0);
    if (r > 1.0) r -= 2.0;
    if (r <= -1.0) r += 2.0;
    if (r > 0.5) r = 1.0 - r;
    else if (r < -0.5) r = -1.0 - r;
    return std::sin(pi * r);
}

double cospi(double x) {
    double r = std::fabs(std::fmod(x, 2.0));
    if (r > 1.0) r = 2.0 - r;  // cos symmetric about 1
    if (r == 0.5) return 0.0;
    if (r > 0.5) return -std::cos(pi * (1.0 - r));
    return std::cos(pi * r);
}

BesselOrder::BesselOrder(double nu) : nu_(nu) {
    if (!std::isfinite(nu) || nu < 0.0)
        throw DomainError("Bessel order must be finite and non-negative, got " + std::to_string(nu));
}

Flux::Flux(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("flux must lie in the open interval (0,1), got " + std::to_string(alpha));
}

PolarPoint PolarPoint::make(double r, double theta) {
    if (!std::isfinite(r) || r <= 0.0) throw DomainError("radius must be positive and finite");
    return PolarPoint{r, reduce_angle(theta)};
}

double separation(const PolarPoint& a, const PolarPoint& b) {
    double d = a.theta - b.theta;
    double s = std::sin(0.5 * d);
    double dr = a.r - b.r;
    return std::sqrt(dr * dr + 4.0 * a.r * b.r * s * s);
}

SpacetimeQuery SpacetimeQuery::make(double t, PolarPoint q1, PolarPoint q2) {
    if (!std::isfinite(t) || t <= 0.0) throw DomainError("time must be positive and finite");
    return SpacetimeQuery{t, PolarPoint::make(q1.r, q1.theta), PolarPoint::make(q2.r, q2.theta)};
}

AccuracyBudget AccuracyBudget::make(double abs_tol, double rel_tol, long max_evals) {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("tolerances must be positive");
    if (max_evals <= 0) throw DomainError("evaluation budget must be positive");
    return AccuracyBudget{abs_tol, rel_tol, max_evals};
}

}  // namespace abwave
