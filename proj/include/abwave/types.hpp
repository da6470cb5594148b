#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace abwave {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Reduce an angle to (-pi, pi].
double reduce_angle(double theta);

// sin(pi x) and cos(pi x) with exact argument reduction.
double sinpi(double x);
double cospi(double x);

class BesselOrder {
public:
    BesselOrder(double nu);  // NOLINT(google-explicit-constructor): orders are plain numbers at call sites
    double value() const { return nu_; }
    operator double() const { return nu_; }  // NOLINT

private:
    double nu_;
};

class Flux {
public:
    explicit Flux(double alpha);
    double value() const { return alpha_; }

private:
    double alpha_;
};

struct PolarPoint {
    double r = 1.0;
    double theta = 0.0;

    static PolarPoint make(double r, double theta);
    double x() const { return r * std::cos(theta); }
    double y() const { return r * std::sin(theta); }
};

// Euclidean distance between two polar points.
double separation(const PolarPoint& a, const PolarPoint& b);

struct SpacetimeQuery {
    double t = 1.0;
    PolarPoint q1;
    PolarPoint q2;

    static SpacetimeQuery make(double t, PolarPoint q1, PolarPoint q2);
    double dtheta() const { return reduce_angle(q1.theta - q2.theta); }
};

struct AccuracyBudget {
    double abs_tol = 1e-14;
    double rel_tol = 1e-13;
    long max_evals = 200000;

    static AccuracyBudget make(double abs_tol, double rel_tol, long max_evals);
    double tolerance(double magnitude) const { return std::max(abs_tol, rel_tol * magnitude); }
};

}  // namespace abwave
