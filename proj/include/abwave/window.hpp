#pragma once

#include "abwave/types.hpp"

namespace abwave {

enum class WindowShape { gaussian, smooth_bump };

// Smooth frequency cutoff g(lambda) inserted in every lambda-integral.
// gaussian:    exp(-(l - c)^2 / (2 w^2)), zero for l <= 0; requires c >= 6 w.
// smooth_bump: exp(1 - 1/(1 - u^2)), u = (l - c)/(3 w), compact support; requires c > 3 w.
class FrequencyWindow {
public:
    static FrequencyWindow make(WindowShape shape, double center, double halfwidth);
    static FrequencyWindow gaussian(double center, double halfwidth) {
        return make(WindowShape::gaussian, center, halfwidth);
    }
    static FrequencyWindow smooth_bump(double center, double halfwidth) {
        return make(WindowShape::smooth_bump, center, halfwidth);
    }

    WindowShape shape() const { return shape_; }
    double center() const { return center_; }
    double halfwidth() const { return halfwidth_; }

    double operator()(double lambda) const;

    // Integration support; outside it g < 1e-13.
    double lower() const;
    double upper() const;

    // Integral of g over the positive axis.
    double mass() const;

    // G(tau) = int g(l) e^{i l tau} dl.
    cplx time_profile(double tau) const;

    // Half-length of the tau-interval outside which |G| is negligible (< 1e-14 of G(0)).
    double time_reach() const;

    // Throws ConfigurationError unless g >= 1e-3 on the whole band.
    void require_band(double lo, double hi) const;

private:
    FrequencyWindow(WindowShape s, double c, double w) : shape_(s), center_(c), halfwidth_(w) {}

    WindowShape shape_;
    double center_;
    double halfwidth_;
};

}  // namespace abwave
