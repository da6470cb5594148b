#include "abwave/window.hpp"

#include "abwave/errors.hpp"
#include "abwave/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace abwave {

FrequencyWindow FrequencyWindow::make(WindowShape shape, double center, double halfwidth) {
    if (!(halfwidth > 0.0) || !std::isfinite(halfwidth)) throw DomainError("window halfwidth must be positive");
    if (!(center > 0.0) || !std::isfinite(center)) throw DomainError("window center must be positive");
    if (shape == WindowShape::gaussian && center < 6.0 * halfwidth)
        throw DomainError("gaussian window needs center >= 6 * halfwidth");
    if (shape == WindowShape::smooth_bump && center <= 3.0 * halfwidth)
        throw DomainError("smooth-bump window needs center > 3 * halfwidth");
    return FrequencyWindow(shape, center, halfwidth);
}

double FrequencyWindow::operator()(double lambda) const {
    if (lambda <= 0.0) return 0.0;
    const double d = lambda - center_;
    if (shape_ == WindowShape::gaussian) return std::exp(-0.5 * d * d / (halfwidth_ * halfwidth_));
    const double u = d / (3.0 * halfwidth_);
    if (std::fabs(u) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

double FrequencyWindow::lower() const {
    if (shape_ == WindowShape::gaussian) return std::max(0.0, center_ - 8.0 * halfwidth_);
    return center_ - 3.0 * halfwidth_;
}

double FrequencyWindow::upper() const {
    if (shape_ == WindowShape::gaussian) return center_ + 8.0 * halfwidth_;
    return center_ + 3.0 * halfwidth_;
}

double FrequencyWindow::mass() const {
    if (shape_ == WindowShape::gaussian)
        return halfwidth_ * std::sqrt(pi / 2.0) * std::erfc(-center_ / (std::sqrt(2.0) * halfwidth_));
    auto r = integrate_adaptive([this](double l) { return (*this)(l); }, lower(), upper(),
                                AccuracyBudget{1e-15, 1e-14, 100000});
    return r.value;
}

cplx FrequencyWindow::time_profile(double tau) const {
    if (shape_ == WindowShape::gaussian && center_ >= 9.0 * halfwidth_) {
        const double s = halfwidth_;
        return s * std::sqrt(two_pi) * std::exp(cplx(-0.5 * s * s * tau * tau, center_ * tau));
    }
    const double width = std::min(0.25 * halfwidth_, 2.0 / (std::fabs(tau) + 1e-300));
    const CompositeRule rule = composite_gauss_legendre(lower(), upper(), width, 20);
    cplx sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double l = rule.nodes[i];
        sum += rule.weights[i] * (*this)(l) * std::exp(cplx(0.0, l * tau));
    }
    return sum;
}

double FrequencyWindow::time_reach() const {
    if (shape_ == WindowShape::gaussian) return 8.5 / halfwidth_;
    return 40.0 / halfwidth_;
}

void FrequencyWindow::require_band(double lo, double hi) const {
    if (!(hi > lo) || !(lo > 0.0)) throw ConfigurationError("fit band must satisfy 0 < lo < hi");
    if ((*this)(lo) < 1e-3 || (*this)(hi) < 1e-3) {
        std::ostringstream os;
        os << "fit band [" << lo << ", " << hi << "] extends beyond the window support (g < 1e-3 at an edge)";
        throw ConfigurationError(os.str());
    }
}

}  // namespace abwave
