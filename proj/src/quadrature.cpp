#include "abwave/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace abwave {

namespace {

GaussRule build_gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) {
                // one more pass to refresh the derivative at the converged node
                p1 = 1.0;
                p2 = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
                }
                pp = n * (z * p1 - p2) / (z * z - 1.0);
                break;
            }
        }
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1 || n > 512) throw DomainError("Gauss-Legendre order out of range");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussRule>(build_gauss_legendre(n));
    return *slot;
}

CompositeRule composite_gauss_legendre(double a, double b, double max_width, int order) {
    if (!(b > a)) throw DomainError("composite rule needs a < b");
    if (!(max_width > 0.0)) throw DomainError("panel width must be positive");
    const GaussRule& g = gauss_legendre(order);
    const long panels = std::max<long>(1, static_cast<long>(std::ceil((b - a) / max_width)));
    const double h = (b - a) / static_cast<double>(panels);
    CompositeRule out;
    out.nodes.reserve(panels * order);
    out.weights.reserve(panels * order);
    for (long p = 0; p < panels; ++p) {
        const double lo = a + h * static_cast<double>(p);
        const double c = lo + 0.5 * h;
        for (int i = 0; i < order; ++i) {
            out.nodes.push_back(c + 0.5 * h * g.nodes[i]);
            out.weights.push_back(0.5 * h * g.weights[i]);
        }
    }
    return out;
}

}  // namespace abwave
