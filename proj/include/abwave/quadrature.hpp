#pragma once

#include "abwave/errors.hpp"
#include "abwave/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <type_traits>
#include <vector>

namespace abwave {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule; rules are cached and immutable after construction.
const GaussRule& gauss_legendre(int n);

// Nodes and weights of a composite Gauss-Legendre rule on [a, b] with panels no wider than max_width.
struct CompositeRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
CompositeRule composite_gauss_legendre(double a, double b, double max_width, int order = 20);

template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;
    long evals = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss7_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T, class F>
void gk15(F& f, double a, double b, T& result, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fc = f(c);
    T k = fc * kronrod_w[7];
    T g = fc * gauss7_w[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kronrod_x[j];
        T f1 = f(c - dx);
        T f2 = f(c + dx);
        k += (f1 + f2) * kronrod_w[j];
        if (j % 2 == 1) g += (f1 + f2) * gauss7_w[j / 2];
    }
    result = k * h;
    err = std::abs((k - g) * h);
}

struct Segment {
    double a, b, err;
    long order;  // insertion order, breaks ties deterministically
};

struct SegmentLess {
    bool operator()(const Segment& x, const Segment& y) const {
        if (x.err != y.err) return x.err < y.err;
        return x.order > y.order;
    }
};

template <class T>
double best_estimate(const T& v) {
    if constexpr (std::is_same_v<T, double>) return v;
    else return std::abs(v);
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
// Throws AccuracyError (carrying the best estimate) when max_evals is exhausted.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, const AccuracyBudget& budget)
    -> QuadResult<decltype(f(a))> {
    using T = decltype(f(a));
    QuadResult<T> out;
    if (a == b) return out;

    struct Entry {
        detail::Segment seg;
        T value;
    };
    std::vector<Entry> store;
    auto cmp = [&store](std::size_t i, std::size_t j) {
        return detail::SegmentLess{}(store[i].seg, store[j].seg);
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> heap(cmp);

    long order = 0;
    auto push = [&](double lo, double hi) {
        T v{};
        double e = 0.0;
        detail::gk15<T>(f, lo, hi, v, e);
        out.evals += 15;
        store.push_back({{lo, hi, e, order++}, v});
        heap.push(store.size() - 1);
        return std::pair<T, double>{v, e};
    };

    auto [v0, e0] = push(a, b);
    T total = v0;
    double total_err = e0;
    while (true) {
        const double tol = budget.tolerance(std::abs(total));
        if (total_err <= tol) break;
        if (out.evals + 30 > budget.max_evals) {
            throw AccuracyError("adaptive quadrature did not converge within the evaluation budget",
                                detail::best_estimate(total), total_err);
        }
        const std::size_t top = heap.top();
        heap.pop();
        const detail::Segment s = store[top].seg;
        const T sv = store[top].value;
        const double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b)) {
            throw AccuracyError("adaptive quadrature reached the resolution limit of double precision",
                                detail::best_estimate(total), total_err);
        }
        auto [vl, el] = push(s.a, mid);
        auto [vr, er] = push(mid, s.b);
        total += vl + vr - sv;
        total_err += el + er - s.err;
        store[top].seg.err = -1.0;  // retired
    }
    // Final sum over the active segments in a fixed order.
    T sum{};
    double err = 0.0;
    std::vector<std::size_t> active;
    active.reserve(heap.size());
    while (!heap.empty()) {
        active.push_back(heap.top());
        heap.pop();
    }
    std::sort(active.begin(), active.end(),
              [&store](std::size_t i, std::size_t j) { return store[i].seg.a < store[j].seg.a; });
    for (std::size_t i : active) {
        sum += store[i].value;
        err += store[i].seg.err;
    }
    out.value = sum;
    out.error = err;
    return out;
}

}  // namespace abwave
