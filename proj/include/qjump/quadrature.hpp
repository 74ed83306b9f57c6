#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qjump {

namespace quad_detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1]. Nodes and weights are
// the standard QUADPACK values; nodes are stored as nonnegative abscissae.
inline constexpr double kNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
double gk15(const F& f, double a, double b, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f_mid = f(mid);
    double kronrod = kKronrodWeights[7] * f_mid;
    double gauss = kGaussWeights[3] * f_mid;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kNodes[i];
        const double pair = f(mid - dx) + f(mid + dx);
        kronrod += kKronrodWeights[i] * pair;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    err = std::abs(kronrod - gauss);
    return kronrod;
}

}  // namespace quad_detail

// Adaptive bisection on a Gauss-Kronrod 7/15 pair. A segment is accepted
// when its error estimate fits the share of abs_tol proportional to its
// length, so the accumulated error stays below abs_tol. Throws when the
// refinement budget is exhausted.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol, int max_segments = 100000) {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate: abs_tol must be positive");
    if (a == b) return 0.0;

    struct Segment {
        double a, b;
    };
    const double span = std::abs(b - a);
    const double min_width = span * 1e-14;
    std::vector<Segment> stack{{a, b}};
    stack.reserve(64);
    double total = 0.0;
    int segments = 1;
    while (!stack.empty()) {
        const Segment seg = stack.back();
        stack.pop_back();
        double err = 0.0;
        const double val = quad_detail::gk15(f, seg.a, seg.b, err);
        const double width = std::abs(seg.b - seg.a);
        if (err <= abs_tol * (width / span) || width <= min_width) {
            total += val;
            continue;
        }
        if ((segments += 1) > max_segments)
            throw std::runtime_error("integrate: refinement budget exhausted");
        const double mid = 0.5 * (seg.a + seg.b);
        stack.push_back({seg.a, mid});
        stack.push_back({mid, seg.b});
    }
    return total;
}

}  // namespace qjump
