#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qjump {

struct ScalarMaximum {
    double x = 0.0;
    double value = 0.0;
    int evaluations = 0;
};

// Brent's bracketed scalar maximization: parabolic interpolation where it
// helps, golden-section steps otherwise. Assumes a single interior maximum
// on [lo, hi]; converges to |dx| < xtol.
template <class F>
ScalarMaximum maximize_scalar(F&& f, double lo, double hi, double xtol = 1e-8) {
    if (!(hi > lo)) throw std::invalid_argument("maximize_scalar: empty bracket");
    constexpr double kGold = 0.3819660112501051;  // 2 - golden ratio
    constexpr int kMaxIter = 200;

    double a = lo, b = hi;
    double x = a + kGold * (b - a);
    double w = x, v = x;
    double fx = -f(x);
    double fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    int evals = 1;

    for (int iter = 0; iter < kMaxIter; ++iter) {
        const double xm = 0.5 * (a + b);
        const double tol1 = xtol * std::abs(x) + 1e-15;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;

        bool take_golden = true;
        if (std::abs(e) > tol1) {
            // Fit a parabola through (v, w, x) and try its vertex.
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_prev = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = (xm > x) ? tol1 : -tol1;
                take_golden = false;
            }
        }
        if (take_golden) {
            e = (x < xm) ? b - x : a - x;
            d = kGold * e;
        }

        const double u = (std::abs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
        const double fu = -f(u);
        ++evals;
        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return {x, -fx, evals};
}

// Exhaustive maximization over n_points equally spaced samples of [lo, hi],
// endpoints included. Used as the independent check on maximize_scalar.
template <class F>
ScalarMaximum grid_maximum(F&& f, double lo, double hi, int n_points) {
    if (n_points < 2) throw std::invalid_argument("grid_maximum: need at least two points");
    ScalarMaximum best{lo, f(lo), 1};
    for (int i = 1; i < n_points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (n_points - 1);
        const double value = f(x);
        ++best.evaluations;
        if (value > best.value) {
            best.x = x;
            best.value = value;
        }
    }
    return best;
}

}  // namespace qjump
