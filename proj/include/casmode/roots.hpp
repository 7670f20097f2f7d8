#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "casmode/errors.hpp"
#include "casmode/types.hpp"

namespace casmode {

// Bracketed scalar root solve: bisection with secant / inverse-quadratic
// acceleration (Brent). Derivative-free by design; the dispersion functions
// solved here have branch points where derivatives misbehave. Returns a root
// inside [lo, hi] with bracket width <= max(abs_tol, a few ulp).
template <class F>
double find_root_bracketed(F&& f, double lo, double hi, const RootConfig& cfg = {})
{
    if (!(lo < hi))
        throw DomainError("find_root_bracketed: requires lo < hi");

    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw NoBracketError("find_root_bracketed: f(lo) and f(hi) have the same sign");

    constexpr double eps = std::numeric_limits<double>::epsilon();
    double c = a, fc = fa;
    double d = b - a, e = d;

    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa;
            d = b - a; e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * cfg.abs_tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0)
            return b;

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // interpolation step: secant, or inverse quadratic when possible
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            const double min2 = std::abs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm; e = d; // interpolation rejected: bisect
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw ConvergenceError("find_root_bracketed: max_iter exceeded", b);
}

} // namespace casmode
