#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "casmode/errors.hpp"
#include "casmode/types.hpp"

namespace casmode {

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;
};

namespace detail {

// 15-point Kronrod / 7-point Gauss pair on [-1, 1].
struct GK15 {
    static constexpr double xgk[8] = {
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144838258730,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000};
    static constexpr double wgk[8] = {
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714};
    static constexpr double wg[4] = {
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327};
};

template <class F>
inline void gk15(F& f, double a, double b, double& value, double& err)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * GK15::xgk[i]);
        fv[14 - i] = f(c + h * GK15::xgk[i]);
    }
    fv[7] = f(c);
    double k = GK15::wgk[7] * fv[7];
    double g = GK15::wg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        k += GK15::wgk[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1)
            g += GK15::wg[i / 2] * (fv[i] + fv[14 - i]);
    }
    value = k * h;
    err = std::abs((k - g) * h);
}

} // namespace detail

// Adaptive bisection with a Gauss-Kronrod 15(7) rule on each panel,
// refining worst-estimate-first against a single global budget
// max(abs_tol, rel_tol |I|). A split that fails to shrink a panel's error
// has hit the integrand's roundoff floor (e.g. root-solver noise inside the
// integrand); such panels are retired rather than split further, so noise
// cannot consume the subdivision budget, and their floor remains in the
// returned error estimate. Fixed refinement order keeps results
// deterministic.
template <class F>
IntegralResult integrate_adaptive(F&& f, double a, double b,
                                  const QuadratureConfig& cfg = {})
{
    if (a == b)
        return {0.0, 0.0};

    struct Panel { double a, b, value, err; };
    auto worse = [](const Panel& x, const Panel& y) {
        return x.err != y.err ? x.err < y.err : x.a > y.a;
    };

    double v0, e0;
    detail::gk15(f, a, b, v0, e0);
    std::vector<Panel> active{{a, b, v0, e0}}; // heap, largest error on top
    double retired_value = 0.0, retired_err = 0.0;
    double active_value = v0, active_err = e0;

    for (int used = 0;; ++used) {
        const double total = retired_value + active_value;
        const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
        if (retired_err + active_err <= tol || active.empty())
            return {total, retired_err + active_err};
        if (used >= cfg.max_subdivisions)
            throw AccuracyError("integrate_adaptive: max_subdivisions exceeded",
                                total, retired_err + active_err);

        std::pop_heap(active.begin(), active.end(), worse);
        const Panel p = active.back();
        active.pop_back();
        active_value -= p.value;
        active_err -= p.err;

        const double m = 0.5 * (p.a + p.b);
        double vl, el, vr, er;
        detail::gk15(f, p.a, m, vl, el);
        detail::gk15(f, m, p.b, vr, er);
        // Roundoff floor: splitting does not reduce the error AND both halves
        // are equally bad. An unresolved smooth feature also resists error
        // reduction for a few levels, but concentrates the error in one
        // half, so it keeps being refined.
        const bool stalled = (el + er >= 0.99 * p.err &&
                              std::min(el, er) >= 0.3 * std::max(el, er)) ||
                             std::abs(p.b - p.a) < 1e-14 * std::abs(b - a);
        if (stalled) {
            retired_value += vl + vr;
            retired_err += el + er;
        } else {
            active.push_back({p.a, m, vl, el});
            std::push_heap(active.begin(), active.end(), worse);
            active.push_back({m, p.b, vr, er});
            std::push_heap(active.begin(), active.end(), worse);
            active_value += vl + vr;
            active_err += el + er;
        }
    }
}

// Semi-infinite integral by geometric panel growth: panels [a, a+s],
// [a+s, a+3s], ... with doubling width. The integrands used here decay
// exponentially with a known scale, so truncation is robust: integration
// stops once `tail_cutoff_decades` consecutive panels beyond `min_upper`
// contribute below tolerance. The magnitude of the last panel is folded into
// the error estimate as the truncation term.
template <class F>
IntegralResult integrate_semi_infinite(F&& f, double a, double scale,
                                       const QuadratureConfig& cfg = {},
                                       double min_upper = 0.0)
{
    if (scale <= 0.0)
        throw DomainError("integrate_semi_infinite: scale must be > 0");

    double lo = a;
    double width = scale;
    double total = 0.0, total_err = 0.0, last_mag = 0.0;
    int consecutive_small = 0;
    const int needed = std::max(cfg.tail_cutoff_decades, 1);

    for (int panel = 0; panel < 200; ++panel) {
        // Each panel is resolved against the accuracy goal of the running
        // total, not its own magnitude: far-tail panels are exponentially
        // small and would otherwise be starved into chasing evaluation noise.
        QuadratureConfig pcfg = cfg;
        pcfg.abs_tol = std::max(cfg.abs_tol, 0.1 * cfg.rel_tol * std::abs(total));
        const IntegralResult r = integrate_adaptive(f, lo, lo + width, pcfg);
        total += r.value;
        total_err += r.error;
        last_mag = std::abs(r.value);

        const double small = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
        if (last_mag <= small && lo + width >= min_upper) {
            if (++consecutive_small >= needed)
                return {total, total_err + last_mag};
        } else {
            consecutive_small = 0;
        }
        lo += width;
        width *= 2.0;
    }
    throw AccuracyError("integrate_semi_infinite: tail did not decay", total,
                        total_err + last_mag);
}

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1], computed once per order by Newton
// iteration on the Legendre recurrence (machine precision, deterministic).
inline const std::vector<std::pair<double, double>>& gauss_legendre(int n)
{
    static std::vector<std::pair<double, double>> cache24;
    auto build = [](int order) {
        std::vector<std::pair<double, double>> out(order);
        for (int i = 0; i < (order + 1) / 2; ++i) {
            double x = std::cos(pi * (i + 0.75) / (order + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= order; ++j) {
                    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = order * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16)
                    break;
            }
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            out[i] = {-x, w};
            out[order - 1 - i] = {x, w};
        }
        return out;
    };
    if (n == 24) {
        if (cache24.empty())
            cache24 = build(24);
        return cache24;
    }
    static thread_local std::vector<std::pair<double, double>> other;
    other = build(n);
    return other;
}

} // namespace detail

// Fixed-order Gauss-Legendre panel; no error estimate (used on subintervals
// already isolated between breakpoints of piecewise-smooth integrands).
template <class F>
double integrate_gauss(F&& f, double a, double b, int order = 24)
{
    const auto& nw = detail::gauss_legendre(order);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (const auto& [x, w] : nw)
        s += w * f(c + h * x);
    return s * h;
}

} // namespace casmode
