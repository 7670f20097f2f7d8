#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "casmode/errors.hpp"
#include "casmode/roots.hpp"
#include "casmode/types.hpp"

namespace casmode {

struct BranchCurve {
    std::vector<std::pair<double, double>> points; // (param, root)
    bool lost = false;     // root left [domain_lo, domain_hi]
    double lost_param = 0.0;
};

// Track the root of f(x; p) = 0 along a monotone parameter schedule. At each
// step the previous root seeds a local bracket that is widened geometrically;
// if the root cannot be re-bracketed the parameter step is halved, down to a
// floor of 1e-6 of the schedule step. A root drifting outside
// [domain_lo, domain_hi] terminates the curve with the `lost` flag instead of
// throwing: that is a physical branch end, not a numerical failure. Likewise,
// if the step floor is reached after the bracket search has swept the whole
// domain without a sign change, the root family has ceased to exist there
// (e.g. a cavity mode merging into the continuum edge) and the curve ends
// with the flag; BranchLostError is reserved for genuine tracking failures.
template <class F>
BranchCurve continue_branch(F&& f, const std::vector<double>& schedule,
                            double start_root, const RootConfig& cfg = {},
                            double domain_lo = -1e300, double domain_hi = 1e300,
                            double bracket_rel = 1e-3)
{
    if (schedule.size() < 1)
        throw DomainError("continue_branch: empty schedule");

    BranchCurve curve;
    double x = start_root;
    bool domain_swept = false; // last failed bracket search covered the domain

    auto solve_near = [&](double p, double seed, bool& ok) {
        double w = std::max(std::abs(seed) * bracket_rel, cfg.abs_tol * 16.0);
        domain_swept = false;
        for (int grow = 0; grow < 24; ++grow) {
            double lo = seed - w, hi = seed + w;
            if (lo < domain_lo) lo = domain_lo;
            if (hi > domain_hi) hi = domain_hi;
            const double flo = f(lo, p), fhi = f(hi, p);
            if (flo == 0.0) { ok = true; return lo; }
            if (fhi == 0.0) { ok = true; return hi; }
            if ((flo > 0.0) != (fhi > 0.0)) {
                ok = true;
                return find_root_bracketed([&](double t) { return f(t, p); }, lo, hi, cfg);
            }
            if (lo == domain_lo && hi == domain_hi) {
                domain_swept = true;
                break;
            }
            w *= 2.0;
        }
        ok = false;
        return seed;
    };

    bool ok = false;
    x = solve_near(schedule.front(), start_root, ok);
    if (!ok)
        throw BranchLostError("continue_branch: start_root does not bracket a root",
                              schedule.front(), start_root);
    curve.points.emplace_back(schedule.front(), x);

    for (std::size_t i = 1; i < schedule.size(); ++i) {
        const double p_from = schedule[i - 1];
        const double p_to = schedule[i];
        const double full_step = p_to - p_from;
        const double floor_step = std::abs(full_step) * 1e-6;

        double p = p_from;
        double step = full_step;
        while (p != p_to) {
            double p_next = p + step;
            if ((full_step > 0.0 && p_next > p_to) || (full_step < 0.0 && p_next < p_to))
                p_next = p_to;
            const double x_try = solve_near(p_next, x, ok);
            if (ok) {
                p = p_next;
                x = x_try;
                if (x <= domain_lo || x >= domain_hi) {
                    curve.lost = true;
                    curve.lost_param = p;
                    curve.points.emplace_back(p, x);
                    return curve;
                }
            } else {
                step *= 0.5;
                if (std::abs(step) < floor_step) {
                    if (domain_swept) {
                        curve.lost = true;
                        curve.lost_param = p;
                        curve.points.emplace_back(p, x);
                        return curve;
                    }
                    throw BranchLostError("continue_branch: step floor reached", p, x);
                }
            }
        }
        curve.points.emplace_back(p_to, x);
    }
    return curve;
}

} // namespace casmode
