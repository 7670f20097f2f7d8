#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "casmode/continuation.hpp"
#include "casmode/errors.hpp"
#include "casmode/optics.hpp"
#include "casmode/roots.hpp"
#include "casmode/types.hpp"

namespace casmode {

// Single-interface surface-plasmon frequency,
//   w_sp^2 = (omega_p^2 + 2 k^2 - sqrt(omega_p^4 + 4 k^4)) / 2.
// With s = sqrt(omega_p^4 + 4 k^4), rationalizing s - 2 k^2 by its conjugate
// gives the all-additions form
//   w_sp^2 = k^2 omega_p^2 (s + 2 k^2 + omega_p^2) / ((s + 2 k^2)(s + omega_p^2)),
// exact algebraically and cancellation-free at every k: naive evaluation
// loses ~eps k^2/omega_p^2 of relative precision at k >> omega_p, which
// would dominate the exponentially small two-interface branch splittings.
// Monotone, w_sp < k, and w_sp -> omega_p/sqrt(2) as k -> infinity. At
// k = omega_p the value is the golden-ratio conjugate (sqrt(5)-1)/2 times
// omega_p.
inline double omega_sp(const MirrorModel& model, double k)
{
    if (k < 0.0)
        throw DomainError("omega_sp: k must be >= 0");
    if (k == 0.0)
        return 0.0;
    const double wp2 = model.omega_p * model.omega_p;
    const double two_k2 = 2.0 * k * k;
    const double s = std::hypot(wp2, two_k2);
    return k * model.omega_p *
           std::sqrt((s + two_k2 + wp2) / ((s + two_k2) * (s + wp2)));
}

// Evanescent decay rate of the single-interface plasmon:
// kappa_sp^2 = k^2 - w_sp^2 = 2 k^4 / (sqrt(omega_p^4 + 4 k^4) + omega_p^2).
inline double kappa_sp(const MirrorModel& model, double k)
{
    const double wp2 = model.omega_p * model.omega_p;
    const double s = std::hypot(wp2, 2.0 * k * k);
    return k * k * std::sqrt(2.0 / (s + wp2));
}

// Largest k whose upper plasmonic branch pierces the light line at
// separation L: k* = omega_p / sqrt(1 + omega_p L / 2).
inline double k_star(const MirrorModel& model, double L)
{
    return model.omega_p / std::sqrt(1.0 + model.omega_p * L / 2.0);
}

namespace detail {

inline double coth_stable(double x)
{
    if (x > 350.0)
        return 1.0;
    return 1.0 + 2.0 / std::expm1(2.0 * x);
}

// tanh(kappa L/2)/kappa continued analytically through kappa^2 = 0 into
// tan(k_z L/2)/k_z; as a function of kappa^2 = k^2 - w^2 this is real-analytic
// across the light line, which is what lets one bracketed solve track the
// upper plasmonic branch through the sector flip.
inline double tanc_half(double kappa2, double L)
{
    const double z = 0.25 * kappa2 * L * L; // (kappa L / 2)^2, signed
    if (std::abs(z) < 1e-6)
        return 0.5 * L * (1.0 - z / 3.0 + 2.0 * z * z / 15.0);
    if (z > 0.0) {
        const double u = std::sqrt(z);
        if (u > 350.0)
            return 1.0 / std::sqrt(kappa2);
        return 0.5 * L * std::tanh(u) / u;
    }
    const double v = std::sqrt(-z);
    return 0.5 * L * std::tan(v) / v;
}

// Upper-branch dispersion function: zero at w+. Valid on (0, omega_p),
// both below and above the light line.
inline double gplus(const MirrorModel& model, double w, double k, double L)
{
    const double kappa2 = (k - w) * (k + w);
    const double wp2 = model.omega_p * model.omega_p;
    const double km = std::sqrt(wp2 + kappa2);
    const double eps = 1.0 - wp2 / (w * w);
    return eps + km * tanc_half(kappa2, L);
}

// Lower-branch dispersion function: zero at w-. Evanescent sector only.
inline double gminus(const MirrorModel& model, double w, double k, double L)
{
    const double kappa2 = (k - w) * (k + w);
    const double kappa = std::sqrt(kappa2);
    const double wp2 = model.omega_p * model.omega_p;
    const double km = std::sqrt(wp2 + kappa2);
    const double eps = 1.0 - wp2 / (w * w);
    return eps * kappa + km * coth_stable(0.5 * kappa * L);
}

// Propagating-sector phase ladder Phi = k_z L + delta; cavity modes sit at
// Phi = m pi (m >= 1 photonic; the m = 0 TM rung is the crossed plasmonic
// branch).
inline double phase_ladder(const MirrorModel& model, Polarization pol,
                           double kz, double k, double L)
{
    const double w = std::hypot(k, kz);
    return kz * L + phase_shift(model, pol, w, k);
}

} // namespace detail

struct PlasmonPair {
    ModePoint minus;
    ModePoint plus;
};

// Solve the coupled-plasmon branches at (k, L). The lower branch w- is
// bracketed in (0, w_sp]; the upper branch w+ in [w_sp, min(omega_p, light
// pole)) on the analytically continued dispersion function, which remains
// regular when the branch crosses the light line at small k L. When
// kappa_sp L is large both gaps underflow and w_sp itself is returned (the
// branches have merged to double precision).
inline PlasmonPair solve_plasmonic(const MirrorModel& model, double k, double L,
                                   const RootConfig& cfg = {})
{
    if (k <= 0.0)
        throw DomainError("solve_plasmonic: requires k > 0 (the k = 0 plasmon has zero frequency)");
    if (L <= 0.0)
        throw DomainError("solve_plasmonic: requires L > 0");

    const double wp = model.omega_p;
    const double ws = omega_sp(model, k);

    auto make_point = [&](ModeBranch branch, double w) {
        return ModePoint{Polarization::TM, branch, k, L, w, classify_sector(w, k)};
    };

    const double ksp = kappa_sp(model, k);
    if (ksp * L > 14.0) {
        // Far-separated regime: both roots sit within O(e^{-kappa_sp L}) of
        // omega_sp, where direct root-finding degenerates into cancellation
        // noise. First-order perturbation of the dispersion functions about
        // the single-interface zero gives the symmetric splitting
        //   w_pm = w_sp -/+ 2 kappa_m e^{-kappa L} / (kappa F'),
        //   F(w) = eps(w) + kappa_m/kappa,
        //   F'(w) = 2 wp^2/w^3 + w wp^2/(kappa^3 kappa_m).
        // Measured against machine-tight bracketed roots, the splitting is
        // accurate to <= 2e-5 relative at kappa_sp L = 14 (decaying like
        // e^{-kappa_sp L} beyond), while below the crossover the bracketed
        // solver still resolves the gap to ~1e-9 relative; integrated
        // quantities weight this region by e^{-kappa_sp L}, so the handover
        // error is ~1e-11 relative or less.
        const double km = std::hypot(wp, ksp);
        const double wp2 = wp * wp;
        const double fprime = 2.0 * wp2 / (ws * ws * ws) + ws * wp2 / (ksp * ksp * ksp * km);
        const double damp = ksp * L > 700.0 ? 0.0 : std::exp(-ksp * L);
        const double gap = 2.0 * km * damp / (ksp * fprime);
        return {make_point(ModeBranch::minus(), ws - gap),
                make_point(ModeBranch::plus(), ws + gap)};
    }

    RootConfig rcfg = cfg;
    rcfg.abs_tol = 0.0; // branch gaps are exponentially small: resolve to machine ulp

    // upper branch
    double wplus;
    {
        const double pole = std::hypot(k, pi / L);
        const double hi = std::min(wp * (1.0 - 1e-13), pole * (1.0 - 1e-12));
        const double lo = ws * (1.0 - 1e-13);
        if (detail::gplus(model, lo, k, L) >= 0.0) {
            wplus = ws; // gap below double-precision resolution
        } else {
            wplus = find_root_bracketed(
                [&](double w) { return detail::gplus(model, w, k, L); }, lo, hi, rcfg);
        }
    }

    // lower branch
    double wminus;
    {
        if (detail::gminus(model, ws, k, L) <= 0.0) {
            wminus = ws;
        } else {
            double lo = ws * 1e-8;
            int guard = 0;
            while (detail::gminus(model, lo, k, L) > 0.0) {
                lo *= 0.1;
                if (++guard > 280)
                    throw NoBracketError("solve_plasmonic: lower branch bracket not found");
            }
            wminus = find_root_bracketed(
                [&](double w) { return detail::gminus(model, w, k, L); }, lo, ws, rcfg);
        }
    }

    return {make_point(ModeBranch::minus(), wminus), make_point(ModeBranch::plus(), wplus)};
}

// All photonic modes of order m = 1..m_max existing at (k, L). Brackets are
// isolated by scanning the phase ladder on a uniform k_z grid of spacing
// pi/(64 L) (fine enough that no rung below the bound c k_z < omega_p can be
// skipped), then refined by the bracketed solver. Orders whose rung exceeds
// the bound are absent; the returned list may therefore be shorter than
// m_max.
inline std::vector<ModePoint> solve_photonic(const MirrorModel& model, Polarization pol,
                                             double k, double L, int m_max,
                                             const RootConfig& cfg = {})
{
    if (k < 0.0 || L <= 0.0 || m_max < 1)
        throw DomainError("solve_photonic: requires k >= 0, L > 0, m_max >= 1");

    const double wp = model.omega_p;
    const double kz_max = wp * (1.0 - 1e-12);
    const double h = pi / (64.0 * L);

    std::vector<ModePoint> out;
    auto ladder = [&](double kz) { return detail::phase_ladder(model, pol, kz, k, L); };

    double kz_prev = std::min(h * 1e-6, kz_max * 0.5);
    double phi_prev = ladder(kz_prev);
    bool done = false;
    while (!done) {
        double kz_next = kz_prev + h;
        if (kz_next >= kz_max) {
            kz_next = kz_max;
            done = true;
        }
        const double phi_next = ladder(kz_next);
        const double lo_phi = std::min(phi_prev, phi_next);
        const double hi_phi = std::max(phi_prev, phi_next);
        const int m_lo = std::max(1, static_cast<int>(std::ceil(lo_phi / pi - 1e-12)));
        const int m_hi = std::min(m_max, static_cast<int>(std::floor(hi_phi / pi + 1e-12)));
        for (int m = m_lo; m <= m_hi; ++m) {
            const double target = m * pi;
            const double fa = phi_prev - target;
            const double fb = phi_next - target;
            if ((fa > 0.0) == (fb > 0.0) && fa != 0.0 && fb != 0.0)
                continue;
            const double kz = find_root_bracketed(
                [&](double z) { return ladder(z) - target; }, kz_prev, kz_next, cfg);
            out.push_back(ModePoint{pol, ModeBranch::photonic(m), k, L,
                                    std::hypot(k, kz), FrequencySector::Propagating});
        }
        kz_prev = kz_next;
        phi_prev = phi_next;
    }

    std::sort(out.begin(), out.end(),
              [](const ModePoint& a, const ModePoint& b) { return a.branch.m < b.branch.m; });
    return out;
}

// Real-valued function whose zeros are the cavity modes at (k, L).
// Propagating sector: the phase form 2 k_z L + 2 delta - 2 m pi per branch
// (sin(k_z L + delta) without a branch, vanishing on every rung at once).
// Evanescent sector (TM only): the loop factor r e^{-kappa L} -/+ 1, the "-"
// form vanishing on the upper branch w+ and the "+" form on the lower w-;
// without a branch, the product r^2 e^{-2 kappa L} - 1 vanishes on both.
// The labeling is pinned by the ordering w- < w+ and the common limit at
// L -> infinity. Note r has its single-interface pole at w_sp, between the
// two zeros.
inline double mode_function(const MirrorModel& model, Polarization pol,
                            double omega, double k, double L,
                            std::optional<ModeBranch> branch = std::nullopt)
{
    if (omega <= 0.0 || k < 0.0 || L <= 0.0)
        throw DomainError("mode_function: requires omega > 0, k >= 0, L > 0");

    if (classify_sector(omega, k) == FrequencySector::Propagating) {
        const double kz = std::sqrt((omega - k) * (omega + k));
        const double delta = phase_shift(model, pol, omega, k);
        if (!branch)
            return std::sin(kz * L + delta);
        int m = 0;
        switch (branch->kind) {
        case ModeBranch::Kind::Photonic:
            m = branch->m;
            break;
        case ModeBranch::Kind::PlasmonPlus:
            m = 0; // the crossed branch is the m = 0 rung
            break;
        default:
            throw NoModeError("mode_function: the lower plasmonic branch never propagates");
        }
        return 2.0 * (kz * L + delta - m * pi);
    }

    if (pol == Polarization::TE)
        throw NoModeError("mode_function: TE admits no evanescent modes");

    const double kappa = std::sqrt((k - omega) * (k + omega));
    const double km = std::hypot(model.omega_p, kappa);
    const double eps = dielectric(model, omega);
    const double r = (km - eps * kappa) / (km + eps * kappa);
    const double damp = kappa * L > 700.0 ? 0.0 : std::exp(-kappa * L);
    if (!branch)
        return r * r * damp * damp - 1.0;
    switch (branch->kind) {
    case ModeBranch::Kind::PlasmonPlus:
        return r * damp - 1.0;
    case ModeBranch::Kind::PlasmonMinus:
        return r * damp + 1.0;
    default:
        throw NoModeError("mode_function: photonic modes do not extend into the evanescent sector");
    }
}

// Track one branch against a monotone L schedule, reusing each root as the
// seed for the next distance (continuation). Plasmonic branches run on the
// analytically continued dispersion functions, so the upper branch passes
// through the light line without special handling; photonic branches run on
// the phase ladder in k_z and terminate (BranchLost marker) where the mode
// is not yet born. Points record (k L / pi, omega).
inline DispersionCurve dispersion_sweep(const MirrorModel& model, ModeBranch branch,
                                        Polarization pol, double k,
                                        const std::vector<double>& L_schedule,
                                        const RootConfig& cfg = {})
{
    if (L_schedule.size() < 2)
        throw DomainError("dispersion_sweep: schedule needs at least 2 points");
    for (std::size_t i = 1; i < L_schedule.size(); ++i)
        if ((L_schedule[i] - L_schedule[i - 1]) * (L_schedule[1] - L_schedule[0]) <= 0.0)
            throw DomainError("dispersion_sweep: schedule must be strictly monotone");

    DispersionCurve curve;
    curve.branch = branch;
    curve.pol = pol;
    curve.fixed_k = k;

    const double wp = model.omega_p;

    if (branch.kind == ModeBranch::Kind::PlasmonPlus ||
        branch.kind == ModeBranch::Kind::PlasmonMinus) {
        if (pol == Polarization::TE)
            throw NoModeError("dispersion_sweep: plasmonic branches are TM only");
        const PlasmonPair seed_pair = solve_plasmonic(model, k, L_schedule.front(), cfg);
        const bool plus = branch.kind == ModeBranch::Kind::PlasmonPlus;
        const double seed = plus ? seed_pair.plus.omega : seed_pair.minus.omega;
        auto f = [&](double w, double L) {
            return plus ? detail::gplus(model, w, k, L) : detail::gminus(model, w, k, L);
        };
        const double dom_hi = plus ? wp * (1.0 - 1e-14) : std::min(k, wp);
        const BranchCurve bc = continue_branch(f, L_schedule, seed, cfg, 0.0, dom_hi);
        for (const auto& [L, w] : bc.points)
            curve.points.emplace_back(k * L / pi, w);
        curve.termination = bc.lost ? DispersionCurve::Termination::BranchLost
                                    : DispersionCurve::Termination::Completed;
        return curve;
    }

    // photonic: continuation on the phase ladder, root variable k_z
    const int m = branch.m;
    auto f = [&](double kz, double L) {
        return detail::phase_ladder(model, pol, kz, k, L) - m * pi;
    };
    std::vector<double> schedule;
    double seed = 0.0;
    for (double L : L_schedule) {
        if (schedule.empty()) {
            const auto pts = solve_photonic(model, pol, k, L, m, cfg);
            for (const auto& p : pts)
                if (p.branch.m == m) {
                    seed = std::sqrt((p.omega - k) * (p.omega + k));
                    break;
                }
            if (seed == 0.0)
                continue; // mode not born yet at this distance
        }
        schedule.push_back(L);
    }
    if (schedule.empty()) {
        curve.termination = DispersionCurve::Termination::BranchLost;
        return curve;
    }
    const BranchCurve bc =
        continue_branch(f, schedule, seed, cfg, 0.0, wp * (1.0 - 1e-12));
    for (const auto& [L, kz] : bc.points)
        curve.points.emplace_back(k * L / pi, std::hypot(k, kz));
    curve.termination = bc.lost ? DispersionCurve::Termination::BranchLost
                                : DispersionCurve::Termination::Completed;
    return curve;
}

} // namespace casmode
