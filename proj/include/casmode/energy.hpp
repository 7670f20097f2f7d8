#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <vector>

#include "casmode/errors.hpp"
#include "casmode/fit.hpp"
#include "casmode/modes.hpp"
#include "casmode/optics.hpp"
#include "casmode/parallel.hpp"
#include "casmode/quadrature.hpp"
#include "casmode/roots.hpp"
#include "casmode/types.hpp"

namespace casmode {

// Perfect-mirror Casimir energy per unit area, -pi^2/(720 L^3).
inline double ideal_casimir(double L)
{
    if (L <= 0.0)
        throw DomainError("ideal_casimir: requires L > 0");
    return -pi * pi / (720.0 * L * L * L);
}

// Attribution rule for the upper plasmonic branch where it crosses the light
// line: Full keeps the whole branch in the plasmonic set; ClipAtLightLine
// caps its frequency at ck inside the integrand, crediting the propagating
// excess to the photonic set instead.
enum class PlasmonSplit { Full, ClipAtLightLine };

// Total Casimir energy per unit area from the imaginary-axis (dispersive)
// representation in polar coordinates q = sqrt(k^2 + xi^2), theta:
//   E/A = (1/4 pi^2) Int q^2 dq Int_0^{pi/2} cos(theta) dtheta
//         Sum_pol ln(1 - r_pol^2 e^{-2qL}),
// with r_pol evaluated at xi = q sin(theta), k = q cos(theta). The TE
// coefficient depends on q only; the TM one is regular at theta -> 0 where
// r_TM^2 -> 1. Used as the independent reference against which the mode
// decomposition is checked.
inline IntegralResult lifshitz_total(const MirrorModel& model, double L,
                                     const QuadratureConfig& qcfg = {})
{
    if (L <= 0.0)
        throw DomainError("lifshitz_total: requires L > 0");

    const double wp = model.omega_p;
    auto inner_q = [&](double q) {
        const double damp = 2.0 * q * L > 745.0 ? 0.0 : std::exp(-2.0 * q * L);
        if (damp == 0.0)
            return 0.0;
        const double Q = std::hypot(q, wp);
        const double rte = (q - Q) / (q + Q);
        const double te = std::log1p(-rte * rte * damp);

        auto f_theta = [&](double th) {
            const double s = std::sin(th);
            const double c = std::cos(th);
            const double xi = q * s;
            double rtm2 = 1.0; // theta -> 0 limit
            if (xi > 0.0) {
                const double eps = dielectric_imag_axis(model, xi);
                const double rtm = (eps * q - Q) / (eps * q + Q);
                rtm2 = rtm * rtm;
            }
            return c * std::log1p(-rtm2 * damp);
        };
        const IntegralResult tm = integrate_adaptive(f_theta, 0.0, 0.5 * pi, qcfg);
        return q * q * (te + tm.value);
    };

    const IntegralResult outer =
        integrate_semi_infinite(inner_q, 0.0, 0.5 / L, qcfg, 15.0 / L);
    const double pref = 1.0 / (4.0 * pi * pi);
    return {pref * outer.value, pref * (outer.error + qcfg.rel_tol * std::abs(outer.value))};
}

struct PlasmonicEnergy {
    double value = 0.0;      // plus_part + minus_part
    double plus_part = 0.0;  // upper-branch shift relative to 2 x omega_sp split equally
    double minus_part = 0.0;
    double error = 0.0;
};

namespace detail {

template <class G>
IntegralResult plasmon_branch_integral(const MirrorModel& model, double L,
                                       const NumericsConfig& cfg, G&& gap)
{
    auto f = [&](double k) { return k * gap(k); };
    const double scale = std::max(1.0 / L, 0.05 * model.omega_p);
    const IntegralResult r =
        integrate_semi_infinite(f, 0.0, scale, cfg.quad, 30.0 / L);
    const double pref = 1.0 / (4.0 * pi);
    return {pref * r.value, pref * (r.error + cfg.quad.rel_tol * std::abs(r.value))};
}

} // namespace detail

// Zero-point energy carried by the two coupled-plasmon branches relative to
// two isolated interfaces:
//   E_pl/A = (1/4 pi) Int k dk [w+(k) + w-(k) - 2 w_sp(k)].
// Negative (binding) at short distance, positive at large distance where the
// lower branch's shift dominates. With ClipAtLightLine the upper branch
// enters as min(w+, ck).
inline PlasmonicEnergy plasmonic_energy(const MirrorModel& model, double L,
                                        const NumericsConfig& cfg = {},
                                        PlasmonSplit split = PlasmonSplit::Full)
{
    if (L <= 0.0)
        throw DomainError("plasmonic_energy: requires L > 0");

    const IntegralResult plus = detail::plasmon_branch_integral(
        model, L, cfg, [&](double k) {
            double w = solve_plasmonic(model, k, L, cfg.root).plus.omega;
            if (split == PlasmonSplit::ClipAtLightLine)
                w = std::min(w, k);
            return w - omega_sp(model, k);
        });
    const IntegralResult minus = detail::plasmon_branch_integral(
        model, L, cfg, [&](double k) {
            return solve_plasmonic(model, k, L, cfg.root).minus.omega - omega_sp(model, k);
        });

    PlasmonicEnergy out;
    out.plus_part = plus.value;
    out.minus_part = minus.value;
    out.value = plus.value + minus.value;
    out.error = std::hypot(plus.error, minus.error);
    return out;
}

// Photonic remainder by subtraction: everything in the total that is not
// carried by the two plasmonic branches (per the chosen split rule).
inline IntegralResult photonic_energy(const MirrorModel& model, double L,
                                      const NumericsConfig& cfg = {},
                                      PlasmonSplit split = PlasmonSplit::Full)
{
    const IntegralResult total = lifshitz_total(model, L, cfg.quad);
    const PlasmonicEnergy pl = plasmonic_energy(model, L, cfg, split);
    return {total.value - pl.value, std::hypot(total.error, pl.error)};
}

namespace detail {

// Phase of the round-trip dispersion function D = 1 - r^2 e^{2 i k_z L} on
// the real frequency axis (propagating sector). The Fresnel ratio is taken
// vacuum-referenced with Im(k_zm) >= 0, pairing with the e^{+2 i k_z L}
// round-trip factor; only r^2 enters. Below the binding edge (k_z < omega_p)
// |r| = 1 and the principal value jumps by pi exactly at the cavity modes;
// above it |r| < 1 keeps D in the right half plane, so the principal value
// is the physically accumulated (sawtooth) phase with no spurious wraps.
inline double loop_phase(const MirrorModel& model, Polarization pol,
                         double omega, double k, double L, bool perfect)
{
    const double kz = std::sqrt((omega - k) * (omega + k));
    std::complex<double> r;
    if (perfect) {
        r = pol == Polarization::TE ? -1.0 : 1.0;
    } else {
        const double wp = model.omega_p;
        const std::complex<double> kzm =
            kz >= wp ? std::complex<double>(std::sqrt((kz - wp) * (kz + wp)), 0.0)
                     : std::complex<double>(0.0, std::sqrt((wp - kz) * (wp + kz)));
        const double c = pol == Polarization::TE ? 1.0 : 1.0 - (wp * wp) / (omega * omega);
        r = (c * kz - kzm) / (c * kz + kzm);
    }
    const std::complex<double> D =
        1.0 - r * r * std::exp(std::complex<double>(0.0, 2.0 * kz * L));
    return std::atan2(D.imag(), D.real());
}

} // namespace detail

// Photonic zero-point energy summed directly over the propagating spectrum,
// as a frequency integral of the round-trip phase at fixed k:
//   E_ph/A = (1/4 pi^2) Int k dk Sum_pol [ Int_{ck}^{Omega} W domega
//            - pi (w+ - ck) (TM, crossed branch only) ],
// where W is the principal phase above. The integrand is split at every
// discrete mode (phase steps of pi), at the binding edge omega^2 = k^2 +
// omega_p^2, and at the perfect-mirror rungs sqrt(k^2 + (m pi/L)^2) where the
// sawtooth has teeth. The subtracted term removes the rung occupied by the
// crossed upper plasmonic branch, which the split assigns to the plasmonic
// set. The cutoff Omega = sqrt(k^2 + K^2) oscillates with period pi/L in K,
// so the integral is averaged over four cutoffs spaced pi/(2L) (two
// oscillation periods), which cancels the ripple far faster than pushing K
// up; K starts at 12 omega_p where the mirrors are already transparent.
// Expensive relative to the subtraction route; intended as a cross-check at
// moderate L.
inline IntegralResult photonic_energy_direct(const MirrorModel& model, double L,
                                             const NumericsConfig& cfg = {},
                                             bool perfect = false)
{
    if (L <= 0.0)
        throw DomainError("photonic_energy_direct: requires L > 0");

    const double wp = model.omega_p;
    const int navg = 4;
    const double kz_cut0 = 12.0 * wp;

    // This route is a structural cross-check against the subtraction route
    // (agreement at the 1e-5 level); tolerances are set for that target, not
    // for the tighter cfg.quad, whose budget the sawtooth integrand would
    // burn pointlessly. The inner phase quadrature runs two decades tighter
    // than the outer panels so its jitter stays below their budget.
    QuadratureConfig wq; // per-panel phase quadrature
    wq.rel_tol = 1e-9;
    wq.abs_tol = 1e-14;
    QuadratureConfig kq; // outer transverse-wavevector panels
    kq.rel_tol = 1e-7;
    kq.abs_tol = 1e-12;

    double err_acc = 0.0;

    auto inner = [&](double k) {
        double s = 0.0;
        for (Polarization pol : {Polarization::TE, Polarization::TM}) {
            auto W = [&](double om) { return detail::loop_phase(model, pol, om, k, L, perfect); };

            // cutoff set; hi[0] is the lowest
            double hi[navg];
            for (int j = 0; j < navg; ++j)
                hi[j] = std::hypot(k, kz_cut0 + j * pi / (2.0 * L));

            std::vector<double> pts;
            pts.push_back(k * (1.0 + 1e-13));
            double crossed_omega = -1.0;
            if (!perfect) {
                const int m_max = static_cast<int>(wp * L / pi) + 3;
                for (const ModePoint& mp : solve_photonic(model, pol, k, L, m_max, cfg.root)) {
                    pts.push_back(mp.omega * (1.0 - 1e-12));
                    pts.push_back(mp.omega * (1.0 + 1e-12));
                }
                if (pol == Polarization::TM) {
                    const PlasmonPair pp = solve_plasmonic(model, k, L, cfg.root);
                    if (pp.plus.sector == FrequencySector::Propagating) {
                        crossed_omega = pp.plus.omega;
                        pts.push_back(crossed_omega * (1.0 - 1e-12));
                        pts.push_back(crossed_omega * (1.0 + 1e-12));
                    }
                }
                pts.push_back(std::hypot(k, wp)); // binding edge
            }
            for (int m = 1;; ++m) {
                const double om = std::hypot(k, m * pi / L);
                if (om >= hi[navg - 1])
                    break;
                pts.push_back(om);
            }
            std::sort(pts.begin(), pts.end());

            // Panels narrower than this are the +-1e-12 slivers hugging a
            // phase jump; their contribution is O(pi * width) and skipping
            // them avoids pointless refinement across the discontinuity.
            const double sliver = 1e-11 * hi[navg - 1];
            auto panel = [&](double lo_edge, double hi_edge) {
                if (hi_edge - lo_edge <= sliver)
                    return 0.0;
                const IntegralResult r = integrate_adaptive(W, lo_edge, hi_edge, wq);
                err_acc += r.error;
                return r.value;
            };

            // common part up to the lowest cutoff
            double base = 0.0;
            double a = k;
            for (double p : pts) {
                if (p <= k || p >= hi[0])
                    continue;
                base += panel(a, p);
                a = p;
            }
            base += panel(a, hi[0]);

            // per-cutoff extensions, averaged
            double acc = base;
            double ext = 0.0;
            a = hi[0];
            for (int j = 1; j < navg; ++j) {
                double b = a;
                for (double p : pts)
                    if (p > a && p < hi[j] && p > b) {
                        ext += panel(b, p);
                        b = p;
                    }
                ext += panel(b, hi[j]);
                acc += base + ext;
                a = hi[j];
            }
            double J = acc / navg;
            if (crossed_omega > 0.0)
                J -= pi * (crossed_omega - k);
            s += J;
        }
        return k * s;
    };

    // outer k integral: fixed-width panels (the tooth density is uniform in
    // k), stopped once two consecutive panels are negligible past the window
    // where the mirrors still reflect.
    const double h = std::max(pi / L, 0.5 * wp);
    const double k_stop = 40.0 / L + 10.0 * wp;
    double a = 1e-9;
    double val = 0.0;
    int n_small = 0;
    for (int panel = 0; panel < 100000; ++panel) {
        const IntegralResult r = integrate_adaptive(inner, a, a + h, kq);
        val += r.value;
        err_acc += r.error;
        a += h;
        if (std::abs(r.value) < 1e-11 * std::max(std::abs(val), 1e-12))
            ++n_small;
        else
            n_small = 0;
        if (n_small >= 2 || a > k_stop)
            break;
    }
    const double pref = 1.0 / (4.0 * pi * pi);
    return {pref * val, pref * err_acc};
}

// Reduction factor breakdown at one separation: all energies normalized by
// the perfect-mirror value at the same L.
inline EnergyBreakdown energy_breakdown(const MirrorModel& model, double L,
                                        const NumericsConfig& cfg = {},
                                        PlasmonSplit split = PlasmonSplit::Full)
{
    const double ec = ideal_casimir(L);
    const IntegralResult total = lifshitz_total(model, L, cfg.quad);
    const PlasmonicEnergy pl = plasmonic_energy(model, L, cfg, split);

    EnergyBreakdown row;
    row.L_over_lambda_p = L / model.lambda_p();
    row.eta_total = total.value / ec;
    row.eta_pl = pl.value / ec;
    row.eta_pl_plus = pl.plus_part / ec;
    row.eta_pl_minus = pl.minus_part / ec;
    row.eta_ph = (total.value - pl.value) / ec;
    row.err_total = total.error / std::abs(ec);
    row.err_pl = pl.error / std::abs(ec);
    return row;
}

// Breakdown over a list of separations. Points are independent; failures are
// reported as NaN sentinel rows rather than aborting the sweep. Rows are
// computed with thread-count-independent arithmetic and returned in input
// order.
inline std::vector<EnergyBreakdown> sweep_breakdown(const MirrorModel& model,
                                                    const std::vector<double>& L_values,
                                                    const NumericsConfig& cfg = {},
                                                    PlasmonSplit split = PlasmonSplit::Full,
                                                    int threads = 0)
{
    std::vector<EnergyBreakdown> rows(L_values.size());
    parallel_for(static_cast<int>(L_values.size()), threads, [&](int i) {
        try {
            rows[i] = energy_breakdown(model, L_values[i], cfg, split);
        } catch (const std::exception&) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            rows[i] = EnergyBreakdown{L_values[i] / model.lambda_p(),
                                      nan, nan, nan, nan, nan, nan, nan};
        }
    });
    return rows;
}

struct CrossoverResult {
    double L_over_lambda_p = 0.0;
    double uncertainty = 0.0; // same units
};

// Separation where the plasmonic contribution changes sign (binding ->
// repulsive). Bracketed in [0.01, 0.5] lambda_p; the uncertainty combines
// the root tolerance with the integration error propagated through the
// local slope.
inline CrossoverResult find_plasmonic_crossover(const MirrorModel& model,
                                                const NumericsConfig& cfg = {},
                                                PlasmonSplit split = PlasmonSplit::Full)
{
    const double lp = model.lambda_p();
    auto f = [&](double L) { return plasmonic_energy(model, L, cfg, split).value; };

    RootConfig rc;
    rc.abs_tol = 1e-8 * lp;
    const double Lc = find_root_bracketed(f, 0.01 * lp, 0.5 * lp, rc);

    const PlasmonicEnergy at = plasmonic_energy(model, Lc, cfg, split);
    const double hstep = 1e-3 * lp;
    const double slope = (plasmonic_energy(model, Lc + hstep, cfg, split).value -
                          plasmonic_energy(model, Lc - hstep, cfg, split).value) /
                         (2.0 * hstep);
    double unc = slope != 0.0 ? std::abs(at.error / slope) : hstep;
    unc = std::max(unc, rc.abs_tol);
    return {Lc / lp, unc / lp};
}

struct AsymptoticConstants {
    double alpha = 0.0; // short-distance law: eta -> (3/2) alpha (L/lambda_p)
    double beta = 0.0;  // large-distance law: -eta_pl ~ beta sqrt(L/lambda_p)
    FitResult alpha_fit;
    FitResult beta_fit_photonic;  // from eta_ph - 1
    FitResult beta_fit_plasmonic; // from -eta_pl (consistency check)
};

namespace detail {

inline std::vector<double> log_spaced(double lo, double hi, int n)
{
    std::vector<double> out(n);
    const double la = std::log(lo), lb = std::log(hi);
    for (int i = 0; i < n; ++i)
        out[i] = std::exp(la + (lb - la) * i / (n - 1));
    return out;
}

} // namespace detail

// Fit the two asymptotic coefficients of the reduction factor.
// Short distance: eta is a pure power law a x with alpha = 2a/3 (the factor
// converts the reduction-factor slope to the energy-law coefficient).
// Large distance: eta_ph - 1 and -eta_pl share the same sqrt(x) growth; the
// subleading constant is estimated first by a linear least-squares in
// sqrt(x), then the coefficient is refit in log space with the exponent
// fixed at 1/2 and that offset removed — at reachable x the constant is
// comparable to beta sqrt(x), so a free two-parameter power-law fit would
// still be far from its asymptote.
inline AsymptoticConstants fit_asymptotic_constants(const MirrorModel& model,
                                                    const NumericsConfig& cfg = {},
                                                    std::pair<double, double> alpha_window = {1e-3, 1e-2},
                                                    std::pair<double, double> beta_window = {30.0, 300.0},
                                                    int points = 8)
{
    if (!(alpha_window.first < alpha_window.second) ||
        !(beta_window.first < beta_window.second) || points < 4)
        throw DomainError("fit_asymptotic_constants: windows must satisfy lo < hi with >= 4 points");

    const double lp = model.lambda_p();
    AsymptoticConstants out;

    {
        std::vector<std::pair<double, double>> pts;
        for (double x : detail::log_spaced(alpha_window.first, alpha_window.second, points)) {
            const double L = x * lp;
            pts.emplace_back(x, lifshitz_total(model, L, cfg.quad).value / ideal_casimir(L));
        }
        PowerLawModel m;
        m.fixed_exponent = 1.0;
        out.alpha_fit = fit_power_law(pts, m);
        out.alpha = 2.0 * out.alpha_fit.prefactor / 3.0;
    }

    {
        std::vector<std::pair<double, double>> ph, mpl;
        for (double x : detail::log_spaced(beta_window.first, beta_window.second, points)) {
            const double L = x * lp;
            const double ec = ideal_casimir(L);
            const double eta = lifshitz_total(model, L, cfg.quad).value / ec;
            const double eta_pl = plasmonic_energy(model, L, cfg).value / ec;
            ph.emplace_back(x, eta - eta_pl - 1.0);
            mpl.emplace_back(x, -eta_pl);
        }
        auto fixed_c_fit = [](const std::vector<std::pair<double, double>>& pts) {
            PowerLawModel m;
            m.fixed_exponent = 0.5;
            m.fixed_offset = linear_sqrt_fit(pts).second;
            return fit_power_law(pts, m);
        };
        out.beta_fit_photonic = fixed_c_fit(ph);
        out.beta_fit_plasmonic = fixed_c_fit(mpl);
        out.beta = out.beta_fit_photonic.prefactor;
    }

    return out;
}

} // namespace casmode
