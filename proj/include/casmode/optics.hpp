#pragma once

#include <cmath>
#include <complex>

#include "casmode/errors.hpp"
#include "casmode/types.hpp"

namespace casmode {

// eps(w) = 1 - omega_p^2 / w^2. Negative below omega_p, zero at omega_p.
inline double dielectric(const MirrorModel& model, double omega)
{
    if (omega <= 0.0)
        throw DomainError("dielectric: omega must be > 0 (pole at omega = 0)");
    const double r = model.omega_p / omega;
    return 1.0 - r * r;
}

// eps(i xi) = 1 + omega_p^2 / xi^2 >= 1, monotonically decreasing in xi.
inline double dielectric_imag_axis(const MirrorModel& model, double xi)
{
    if (xi <= 0.0)
        throw DomainError("dielectric_imag_axis: xi must be > 0");
    const double r = model.omega_p / xi;
    return 1.0 + r * r;
}

namespace detail {

// Longitudinal wavevector inside the metal, branch Im(k_zm) >= 0 so the
// transmitted field decays.
inline std::complex<double> kzm_metal(const MirrorModel& model, double omega, double k)
{
    const double d = (omega - model.omega_p) * (omega + model.omega_p) - k * k;
    if (d >= 0.0)
        return {std::sqrt(d), 0.0};
    return {0.0, std::sqrt(-d)};
}

// Vacuum longitudinal wavevector for the given sector: real when
// propagating, i*kappa when evanescent.
inline std::complex<double> kz_vacuum(double omega, double k, FrequencySector sector)
{
    if (sector == FrequencySector::Propagating)
        return {std::sqrt(std::max((omega - k) * (omega + k), 0.0)), 0.0};
    return {0.0, std::sqrt(std::max((k - omega) * (k + omega), 0.0))};
}

} // namespace detail

struct ReflectionResult {
    std::complex<double> r;
    // Set when |eps*w^2 - k^2| grazes the metal-side branch point and the
    // amplitude carries fewer significant digits than usual.
    bool degraded_precision = false;
};

// Single-interface vacuum -> plasma-metal amplitude.
//
// Sign convention (documented once, here): amplitudes are quoted in the
// e^{+i w t} time convention with the impedance mismatch referenced from the
// metal side,
//     r = conj( (k_zm - c k_z) / (k_zm + c k_z) ),  c = 1 (TE) or eps (TM),
// with Im(k_zm) >= 0. Consequences, all pinned by tests: r -> +1 in the
// perfect-mirror limit; the TE phase shift delta = -arg r equals
// 2 asin(k_z/omega_p) so propagating modes sit at k_z L = m pi - delta,
// displaced below the perfect-mirror positions; and the evanescent TM loop
// factor r e^{-kappa L} - 1 vanishes on the upper (symmetric) plasmon branch
// while r e^{-kappa L} + 1 vanishes on the lower one. Only r^2 enters energy
// integrals, which is convention-free.
inline ReflectionResult reflection(const MirrorModel& model, Polarization pol,
                                   double omega, double k, FrequencySector sector)
{
    if (omega <= 0.0)
        throw DomainError("reflection: frequency must be > 0");
    if (k < 0.0)
        throw DomainError("reflection: k must be >= 0");

    if (sector == FrequencySector::ImaginaryAxis) {
        const double xi = omega;
        const double kt = std::hypot(k, xi);                    // vacuum i*kt
        const double ktm = std::hypot(kt, model.omega_p);       // metal  i*ktm
        const double c = (pol == Polarization::TM) ? dielectric_imag_axis(model, xi) : 1.0;
        return {{(ktm - c * kt) / (ktm + c * kt), 0.0}, false};
    }

    const std::complex<double> kz = detail::kz_vacuum(omega, k, sector);
    const std::complex<double> kzm = detail::kzm_metal(model, omega, k);
    const double c = (pol == Polarization::TM) ? dielectric(model, omega) : 1.0;

    const double branch_gap = std::abs((omega - model.omega_p) * (omega + model.omega_p) - k * k);
    const double scale = model.omega_p * model.omega_p + omega * omega + k * k;
    const bool degraded = branch_gap < 1e-12 * scale;

    return {std::conj((kzm - c * kz) / (kzm + c * kz)), degraded};
}

// Phase shift delta = -arg(r) of a propagating mode on one mirror, evaluated
// in closed form so it is continuous along any fixed-k frequency scan (this
// is the unwrapped value; no jump repair is needed). Modes satisfy
// k_z L = m pi - delta. TE: delta = 2 asin(k_z/omega_p) on the strip
// k_z < omega_p, then pi. TM: delta = pi - 2 atan2(kappa_m, eps k_z) on the
// strip (negative below the bulk resonance), then 0 or pi by the sign of the
// real amplitude (the jump sits at the Brewster zero, above every photonic
// branch since those satisfy k_z < omega_p).
inline double phase_shift(const MirrorModel& model, Polarization pol,
                          double omega, double k)
{
    if (omega <= 0.0)
        throw DomainError("phase_shift: frequency must be > 0");
    if (omega < k)
        throw DomainError("phase_shift: requires the propagating sector (omega >= c k)");

    const double wp = model.omega_p;
    const double kz = std::sqrt((omega - k) * (omega + k));

    if (pol == Polarization::TE) {
        if (kz >= wp)
            return pi;
        return 2.0 * std::asin(kz / wp);
    }

    const double eps = dielectric(model, omega);
    if (kz < wp) {
        const double kappa_m = std::sqrt((wp - kz) * (wp + kz));
        return pi - 2.0 * std::atan2(kappa_m, eps * kz);
    }
    const double kzm = std::sqrt((kz - wp) * (kz + wp));
    return (kzm - eps * kz) >= 0.0 ? 0.0 : pi;
}

} // namespace casmode
