#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "casmode/errors.hpp"

namespace casmode {

inline constexpr double pi = std::numbers::pi_v<double>;

// Lossless free-electron mirror: eps(w) = 1 - omega_p^2 / w^2.
// Natural units c = hbar = 1; lambda_p = 2*pi/omega_p.
struct MirrorModel {
    double omega_p = 1.0;

    double lambda_p() const { return 2.0 * pi / omega_p; }
};

enum class Polarization { TE, TM };

// Propagating: w > c k, real longitudinal wavevector k_z.
// Evanescent:  w < c k, k_z = i*kappa with kappa > 0.
// ImaginaryAxis: frequency i*xi, xi > 0.
enum class FrequencySector { Propagating, Evanescent, ImaginaryAxis };

// The light line w = c k is classified as Propagating (k_z = 0) so the
// classifier is total.
inline FrequencySector classify_sector(double omega, double k)
{
    return omega >= k ? FrequencySector::Propagating : FrequencySector::Evanescent;
}

inline std::string to_string(Polarization p)
{
    return p == Polarization::TE ? "TE" : "TM";
}

inline std::string to_string(FrequencySector s)
{
    switch (s) {
    case FrequencySector::Propagating: return "propagating";
    case FrequencySector::Evanescent:  return "evanescent";
    default:                           return "imaginary_axis";
    }
}

// Mode family label. Photonic modes carry an order m >= 1; the m = 0 rung of
// the TM ladder is the light-line-crossed plasmonic branch and is handled by
// the plasmonic solvers only.
struct ModeBranch {
    enum class Kind { Photonic, PlasmonPlus, PlasmonMinus };
    Kind kind = Kind::Photonic;
    int m = 1;

    static ModeBranch photonic(int order) { return {Kind::Photonic, order}; }
    static ModeBranch plus() { return {Kind::PlasmonPlus, 0}; }
    static ModeBranch minus() { return {Kind::PlasmonMinus, 0}; }
};

inline std::string to_string(const ModeBranch& b)
{
    switch (b.kind) {
    case ModeBranch::Kind::Photonic:     return "photonic";
    case ModeBranch::Kind::PlasmonPlus:  return "plus";
    default:                             return "minus";
    }
}

// One solved cavity mode at (k, L).
struct ModePoint {
    Polarization pol = Polarization::TM;
    ModeBranch branch;
    double k = 0.0;     // transverse wavevector, units omega_p/c
    double L = 0.0;     // mirror separation, units c/omega_p
    double omega = 0.0; // mode frequency, units omega_p
    FrequencySector sector = FrequencySector::Evanescent;
};

// Ordered samples of one branch against the sweep parameter (kL/pi).
struct DispersionCurve {
    enum class Termination { Completed, BranchLost };
    ModeBranch branch;
    Polarization pol = Polarization::TM;
    double fixed_k = 0.0;
    std::vector<std::pair<double, double>> points; // (kL/pi, omega)
    Termination termination = Termination::Completed;
};

// Per-distance energy record; all entries are reduction factors relative to
// the ideal-mirror value at the same L.
struct EnergyBreakdown {
    double L_over_lambda_p = 0.0;
    double eta_total = 0.0;
    double eta_pl = 0.0;
    double eta_pl_plus = 0.0;
    double eta_pl_minus = 0.0;
    double eta_ph = 0.0;
    double err_total = 0.0;
    double err_pl = 0.0;
};

struct RootConfig {
    double abs_tol = 1e-12; // frequency tolerance, units omega_p
    int max_iter = 200;
};

struct QuadratureConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    int max_subdivisions = 10'000;
    // Semi-infinite tails are truncated once the panel contribution stays
    // below tolerance for this many consecutive panels.
    int tail_cutoff_decades = 3;
};

struct NumericsConfig {
    RootConfig root;
    QuadratureConfig quad;
};

// Result of a power-law fit, least squares in log space.
struct FitResult {
    double exponent = 0.0;
    double prefactor = 0.0;
    double residual = 0.0; // RMS of log-space residuals
    double window_lo = 0.0;
    double window_hi = 0.0;
};

} // namespace casmode
