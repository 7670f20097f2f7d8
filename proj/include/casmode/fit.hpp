#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "casmode/errors.hpp"
#include "casmode/types.hpp"

namespace casmode {

// Model selector for fit_power_law: y = a x^b, optionally with a fixed
// additive constant (y = a x^b + c, c supplied by the caller) and/or a fixed
// exponent b.
struct PowerLawModel {
    std::optional<double> fixed_exponent{};
    double fixed_offset = 0.0;
};

// Least-squares power-law fit in log space on (y - c). Requires >= 4 points,
// x > 0, and y - c of uniform sign (the sign is carried into the returned
// prefactor).
inline FitResult fit_power_law(const std::vector<std::pair<double, double>>& points,
                               const PowerLawModel& model = {})
{
    if (points.size() < 4)
        throw DomainError("fit_power_law: need at least 4 points");

    double sign = 0.0;
    std::vector<double> lx, lz;
    lx.reserve(points.size());
    lz.reserve(points.size());
    double lo = points.front().first, hi = points.front().first;
    for (const auto& [x, y] : points) {
        if (x <= 0.0)
            throw DomainError("fit_power_law: x values must be > 0");
        const double z = y - model.fixed_offset;
        if (z == 0.0)
            throw DomainError("fit_power_law: y - c hit zero");
        const double s = z > 0.0 ? 1.0 : -1.0;
        if (sign == 0.0)
            sign = s;
        else if (s != sign)
            throw DomainError("fit_power_law: y - c changes sign across the data");
        lx.push_back(std::log(x));
        lz.push_back(std::log(std::abs(z)));
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }

    const auto n = static_cast<double>(points.size());
    double b, la;
    if (model.fixed_exponent) {
        b = *model.fixed_exponent;
        double s = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i)
            s += lz[i] - b * lx[i];
        la = s / n;
    } else {
        double sx = 0.0, sz = 0.0, sxx = 0.0, sxz = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sx += lx[i];
            sz += lz[i];
            sxx += lx[i] * lx[i];
            sxz += lx[i] * lz[i];
        }
        const double det = n * sxx - sx * sx;
        if (det == 0.0)
            throw DomainError("fit_power_law: degenerate abscissae");
        b = (n * sxz - sx * sz) / det;
        la = (sz - b * sx) / n;
    }

    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = lz[i] - (la + b * lx[i]);
        ss += r * r;
    }

    FitResult out;
    out.exponent = b;
    out.prefactor = sign * std::exp(la);
    out.residual = std::sqrt(ss / n);
    out.window_lo = lo;
    out.window_hi = hi;
    return out;
}

// Ordinary linear least squares for y ~ b*sqrt(x) + c; used to estimate the
// subleading constant before a fixed-offset power-law fit.
inline std::pair<double, double> linear_sqrt_fit(
    const std::vector<std::pair<double, double>>& points)
{
    double s1 = 0.0, sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        const double u = std::sqrt(x);
        s1 += 1.0;
        sx += u;
        sxx += u * u;
        sy += y;
        sxy += u * y;
    }
    const double det = s1 * sxx - sx * sx;
    if (det == 0.0)
        throw DomainError("linear_sqrt_fit: degenerate abscissae");
    const double b = (s1 * sxy - sx * sy) / det;
    const double c = (sy * sxx - sx * sxy) / det;
    return {b, c};
}

} // namespace casmode
