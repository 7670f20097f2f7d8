#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace casmode {

// Shortest round-trippable-ish fixed formatting: %.12g is locale-independent
// here (no grouping, '.' decimal point for "C" numerics) and deterministic,
// which keeps repeated runs byte-identical.
inline std::string csv_number(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline void csv_row(std::ostream& os, const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            os << ',';
        os << fields[i];
    }
    os << '\n';
}

} // namespace casmode
