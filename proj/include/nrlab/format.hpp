#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace nrlab {

// Round half away from zero at `digits` decimal places (table formatting).
inline double round_half_away(double value, int digits) {
    double scale = std::pow(10.0, digits);
    double scaled = value * scale;
    double r = std::floor(std::fabs(scaled) + 0.5);
    return std::copysign(r, scaled) / scale;
}

// Percent with one decimal, the precision used by the published tables.
inline std::string format_percent1(double proportion) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", round_half_away(proportion * 100.0, 1));
    return buf;
}

// Percent rounded to a whole number (some narrative figures use this).
inline long long percent0(double proportion) {
    return static_cast<long long>(round_half_away(proportion * 100.0, 0));
}

// Full-precision value for machine CSV (15 significant digits).
inline std::string format_full(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", value);
    return buf;
}

}  // namespace nrlab
