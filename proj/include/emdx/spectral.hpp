#pragma once

#include <span>

#include "extrema.hpp"
#include "types.hpp"

namespace emdx {

// Oscillating period = series length divided by the number of peaks
// (strict interior local maxima). Rounding to integers happens only at
// presentation; the unrounded value feeds the lag-bound rule.
inline double estimate_period(std::span<const double> values) {
    ExtremaCounts e = count_extrema(values);
    if (e.num_maxima == 0)
        throw DegenerateInput("period undefined: component has no local maxima");
    return double(values.size()) / double(e.num_maxima);
}

inline double estimate_period(const Imf& imf) { return estimate_period(std::span<const double>(imf.values)); }

}  // namespace emdx
