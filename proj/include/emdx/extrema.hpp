#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "types.hpp"

namespace emdx {

// Interior local extrema with plateau runs collapsed to their midpoint index.
struct ExtremaIndices {
    std::vector<std::size_t> maxima;
    std::vector<std::size_t> minima;
};

// Scans runs of equal values; an interior run that is higher (lower) than
// both neighbouring runs is one maximum (minimum) at its midpoint. Endpoint
// runs never count.
inline ExtremaIndices find_extrema(std::span<const double> s) {
    if (s.size() < 3) throw DegenerateInput("extrema search needs at least 3 samples");
    ExtremaIndices out;
    std::size_t run_start = 0;
    double prev_value = 0.0;
    bool have_prev = false;
    for (std::size_t i = 1; i <= s.size(); ++i) {
        if (i < s.size() && s[i] == s[run_start]) continue;
        // run [run_start, i-1] ends here
        if (have_prev && i < s.size()) {
            double v = s[run_start];
            std::size_t mid = (run_start + i - 1) / 2;
            if (v > prev_value && v > s[i])
                out.maxima.push_back(mid);
            else if (v < prev_value && v < s[i])
                out.minima.push_back(mid);
        }
        if (i < s.size()) {
            prev_value = s[run_start];
            have_prev = true;
            run_start = i;
        }
    }
    return out;
}

struct ExtremaCounts {
    std::size_t num_maxima = 0;
    std::size_t num_minima = 0;
    std::size_t total() const { return num_maxima + num_minima; }
};

inline ExtremaCounts count_extrema(std::span<const double> s) {
    ExtremaIndices idx = find_extrema(s);
    return {idx.maxima.size(), idx.minima.size()};
}

// Sign changes between consecutive nonzero samples. An exact zero counts as
// one crossing for the sign change it mediates.
inline std::size_t count_zero_crossings(std::span<const double> s) {
    if (s.size() < 2) throw DegenerateInput("zero-crossing count needs at least 2 samples");
    std::size_t count = 0;
    int last_sign = 0;
    for (double v : s) {
        int sign = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
        if (sign == 0) continue;
        if (last_sign != 0 && sign != last_sign) ++count;
        last_sign = sign;
    }
    return count;
}

// IMF condition 1: extrema and zero-crossing counts equal or differing by one.
inline bool satisfies_imf_condition1(std::span<const double> s) {
    ExtremaCounts e = count_extrema(s);
    std::size_t zc = count_zero_crossings(s);
    std::size_t total = e.total();
    return (total > zc ? total - zc : zc - total) <= 1;
}

}  // namespace emdx
