#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "extrema.hpp"
#include "spline.hpp"
#include "types.hpp"

namespace emdx {

struct SiftConfig {
    double sd_threshold = 0.2;           // Cauchy-style stop threshold, in (0, 1)
    int max_sift_iterations = 100;       // guard against over-sifting
    std::optional<int> max_imfs;         // unbounded when unset
    int boundary_padding_extrema = 2;    // extrema mirrored about each endpoint
    // Condition 1 must hold on this many consecutive sift outputs before the
    // SD test can accept. Plain SD + condition 1 under-splits broadband
    // signals (mode count falls short of the dyadic log2(T) tendency).
    int condition_streak = 5;

    void validate() const {
        if (!(sd_threshold > 0.0 && sd_threshold < 1.0))
            throw std::invalid_argument("sd_threshold must be in (0, 1)");
        if (max_sift_iterations < 1)
            throw std::invalid_argument("max_sift_iterations must be >= 1");
        if (max_imfs && *max_imfs < 1)
            throw std::invalid_argument("max_imfs must be >= 1 when set");
        if (boundary_padding_extrema < 1)
            throw std::invalid_argument("boundary_padding_extrema must be >= 1");
        if (condition_streak < 1)
            throw std::invalid_argument("condition_streak must be >= 1");
    }
};

inline bool is_siftable(std::span<const double> s) {
    if (s.size() < 3) return false;
    ExtremaIndices idx = find_extrema(s);
    return idx.maxima.size() >= 2 && idx.minima.size() >= 2;
}

namespace detail {

// Mirror up to `padding` extrema about each endpoint so the spline is
// supported beyond the evaluation range.
inline std::pair<std::vector<double>, std::vector<double>> extend_knots(
    std::span<const double> s, const std::vector<std::size_t>& idx, int padding) {
    std::vector<double> xs, ys;
    const double right = double(s.size()) - 1.0;
    int pad = std::min<int>(padding, int(idx.size()));
    for (int j = pad - 1; j >= 0; --j) {
        xs.push_back(-double(idx[j]));
        ys.push_back(s[idx[j]]);
    }
    for (std::size_t j : idx) {
        xs.push_back(double(j));
        ys.push_back(s[j]);
    }
    for (int j = 0; j < pad; ++j) {
        std::size_t k = idx[idx.size() - 1 - j];
        xs.push_back(2.0 * right - double(k));
        ys.push_back(s[k]);
    }
    return {std::move(xs), std::move(ys)};
}

}  // namespace detail

// Upper and lower envelopes: natural cubic splines through the (mirrored)
// maxima and minima, evaluated at every sample index. No dominance guarantee
// near spline overshoots.
inline std::pair<std::vector<double>, std::vector<double>> build_envelopes(
    std::span<const double> s, int padding) {
    ExtremaIndices idx = find_extrema(s);
    if (idx.maxima.size() < 2 || idx.minima.size() < 2)
        throw NotSiftable("fewer than 2 maxima or 2 minima");
    auto [ux, uy] = detail::extend_knots(s, idx.maxima, padding);
    auto [lx, ly] = detail::extend_knots(s, idx.minima, padding);
    CubicSpline upper_spline(std::move(ux), std::move(uy));
    CubicSpline lower_spline(std::move(lx), std::move(ly));
    std::vector<double> upper(s.size()), lower(s.size());
    for (std::size_t t = 0; t < s.size(); ++t) {
        upper[t] = upper_spline(double(t));
        lower[t] = lower_spline(double(t));
    }
    return {std::move(upper), std::move(lower)};
}

// One sifting step: subtract the pointwise mean of the two envelopes.
inline std::vector<double> sift_once(std::span<const double> s, const SiftConfig& cfg) {
    auto [upper, lower] = build_envelopes(s, cfg.boundary_padding_extrema);
    std::vector<double> candidate(s.size());
    for (std::size_t t = 0; t < s.size(); ++t)
        candidate[t] = s[t] - 0.5 * (upper[t] + lower[t]);
    return candidate;
}

// Iterates sifting until SD = sum((h_prev - h)^2) / sum(h_prev^2) drops below
// the threshold and IMF condition 1 holds, or the iteration cap is hit (the
// candidate is then returned with the truncated flag).
inline Imf extract_imf(std::span<const double> series, const SiftConfig& cfg) {
    if (!is_siftable(series)) throw NotSiftable("input has too few extrema to sift");
    std::vector<double> h(series.begin(), series.end());
    Imf imf;
    imf.truncated = true;
    int streak = 0;
    for (int iter = 0; iter < cfg.max_sift_iterations; ++iter) {
        if (!is_siftable(h)) {
            // Sifting degenerated the candidate; keep what we have.
            imf.truncated = !satisfies_imf_condition1(h);
            break;
        }
        std::vector<double> next = sift_once(h, cfg);
        double num = 0.0, den = 0.0;
        for (std::size_t t = 0; t < h.size(); ++t) {
            double d = h[t] - next[t];
            num += d * d;
            den += h[t] * h[t];
        }
        h = std::move(next);
        streak = satisfies_imf_condition1(h) ? streak + 1 : 0;
        if (streak >= cfg.condition_streak && den > 0.0 &&
            num / den < cfg.sd_threshold) {
            imf.truncated = false;
            break;
        }
    }
    ExtremaCounts e = count_extrema(h);
    if (e.num_maxima > 0) imf.period = double(h.size()) / double(e.num_maxima);
    imf.values = std::move(h);
    return imf;
}

// Full decomposition: peel IMFs off the running residue until it is constant,
// monotone, or has too few extrema to sift, or max_imfs is reached.
inline Decomposition decompose(const TimeSeries& x, const SiftConfig& cfg) {
    cfg.validate();
    validate_for_decomposition(x);
    Decomposition d;
    d.source_length = x.values.size();
    std::vector<double> residue = x.values;
    while (!cfg.max_imfs || int(d.imfs.size()) < *cfg.max_imfs) {
        if (!is_siftable(residue)) break;
        Imf imf = extract_imf(residue, cfg);
        for (std::size_t t = 0; t < residue.size(); ++t) residue[t] -= imf.values[t];
        imf.scale_index = int(d.imfs.size()) + 1;
        d.imfs.push_back(std::move(imf));
    }
    d.residue = std::move(residue);
    return d;
}

}  // namespace emdx
