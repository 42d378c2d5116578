#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "types.hpp"

namespace emdx {

// Lag bound and rolling-window size: lambda_max = ceil(max(px, py)),
// window = max(lambda_max, 20).
struct LagWindowRule {
    int lambda_max = 0;
    int window = 0;
};

inline LagWindowRule lag_bound(double period_x, double period_y) {
    if (!(period_x > 0.0) || !(period_y > 0.0))
        throw DegenerateInput("lag bound needs defined positive periods");
    LagWindowRule r;
    r.lambda_max = int(std::ceil(std::max(period_x, period_y)));
    r.window = std::max(r.lambda_max, 20);
    return r;
}

namespace detail {

// Pearson correlation with population moments (1/N mean, 1/N variance)
// over the N pairs (x[i], y[i]). NaN sentinel when either side is constant.
inline double pearson(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return undefined_value();
    if (sxy == sxx && sxx == syy) return 1.0;  // identical inputs
    double r = sxy / std::sqrt(sxx * syy);
    // the formula lands in [-1, 1] up to rounding; pin the endpoint
    if (r > 1.0) r = 1.0;
    if (r < -1.0) r = -1.0;
    return r;
}

}  // namespace detail

// Time-scale-dependent correlation: entry (i, j) is the Pearson correlation
// of IMF_i of X against IMF_j of Y over the full series. With
// include_residue, the residue joins as a trailing row/column (scale 0) and
// the matrix carries the caveat flag.
inline ScaleCorrelationMatrix scale_correlation(const Decomposition& dx,
                                                const Decomposition& dy,
                                                bool include_residue = false) {
    if (dx.source_length != dy.source_length)
        throw std::invalid_argument("decompositions have different lengths");
    for (const Imf& m : dx.imfs)
        if (m.values.size() != dx.source_length) throw std::invalid_argument("ragged IMF in X");
    for (const Imf& m : dy.imfs)
        if (m.values.size() != dy.source_length) throw std::invalid_argument("ragged IMF in Y");

    std::vector<std::span<const double>> xs, ys;
    ScaleCorrelationMatrix m;
    for (const Imf& imf : dx.imfs) {
        xs.emplace_back(imf.values);
        m.row_scales.push_back(imf.scale_index);
    }
    for (const Imf& imf : dy.imfs) {
        ys.emplace_back(imf.values);
        m.col_scales.push_back(imf.scale_index);
    }
    if (include_residue) {
        xs.emplace_back(dx.residue);
        ys.emplace_back(dy.residue);
        m.row_scales.push_back(0);
        m.col_scales.push_back(0);
        m.includes_residue = true;
    }
    m.rows = xs.size();
    m.cols = ys.size();
    m.entries.resize(m.rows * m.cols);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            m.at(i, j) = detail::pearson(xs[i], ys[j]);
    return m;
}

// Rolling lagged cross-correlation at one scale. For window end t (1-based,
// t in [W, T]) and lag lambda >= 0 the summed pairs are
// (x(tau), y(tau + lambda)) for tau in [t-W+1, t-lambda]; means and standard
// deviations are taken over exactly those W-lambda pairs. Negative lags swap
// the series roles. Lags leaving fewer than 2 pairs (lambda_max may equal the
// window, as in the long-scale reference rows) yield the undefined sentinel.
inline LaggedCorrelationField lagged_windowed_correlation(const Imf& ix, const Imf& iy,
                                                          const LagWindowRule& rule) {
    const std::vector<double>& x = ix.values;
    const std::vector<double>& y = iy.values;
    if (x.size() != y.size()) throw std::invalid_argument("IMF lengths differ");
    const std::size_t T = x.size();
    if (rule.window <= 0 || std::size_t(rule.window) > T)
        throw std::invalid_argument("window must be in [1, T]");
    if (rule.lambda_max < 0 || rule.lambda_max > rule.window)
        throw std::invalid_argument("lambda_max must be in [0, window]");

    LaggedCorrelationField f;
    f.scale_index = ix.scale_index;
    f.window_size = rule.window;
    f.series_length = T;
    for (int l = -rule.lambda_max; l <= rule.lambda_max; ++l) f.lags.push_back(l);
    const std::size_t nwin = T - rule.window + 1;
    f.entries.resize(f.lags.size() * nwin);

    const int W = rule.window;
    for (std::size_t r = 0; r < f.lags.size(); ++r) {
        int lam = f.lags[r];
        std::span<const double> a(lam >= 0 ? x : y);
        std::span<const double> b(lam >= 0 ? y : x);
        int l = std::abs(lam);
        if (W - l < 2) {
            for (std::size_t w = 0; w < nwin; ++w) f.at(r, w) = undefined_value();
            continue;
        }
        for (std::size_t w = 0; w < nwin; ++w) {
            // 0-based start of the window; pairs (a[s+k], b[s+k+l]), W-l of them
            std::size_t s = w;
            f.at(r, w) = detail::pearson(a.subspan(s, std::size_t(W - l)),
                                         b.subspan(s + std::size_t(l), std::size_t(W - l)));
        }
    }
    return f;
}

}  // namespace emdx
