#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "correlation.hpp"
#include "emd.hpp"
#include "spectral.hpp"
#include "types.hpp"

namespace emdx {

// One trading day: equal-length series keyed by instrument label.
struct DayPanel {
    std::string day_id;
    std::map<std::string, TimeSeries> series_by_label;
};

struct DayResult {
    std::string day_id;
    ScaleCorrelationMatrix matrix;
    std::vector<LaggedCorrelationField> lag_fields;  // one per common scale
    std::vector<LagWindowRule> rules;                // rule used per common scale
    std::vector<double> periods_x, periods_y;        // per extracted IMF
    bool flagged = false;  // IMF count mismatch or undecomposable series
};

// Decomposes both series of the pair and computes the per-day correlation
// structures. When the IMF counts differ, only common scale indices get lag
// fields and the day is flagged; the scale matrix is padded with the
// undefined sentinel up to max_imfs so matrices stay conformable across days.
inline DayResult run_day(const DayPanel& panel, const std::string& label_x,
                         const std::string& label_y, const SiftConfig& cfg,
                         bool compute_lag_fields = true) {
    auto itx = panel.series_by_label.find(label_x);
    auto ity = panel.series_by_label.find(label_y);
    if (itx == panel.series_by_label.end() || ity == panel.series_by_label.end())
        throw std::invalid_argument("panel " + panel.day_id + " is missing a requested label");

    DayResult res;
    res.day_id = panel.day_id;
    Decomposition dx = decompose(itx->second, cfg);
    Decomposition dy = decompose(ity->second, cfg);
    for (const Imf& m : dx.imfs) res.periods_x.push_back(m.period);
    for (const Imf& m : dy.imfs) res.periods_y.push_back(m.period);

    const std::size_t nx = dx.imfs.size();
    const std::size_t ny = dy.imfs.size();
    std::size_t target = cfg.max_imfs ? std::size_t(*cfg.max_imfs) : std::max(nx, ny);
    res.flagged = nx != ny || nx < target || ny < target;

    ScaleCorrelationMatrix full = scale_correlation(dx, dy, false);
    res.matrix = ScaleCorrelationMatrix::undefined(target, target);
    for (std::size_t i = 0; i < std::min(nx, target); ++i)
        for (std::size_t j = 0; j < std::min(ny, target); ++j)
            res.matrix.at(i, j) = full.at(i, j);

    const std::size_t common = std::min(nx, ny);
    for (std::size_t i = 0; i < common; ++i) {
        double px = dx.imfs[i].period, py = dy.imfs[i].period;
        if (!is_defined(px) || !is_defined(py)) continue;
        LagWindowRule rule = lag_bound(px, py);
        if (std::size_t(rule.window) > dx.source_length) continue;  // day too short
        if (compute_lag_fields)
            res.lag_fields.push_back(lagged_windowed_correlation(dx.imfs[i], dy.imfs[i], rule));
        res.rules.push_back(rule);
    }
    return res;
}

namespace detail {

// Median ignoring the NaN sentinel; even counts average the two central
// values. Empty input yields the sentinel.
inline double median_inplace(std::vector<double>& v) {
    if (v.empty()) return undefined_value();
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double nanmedian(std::vector<double> v) {
    v.erase(std::remove_if(v.begin(), v.end(), [](double d) { return !is_defined(d); }), v.end());
    return median_inplace(v);
}

}  // namespace detail

inline ScaleCorrelationMatrix median_scale_matrix(const std::vector<ScaleCorrelationMatrix>& ms) {
    if (ms.empty()) throw std::invalid_argument("no matrices to aggregate");
    for (const auto& m : ms)
        if (m.rows != ms[0].rows || m.cols != ms[0].cols)
            throw std::invalid_argument("matrices are not conformable");
    ScaleCorrelationMatrix out = ms[0];
    std::vector<double> vals;
    for (std::size_t i = 0; i < out.rows; ++i)
        for (std::size_t j = 0; j < out.cols; ++j) {
            vals.clear();
            for (const auto& m : ms) vals.push_back(m.at(i, j));
            out.at(i, j) = detail::nanmedian(vals);
        }
    return out;
}

// Elementwise median of per-day lag fields on the common grid fixed by
// `common_rule` (typically the rounded mean of per-day rules). Days aligned
// by (lag value, window-end time); entries a day does not cover are skipped.
inline LaggedCorrelationField median_lag_field(const std::vector<LaggedCorrelationField>& fields,
                                               const LagWindowRule& common_rule) {
    if (fields.empty()) throw std::invalid_argument("no fields to aggregate");
    const int scale = fields[0].scale_index;
    std::size_t T = 0;
    for (const auto& f : fields) {
        if (f.scale_index != scale) throw std::invalid_argument("fields mix scale indices");
        T = std::max(T, f.series_length);
    }
    if (std::size_t(common_rule.window) > T)
        throw std::invalid_argument("no overlapping grid: common window exceeds every day");

    LaggedCorrelationField out;
    out.scale_index = scale;
    out.window_size = common_rule.window;
    out.series_length = T;
    for (int l = -common_rule.lambda_max; l <= common_rule.lambda_max; ++l) out.lags.push_back(l);
    const std::size_t nwin = out.num_windows();
    out.entries.assign(out.lags.size() * nwin, undefined_value());

    bool any = false;
    std::vector<double> vals;
    std::vector<std::pair<const LaggedCorrelationField*, std::size_t>> rows;
    for (std::size_t r = 0; r < out.lags.size(); ++r) {
        int lag = out.lags[r];
        rows.clear();
        for (const auto& f : fields) {
            auto it = std::find(f.lags.begin(), f.lags.end(), lag);
            if (it != f.lags.end()) rows.emplace_back(&f, std::size_t(it - f.lags.begin()));
        }
        for (std::size_t w = 0; w < nwin; ++w) {
            int end = out.window_end(w);
            vals.clear();
            for (const auto& [f, fr] : rows) {
                if (end < f->window_size || std::size_t(end) > f->series_length) continue;
                double v = f->at(fr, std::size_t(end - f->window_size));
                if (is_defined(v)) vals.push_back(v);
            }
            if (!vals.empty()) any = true;
            out.at(r, w) = detail::median_inplace(vals);
        }
    }
    if (!any) throw std::invalid_argument("no overlapping grid between fields and common rule");
    return out;
}

// Per-scale histograms over [-1, 1] of the diagonal (same-scale) entries
// across days. Undefined entries do not contribute.
inline HistogramSet diagonal_histograms(const std::vector<ScaleCorrelationMatrix>& ms, int bins) {
    if (ms.empty()) throw std::invalid_argument("no matrices to histogram");
    if (bins < 1) throw std::invalid_argument("bins must be >= 1");
    std::size_t nscales = std::min(ms[0].rows, ms[0].cols);
    if (ms[0].includes_residue && nscales > 0) --nscales;  // residue excluded by default
    HistogramSet h;
    h.bins = bins;
    h.counts.assign(nscales, std::vector<long>(std::size_t(bins), 0));
    for (const auto& m : ms) {
        for (std::size_t k = 0; k < nscales; ++k) {
            double v = m.at(k, k);
            if (!is_defined(v)) continue;
            int b = int((v - h.lo) / (h.hi - h.lo) * bins);
            b = std::clamp(b, 0, bins - 1);
            ++h.counts[k][std::size_t(b)];
        }
    }
    return h;
}

}  // namespace emdx
