#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace emdx {

// Sentinel for correlations that cannot be computed (zero-variance windows,
// scales missing on a given day). Serialized as an empty field.
inline double undefined_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_defined(double v) { return !std::isnan(v); }

struct DegenerateInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotSiftable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A uniformly sampled scalar series. dt is metadata (seconds between samples).
struct TimeSeries {
    std::vector<double> values;
    double dt = 30.0;
    std::string label;

    std::size_t size() const { return values.size(); }
};

inline void validate_for_decomposition(const TimeSeries& x) {
    if (x.values.size() < 8)
        throw DegenerateInput("series '" + x.label + "' has fewer than 8 samples");
    for (double v : x.values)
        if (!std::isfinite(v))
            throw DegenerateInput("series '" + x.label + "' contains a non-finite sample");
}

// One intrinsic mode function. scale_index counts from 1 (highest frequency).
// period is samples per oscillation; NaN when the component has no maxima.
// truncated marks components returned because the sift iteration cap was hit.
struct Imf {
    std::vector<double> values;
    int scale_index = 0;
    double period = std::numeric_limits<double>::quiet_NaN();
    bool truncated = false;
};

struct Decomposition {
    std::vector<Imf> imfs;
    std::vector<double> residue;
    std::size_t source_length = 0;

    // Elementwise sum of all IMFs plus the residue.
    std::vector<double> reconstruct() const {
        std::vector<double> out(residue);
        for (const Imf& imf : imfs)
            for (std::size_t t = 0; t < out.size(); ++t) out[t] += imf.values[t];
        return out;
    }
};

// Dense matrix of Pearson correlations between IMF pairs of two
// decompositions. Undefined entries hold the NaN sentinel. When
// includes_residue is set, the last row/column correlates residues and
// should be interpreted with care (residue trends inflate correlation).
struct ScaleCorrelationMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> entries;  // row-major
    std::vector<int> row_scales;  // scale index per row; 0 marks the residue
    std::vector<int> col_scales;
    bool includes_residue = false;

    double& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }

    static ScaleCorrelationMatrix undefined(std::size_t r, std::size_t c) {
        ScaleCorrelationMatrix m;
        m.rows = r;
        m.cols = c;
        m.entries.assign(r * c, undefined_value());
        for (std::size_t i = 0; i < r; ++i) m.row_scales.push_back(int(i) + 1);
        for (std::size_t j = 0; j < c; ++j) m.col_scales.push_back(int(j) + 1);
        return m;
    }
};

// Rolling lagged correlations for one scale index. Rows run over lags
// -lambda_max..+lambda_max, columns over window end positions W..T
// (1-based sample index of the last observation in the window).
struct LaggedCorrelationField {
    int scale_index = 0;
    std::vector<int> lags;
    int window_size = 0;
    std::size_t series_length = 0;
    std::vector<double> entries;  // row-major, lags x window positions

    std::size_t num_windows() const { return series_length - window_size + 1; }
    double& at(std::size_t lag_row, std::size_t win) { return entries[lag_row * num_windows() + win]; }
    double at(std::size_t lag_row, std::size_t win) const { return entries[lag_row * num_windows() + win]; }
    // 1-based index of the last sample of window column `win`.
    int window_end(std::size_t win) const { return window_size + int(win); }
};

struct HistogramSet {
    double lo = -1.0;
    double hi = 1.0;
    int bins = 40;
    std::vector<std::vector<long>> counts;  // one vector per scale index

    double bin_center(int b) const { return lo + (b + 0.5) * (hi - lo) / bins; }
};

struct MedianSummary {
    ScaleCorrelationMatrix median_scale_matrix;
    std::vector<LaggedCorrelationField> median_lag_fields;
    HistogramSet histograms;
};

}  // namespace emdx
