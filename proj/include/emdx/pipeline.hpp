#pragma once

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "aggregate.hpp"
#include "io.hpp"

namespace emdx {

namespace detail {

inline unsigned worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("EMDX_THREADS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1 && unsigned(n) < hw) hw = unsigned(n);
    }
    return hw;
}

// Runs fn(i) for i in [0, n) across workers; results land in caller-indexed
// slots so the outcome is independent of scheduling.
template <typename Fn>
void parallel_for_index(std::size_t n, Fn&& fn) {
    unsigned workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

struct PipelineResult {
    std::vector<DayResult> days;  // in panel order
    ScaleCorrelationMatrix median_matrix;
    std::vector<LagWindowRule> average_rules;  // per scale, rounded means across days
    std::vector<LaggedCorrelationField> median_fields;
    HistogramSet histograms;
};

// Full multi-day pipeline for one instrument pair: per-day decomposition and
// correlation structures, then cross-day medians and histograms.
inline PipelineResult run_pipeline(const std::vector<DayPanel>& panels,
                                   const std::string& label_x, const std::string& label_y,
                                   const RunConfig& cfg, bool compute_lag_fields = true) {
    if (panels.empty()) throw std::invalid_argument("no usable day panels");
    PipelineResult res;
    res.days.resize(panels.size());
    SiftConfig sift = cfg.sift();
    detail::parallel_for_index(panels.size(), [&](std::size_t i) {
        res.days[i] = run_day(panels[i], label_x, label_y, sift, compute_lag_fields);
    });

    std::vector<ScaleCorrelationMatrix> matrices;
    for (const DayResult& d : res.days) matrices.push_back(d.matrix);
    res.median_matrix = median_scale_matrix(matrices);
    res.histograms = diagonal_histograms(matrices, cfg.histogram_bins);

    std::size_t nscales = 0;
    for (const DayResult& d : res.days) nscales = std::max(nscales, d.rules.size());
    for (std::size_t k = 0; k < nscales; ++k) {
        double sum_lag = 0.0, sum_win = 0.0;
        std::size_t n = 0;
        for (const DayResult& d : res.days)
            if (k < d.rules.size()) {
                sum_lag += d.rules[k].lambda_max;
                sum_win += d.rules[k].window;
                ++n;
            }
        LagWindowRule avg;
        avg.lambda_max = int(std::lround(sum_lag / double(n)));
        avg.window = int(std::lround(sum_win / double(n)));
        res.average_rules.push_back(avg);

        if (compute_lag_fields) {
            std::vector<LaggedCorrelationField> fields;
            for (const DayResult& d : res.days)
                if (k < d.lag_fields.size()) fields.push_back(d.lag_fields[k]);
            res.median_fields.push_back(median_lag_field(fields, avg));
        }
    }
    return res;
}

// Plain-text run manifest: config, per-day period tables (rounded for
// display) and the per-pair averaged lag/window table.
inline void write_manifest(const RunConfig& cfg, const std::string& label_x,
                           const std::string& label_y, const PipelineResult& res,
                           const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "input=" << cfg.input_path << "\n";
    out << "pair=" << label_x << "," << label_y << "\n";
    out << "transform=" << transform_name(cfg.transform) << "\n";
    out << "sampling_interval_seconds=" << detail::format_number(cfg.dt) << "\n";
    out << "points_per_day=" << cfg.points_per_day << "\n";
    out << "max_imfs=" << (cfg.max_imfs ? std::to_string(*cfg.max_imfs) : "unbounded") << "\n";
    out << "sd_threshold=" << detail::format_number(cfg.sd_threshold) << "\n";
    out << "histogram_bins=" << cfg.histogram_bins << "\n";
    out << "days=" << res.days.size() << "\n";
    out << "\n[periods " << label_x << "]\nday";
    std::size_t np = 0;
    for (const DayResult& d : res.days)
        np = std::max({np, d.periods_x.size(), d.periods_y.size()});
    for (std::size_t k = 1; k <= np; ++k) out << ",imf_" << k;
    out << "\n";
    auto period_rows = [&](auto member) {
        for (const DayResult& d : res.days) {
            out << d.day_id;
            const std::vector<double>& p = d.*member;
            for (std::size_t k = 0; k < np; ++k) {
                out << ",";
                if (k < p.size() && is_defined(p[k])) out << std::llround(p[k]);
            }
            if (d.flagged) out << ",flagged";
            out << "\n";
        }
    };
    period_rows(&DayResult::periods_x);
    out << "\n[periods " << label_y << "]\nday";
    for (std::size_t k = 1; k <= np; ++k) out << ",imf_" << k;
    out << "\n";
    period_rows(&DayResult::periods_y);
    out << "\n[lag_window " << label_x << "," << label_y << "]\nscale,lag,window\n";
    for (std::size_t k = 0; k < res.average_rules.size(); ++k)
        out << "imf_" << (k + 1) << "," << res.average_rules[k].lambda_max << ","
            << res.average_rules[k].window << "\n";
}

}  // namespace emdx
