#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "aggregate.hpp"
#include "types.hpp"

namespace emdx {

enum class Transform { Log, Raw, LogReturn };

inline const char* transform_name(Transform t) {
    switch (t) {
        case Transform::Log: return "log";
        case Transform::Raw: return "raw";
        case Transform::LogReturn: return "log-return";
    }
    return "?";
}

inline Transform parse_transform(const std::string& s) {
    if (s == "log") return Transform::Log;
    if (s == "raw") return Transform::Raw;
    if (s == "log-return") return Transform::LogReturn;
    throw std::invalid_argument("unknown transform '" + s + "' (log|raw|log-return)");
}

struct RunConfig {
    std::string input_path;
    std::vector<std::string> labels;  // requested instruments; empty = all in file
    double dt = 30.0;
    int points_per_day = 780;
    std::optional<int> max_imfs = 5;
    double sd_threshold = 0.2;
    int histogram_bins = 40;
    std::string output_dir = ".";
    Transform transform = Transform::Log;
    char delimiter = ',';

    void validate() const {
        if (points_per_day < 8) throw std::invalid_argument("points per day must be >= 8");
        if (histogram_bins < 1) throw std::invalid_argument("histogram bins must be >= 1");
    }

    SiftConfig sift() const {
        SiftConfig cfg;
        cfg.sd_threshold = sd_threshold;
        cfg.max_imfs = max_imfs;
        return cfg;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    return s;
}

inline std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, delim)) out.push_back(trim(field));
    if (!line.empty() && line.back() == delim) out.push_back("");
    return out;
}

// 17 significant digits; undefined serializes to an empty field.
inline void append_number(std::string& out, double v) {
    if (!is_defined(v)) return;
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

inline std::string format_number(double v) {
    std::string s;
    append_number(s, v);
    return s;
}

inline double parse_number(const std::string& s) {
    if (s.empty()) return undefined_value();
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("malformed number '" + s + "'");
    return v;
}

inline std::string scale_name(int scale) {
    return scale == 0 ? "residue" : "imf_" + std::to_string(scale);
}

}  // namespace detail

struct IngestResult {
    std::vector<DayPanel> panels;
    std::vector<std::string> warnings;
};

// Reads delimited intraday data in long format (day,time,label,price) or
// wide format (day,time,<label1>,<label2>,...), auto-detected from the
// header. Keeps only days where every requested label has exactly
// points_per_day rows; timestamps within a day must be strictly increasing
// after a stable sort. Prices are transformed per config.
inline IngestResult ingest(const std::string& path, const RunConfig& cfg) {
    cfg.validate();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("input file '" + path + "' is empty");
    std::vector<std::string> header = detail::split(line, cfg.delimiter);
    if (header.size() < 3) throw std::runtime_error("header needs at least 3 columns");
    if (detail::lower(header[0]) != "day" || detail::lower(header[1]) != "time")
        throw std::runtime_error("header must start with day,time columns");

    bool long_format = header.size() == 4 && detail::lower(header[2]) == "label" &&
                       detail::lower(header[3]) == "price";
    std::vector<std::string> wide_labels(header.begin() + 2, header.end());

    struct Row {
        std::string time;
        double price;
        std::size_t line_no;
    };
    // day -> label -> rows, keyed in sorted day order
    std::map<std::string, std::map<std::string, std::vector<Row>>> days;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> f = detail::split(line, cfg.delimiter);
        if (f.size() != header.size())
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " fields, got " +
                                     std::to_string(f.size()));
        if (long_format) {
            days[f[0]][f[2]].push_back({f[1], detail::parse_number(f[3]), line_no});
        } else {
            for (std::size_t c = 2; c < f.size(); ++c)
                days[f[0]][wide_labels[c - 2]].push_back({f[1], detail::parse_number(f[c]), line_no});
        }
    }

    std::vector<std::string> wanted = cfg.labels;
    if (wanted.empty()) {
        if (long_format) {
            for (auto& [day, bylabel] : days)
                for (auto& [lbl, rows] : bylabel)
                    if (std::find(wanted.begin(), wanted.end(), lbl) == wanted.end())
                        wanted.push_back(lbl);
            std::sort(wanted.begin(), wanted.end());
        } else {
            wanted = wide_labels;
        }
    }

    IngestResult result;
    for (auto& [day, bylabel] : days) {
        bool ok = true;
        for (const std::string& lbl : wanted) {
            auto it = bylabel.find(lbl);
            std::size_t n = it == bylabel.end() ? 0 : it->second.size();
            if (n != std::size_t(cfg.points_per_day)) {
                result.warnings.push_back("day " + day + " dropped: label " + lbl + " has " +
                                          std::to_string(n) + " of " +
                                          std::to_string(cfg.points_per_day) + " points");
                ok = false;
                break;
            }
        }
        if (!ok) continue;

        DayPanel panel;
        panel.day_id = day;
        for (const std::string& lbl : wanted) {
            auto& rows = bylabel[lbl];
            std::stable_sort(rows.begin(), rows.end(),
                             [](const Row& a, const Row& b) { return a.time < b.time; });
            for (std::size_t i = 1; i < rows.size(); ++i)
                if (!(rows[i - 1].time < rows[i].time))
                    throw std::runtime_error("day " + day + " label " + lbl +
                                             ": duplicate timestamp '" + rows[i].time + "'");
            TimeSeries ts;
            ts.dt = cfg.dt;
            ts.label = lbl;
            for (const Row& r : rows) {
                if (!std::isfinite(r.price))
                    throw std::runtime_error("line " + std::to_string(r.line_no) +
                                             ": missing or non-finite price");
                if (cfg.transform != Transform::Raw && !(r.price > 0.0))
                    throw std::runtime_error("line " + std::to_string(r.line_no) +
                                             ": non-positive price under log transform");
                ts.values.push_back(cfg.transform == Transform::Raw ? r.price : std::log(r.price));
            }
            if (cfg.transform == Transform::LogReturn) {
                std::vector<double> ret(ts.values.size() - 1);
                for (std::size_t i = 0; i + 1 < ts.values.size(); ++i)
                    ret[i] = ts.values[i + 1] - ts.values[i];
                ts.values = std::move(ret);
            }
            panel.series_by_label.emplace(lbl, std::move(ts));
        }
        result.panels.push_back(std::move(panel));
    }
    return result;
}

inline void export_matrix(const ScaleCorrelationMatrix& m, const std::string& path,
                          char delim = ',') {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    std::string row;
    for (std::size_t j = 0; j < m.cols; ++j) {
        if (j) row += delim;
        row += detail::scale_name(m.col_scales[j]);
    }
    row += '\n';
    out << row;
    for (std::size_t i = 0; i < m.rows; ++i) {
        row.clear();
        for (std::size_t j = 0; j < m.cols; ++j) {
            if (j) row += delim;
            detail::append_number(row, m.at(i, j));
        }
        row += '\n';
        out << row;
    }
}

inline void export_field(const LaggedCorrelationField& f, const std::string& path,
                         char delim = ',') {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    std::string row = "lag";
    for (std::size_t w = 0; w < f.num_windows(); ++w) {
        row += delim;
        row += "t_";
        row += std::to_string(f.window_end(w));
    }
    row += '\n';
    out << row;
    for (std::size_t r = 0; r < f.lags.size(); ++r) {
        row.clear();
        row += std::to_string(f.lags[r]);
        for (std::size_t w = 0; w < f.num_windows(); ++w) {
            row += delim;
            detail::append_number(row, f.at(r, w));
        }
        row += '\n';
        out << row;
    }
}

inline void export_histograms(const HistogramSet& h, const std::string& path, char delim = ',') {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "bin_center";
    for (std::size_t k = 0; k < h.counts.size(); ++k) out << delim << "imf_" << (k + 1);
    out << "\n";
    for (int b = 0; b < h.bins; ++b) {
        out << detail::format_number(h.bin_center(b));
        for (const auto& scale_counts : h.counts) out << delim << scale_counts[std::size_t(b)];
        out << "\n";
    }
}

// Re-parses a matrix written by export_matrix; used for round-trip checks
// and for consuming exported results downstream.
inline ScaleCorrelationMatrix import_matrix(const std::string& path, char delim = ',') {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty matrix file '" + path + "'");
    ScaleCorrelationMatrix m;
    for (const std::string& name : detail::split(line, delim)) {
        if (name == "residue") {
            m.col_scales.push_back(0);
            m.includes_residue = true;
        } else {
            m.col_scales.push_back(std::stoi(name.substr(4)));
        }
    }
    m.cols = m.col_scales.size();
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> f = detail::split(line, delim);
        if (f.size() != m.cols) throw std::runtime_error("ragged matrix row in '" + path + "'");
        for (const std::string& s : f) m.entries.push_back(detail::parse_number(s));
        ++m.rows;
    }
    m.row_scales = m.col_scales;
    m.row_scales.resize(m.rows, 0);
    return m;
}

}  // namespace emdx
