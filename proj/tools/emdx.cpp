// Batch CLI for EMD-based multi-scale correlation analysis of intraday data.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "emdx/emdx.hpp"

namespace fs = std::filesystem;

namespace {

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '-');
    return out;
}

void prepare_output_dir(const std::string& dir) {
    fs::create_directories(dir);
    fs::path probe = fs::path(dir) / ".emdx_write_probe";
    {
        std::ofstream test(probe);
        if (!test) throw std::runtime_error("output directory '" + dir + "' is not writable");
    }
    fs::remove(probe);
}

void report_warnings(const emdx::IngestResult& in) {
    for (const std::string& w : in.warnings) std::cerr << "warning: " << w << "\n";
}

std::pair<std::string, std::string> split_pair(const std::string& pair) {
    std::size_t comma = pair.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == pair.size())
        throw CLI::ValidationError("--pair", "expected two comma-separated labels");
    return {pair.substr(0, comma), pair.substr(comma + 1)};
}

void add_common_options(CLI::App* cmd, emdx::RunConfig& cfg, std::string& transform,
                        std::string& delimiter) {
    cmd->add_option("--input", cfg.input_path, "delimited input file")->required();
    cmd->add_option("--output-dir", cfg.output_dir, "directory for result files");
    cmd->add_option("--points-per-day", cfg.points_per_day, "expected samples per day");
    cmd->add_option("--max-imfs", cfg.max_imfs, "cap on extracted IMFs per series");
    cmd->add_option("--sd-threshold", cfg.sd_threshold, "sifting stop threshold");
    cmd->add_option("--bins", cfg.histogram_bins, "histogram bin count");
    cmd->add_option("--dt", cfg.dt, "sampling interval in seconds");
    cmd->add_option("--transform", transform, "price transform: log|raw|log-return");
    cmd->add_option("--delimiter", delimiter, "field delimiter (single character)");
    cmd->set_config("--config")->configurable(false);
}

void finalize_config(emdx::RunConfig& cfg, const std::string& transform,
                     const std::string& delimiter) {
    cfg.transform = emdx::parse_transform(transform);
    if (delimiter.size() != 1) throw CLI::ValidationError("--delimiter", "must be one character");
    cfg.delimiter = delimiter[0];
    cfg.validate();
}

void write_series_file(const std::vector<double>& v, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "t,value\n";
    for (std::size_t t = 0; t < v.size(); ++t)
        out << (t + 1) << "," << emdx::detail::format_number(v[t]) << "\n";
}

void write_periods_table(const std::vector<emdx::DayPanel>& panels, const std::string& label,
                         const emdx::SiftConfig& sift, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::size_t np = 0;
    for (const auto& panel : panels) {
        emdx::Decomposition d = emdx::decompose(panel.series_by_label.at(label), sift);
        std::vector<double> p;
        for (const auto& imf : d.imfs) p.push_back(imf.period);
        np = std::max(np, p.size());
        rows.push_back(std::move(p));
    }
    out << "day";
    for (std::size_t k = 1; k <= np; ++k) out << ",imf_" << k;
    out << "\n";
    for (std::size_t i = 0; i < panels.size(); ++i) {
        out << panels[i].day_id;
        for (std::size_t k = 0; k < np; ++k) {
            out << ",";
            if (k < rows[i].size() && emdx::is_defined(rows[i][k]))
                out << std::llround(rows[i][k]);
        }
        out << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EMD multi-scale correlation pipeline"};
    app.require_subcommand(1);

    emdx::RunConfig cfg;
    std::string transform = "log";
    std::string delimiter = ",";
    std::string label;
    std::string day_id;
    std::string pair;
    std::string labels_csv;

    CLI::App* cmd_decompose = app.add_subcommand("decompose", "decompose one series into IMF/residue files");
    add_common_options(cmd_decompose, cfg, transform, delimiter);
    cmd_decompose->add_option("--label", label, "instrument label")->required();
    cmd_decompose->add_option("--day", day_id, "day id (default: first usable day)");

    CLI::App* cmd_periods = app.add_subcommand("periods", "per-day IMF period tables");
    add_common_options(cmd_periods, cfg, transform, delimiter);
    cmd_periods->add_option("--labels", labels_csv, "comma-separated labels (default: all)");

    CLI::App* cmd_scale = app.add_subcommand("scale-corr", "per-day and median time-scale correlation matrices");
    add_common_options(cmd_scale, cfg, transform, delimiter);
    cmd_scale->add_option("--pair", pair, "two comma-separated labels")->required();

    CLI::App* cmd_lag = app.add_subcommand("lag-corr", "per-day and median rolling lagged correlation fields");
    add_common_options(cmd_lag, cfg, transform, delimiter);
    cmd_lag->add_option("--pair", pair, "two comma-separated labels")->required();

    CLI::App* cmd_hist = app.add_subcommand("histograms", "per-scale histograms of same-scale correlations");
    add_common_options(cmd_hist, cfg, transform, delimiter);
    cmd_hist->add_option("--pair", pair, "two comma-separated labels")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        finalize_config(cfg, transform, delimiter);
        prepare_output_dir(cfg.output_dir);
        fs::path outdir(cfg.output_dir);

        if (cmd_decompose->parsed()) {
            cfg.labels = {label};
            emdx::IngestResult in = emdx::ingest(cfg.input_path, cfg);
            report_warnings(in);
            if (in.panels.empty()) throw std::runtime_error("no usable days in input");
            const emdx::DayPanel* panel = &in.panels.front();
            if (!day_id.empty()) {
                panel = nullptr;
                for (const auto& p : in.panels)
                    if (p.day_id == day_id) panel = &p;
                if (!panel) throw std::runtime_error("day '" + day_id + "' not found or unusable");
            }
            emdx::Decomposition d =
                emdx::decompose(panel->series_by_label.at(label), cfg.sift());
            std::string stem = sanitize(label) + "_" + sanitize(panel->day_id);
            for (const auto& imf : d.imfs)
                write_series_file(imf.values,
                                  (outdir / (stem + "_imf_" + std::to_string(imf.scale_index) + ".csv")).string());
            write_series_file(d.residue, (outdir / (stem + "_residue.csv")).string());
            std::cout << "wrote " << d.imfs.size() << " IMFs + residue for " << label << " on "
                      << panel->day_id << "\n";
            return 0;
        }

        if (cmd_periods->parsed()) {
            if (!labels_csv.empty()) {
                std::istringstream is(labels_csv);
                std::string tok;
                while (std::getline(is, tok, ',')) cfg.labels.push_back(tok);
            }
            emdx::IngestResult in = emdx::ingest(cfg.input_path, cfg);
            report_warnings(in);
            if (in.panels.empty()) throw std::runtime_error("no usable days in input");
            std::vector<std::string> labels = cfg.labels;
            if (labels.empty())
                for (const auto& [lbl, ts] : in.panels.front().series_by_label)
                    labels.push_back(lbl);
            for (const std::string& lbl : labels)
                write_periods_table(in.panels, lbl, cfg.sift(),
                                    (outdir / ("periods_" + sanitize(lbl) + ".csv")).string());
            std::cout << "wrote period tables for " << labels.size() << " labels over "
                      << in.panels.size() << " days\n";
            return 0;
        }

        auto [lx, ly] = split_pair(pair);
        cfg.labels = {lx, ly};
        emdx::IngestResult in = emdx::ingest(cfg.input_path, cfg);
        report_warnings(in);
        if (in.panels.empty()) throw std::runtime_error("no usable days in input");
        emdx::PipelineResult res = emdx::run_pipeline(in.panels, lx, ly, cfg, cmd_lag->parsed());
        std::string stem = sanitize(lx) + "_" + sanitize(ly);

        if (cmd_scale->parsed()) {
            for (const auto& d : res.days)
                emdx::export_matrix(d.matrix,
                                    (outdir / ("scale_corr_" + stem + "_" + sanitize(d.day_id) + ".csv")).string(),
                                    cfg.delimiter);
            emdx::export_matrix(res.median_matrix,
                                (outdir / ("scale_corr_" + stem + "_median.csv")).string(),
                                cfg.delimiter);
            emdx::write_manifest(cfg, lx, ly, res, (outdir / ("manifest_" + stem + ".txt")).string());
            std::cout << "wrote " << res.days.size() << " daily matrices + median for " << pair << "\n";
        } else if (cmd_lag->parsed()) {
            for (const auto& d : res.days)
                for (const auto& f : d.lag_fields)
                    emdx::export_field(f,
                                       (outdir / ("lag_corr_" + stem + "_" + sanitize(d.day_id) + "_imf_" +
                                                  std::to_string(f.scale_index) + ".csv")).string(),
                                       cfg.delimiter);
            for (const auto& f : res.median_fields)
                emdx::export_field(f,
                                   (outdir / ("lag_corr_" + stem + "_median_imf_" +
                                              std::to_string(f.scale_index) + ".csv")).string(),
                                   cfg.delimiter);
            emdx::write_manifest(cfg, lx, ly, res, (outdir / ("manifest_" + stem + ".txt")).string());
            std::cout << "wrote lag fields for " << res.days.size() << " days + medians for " << pair << "\n";
        } else {
            emdx::export_histograms(res.histograms,
                                    (outdir / ("histograms_" + stem + ".csv")).string(),
                                    cfg.delimiter);
            emdx::write_manifest(cfg, lx, ly, res, (outdir / ("manifest_" + stem + ".txt")).string());
            std::cout << "wrote histograms for " << pair << " over " << res.days.size() << " days\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
