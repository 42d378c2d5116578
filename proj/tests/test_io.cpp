#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "emdx/io.hpp"

using namespace emdx;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("emdx_test_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string time_tag(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "t%05d", i);
    return buf;
}

void write_long_file(const std::string& path, int days, int points,
                     const std::vector<std::string>& labels, double bad_price_at = -1) {
    std::ofstream out(path);
    out << "day,time,label,price\n";
    int row = 0;
    for (int d = 0; d < days; ++d)
        for (const std::string& lbl : labels)
            for (int t = 0; t < points; ++t) {
                double price = 100.0 + std::sin(0.1 * t) + d;
                if (row == int(bad_price_at)) price = 0.0;
                out << "2014-07-" << (18 + d) << "," << time_tag(t) << "," << lbl << ","
                    << price << "\n";
                ++row;
            }
}

}  // namespace

TEST_CASE("ingest long format groups by day and label") {
    TempDir tmp;
    auto path = tmp.file("panel.csv");
    write_long_file(path, 2, 16, {"SPX", "IPC"});
    RunConfig cfg;
    cfg.points_per_day = 16;
    auto res = ingest(path, cfg);
    REQUIRE(res.panels.size() == 2);
    CHECK(res.warnings.empty());
    CHECK(res.panels[0].day_id == "2014-07-18");
    CHECK(res.panels[0].series_by_label.count("SPX") == 1);
    CHECK(res.panels[0].series_by_label.count("IPC") == 1);
    CHECK(res.panels[0].series_by_label.at("SPX").size() == 16);
    // log transform applied
    CHECK(res.panels[0].series_by_label.at("SPX").values[0] ==
          doctest::Approx(std::log(100.0)));
}

TEST_CASE("a day missing one label is dropped with a warning") {
    TempDir tmp;
    auto path = tmp.file("panel.csv");
    {
        std::ofstream out(path);
        out << "day,time,label,price\n";
        for (int t = 0; t < 16; ++t)
            out << "d1," << time_tag(t) << ",SPX," << 100 + t << "\n";
        for (int t = 0; t < 16; ++t)
            out << "d1," << time_tag(t) << ",IPC," << 50 + t << "\n";
        for (int t = 0; t < 16; ++t)
            out << "d2," << time_tag(t) << ",SPX," << 100 + t << "\n";
    }
    RunConfig cfg;
    cfg.points_per_day = 16;
    cfg.labels = {"SPX", "IPC"};
    auto res = ingest(path, cfg);
    CHECK(res.panels.size() == 1);
    REQUIRE(res.warnings.size() == 1);
    CHECK(res.warnings[0].find("d2") != std::string::npos);
}

TEST_CASE("short day is dropped with a warning") {
    TempDir tmp;
    auto path = tmp.file("panel.csv");
    {
        std::ofstream out(path);
        out << "day,time,label,price\n";
        for (int t = 0; t < 10; ++t)
            out << "d1," << time_tag(t) << ",SPX," << 100 + t << "\n";
    }
    RunConfig cfg;
    cfg.points_per_day = 16;
    auto res = ingest(path, cfg);
    CHECK(res.panels.empty());
    CHECK(res.warnings.size() == 1);
}

TEST_CASE("non-positive price under log transform names the row") {
    TempDir tmp;
    auto path = tmp.file("panel.csv");
    write_long_file(path, 1, 16, {"SPX"}, 5);
    RunConfig cfg;
    cfg.points_per_day = 16;
    CHECK_THROWS_WITH_AS(ingest(path, cfg), doctest::Contains("line 7"), std::runtime_error);
}

TEST_CASE("raw transform accepts non-positive values") {
    TempDir tmp;
    auto path = tmp.file("panel.csv");
    write_long_file(path, 1, 16, {"SPX"}, 5);
    RunConfig cfg;
    cfg.points_per_day = 16;
    cfg.transform = Transform::Raw;
    auto res = ingest(path, cfg);
    CHECK(res.panels.size() == 1);
}

TEST_CASE("log-return transform shortens each series by one") {
    TempDir tmp;
    auto path = tmp.file("panel.csv");
    write_long_file(path, 1, 16, {"SPX"});
    RunConfig cfg;
    cfg.points_per_day = 16;
    cfg.transform = Transform::LogReturn;
    auto res = ingest(path, cfg);
    REQUIRE(res.panels.size() == 1);
    CHECK(res.panels[0].series_by_label.at("SPX").size() == 15);
}

TEST_CASE("wide format is auto-detected from the header") {
    TempDir tmp;
    auto path = tmp.file("panel.csv");
    {
        std::ofstream out(path);
        out << "day,time,SPX,VIX\n";
        for (int t = 0; t < 16; ++t)
            out << "d1," << time_tag(t) << "," << 100 + t << "," << 12 + 0.1 * t << "\n";
    }
    RunConfig cfg;
    cfg.points_per_day = 16;
    auto res = ingest(path, cfg);
    REQUIRE(res.panels.size() == 1);
    CHECK(res.panels[0].series_by_label.count("SPX") == 1);
    CHECK(res.panels[0].series_by_label.count("VIX") == 1);
}

TEST_CASE("rows arriving out of order are sorted by timestamp") {
    TempDir tmp;
    auto path = tmp.file("panel.csv");
    {
        std::ofstream out(path);
        out << "day,time,label,price\n";
        for (int t = 15; t >= 0; --t)
            out << "d1," << time_tag(t) << ",SPX," << 100 + t << "\n";
    }
    RunConfig cfg;
    cfg.points_per_day = 16;
    auto res = ingest(path, cfg);
    REQUIRE(res.panels.size() == 1);
    const auto& v = res.panels[0].series_by_label.at("SPX").values;
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] > v[i - 1]);
}

TEST_CASE("duplicate timestamps are an error") {
    TempDir tmp;
    auto path = tmp.file("panel.csv");
    {
        std::ofstream out(path);
        out << "day,time,label,price\n";
        for (int t = 0; t < 16; ++t)
            out << "d1," << time_tag(t == 5 ? 4 : t) << ",SPX," << 100 + t << "\n";
    }
    RunConfig cfg;
    cfg.points_per_day = 16;
    CHECK_THROWS_AS(ingest(path, cfg), std::runtime_error);
}

TEST_CASE("matrix export/import round trip is bit exact") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto m = ScaleCorrelationMatrix::undefined(5, 5);
    for (std::size_t i = 0; i < m.entries.size(); ++i)
        if (i % 7 != 3) m.entries[i] = u(rng);
    TempDir tmp;
    auto path = tmp.file("matrix.csv");
    export_matrix(m, path);
    auto back = import_matrix(path);
    REQUIRE(back.rows == 5);
    REQUIRE(back.cols == 5);
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
        if (is_defined(m.entries[i]))
            CHECK(back.entries[i] == m.entries[i]);
        else
            CHECK_FALSE(is_defined(back.entries[i]));
    }
    // header names the scales
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "imf_1,imf_2,imf_3,imf_4,imf_5");
}

TEST_CASE("field export has the documented grid shape") {
    Imf ix, iy;
    std::mt19937 rng(6);
    std::normal_distribution<double> dist(0.0, 1.0);
    ix.values.resize(780);
    iy.values.resize(780);
    for (std::size_t t = 0; t < 780; ++t) {
        ix.values[t] = dist(rng);
        iy.values[t] = dist(rng);
    }
    ix.scale_index = iy.scale_index = 1;
    auto f = lagged_windowed_correlation(ix, iy, LagWindowRule{4, 20});
    TempDir tmp;
    auto path = tmp.file("field.csv");
    export_field(f, path);
    std::ifstream in(path);
    std::string line;
    std::size_t lines = 0, cols = 0;
    while (std::getline(in, line)) {
        if (lines == 0) cols = detail::split(line, ',').size();
        ++lines;
    }
    CHECK(lines == 10);      // header + 9 lag rows
    CHECK(cols == 762);      // lag column + 761 window ends
}

TEST_CASE("histogram export has a bin column and one count column per scale") {
    HistogramSet h;
    h.bins = 4;
    h.counts = {{1, 0, 2, 0}, {0, 3, 0, 1}};
    TempDir tmp;
    auto path = tmp.file("hist.csv");
    export_histograms(h, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "bin_center,imf_1,imf_2");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4);
}
