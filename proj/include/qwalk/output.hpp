#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace qwalk {

// Shortest "%.17g" rendering; parses back to the identical double.
std::string format_double(double value);

struct Column {
    std::string name;
    std::vector<double> values;
    // Printed as integers (step and site indices).
    bool integral = false;
};

struct Table {
    std::vector<Column> columns;

    std::size_t rows() const noexcept;
    // Throws DomainError when column lengths differ.
    void check() const;
};

// UTF-8, header row, comma separated, LF line endings.
std::string to_csv(const Table& table);
void write_text(const std::filesystem::path& path, const std::string& contents);

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    // Optional standard errors, same length as y.
    std::vector<double> error;
};

struct PlotStyle {
    std::string title;
    std::string x_label = "t";
    std::string y_label;
    int width = 720;
    int height = 480;
    // Error bars on every n-th point.
    int error_bar_stride = 10;
};

// Self-contained SVG line chart. Throws DomainError for an empty table.
std::string render_svg(std::span<const PlotSeries> series, const PlotStyle& style);

}  // namespace qwalk
