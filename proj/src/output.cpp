#include "qwalk/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qwalk {

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

std::size_t Table::rows() const noexcept {
    return columns.empty() ? 0 : columns.front().values.size();
}

void Table::check() const {
    for (const Column& c : columns) {
        if (c.values.size() != rows()) {
            throw DomainError("table column '" + c.name + "' has " +
                              std::to_string(c.values.size()) + " rows, expected " +
                              std::to_string(rows()));
        }
    }
}

std::string to_csv(const Table& table) {
    table.check();
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c != 0) out += ',';
        out += table.columns[c].name;
    }
    out += '\n';
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c != 0) out += ',';
            const Column& col = table.columns[c];
            out += col.integral ? std::to_string(std::llround(col.values[r]))
                                : format_double(col.values[r]);
        }
        out += '\n';
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
    file << contents;
    if (!file) throw std::runtime_error("failed writing " + path.string());
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape_xml(const std::string& text) {
    std::string out;
    for (char ch : text) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

// Round step for roughly `target` ticks across [lo, hi].
double tick_step(double lo, double hi, int target) {
    const double raw = (hi - lo) / target;
    const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * magnitude) return m * magnitude;
    }
    return 10.0 * magnitude;
}

std::string fixed(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.2f", v);
    return buffer;
}

std::string tick_label(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buffer;
}

}  // namespace

std::string render_svg(std::span<const PlotSeries> series, const PlotStyle& style) {
    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -x_lo;
    double y_lo = x_lo;
    double y_hi = -x_lo;
    std::size_t points = 0;
    for (const PlotSeries& s : series) {
        if (s.x.size() != s.y.size() || (!s.error.empty() && s.error.size() != s.y.size())) {
            throw DomainError("render_svg: series '" + s.name + "' has mismatched lengths");
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double e = s.error.empty() ? 0.0 : s.error[i];
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i] - e);
            y_hi = std::max(y_hi, s.y[i] + e);
        }
        points += s.x.size();
    }
    if (points == 0) throw DomainError("render_svg: nothing to plot");
    if (x_hi <= x_lo) x_hi = x_lo + 1.0;
    if (y_hi <= y_lo) {
        y_lo -= 0.5;
        y_hi += 0.5;
    }

    const double left = 70, right = 160, top = 40, bottom = 50;
    const double plot_w = style.width - left - right;
    const double plot_h = style.height - top - bottom;
    auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\""
        << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!style.title.empty()) {
        svg << "<text x=\"" << fixed(left + plot_w / 2) << "\" y=\"22\" text-anchor=\"middle\""
            << " font-size=\"14\">" << escape_xml(style.title) << "</text>\n";
    }

    svg << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
    svg << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top + plot_h) << "\" x2=\""
        << fixed(left + plot_w) << "\" y2=\"" << fixed(top + plot_h) << "\"/>\n";
    svg << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(left)
        << "\" y2=\"" << fixed(top + plot_h) << "\"/>\n";
    svg << "</g>\n<g class=\"ticks\">\n";
    const double xs = tick_step(x_lo, x_hi, 8);
    for (double x = std::ceil(x_lo / xs) * xs; x <= x_hi + 1e-9 * xs; x += xs) {
        svg << "<line x1=\"" << fixed(px(x)) << "\" y1=\"" << fixed(top + plot_h) << "\" x2=\""
            << fixed(px(x)) << "\" y2=\"" << fixed(top + plot_h + 5) << "\" stroke=\"black\"/>"
            << "<text x=\"" << fixed(px(x)) << "\" y=\"" << fixed(top + plot_h + 18)
            << "\" text-anchor=\"middle\">" << tick_label(x) << "</text>\n";
    }
    const double ys = tick_step(y_lo, y_hi, 6);
    for (double y = std::ceil(y_lo / ys) * ys; y <= y_hi + 1e-9 * ys; y += ys) {
        svg << "<line x1=\"" << fixed(left - 5) << "\" y1=\"" << fixed(py(y)) << "\" x2=\""
            << fixed(left) << "\" y2=\"" << fixed(py(y)) << "\" stroke=\"black\"/>"
            << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(py(y) + 4)
            << "\" text-anchor=\"end\">" << tick_label(y) << "</text>\n";
    }
    svg << "</g>\n";
    svg << "<text class=\"x-label\" x=\"" << fixed(left + plot_w / 2) << "\" y=\""
        << fixed(style.height - 10.0) << "\" text-anchor=\"middle\">" << escape_xml(style.x_label)
        << "</text>\n";
    svg << "<text class=\"y-label\" transform=\"translate(16 " << fixed(top + plot_h / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">" << escape_xml(style.y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const PlotSeries& s = series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        svg << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i != 0) svg << ' ';
            svg << fixed(px(s.x[i])) << ',' << fixed(py(s.y[i]));
        }
        svg << "\"/>\n";
        if (!s.error.empty() && style.error_bar_stride > 0) {
            const auto stride = static_cast<std::size_t>(style.error_bar_stride);
            for (std::size_t i = 0; i < s.x.size(); i += stride) {
                svg << "<line class=\"error-bar\" x1=\"" << fixed(px(s.x[i])) << "\" y1=\""
                    << fixed(py(s.y[i] - s.error[i])) << "\" x2=\"" << fixed(px(s.x[i]))
                    << "\" y2=\"" << fixed(py(s.y[i] + s.error[i])) << "\" stroke=\"" << color
                    << "\"/>\n";
            }
        }
        const double ly = top + 10 + 18.0 * static_cast<double>(k);
        svg << "<g class=\"legend\"><line x1=\"" << fixed(left + plot_w + 15) << "\" y1=\""
            << fixed(ly) << "\" x2=\"" << fixed(left + plot_w + 40) << "\" y2=\"" << fixed(ly)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/><text x=\""
            << fixed(left + plot_w + 46) << "\" y=\"" << fixed(ly + 4) << "\">"
            << escape_xml(s.name) << "</text></g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace qwalk
