#include "svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

namespace dynsamp::cli {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;
constexpr std::array kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v, int digits = 2)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string label(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (pos == std::string::npos)
            return out;
        start = pos + 1;
    }
}

double parse_cell(const std::string& cell)
{
    if (cell == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    if (cell == "inf")
        return std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
        throw std::invalid_argument("csv: non-numeric cell '" + cell + "'");
    return v;
}

} // namespace

std::size_t CsvTable::column(const std::string& name) const
{
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == name)
            return c;
    throw std::invalid_argument("csv: no column named '" + name + "'");
}

CsvTable parse_csv(const std::string& text)
{
    CsvTable table;
    std::size_t start = 0;
    bool first = true;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos)
            end = text.size();
        const std::string line = text.substr(start, end - start);
        start = end + 1;
        if (line.empty())
            continue;
        auto cells = split(line, ',');
        if (first) {
            table.header = std::move(cells);
            first = false;
            continue;
        }
        if (cells.size() != table.header.size())
            throw std::invalid_argument("csv: row width does not match header");
        std::vector<double> row;
        for (const auto& c : cells)
            row.push_back(parse_cell(c));
        table.rows.push_back(std::move(row));
    }
    if (first)
        throw std::invalid_argument("csv: missing header");
    return table;
}

PlotSpec plot_spec(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::recovery_vs_alpha:
        return {"Relative error vs. sampling rate", "alpha", "mean_rel_err", "", true, false};
    case ExperimentKind::pointwise_gap:
        return {"Point-wise gap |X - F|", "index", "abs_gap", "", true, true};
    case ExperimentKind::optimal_t:
        return {"Relative error vs. maximum sampling time", "T", "mean_rel_err", "sigma", true, false};
    case ExperimentKind::condition_vs_t:
        return {"Condition number K vs. T", "T", "K", "", true, false};
    case ExperimentKind::conjecture_dim2:
        return {"Second-mode slab excluded", "excluded_j", "rel_err", "", true, true};
    case ExperimentKind::slab_dim1_dim3:
        return {"First/third-mode slab excluded", "excluded_index", "rel_err", "mode", true, true};
    }
    return {};
}

std::string render_svg(const std::string& csv, const PlotSpec& spec)
{
    const CsvTable table = parse_csv(csv);
    const std::size_t xc = table.column(spec.x), yc = table.column(spec.y);
    const bool grouped = !spec.series.empty();
    const std::size_t sc = grouped ? table.column(spec.series) : 0;

    // Smallest positive y sets the floor used for zeros on a log axis.
    double min_pos = std::numeric_limits<double>::infinity();
    for (const auto& r : table.rows)
        if (r[yc] > 0 && std::isfinite(r[yc]))
            min_pos = std::min(min_pos, r[yc]);
    const double floor_y = std::isfinite(min_pos) ? min_pos : 1.0;

    auto ty = [&](double y) {
        if (!spec.log_y)
            return y;
        return std::log10(std::max(y, floor_y));
    };

    std::map<double, std::vector<std::pair<double, double>>> series;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& r : table.rows) {
        if (!std::isfinite(r[xc]) || !std::isfinite(r[yc]))
            continue;
        const double y = ty(r[yc]);
        series[grouped ? r[sc] : 0.0].emplace_back(r[xc], y);
        x0 = std::min(x0, r[xc]);
        x1 = std::max(x1, r[xc]);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    }
    if (!std::isfinite(x0)) {
        x0 = y0 = 0;
        x1 = y1 = 1;
    }
    if (spec.log_y) {
        y0 = std::floor(y0);
        y1 = std::ceil(y1);
    }
    if (x1 == x0)
        x1 = x0 + 1;
    if (y1 == y0)
        y1 = y0 + 1;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth, 0) + "\" height=\"" +
         num(kHeight, 0) + "\" viewBox=\"0 0 " + num(kWidth, 0) + " " + num(kHeight, 0) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(spec.title) + "</text>\n";
    s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) +
         "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

    // x ticks
    for (int t = 0; t <= 5; ++t) {
        const double x = x0 + (x1 - x0) * t / 5.0;
        const double X = px(x);
        s += "<line x1=\"" + num(X) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(X) +
             "\" y2=\"" + num(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(X) + "\" y=\"" + num(kTop + ph + 18) +
             "\" text-anchor=\"middle\">" + label(x) + "</text>\n";
    }
    // y ticks: decades on a log axis, 5 intervals otherwise
    const int y_steps = spec.log_y ? static_cast<int>(y1 - y0) : 5;
    const int y_stride = std::max(1, y_steps / 8);
    for (int t = 0; t <= y_steps; t += y_stride) {
        const double y = y0 + (y1 - y0) * t / y_steps;
        const double Y = py(y);
        s += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(Y) + "\" x2=\"" + num(kLeft + pw) +
             "\" y2=\"" + num(Y) + "\" stroke=\"#dddddd\"/>\n";
        const std::string txt = spec.log_y ? "1e" + std::to_string(static_cast<int>(std::lround(y)))
                                           : label(y);
        s += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(Y + 4) + "\" text-anchor=\"end\">" +
             txt + "</text>\n";
    }
    s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 15) +
         "\" text-anchor=\"middle\">" + escape(spec.x) + "</text>\n";
    s += "<text x=\"18\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         num(kTop + ph / 2) + ")\">" + escape(spec.y) + (spec.log_y ? " (log scale)" : "") +
         "</text>\n";

    std::size_t colour = 0;
    for (const auto& [key, pts] : series) {
        const char* c = kPalette[colour++ % kPalette.size()];
        if (!spec.scatter && pts.size() > 1) {
            s += "<polyline fill=\"none\" stroke=\"" + std::string(c) + "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < pts.size(); ++i)
                s += (i ? " " : "") + num(px(pts[i].first)) + "," + num(py(pts[i].second));
            s += "\"/>\n";
        }
        for (const auto& [x, y] : pts)
            s += "<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) + "\" r=\"" +
                 (spec.scatter ? "2" : "3") + "\" fill=\"" + c + "\"/>\n";
        if (grouped) {
            const double ly = kTop + 14 + 16.0 * static_cast<double>(colour - 1);
            s += "<rect x=\"" + num(kLeft + pw - 130) + "\" y=\"" + num(ly - 9) +
                 "\" width=\"10\" height=\"10\" fill=\"" + c + "\"/>\n";
            s += "<text x=\"" + num(kLeft + pw - 115) + "\" y=\"" + num(ly) + "\">" +
                 escape(spec.series) + "=" + label(key) + "</text>\n";
        }
    }
    s += "</svg>\n";
    return s;
}

} // namespace dynsamp::cli
