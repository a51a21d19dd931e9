#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace dynsamp::cli {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;
};

// Numeric CSV with a header line.
CsvTable parse_csv(const std::string& text);

struct PlotSpec {
    std::string title;
    std::string x;
    std::string y;
    std::string series; // empty: single series
    bool log_y = true;
    bool scatter = false;
};

PlotSpec plot_spec(ExperimentKind kind);

// Renders a standalone SVG from CSV text alone.
std::string render_svg(const std::string& csv, const PlotSpec& spec);

} // namespace dynsamp::cli
