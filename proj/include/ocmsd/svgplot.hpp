// Minimal standalone SVG charts for sweep summaries.
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ocmsd/harness.hpp"

namespace ocmsd {

struct LineSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> spread;  // optional +/- band around y
    std::string colour = "#1f4e9c";
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<LineSeries> series;
};

std::string render_svg(const LinePlot& plot);

struct Heatmap {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> x;  // column centres
    std::vector<double> y;  // row centres
    Eigen::MatrixXd values;  // rows x columns; NaN cells are left blank
};

std::string render_svg(const Heatmap& map);

/// MAE +/- std of AE against the sweep variable.
LinePlot mae_plot(const SweepResult& r);

/// Mean |k_hat - k| per reference mode against the sweep variable.
Heatmap wavenumber_error_map(const SweepResult& r);

/// Mean mode-function error per reference mode against the sweep variable.
Heatmap mode_function_error_map(const SweepResult& r);

std::string sweep_axis_label(SweepKind kind);

}  // namespace ocmsd
