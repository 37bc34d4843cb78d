#include "ocmsd/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace ocmsd {

namespace {

constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 110, kTop = 40, kBottom = 55;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void settle() {
        if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
        if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
    }
};

std::vector<double> ticks(const Range& r, int target = 6) {
    const double raw = (r.hi - r.lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    std::vector<double> t;
    for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * step; v += step) t.push_back(v);
    return t;
}

void frame(std::ostringstream& s, const std::string& title, const std::string& xl, const std::string& yl) {
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
      << "</text>\n"
      << "<text x=\"" << (kLeft + kW - kRight) / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">"
      << escape(xl) << "</text>\n"
      << "<text transform=\"translate(16," << (kTop + kH - kBottom) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(yl) << "</text>\n";
}

void axes(std::ostringstream& s, const Range& xr, const Range& yr) {
    const double x0 = kLeft, x1 = kW - kRight, y0 = kH - kBottom, y1 = kTop;
    s << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\"" << y0 - y1
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : ticks(xr)) {
        const double px = x0 + (t - xr.lo) / (xr.hi - xr.lo) * (x1 - x0);
        s << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\"" << y0 + 5
          << "\" stroke=\"black\"/><text x=\"" << px << "\" y=\"" << y0 + 18 << "\" text-anchor=\"middle\">"
          << num(t) << "</text>\n";
    }
    for (double t : ticks(yr)) {
        const double py = y0 - (t - yr.lo) / (yr.hi - yr.lo) * (y0 - y1);
        s << "<line x1=\"" << x0 - 5 << "\" y1=\"" << py << "\" x2=\"" << x0 << "\" y2=\"" << py
          << "\" stroke=\"black\"/><text x=\"" << x0 - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
          << num(t) << "</text>\n";
    }
}

// perceptually ordered dark-blue to yellow ramp
std::string ramp(double t) {
    static const double stops[5][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const int i = std::min(static_cast<int>(t), 3);
    const double f = t - i;
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])),
                  static_cast<int>(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])),
                  static_cast<int>(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])));
    return buf;
}

Heatmap per_mode_map(const SweepResult& r, bool wavenumber) {
    std::size_t M = 0;
    for (const auto& t : r.trials) M = std::max(M, wavenumber ? t.wavenumber_errors.size() : t.mode_function_errors.size());
    Heatmap h;
    h.x = r.spec.values;
    for (std::size_t m = 1; m <= M; ++m) h.y.push_back(static_cast<double>(m));
    h.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(h.x.size()));
    Eigen::MatrixXd counts = h.values;
    for (const auto& t : r.trials) {
        if (t.status != TrialStatus::Ok) continue;
        const auto& v = wavenumber ? t.wavenumber_errors : t.mode_function_errors;
        for (std::size_t m = 0; m < v.size(); ++m) {
            if (!std::isfinite(v[m])) continue;
            h.values(static_cast<Eigen::Index>(m), t.value_index) += std::abs(v[m]);
            counts(static_cast<Eigen::Index>(m), t.value_index) += 1.0;
        }
    }
    for (Eigen::Index i = 0; i < h.values.rows(); ++i)
        for (Eigen::Index j = 0; j < h.values.cols(); ++j)
            h.values(i, j) = counts(i, j) > 0 ? h.values(i, j) / counts(i, j) : std::numeric_limits<double>::quiet_NaN();
    h.x_label = sweep_axis_label(r.spec.kind);
    h.y_label = "mode order";
    return h;
}

}  // namespace

std::string render_svg(const LinePlot& plot) {
    Range xr, yr;
    for (const auto& s : plot.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xr.add(s.x[i]);
            yr.add(s.y[i]);
            if (i < s.spread.size() && std::isfinite(s.spread[i])) {
                yr.add(s.y[i] - s.spread[i]);
                yr.add(s.y[i] + s.spread[i]);
            }
        }
    xr.settle();
    yr.settle();
    const double x0 = kLeft, x1 = kW - kRight, y0 = kH - kBottom, y1 = kTop;
    auto px = [&](double x) { return x0 + (x - xr.lo) / (xr.hi - xr.lo) * (x1 - x0); };
    auto py = [&](double y) { return y0 - (y - yr.lo) / (yr.hi - yr.lo) * (y0 - y1); };

    std::ostringstream s;
    frame(s, plot.title, plot.x_label, plot.y_label);
    axes(s, xr, yr);
    int legend = 0;
    for (const auto& ser : plot.series) {
        if (!ser.spread.empty()) {
            std::ostringstream up, down;
            for (std::size_t i = 0; i < ser.x.size(); ++i) {
                if (!std::isfinite(ser.y[i]) || !std::isfinite(ser.spread[i])) continue;
                up << px(ser.x[i]) << ',' << py(ser.y[i] + ser.spread[i]) << ' ';
            }
            for (std::size_t i = ser.x.size(); i-- > 0;) {
                if (!std::isfinite(ser.y[i]) || !std::isfinite(ser.spread[i])) continue;
                down << px(ser.x[i]) << ',' << py(std::max(ser.y[i] - ser.spread[i], yr.lo)) << ' ';
            }
            s << "<polygon points=\"" << up.str() << down.str() << "\" fill=\"" << ser.colour
              << "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
        }
        s << "<polyline fill=\"none\" stroke=\"" << ser.colour << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t i = 0; i < ser.x.size(); ++i)
            if (std::isfinite(ser.y[i])) s << px(ser.x[i]) << ',' << py(ser.y[i]) << ' ';
        s << "\"/>\n";
        for (std::size_t i = 0; i < ser.x.size(); ++i)
            if (std::isfinite(ser.y[i]))
                s << "<circle cx=\"" << px(ser.x[i]) << "\" cy=\"" << py(ser.y[i]) << "\" r=\"2.5\" fill=\""
                  << ser.colour << "\"/>\n";
        const double ly = kTop + 14 + 16 * legend++;
        s << "<line x1=\"" << x1 + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << x1 + 28 << "\" y2=\"" << ly - 4
          << "\" stroke=\"" << ser.colour << "\" stroke-width=\"2\"/><text x=\"" << x1 + 32 << "\" y=\"" << ly
          << "\">" << escape(ser.label) << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::string render_svg(const Heatmap& map) {
    Range xr, yr, vr;
    for (double v : map.x) xr.add(v);
    for (double v : map.y) yr.add(v);
    for (Eigen::Index i = 0; i < map.values.size(); ++i) vr.add(map.values.data()[i]);
    // cells extend half a spacing past the outermost centres
    auto pad = [](Range& r, const std::vector<double>& c) {
        const double step = c.size() > 1 ? std::abs(c[1] - c[0]) : 1.0;
        r.lo -= 0.5 * step;
        r.hi += 0.5 * step;
    };
    xr.settle();
    yr.settle();
    pad(xr, map.x);
    pad(yr, map.y);
    vr.settle();
    const double x0 = kLeft, x1 = kW - kRight, y0 = kH - kBottom, y1 = kTop;
    auto px = [&](double x) { return x0 + (x - xr.lo) / (xr.hi - xr.lo) * (x1 - x0); };
    auto py = [&](double y) { return y0 - (y - yr.lo) / (yr.hi - yr.lo) * (y0 - y1); };

    std::ostringstream s;
    frame(s, map.title, map.x_label, map.y_label);
    for (std::size_t j = 0; j < map.x.size(); ++j) {
        const double dx = map.x.size() > 1 ? std::abs(map.x[1] - map.x[0]) : 1.0;
        for (std::size_t i = 0; i < map.y.size(); ++i) {
            const double v = map.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (!std::isfinite(v)) continue;
            const double dy = map.y.size() > 1 ? std::abs(map.y[1] - map.y[0]) : 1.0;
            const double ax = std::min(px(map.x[j] - 0.5 * dx), px(map.x[j] + 0.5 * dx));
            const double ay = std::min(py(map.y[i] - 0.5 * dy), py(map.y[i] + 0.5 * dy));
            s << "<rect x=\"" << ax << "\" y=\"" << ay << "\" width=\"" << std::abs(px(map.x[j] + 0.5 * dx) - px(map.x[j] - 0.5 * dx))
              << "\" height=\"" << std::abs(py(map.y[i] + 0.5 * dy) - py(map.y[i] - 0.5 * dy)) << "\" fill=\""
              << ramp((v - vr.lo) / (vr.hi - vr.lo)) << "\"/>\n";
        }
    }
    axes(s, xr, yr);
    // colour bar
    const double bx = x1 + 20;
    for (int k = 0; k < 50; ++k) {
        const double t = k / 49.0;
        s << "<rect x=\"" << bx << "\" y=\"" << y0 - (k + 1) * (y0 - y1) / 50.0 << "\" width=\"14\" height=\""
          << (y0 - y1) / 50.0 + 0.5 << "\" fill=\"" << ramp(t) << "\"/>\n";
    }
    s << "<text x=\"" << bx + 18 << "\" y=\"" << y0 << "\">" << num(vr.lo) << "</text>\n"
      << "<text x=\"" << bx + 18 << "\" y=\"" << y1 + 10 << "\">" << num(vr.hi) << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

std::string sweep_axis_label(SweepKind kind) {
    switch (kind) {
        case SweepKind::Snr: return "SNR (dB)";
        case SweepKind::Aperture: return "array aperture (m)";
        case SweepKind::Elements: return "number of elements";
        case SweepKind::Frequency: return "frequency (Hz)";
        case SweepKind::WindowLength: return "10 log10 T (dB)";
    }
    return "";
}

LinePlot mae_plot(const SweepResult& r) {
    LineSeries s;
    s.label = "MAE";
    for (const auto& a : r.aggregates) {
        s.x.push_back(a.sweep_value);
        s.y.push_back(a.mae_m);
        s.spread.push_back(a.std_ae_m);
    }
    return {std::string("Depth MAE, ") + to_string(r.spec.kind) + " sweep", sweep_axis_label(r.spec.kind),
            "MAE (m)", {s}};
}

Heatmap wavenumber_error_map(const SweepResult& r) {
    Heatmap h = per_mode_map(r, true);
    h.title = "Mean |k_hat - k| (1/m)";
    return h;
}

Heatmap mode_function_error_map(const SweepResult& r) {
    Heatmap h = per_mode_map(r, false);
    h.title = "Mean mode-function error";
    return h;
}

}  // namespace ocmsd
