#include "commentbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "commentbench/stats.hpp"

namespace commentbench {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 64;
constexpr double kRight = 24;
constexpr double kTop = 36;
constexpr double kBottom = 52;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string escape_xml(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    bool log = false;

    double transform(double v) const { return log ? std::log10(v) : v; }
    double fraction(double v) const { return hi > lo ? (transform(v) - lo) / (hi - lo) : 0.5; }
};

Axis make_axis(const std::vector<double>& values, bool log) {
    Axis a;
    a.log = log;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : values) {
        if (log && v <= 0) continue;
        lo = std::min(lo, a.transform(v));
        hi = std::max(hi, a.transform(v));
    }
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi == lo) hi = lo + 1;
    a.lo = lo;
    a.hi = hi;
    return a;
}

std::ostringstream open_svg(const PlotOptions& options) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << escape_xml(options.title) << "</text>\n";
    return os;
}

void frame(std::ostringstream& os, const PlotOptions& options, const Axis& x, const Axis& y, bool x_ticks) {
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    auto label = [&](const Axis& a, double v) {
        const double raw = a.log ? std::pow(10.0, v) : v;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", raw);
        return std::string(buf);
    };
    for (int i = 0; i <= 4; ++i) {
        const double f = i / 4.0;
        const double yv = y.lo + f * (y.hi - y.lo);
        const double py = kTop + ph * (1 - f);
        os << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(py + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
           << label(y, yv) << "</text>\n";
        if (x_ticks) {
            const double xv = x.lo + f * (x.hi - x.lo);
            const double px = kLeft + pw * f;
            os << "<text x=\"" << num(px) << "\" y=\"" << kTop + ph + 16
               << "\" text-anchor=\"middle\" font-size=\"11\">" << label(x, xv) << "</text>\n";
        }
    }
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\" font-size=\"12\">"
       << escape_xml(options.x_label) << "</text>\n"
       << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
       << kTop + ph / 2 << ")\">" << escape_xml(options.y_label) << "</text>\n";
}

double px_of(const Axis& a, double v) { return kLeft + (kWidth - kLeft - kRight) * a.fraction(v); }
double py_of(const Axis& a, double v) { return kTop + (kHeight - kTop - kBottom) * (1 - a.fraction(v)); }

} // namespace

std::string line_plot_svg(const std::vector<Series>& series, const PlotOptions& options) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) xs.push_back(x), ys.push_back(y);
    const Axis x = make_axis(xs, options.log_x);
    const Axis y = make_axis(ys, options.log_y);
    auto os = open_svg(options);
    frame(os, options, x, y, true);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* colour = kPalette[i % std::size(kPalette)];
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto& [xv, yv] : series[i].points) {
            if ((x.log && xv <= 0) || (y.log && yv <= 0)) continue;
            if (!first) os << ' ';
            first = false;
            os << num(px_of(x, xv)) << ',' << num(py_of(y, yv));
        }
        os << "\"/>\n";
        const double ly = kTop + 14 + 16 * static_cast<double>(i);
        os << "<rect x=\"" << kWidth - kRight - 150 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\""
           << colour << "\"/>\n<text x=\"" << kWidth - kRight - 135 << "\" y=\"" << ly
           << "\" font-size=\"11\">" << escape_xml(series[i].label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string hexbin_svg(const std::vector<HexCell>& cells, std::size_t bins, const PlotOptions& options) {
    const Axis x{0, 100, false};
    const Axis y{0, 100, false};
    auto os = open_svg(options);
    frame(os, options, x, y, true);
    std::size_t peak = 0;
    for (const auto& c : cells) peak = std::max(peak, c.count);
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    const double rx = pw / static_cast<double>(std::max<std::size_t>(bins, 1)) / std::sqrt(3.0);
    const double ry = ph / static_cast<double>(std::max<std::size_t>(bins, 1)) / 1.5;
    const double r = std::min(rx, ry);
    for (const auto& c : cells) {
        if (c.count == 0) continue;
        const double cx = px_of(x, c.x_center);
        const double cy = py_of(y, c.y_center);
        // log-scaled intensity, light to dark blue
        const double t = std::log1p(static_cast<double>(c.count)) / std::log1p(static_cast<double>(peak));
        const int g = static_cast<int>(230 - 180 * t);
        os << "<polygon fill=\"rgb(" << g / 3 << ',' << g << ",255)\" stroke=\"none\" points=\"";
        for (int k = 0; k < 6; ++k) {
            const double a = M_PI / 3 * k + M_PI / 6;
            if (k) os << ' ';
            os << num(cx + r * std::cos(a)) << ',' << num(cy + r * std::sin(a));
        }
        os << "\"><title>" << c.count << "</title></polygon>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string violin_svg(const std::vector<std::pair<std::string, std::vector<double>>>& groups,
                       const PlotOptions& options) {
    std::vector<double> all;
    for (const auto& g : groups) all.insert(all.end(), g.second.begin(), g.second.end());
    all.push_back(0.0);
    const Axis y = make_axis(all, false);
    const Axis x{0, 1, false};
    auto os = open_svg(options);
    frame(os, options, x, y, false);
    const double pw = kWidth - kLeft - kRight;
    const double slot = pw / static_cast<double>(std::max<std::size_t>(groups.size(), 1));
    constexpr int kSteps = 48;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const auto& [name, values] = groups[gi];
        const double cx = kLeft + slot * (static_cast<double>(gi) + 0.5);
        os << "<text x=\"" << num(cx) << "\" y=\"" << kHeight - kBottom + 16
           << "\" text-anchor=\"middle\" font-size=\"11\">" << escape_xml(name) << "</text>\n";
        if (values.empty()) continue;
        double mean = 0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        const double sd = [&] {
            double s = 0;
            for (double v : values) s += (v - mean) * (v - mean);
            return values.size() > 1 ? std::sqrt(s / static_cast<double>(values.size() - 1)) : 0.0;
        }();
        // Gaussian KDE, Silverman bandwidth
        double h = 1.06 * sd * std::pow(static_cast<double>(values.size()), -0.2);
        if (h <= 0) h = (y.hi - y.lo) / 50;
        std::vector<double> grid(kSteps + 1);
        std::vector<double> dens(kSteps + 1);
        const double lo = *std::min_element(values.begin(), values.end());
        const double hi = *std::max_element(values.begin(), values.end());
        double peak = 0;
        for (int k = 0; k <= kSteps; ++k) {
            grid[k] = lo + (hi - lo) * k / kSteps;
            double d = 0;
            for (double v : values) d += std::exp(-0.5 * std::pow((grid[k] - v) / h, 2));
            dens[k] = d;
            peak = std::max(peak, d);
        }
        const double half = slot * 0.4;
        os << "<polygon fill=\"" << kPalette[gi % std::size(kPalette)]
           << "\" fill-opacity=\"0.45\" stroke=\"black\" stroke-width=\"0.8\" points=\"";
        for (int k = 0; k <= kSteps; ++k)
            os << (k ? " " : "") << num(cx + half * dens[k] / peak) << ',' << num(py_of(y, grid[k]));
        for (int k = kSteps; k >= 0; --k) os << ' ' << num(cx - half * dens[k] / peak) << ',' << num(py_of(y, grid[k]));
        os << "\"/>\n";
        auto hline = [&](double v, const char* dash) {
            os << "<line x1=\"" << num(cx - half) << "\" x2=\"" << num(cx + half) << "\" y1=\"" << num(py_of(y, v))
               << "\" y2=\"" << num(py_of(y, v)) << "\" stroke=\"black\"" << dash << "/>\n";
        };
        hline(mean, "");
        hline(quantile(values, 0.25), " stroke-dasharray=\"4 3\"");
        hline(quantile(values, 0.75), " stroke-dasharray=\"4 3\"");
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace commentbench
