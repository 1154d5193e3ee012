#include "loopy/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace loopy {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Round tick spacing covering [lo, hi] with roughly `target` intervals.
double tick_step(double lo, double hi, int target) {
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    const double nice = frac < 1.5 ? 1.0 : frac < 3.0 ? 2.0 : frac < 7.0 ? 5.0 : 10.0;
    return nice * mag;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
    const double left = 70.0, right = 20.0, top = 36.0, bottom = 48.0;
    const double pw = spec.width - left - right;
    const double ph = spec.height - top - bottom;

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : spec.series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    }
    if (!std::isfinite(x_lo)) x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
    if (x_hi <= x_lo) x_hi = x_lo + 1.0;
    if (y_hi - y_lo < 1e-12) {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    auto sx = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto sy = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(spec.width) << "\" height=\""
        << num(spec.height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << num(spec.width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(spec.title) << "</text>\n";
    out << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\""
        << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

    const double xs = tick_step(x_lo, x_hi, 8);
    for (double x = std::ceil(x_lo / xs) * xs; x <= x_hi + 1e-9 * xs; x += xs) {
        out << "<line x1=\"" << num(sx(x)) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(sx(x))
            << "\" y2=\"" << num(top + ph + 4) << "\" stroke=\"black\"/>"
            << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(top + ph + 16) << "\" text-anchor=\"middle\">"
            << num(std::abs(x) < 1e-12 * xs ? 0.0 : x) << "</text>\n";
    }
    const double ys = tick_step(y_lo, y_hi, 6);
    for (double y = std::ceil(y_lo / ys) * ys; y <= y_hi + 1e-9 * ys; y += ys) {
        out << "<line x1=\"" << num(left - 4) << "\" y1=\"" << num(sy(y)) << "\" x2=\"" << num(left + pw)
            << "\" y2=\"" << num(sy(y)) << "\" stroke=\"#ddd\"/>"
            << "<text x=\"" << num(left - 6) << "\" y=\"" << num(sy(y) + 4) << "\" text-anchor=\"end\">"
            << num(std::abs(y) < 1e-12 * ys ? 0.0 : y) << "</text>\n";
    }
    out << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(spec.height - 8)
        << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
    out << "<text transform=\"translate(16," << num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(spec.y_label) << "</text>\n";

    double legend_y = top + 14;
    for (const auto& s : spec.series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            out << num(sx(s.x[i])) << "," << num(sy(s.y[i])) << " ";
        }
        out << "\"/>\n";
        if (!s.label.empty()) {
            out << "<line x1=\"" << num(left + pw - 110) << "\" y1=\"" << num(legend_y - 4) << "\" x2=\""
                << num(left + pw - 90) << "\" y2=\"" << num(legend_y - 4) << "\" stroke=\"" << s.color
                << "\" stroke-width=\"2\"/><text x=\"" << num(left + pw - 85) << "\" y=\"" << num(legend_y)
                << "\">" << escape(s.label) << "</text>\n";
            legend_y += 14;
        }
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace loopy
