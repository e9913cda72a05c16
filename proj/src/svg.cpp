#include "adt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace adt::svg {

namespace {

constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

std::string num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

} // namespace

std::string render(const Chart& chart) {
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    double y_min = x_min;
    double y_max = -x_min;
    for (const auto& s : chart.series) {
        if (s.x.size() != s.y.size()) {
            throw std::invalid_argument("series '" + s.label + "' has mismatched x and y lengths");
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                continue;
            }
            x_min = std::min(x_min, s.x[i]);
            x_max = std::max(x_max, s.x[i]);
            y_min = std::min(y_min, s.y[i]);
            y_max = std::max(y_max, s.y[i]);
        }
    }
    if (!(x_min <= x_max)) {
        x_min = 0.0;
        x_max = 1.0;
        y_min = 0.0;
        y_max = 1.0;
    }
    if (x_max == x_min) {
        x_max = x_min + 1.0;
    }
    if (y_max == y_min) {
        y_max = y_min + 1.0;
    }
    const double pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    const double w = chart.width;
    const double h = chart.height;
    const double pw = w - kLeft - kRight;
    const double ph = h - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * pw; };
    auto py = [&](double y) { return kTop + (1.0 - (y - y_min) / (y_max - y_min)) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart.width << "\" height=\""
      << chart.height << "\" viewBox=\"0 0 " << chart.width << ' ' << chart.height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(chart.title) << "</text>\n";

    for (const auto& span : chart.spans) {
        const double a = px(std::max(span.x0, x_min));
        const double b = px(std::min(span.x1, x_max));
        o << "<rect class=\"span\" x=\"" << num(a) << "\" y=\"" << kTop << "\" width=\"" << num(std::max(b - a, 0.5))
          << "\" height=\"" << ph << "\" fill=\"#d62728\" fill-opacity=\"0.15\"/>\n";
    }

    o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double yv = y_min + (y_max - y_min) * i / 4.0;
        const double xv = x_min + (x_max - x_min) * i / 4.0;
        o << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">"
          << num(yv) << "</text>\n";
        o << "<text x=\"" << num(px(xv)) << "\" y=\"" << kTop + ph + 16
          << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
    }
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">"
      << escape(chart.x_label) << "</text>\n";
    o << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kTop + ph / 2 << ")\">" << escape(chart.y_label) << "</text>\n";

    for (const auto& s : chart.series) {
        o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                continue;
            }
            if (s.step && i > 0) {
                o << num(px(s.x[i])) << ',' << num(py(s.y[i - 1])) << ' ';
            }
            o << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
        }
        o << "\"/>\n";
        if (s.markers) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                o << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
                  << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
            }
        }
    }

    double ly = kTop + 14;
    for (const auto& s : chart.series) {
        o << "<line x1=\"" << w - kRight - 150 << "\" y1=\"" << ly - 4 << "\" x2=\"" << w - kRight - 130
          << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << w - kRight - 125 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
        ly += 16;
    }
    if (!chart.spans.empty()) {
        o << "<rect x=\"" << w - kRight - 150 << "\" y=\"" << ly - 10 << "\" width=\"20\" height=\"10\" "
          << "fill=\"#d62728\" fill-opacity=\"0.3\"/>\n";
        o << "<text x=\"" << w - kRight - 125 << "\" y=\"" << ly << "\">" << escape(chart.span_label)
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

} // namespace adt::svg
