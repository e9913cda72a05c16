#pragma once

#include <string>
#include <vector>

namespace adt::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool step = false;    // hold each value until the next x
    bool markers = false;
};

/// Shaded band over [x0, x1].
struct Span {
    double x0 = 0.0;
    double x1 = 0.0;
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::vector<Span> spans;
    std::string span_label = "anomaly";
    int width = 1000;
    int height = 400;
};

/// Standalone SVG document.
std::string render(const Chart& chart);

} // namespace adt::svg
