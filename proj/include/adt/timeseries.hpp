#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace adt {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Label = std::uint8_t;

/// Raised for malformed or non-finite input data.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Multivariate series: one row per timestamp, one column per channel.
class TimeSeries {
public:
    TimeSeries(Matrix values, std::optional<std::vector<Label>> point_labels = std::nullopt,
               std::string name = {});

    const Matrix& values() const { return values_; }
    const std::optional<std::vector<Label>>& point_labels() const { return point_labels_; }
    const std::string& name() const { return name_; }

    std::size_t length() const { return static_cast<std::size_t>(values_.rows()); }
    std::size_t channels() const { return static_cast<std::size_t>(values_.cols()); }
    bool has_labels() const { return point_labels_.has_value(); }

    /// Rows [begin, end) as a new series, labels sliced alongside.
    TimeSeries slice(std::size_t begin, std::size_t end) const;

private:
    Matrix values_;
    std::optional<std::vector<Label>> point_labels_;
    std::string name_;
};

/// Per-channel min/max fitted on a reference series.
struct MinMaxRecord {
    std::vector<double> min;
    std::vector<double> max;

    /// Scale with the stored bounds, clamping to [0,1]. Constant channels map to 0.
    TimeSeries apply(const TimeSeries& series) const;
};

struct Normalized {
    TimeSeries series;
    MinMaxRecord record;
};

Normalized minmax_normalize(const TimeSeries& series);

/// Fit a record on rows [begin, end) of `series` only.
MinMaxRecord fit_minmax(const TimeSeries& series, std::size_t begin, std::size_t end);

/// A tau-length view into a shared source matrix.
class Window {
public:
    /// Standalone window owning a copy of `data`.
    Window(Matrix data, std::size_t start_index = 0, Label label = 0);
    /// View of rows [start_index, start_index + tau) of `source`.
    Window(std::shared_ptr<const Matrix> source, std::size_t start_index, std::size_t tau,
           Label label);

    /// tau x m block of the source.
    Eigen::Block<const Matrix, Eigen::Dynamic, Eigen::Dynamic, true> data() const;
    std::size_t start_index() const { return start_index_; }
    std::size_t tau() const { return tau_; }
    std::size_t channels() const { return static_cast<std::size_t>(source_->cols()); }
    Label label() const { return label_; }

    /// Row-major flattening: point 0 channels, point 1 channels, ...
    Eigen::Map<const Eigen::VectorXd> flatten() const;

private:
    std::shared_ptr<const Matrix> source_;
    std::size_t offset_;      // first row inside source_
    std::size_t start_index_;
    std::size_t tau_;
    Label label_;
};

/// Stride-1 sliding windows over a series.
struct WindowSequence {
    std::vector<Window> windows;
    std::size_t tau = 0;
    static constexpr std::size_t stride = 1;

    std::size_t size() const { return windows.size(); }
    bool empty() const { return windows.empty(); }
    const Window& operator[](std::size_t i) const { return windows[i]; }

    /// Windows [begin, end) as a new sequence sharing the same source.
    WindowSequence slice(std::size_t begin, std::size_t end) const;
    std::vector<Label> labels() const;
};

Label point_adjust_label(std::span<const Label> point_labels);

WindowSequence make_windows(const TimeSeries& series, std::size_t tau);

/// Column layout of an input CSV.
struct CsvSchema {
    std::vector<std::string> feature_columns; // empty: every column except the label
    std::optional<std::string> label_column;
    /// Text label values mapped to {0,1}; numeric 0/1 are always accepted.
    std::map<std::string, Label> label_map;
};

TimeSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema);

/// Header row of `feature_names` (or c0..cm-1) plus a trailing `label` column when labelled.
/// Numbers use the shortest representation that parses back to the same double.
void write_csv(const TimeSeries& series, const std::filesystem::path& path,
               const std::vector<std::string>& feature_names = {});

} // namespace adt
