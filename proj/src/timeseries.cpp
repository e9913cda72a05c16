#include "adt/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace adt {

namespace {

void require_finite(const Matrix& values) {
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            if (!std::isfinite(values(r, c))) {
                std::ostringstream msg;
                msg << "non-finite value at row " << r << ", channel " << c;
                throw DataError(msg.str());
            }
        }
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                field += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch != '\r') {
            field += ch;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

bool parse_double(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) {
        return false;
    }
    const char* begin = t.data();
    if (*begin == '+') {
        ++begin;
    }
    const auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), out);
    return ec == std::errc() && ptr == t.data() + t.size();
}

void append_number(std::string& out, double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, ptr);
}

} // namespace

TimeSeries::TimeSeries(Matrix values, std::optional<std::vector<Label>> point_labels,
                       std::string name)
    : values_(std::move(values)), point_labels_(std::move(point_labels)), name_(std::move(name)) {
    if (values_.rows() < 1 || values_.cols() < 1) {
        throw DataError("time series needs at least one row and one channel");
    }
    if (point_labels_) {
        if (point_labels_->size() != length()) {
            throw DataError("point label count " + std::to_string(point_labels_->size()) +
                            " does not match series length " + std::to_string(length()));
        }
        for (const Label l : *point_labels_) {
            if (l > 1) {
                throw DataError("point labels must be 0 or 1");
            }
        }
    }
}

TimeSeries TimeSeries::slice(std::size_t begin, std::size_t end) const {
    if (begin >= end || end > length()) {
        throw std::out_of_range("invalid time series slice");
    }
    const auto rows = static_cast<Eigen::Index>(end - begin);
    Matrix part = values_.middleRows(static_cast<Eigen::Index>(begin), rows);
    std::optional<std::vector<Label>> labels;
    if (point_labels_) {
        labels.emplace(point_labels_->begin() + static_cast<std::ptrdiff_t>(begin),
                       point_labels_->begin() + static_cast<std::ptrdiff_t>(end));
    }
    return TimeSeries(std::move(part), std::move(labels), name_);
}

MinMaxRecord fit_minmax(const TimeSeries& series, std::size_t begin, std::size_t end) {
    if (begin >= end || end > series.length()) {
        throw std::out_of_range("invalid normalization range");
    }
    const auto block = series.values().middleRows(static_cast<Eigen::Index>(begin),
                                                  static_cast<Eigen::Index>(end - begin));
    require_finite(block);
    MinMaxRecord rec;
    rec.min.resize(series.channels());
    rec.max.resize(series.channels());
    for (std::size_t c = 0; c < series.channels(); ++c) {
        rec.min[c] = block.col(static_cast<Eigen::Index>(c)).minCoeff();
        rec.max[c] = block.col(static_cast<Eigen::Index>(c)).maxCoeff();
    }
    return rec;
}

TimeSeries MinMaxRecord::apply(const TimeSeries& series) const {
    if (series.channels() != min.size() || min.size() != max.size()) {
        throw DataError("normalization record has " + std::to_string(min.size()) +
                        " channels, series has " + std::to_string(series.channels()));
    }
    require_finite(series.values());
    Matrix out(series.values().rows(), series.values().cols());
    for (std::size_t c = 0; c < min.size(); ++c) {
        const auto col = static_cast<Eigen::Index>(c);
        const double span = max[c] - min[c];
        if (span <= 0.0) {
            out.col(col).setZero();
            continue;
        }
        out.col(col) = ((series.values().col(col).array() - min[c]) / span).cwiseMax(0.0).cwiseMin(1.0);
    }
    return TimeSeries(std::move(out), series.point_labels(), series.name());
}

Normalized minmax_normalize(const TimeSeries& series) {
    MinMaxRecord rec = fit_minmax(series, 0, series.length());
    TimeSeries scaled = rec.apply(series);
    return {std::move(scaled), std::move(rec)};
}

Window::Window(Matrix data, std::size_t start_index, Label label)
    : source_(std::make_shared<const Matrix>(std::move(data))),
      offset_(0),
      start_index_(start_index),
      tau_(static_cast<std::size_t>(source_->rows())),
      label_(label) {
    if (tau_ < 1 || source_->cols() < 1) {
        throw DataError("window needs at least one point and one channel");
    }
}

Window::Window(std::shared_ptr<const Matrix> source, std::size_t start_index, std::size_t tau,
               Label label)
    : source_(std::move(source)), offset_(start_index), start_index_(start_index), tau_(tau),
      label_(label) {
    if (!source_ || tau_ < 1 || offset_ + tau_ > static_cast<std::size_t>(source_->rows())) {
        throw std::out_of_range("window exceeds its source");
    }
}

Eigen::Block<const Matrix, Eigen::Dynamic, Eigen::Dynamic, true> Window::data() const {
    return source_->middleRows(static_cast<Eigen::Index>(offset_), static_cast<Eigen::Index>(tau_));
}

Eigen::Map<const Eigen::VectorXd> Window::flatten() const {
    const auto m = static_cast<std::size_t>(source_->cols());
    return {source_->data() + offset_ * m, static_cast<Eigen::Index>(tau_ * m)};
}

WindowSequence WindowSequence::slice(std::size_t begin, std::size_t end) const {
    if (begin > end || end > windows.size()) {
        throw std::out_of_range("invalid window slice");
    }
    WindowSequence out;
    out.tau = tau;
    out.windows.assign(windows.begin() + static_cast<std::ptrdiff_t>(begin),
                       windows.begin() + static_cast<std::ptrdiff_t>(end));
    return out;
}

std::vector<Label> WindowSequence::labels() const {
    std::vector<Label> out;
    out.reserve(windows.size());
    for (const auto& w : windows) {
        out.push_back(w.label());
    }
    return out;
}

Label point_adjust_label(std::span<const Label> point_labels) {
    return std::any_of(point_labels.begin(), point_labels.end(), [](Label l) { return l != 0; })
               ? Label{1}
               : Label{0};
}

WindowSequence make_windows(const TimeSeries& series, std::size_t tau) {
    const std::size_t n = series.length();
    if (tau < 1) {
        throw std::invalid_argument("window length must be at least 1");
    }
    if (tau > n) {
        throw std::invalid_argument("window length " + std::to_string(tau) +
                                    " exceeds series length " + std::to_string(n));
    }
    auto source = std::make_shared<const Matrix>(series.values());
    WindowSequence seq;
    seq.tau = tau;
    seq.windows.reserve(n - tau + 1);

    // Running count of anomalous points inside the current window.
    const auto* labels = series.has_labels() ? &*series.point_labels() : nullptr;
    std::size_t anomalous = 0;
    if (labels) {
        for (std::size_t i = 0; i < tau; ++i) {
            anomalous += (*labels)[i];
        }
    }
    for (std::size_t start = 0; start + tau <= n; ++start) {
        if (labels && start > 0) {
            anomalous += (*labels)[start + tau - 1];
            anomalous -= (*labels)[start - 1];
        }
        seq.windows.emplace_back(source, start, tau, anomalous > 0 ? Label{1} : Label{0});
    }
    return seq;
}

TimeSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open CSV file " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError(path.string() + ": missing header row");
    }
    const auto header = split_csv_line(line);
    std::unordered_map<std::string, std::size_t> column_index;
    for (std::size_t i = 0; i < header.size(); ++i) {
        column_index.emplace(trim(header[i]), i);
    }
    auto find_column = [&](const std::string& name) {
        const auto it = column_index.find(name);
        if (it == column_index.end()) {
            throw DataError(path.string() + ": missing column '" + name + "'");
        }
        return it->second;
    };

    std::optional<std::size_t> label_col;
    if (schema.label_column) {
        label_col = find_column(*schema.label_column);
    }
    std::vector<std::size_t> feature_cols;
    if (schema.feature_columns.empty()) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (!label_col || i != *label_col) {
                feature_cols.push_back(i);
            }
        }
    } else {
        for (const auto& name : schema.feature_columns) {
            feature_cols.push_back(find_column(name));
        }
    }
    if (feature_cols.empty()) {
        throw DataError(path.string() + ": no feature columns");
    }

    std::vector<double> flat;
    std::vector<Label> labels;
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw DataError(path.string() + ": row " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields, header has " +
                            std::to_string(header.size()));
        }
        for (const std::size_t col : feature_cols) {
            double v = 0.0;
            if (!parse_double(fields[col], v)) {
                throw DataError(path.string() + ": row " + std::to_string(line_no) +
                                ", column '" + trim(header[col]) + "': cannot parse '" +
                                fields[col] + "' as a number");
            }
            if (!std::isfinite(v)) {
                throw DataError(path.string() + ": row " + std::to_string(line_no) +
                                ": non-finite value");
            }
            flat.push_back(v);
        }
        if (label_col) {
            const std::string text = trim(fields[*label_col]);
            if (const auto it = schema.label_map.find(text); it != schema.label_map.end()) {
                labels.push_back(it->second);
            } else if (text == "0" || text == "1") {
                labels.push_back(text == "1" ? Label{1} : Label{0});
            } else {
                throw DataError(path.string() + ": row " + std::to_string(line_no) +
                                ": unmapped label '" + text + "'");
            }
        }
        ++rows;
    }
    if (rows == 0) {
        throw DataError(path.string() + ": no data rows");
    }
    Matrix values = Eigen::Map<const Matrix>(flat.data(), static_cast<Eigen::Index>(rows),
                                             static_cast<Eigen::Index>(feature_cols.size()));
    std::optional<std::vector<Label>> point_labels;
    if (label_col) {
        point_labels = std::move(labels);
    }
    return TimeSeries(std::move(values), std::move(point_labels), path.stem().string());
}

void write_csv(const TimeSeries& series, const std::filesystem::path& path,
               const std::vector<std::string>& feature_names) {
    if (!feature_names.empty() && feature_names.size() != series.channels()) {
        throw std::invalid_argument("feature name count does not match channel count");
    }
    std::string out;
    for (std::size_t c = 0; c < series.channels(); ++c) {
        if (c > 0) {
            out += ',';
        }
        out += feature_names.empty() ? "c" + std::to_string(c) : feature_names[c];
    }
    if (series.has_labels()) {
        out += ",label";
    }
    out += '\n';
    const auto& v = series.values();
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
        for (Eigen::Index c = 0; c < v.cols(); ++c) {
            if (c > 0) {
                out += ',';
            }
            append_number(out, v(r, c));
        }
        if (series.has_labels()) {
            out += (*series.point_labels())[static_cast<std::size_t>(r)] ? ",1" : ",0";
        }
        out += '\n';
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw DataError("cannot write CSV file " + path.string());
    }
    file << out;
}

} // namespace adt
