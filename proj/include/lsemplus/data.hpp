#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lsemplus/sample.hpp"

namespace lsemplus {

/// Multivariate time series split into contiguous segments (for example one
/// block per summer).
struct TimeSeriesPanel {
    Eigen::MatrixXd values;                 // n x d
    std::vector<double> timestamps;         // n entries, or empty for 0..n-1
    std::vector<std::size_t> segment_starts;  // 0-based row indices; empty = one segment
    std::vector<std::string> names;         // optional column names

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    /// Half-open [begin, end) row ranges, one per segment.
    std::vector<std::pair<std::size_t, std::size_t>> segments() const;

    SampleMatrix sample() const { return {values, Margins::raw}; }
};

enum class HeaderMode { no, yes, detect };
enum class NaPolicy { error, drop };

struct CsvConfig {
    HeaderMode header = HeaderMode::detect;
    bool timestamp_column = false;  // first column holds the time index
    NaPolicy na = NaPolicy::error;
    char delimiter = ',';
};

/// Reads a numeric CSV. Cells "", "NA", "NaN" count as missing. Dropped rows
/// are reported through `log` when given.
TimeSeriesPanel load_csv(const std::filesystem::path& path, const CsvConfig& config,
                         std::vector<std::string>* log = nullptr);

/// Parses segment start rows (one 0-based index per line).
std::vector<std::size_t> load_segment_starts(const std::filesystem::path& path);

/// Segment starts wherever the given column's value changes.
std::vector<std::size_t> segments_from_column(const Eigen::VectorXd& column);

/// Runs declustering with windows of `window` days inside every segment:
/// the peak is the largest day (by row-wise maximum of rank-standardized
/// values) among days that still belong to a run of >= window unassigned
/// days; the window is centered on it (floor(window/2) days before),
/// clipped to that run, and keeps its largest day. A segment is finished
/// once no such run remains. Retained rows keep their time order.
TimeSeriesPanel decluster(const TimeSeriesPanel& panel, int window);

/// Row indices kept by decluster (0-based, ascending).
std::vector<std::size_t> decluster_rows(const TimeSeriesPanel& panel, int window);

}  // namespace lsemplus
