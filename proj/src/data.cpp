#include "lsemplus/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lsemplus/extremes.hpp"

namespace lsemplus {

std::vector<std::pair<std::size_t, std::size_t>> TimeSeriesPanel::segments() const {
    const auto n = static_cast<std::size_t>(rows());
    std::vector<std::size_t> starts = segment_starts;
    if (starts.empty() || starts.front() != 0) starts.insert(starts.begin(), 0);
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        const std::size_t end = s + 1 < starts.size() ? starts[s + 1] : n;
        if (starts[s] > end || end > n) throw std::invalid_argument("segment starts must be increasing and < n");
        if (starts[s] < end) out.emplace_back(starts[s], end);
    }
    return out;
}

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\"");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\"");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, delimiter)) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == delimiter) cells.emplace_back();
    return cells;
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan"; }

bool parse_double(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = first + cell.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

TimeSeriesPanel load_csv(const std::filesystem::path& path, const CsvConfig& config, std::vector<std::string>* log) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    TimeSeriesPanel panel;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool first_content = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split(line, config.delimiter);
        if (first_content) {
            first_content = false;
            bool header = config.header == HeaderMode::yes;
            if (config.header == HeaderMode::detect) {
                double v;
                header = std::any_of(cells.begin(), cells.end(),
                                     [&](const std::string& c) { return !is_missing(c) && !parse_double(c, v); });
            }
            width = cells.size();
            if (header) {
                panel.names.assign(cells.begin() + (config.timestamp_column ? 1 : 0), cells.end());
                continue;
            }
        }
        if (cells.size() != width)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(width) + " columns, found " + std::to_string(cells.size()));
        std::vector<double> row(cells.size());
        bool missing = false;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (is_missing(cells[c])) {
                missing = true;
                continue;
            }
            if (!parse_double(cells[c], row[c]))
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": non-numeric cell '" +
                                         cells[c] + "'");
        }
        if (missing) {
            if (config.na == NaPolicy::error)
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": missing value");
            if (log) log->push_back("dropped row at line " + std::to_string(line_no) + " (missing value)");
            continue;
        }
        rows.push_back(std::move(row));
    }
    const std::size_t offset = config.timestamp_column ? 1 : 0;
    if (width <= offset) throw std::runtime_error(path.string() + ": no data columns");
    const auto n = static_cast<Eigen::Index>(rows.size());
    panel.values.resize(n, static_cast<Eigen::Index>(width - offset));
    panel.timestamps.resize(rows.size());
    for (Eigen::Index r = 0; r < n; ++r) {
        panel.timestamps[r] = config.timestamp_column ? rows[r][0] : static_cast<double>(r);
        for (std::size_t c = offset; c < width; ++c) panel.values(r, static_cast<Eigen::Index>(c - offset)) = rows[r][c];
    }
    return panel;
}

std::vector<std::size_t> load_segment_starts(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<std::size_t> starts;
    std::string token;
    while (in >> token) {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc() || ptr != token.data() + token.size())
            throw std::runtime_error(path.string() + ": bad segment start '" + token + "'");
        starts.push_back(v);
    }
    return starts;
}

std::vector<std::size_t> segments_from_column(const Eigen::VectorXd& column) {
    std::vector<std::size_t> starts;
    for (Eigen::Index r = 0; r < column.size(); ++r)
        if (r == 0 || column(r) != column(r - 1)) starts.push_back(static_cast<std::size_t>(r));
    return starts;
}

std::vector<std::size_t> decluster_rows(const TimeSeriesPanel& panel, int window) {
    if (window < 1) throw std::invalid_argument("decluster: window must be >= 1");
    const auto n = static_cast<std::size_t>(panel.rows());
    std::vector<std::size_t> kept;
    if (n == 0) return kept;

    const Eigen::MatrixXd standardized = pit_frechet2(panel.sample()).values;
    const Eigen::VectorXd magnitude = standardized.rowwise().maxCoeff();
    const auto w = static_cast<std::size_t>(window);

    for (const auto& [begin, end] : panel.segments()) {
        for (std::size_t t = begin + 1; t < end && !panel.timestamps.empty(); ++t)
            if (!(panel.timestamps[t] > panel.timestamps[t - 1]))
                throw std::invalid_argument("decluster: timestamps not increasing within a segment");
        std::vector<char> assigned(end - begin, 0);
        for (;;) {
            // Unassigned runs long enough to hold a full window.
            std::size_t best = end;
            std::size_t run_lo = 0, run_hi = 0;
            for (std::size_t t = begin; t < end;) {
                if (assigned[t - begin]) {
                    ++t;
                    continue;
                }
                std::size_t u = t;
                while (u < end && !assigned[u - begin]) ++u;
                if (u - t >= w)
                    for (std::size_t s = t; s < u; ++s)
                        if (best == end || magnitude(s) > magnitude(best)) {
                            best = s;
                            run_lo = t;
                            run_hi = u;
                        }
                t = u;
            }
            if (best == end) break;
            const auto start = static_cast<std::ptrdiff_t>(best) - static_cast<std::ptrdiff_t>(w / 2);
            const auto lo = static_cast<std::size_t>(std::max(static_cast<std::ptrdiff_t>(run_lo), start));
            const auto hi = static_cast<std::size_t>(
                std::min(static_cast<std::ptrdiff_t>(run_hi), start + static_cast<std::ptrdiff_t>(w)));
            std::size_t keep = lo;
            for (std::size_t s = lo; s < hi; ++s) {
                if (magnitude(s) > magnitude(keep)) keep = s;
                assigned[s - begin] = 1;
            }
            kept.push_back(keep);
        }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

TimeSeriesPanel decluster(const TimeSeriesPanel& panel, int window) {
    const auto kept = decluster_rows(panel, window);
    TimeSeriesPanel out;
    out.names = panel.names;
    out.values.resize(static_cast<Eigen::Index>(kept.size()), panel.cols());
    std::size_t previous_segment = static_cast<std::size_t>(-1);
    const auto segs = panel.segments();
    for (std::size_t r = 0; r < kept.size(); ++r) {
        out.values.row(static_cast<Eigen::Index>(r)) = panel.values.row(static_cast<Eigen::Index>(kept[r]));
        out.timestamps.push_back(panel.timestamps.empty() ? static_cast<double>(kept[r]) : panel.timestamps[kept[r]]);
        const auto seg = static_cast<std::size_t>(
            std::upper_bound(segs.begin(), segs.end(), kept[r],
                             [](std::size_t v, const auto& s) { return v < s.first; }) - segs.begin() - 1);
        if (seg != previous_segment) {
            out.segment_starts.push_back(r);
            previous_segment = seg;
        }
    }
    return out;
}

}  // namespace lsemplus
