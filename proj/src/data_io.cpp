#include "smr/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace smr {

namespace {

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, delim)) out.push_back(cell);
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\"");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\"");
    return s.substr(b, e - b + 1);
}

bool is_missing(const std::string& cell) {
    return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" || cell == "null";
}

bool parse_double(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool is_integer(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
}

// YYYY-MM-DD with optional time suffix; fixed-width so lexicographic order
// matches chronological order.
bool is_iso_date(const std::string& s) {
    if (s.size() < 10) return false;
    for (std::size_t i = 0; i < 10; ++i) {
        if (i == 4 || i == 7) {
            if (s[i] != '-') return false;
        } else if (s[i] < '0' || s[i] > '9') {
            return false;
        }
    }
    return s.size() == 10 || s[10] == 'T' || s[10] == ' ';
}

void check_ordering(const std::vector<std::string>& ts) {
    if (ts.empty()) return;
    const bool integers = std::all_of(ts.begin(), ts.end(), is_integer);
    if (!integers && !std::all_of(ts.begin(), ts.end(), is_iso_date))
        throw DataError("timestamps must all be integers or all ISO-8601 dates");
    for (std::size_t i = 1; i < ts.size(); ++i) {
        bool ok = integers ? std::stoll(ts[i - 1]) < std::stoll(ts[i]) : ts[i - 1] < ts[i];
        if (!ok)
            throw DataError("timestamps not strictly increasing at '" + ts[i - 1] + "' -> '" + ts[i] + "'");
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

Matrix principal_submatrix(const Matrix& m, const std::vector<std::size_t>& idx) {
    const Index k = static_cast<Index>(idx.size());
    Matrix out(k, k);
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j) out(i, j) = m(static_cast<Index>(idx[i]), static_cast<Index>(idx[j]));
    return out;
}

TimePanel TimePanel::slice_rows(std::size_t begin, std::size_t end) const {
    TimePanel out;
    out.values = values.middleRows(static_cast<Index>(begin), static_cast<Index>(end - begin));
    out.timestamps.assign(timestamps.begin() + static_cast<std::ptrdiff_t>(begin),
                          timestamps.begin() + static_cast<std::ptrdiff_t>(end));
    out.labels = labels;
    out.dt = dt;
    return out;
}

TimePanel TimePanel::select_columns(const std::vector<std::size_t>& columns) const {
    TimePanel out;
    out.values.resize(values.rows(), static_cast<Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        out.values.col(static_cast<Index>(j)) = values.col(static_cast<Index>(columns[j]));
        out.labels.push_back(labels[columns[j]]);
    }
    out.timestamps = timestamps;
    out.dt = dt;
    return out;
}

TimePanel TimePanel::difference() const {
    if (rows() < 2) throw DataError("difference needs at least 2 rows");
    TimePanel out;
    out.values = values.bottomRows(rows() - 1) - values.topRows(rows() - 1);
    out.timestamps.assign(timestamps.begin() + 1, timestamps.end());
    out.labels = labels;
    out.dt = dt;
    return out;
}

LoadResult parse_panel(const std::string& text, const LoadOptions& options) {
    std::istringstream is(text);
    std::string line;
    std::vector<std::string> header;
    while (std::getline(is, line)) {
        if (!trim(line).empty()) {
            header = split(line, options.delimiter);
            break;
        }
    }
    if (header.size() < 2) throw DataError("header must name a timestamp column and at least one asset");
    if (options.date_column >= header.size()) throw DataError("date column out of range");

    LoadResult result;
    TimePanel& panel = result.panel;
    panel.dt = options.dt;
    std::vector<std::size_t> asset_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == options.date_column) continue;
        asset_cols.push_back(c);
        panel.labels.push_back(trim(header[c]));
    }
    const std::size_t n = asset_cols.size();

    std::vector<std::vector<double>> rows;
    std::vector<double> previous;
    std::size_t row_no = 0;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        ++row_no;
        auto cells = split(line, options.delimiter);
        if (cells.size() != header.size())
            throw DataError("row " + std::to_string(row_no) + ": expected " + std::to_string(header.size()) +
                            " cells, found " + std::to_string(cells.size()));
        std::vector<double> vals(n);
        bool missing = false;
        for (std::size_t j = 0; j < n; ++j) {
            const std::string cell = trim(cells[asset_cols[j]]);
            if (is_missing(cell)) {
                if (options.fill == FillPolicy::ForwardFill && !previous.empty()) {
                    vals[j] = previous[j];
                    if (result.report.filled_rows.empty() || result.report.filled_rows.back() != row_no)
                        result.report.filled_rows.push_back(row_no);
                } else {
                    missing = true;
                }
                continue;
            }
            if (!parse_double(cell, vals[j]))
                throw DataError("row " + std::to_string(row_no) + ", column '" + panel.labels[j] +
                                "': cannot parse '" + cell + "'");
        }
        if (missing) {
            result.report.dropped_rows.push_back(row_no);
            if (!result.report.filled_rows.empty() && result.report.filled_rows.back() == row_no)
                result.report.filled_rows.pop_back();
            continue;
        }
        previous = vals;
        rows.push_back(std::move(vals));
        panel.timestamps.push_back(trim(cells[options.date_column]));
    }
    result.report.rows_read = row_no;
    if (rows.empty()) throw DataError("no complete data rows");
    check_ordering(panel.timestamps);

    panel.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(n));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) panel.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return result;
}

LoadResult load_panel(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_panel(buffer.str(), options);
}

std::string format_panel(const TimePanel& panel) {
    std::string out = "t";
    for (const auto& l : panel.labels) out += "," + l;
    out += "\n";
    for (Index i = 0; i < panel.rows(); ++i) {
        out += i < static_cast<Index>(panel.timestamps.size()) ? panel.timestamps[static_cast<std::size_t>(i)]
                                                               : std::to_string(i);
        for (Index j = 0; j < panel.cols(); ++j) out += "," + format_double(panel.values(i, j));
        out += "\n";
    }
    return out;
}

void write_panel(const std::filesystem::path& path, const TimePanel& panel) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << format_panel(panel);
}

LaggedPair make_lagged_pair(const TimePanel& panel, bool center) {
    const Index m = panel.rows();
    if (m < 3) throw DataError("insufficient data: lagged pair needs at least 3 rows, got " + std::to_string(m));
    LaggedPair pair;
    pair.current = panel.values.bottomRows(m - 1);
    pair.lagged = panel.values.topRows(m - 1);
    pair.centered = center;
    if (center) {
        const Eigen::RowVectorXd mean = panel.values.colwise().mean();
        pair.current.rowwise() -= mean;
        pair.lagged.rowwise() -= mean;
    }
    return pair;
}

std::vector<WindowPair> rolling_windows(const TimePanel& panel, std::size_t window, std::size_t step) {
    if (window < 3) throw DomainError("window must be at least 3");
    if (step < 1) throw DomainError("step must be at least 1");
    const auto m = static_cast<std::size_t>(panel.rows());
    std::vector<WindowPair> out;
    for (std::size_t s = 0; s + window < m; s += step) {
        const std::size_t oos_end = std::min(s + 2 * window, m);
        out.push_back({panel.slice_rows(s, s + window), panel.slice_rows(s + window, oos_end), s});
    }
    return out;
}

}  // namespace smr
