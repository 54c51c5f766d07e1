#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "smr/common.hpp"

namespace smr {

/// m x n panel of asset price levels. Rows are observations, columns assets.
struct TimePanel {
    Matrix values;
    std::vector<std::string> timestamps;
    std::vector<std::string> labels;
    double dt = 1.0 / 252.0;  // sampling interval in years

    Index rows() const { return values.rows(); }
    Index cols() const { return values.cols(); }

    /// Rows [begin, end).
    TimePanel slice_rows(std::size_t begin, std::size_t end) const;
    TimePanel select_columns(const std::vector<std::size_t>& columns) const;
    /// First differences S_t - S_{t-1}; one row shorter.
    TimePanel difference() const;
};

enum class FillPolicy { DropRow, ForwardFill };

struct LoadOptions {
    char delimiter = ',';
    std::size_t date_column = 0;
    FillPolicy fill = FillPolicy::DropRow;
    double dt = 1.0 / 252.0;
};

struct LoadReport {
    std::size_t rows_read = 0;
    std::vector<std::size_t> dropped_rows;  // 1-based data row numbers
    std::vector<std::size_t> filled_rows;
};

struct LoadResult {
    TimePanel panel;
    LoadReport report;
};

/// Reads a CSV panel: header row of asset labels, one timestamp column
/// (ISO-8601 date or integer index). Empty, "NA" and "NaN" cells count
/// as missing and are handled by the fill policy.
LoadResult load_panel(const std::filesystem::path& path, const LoadOptions& options = {});
LoadResult parse_panel(const std::string& text, const LoadOptions& options = {});

/// Writes with shortest round-trip formatting, so reloading is bit-exact.
void write_panel(const std::filesystem::path& path, const TimePanel& panel);
std::string format_panel(const TimePanel& panel);

/// (S_t, S_{t-1}) views of a panel, optionally centered by the panel's
/// column means (the same means are subtracted from both views).
struct LaggedPair {
    Matrix current;
    Matrix lagged;
    bool centered = false;
};

LaggedPair make_lagged_pair(const TimePanel& panel, bool center);

struct WindowPair {
    TimePanel in_sample;
    TimePanel out_of_sample;
    std::size_t start = 0;
};

/// In-sample windows of `window` rows advancing by `step`; each paired with
/// the following `window` rows (truncated at the panel end). Pairs with an
/// empty out-of-sample block are dropped.
std::vector<WindowPair> rolling_windows(const TimePanel& panel, std::size_t window, std::size_t step);

std::string format_double(double v);

}  // namespace smr
