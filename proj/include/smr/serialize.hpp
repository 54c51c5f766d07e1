#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "smr/canonical.hpp"
#include "smr/covsel.hpp"
#include "smr/data_io.hpp"
#include "smr/estimation.hpp"
#include "smr/ou_trading.hpp"
#include "smr/sparse_geneig.hpp"

namespace smr {

using Json = nlohmann::ordered_json;

/// Row-major nested arrays.
Json to_json(const Matrix& m);
Json to_json(const Vector& v);

Json to_json(const LoadReport& report);
Json to_json(const VarModel& model, const std::vector<std::string>& labels);
Json to_json(const CanonicalBasis& basis, const std::vector<std::string>& labels);
Json to_json(const OuParams& params);
Json to_json(const PrecisionEstimate& estimate, const std::vector<std::string>& labels);
Json to_json(const SparsePortfolio& portfolio, const std::vector<std::string>& labels);
/// Summary fields plus the wealth and shares series.
Json to_json(const BacktestResult& result);

std::string to_string(OuFlag flag);
std::string to_string(EstimationMethod method);
std::string to_string(CanonicalFlavor flavor);
std::string to_string(BacktestStatus status);

/// Plain CSV table; cells are written verbatim.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    std::string str() const;
    void write(const std::filesystem::path& path) const;
};

/// Writes `json` pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const Json& json);

/// Labels of `support` joined by ';'.
std::string join_labels(const std::vector<std::string>& labels, const std::vector<std::size_t>& support);

}  // namespace smr
