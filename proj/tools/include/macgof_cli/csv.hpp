#pragma once

#include "macgof/sample_space.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace macgof::cli {

/// Header plus raw string cells. `line` holds the 1-based file line of each row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line;

    /// @throws DataError if the column does not exist
    [[nodiscard]] std::size_t column(const std::string& name) const;
};

/**
 * @brief Read a comma-separated file with a header row.
 *
 * Double-quoted fields may contain commas, quotes ("") and newlines.
 * @throws DataError if the file cannot be read, has no header, or a row has the wrong number of fields
 */
[[nodiscard]] CsvTable read_csv(const std::filesystem::path& path);

/// Empty, "NA", "NaN", "?" and "." cells are missing.
[[nodiscard]] bool is_missing(const std::string& cell);

struct ColumnRoles {
    std::vector<std::string> response;
    /// Empty: every column that is not a response column.
    std::vector<std::string> covariates;
    /// Covariates expanded to indicator columns (reference level dropped).
    std::vector<std::string> categorical;
};

struct IngestResult {
    PairedSample sample;
    std::vector<std::string> x_names;
    std::vector<std::string> y_names;
    std::vector<std::size_t> dropped_lines;  ///< file lines dropped for missing values
    std::vector<std::size_t> kept_lines;
    std::vector<std::string> warnings;
};

/**
 * @brief Build a paired sample from declared columns of a CSV file.
 *
 * Rows with a missing value in any used column are dropped. A categorical
 * column with levels sorted lexicographically becomes one indicator per
 * level after the first. Row order follows the file.
 *
 * @throws DataError for unknown columns, non-numeric cells in numeric columns, or no usable rows
 */
[[nodiscard]] IngestResult ingest_csv(const std::filesystem::path& path, const ColumnRoles& roles);

/// Numeric values of one column, skipping missing cells. @throws DataError
[[nodiscard]] std::vector<double> read_numeric_column(const std::filesystem::path& path, const std::string& name);

/// Splits "a,b,c" into trimmed non-empty names.
[[nodiscard]] std::vector<std::string> split_names(const std::string& list);

}  // namespace macgof::cli
