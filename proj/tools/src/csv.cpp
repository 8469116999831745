#include "macgof_cli/csv.hpp"

#include "macgof/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace macgof::cli {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

// Parses one record starting at `pos`; advances `pos` and `line` past it.
std::vector<std::string> next_record(const std::string& text, std::size_t& pos, std::size_t& line,
                                     const std::filesystem::path& path) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    const std::size_t start_line = line;
    while (pos < text.size()) {
        const char ch = text[pos++];
        if (quoted) {
            if (ch == '"') {
                if (pos < text.size() && text[pos] == '"') {
                    field.push_back('"');
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line;
                field.push_back(ch);
            }
            continue;
        }
        if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(trim(std::move(field)));
            field.clear();
        } else if (ch == '\n') {
            ++line;
            break;
        } else if (ch != '\r') {
            field.push_back(ch);
        }
    }
    if (quoted) {
        throw DataError(path.string() + ":" + std::to_string(start_line) + ": unterminated quoted field");
    }
    fields.push_back(trim(std::move(field)));
    return fields;
}

double parse_number(const std::string& cell, const std::filesystem::path& path, std::size_t line,
                    const std::string& column) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
        throw DataError(path.string() + ":" + std::to_string(line) + ": column '" + column +
                        "' has non-numeric value '" + cell + "'");
    }
    return v;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw DataError("unknown column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) text.erase(0, 3);

    CsvTable table;
    std::size_t pos = 0;
    std::size_t line = 1;
    while (pos < text.size() && table.header.empty()) {
        auto rec = next_record(text, pos, line, path);
        if (!(rec.size() == 1 && rec[0].empty())) table.header = std::move(rec);
    }
    if (table.header.empty()) throw DataError(path.string() + ": missing header row");
    std::set<std::string> seen;
    for (const auto& h : table.header) {
        if (h.empty()) throw DataError(path.string() + ": empty column name in header");
        if (!seen.insert(h).second) throw DataError(path.string() + ": duplicate column '" + h + "'");
    }

    while (pos < text.size()) {
        const std::size_t record_line = line;
        auto rec = next_record(text, pos, line, path);
        if (rec.size() == 1 && rec[0].empty()) continue;
        if (rec.size() != table.header.size()) {
            throw DataError(path.string() + ":" + std::to_string(record_line) + ": expected " +
                            std::to_string(table.header.size()) + " fields, found " + std::to_string(rec.size()));
        }
        table.rows.push_back(std::move(rec));
        table.line.push_back(record_line);
    }
    return table;
}

bool is_missing(const std::string& cell) {
    return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" || cell == "?" || cell == ".";
}

std::vector<std::string> split_names(const std::string& list) {
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

IngestResult ingest_csv(const std::filesystem::path& path, const ColumnRoles& roles) {
    const CsvTable table = read_csv(path);
    if (roles.response.empty()) throw std::invalid_argument("ingest: no response column declared");

    std::vector<std::size_t> y_cols;
    for (const auto& name : roles.response) y_cols.push_back(table.column(name));

    std::vector<std::string> covariates = roles.covariates;
    if (covariates.empty()) {
        for (const auto& h : table.header) {
            if (std::find(roles.response.begin(), roles.response.end(), h) == roles.response.end()) {
                covariates.push_back(h);
            }
        }
    }
    if (covariates.empty()) throw DataError(path.string() + ": no covariate columns");
    for (const auto& c : roles.categorical) {
        if (std::find(covariates.begin(), covariates.end(), c) == covariates.end()) {
            throw DataError("categorical column '" + c + "' is not a covariate");
        }
    }
    std::vector<std::size_t> x_cols;
    for (const auto& name : covariates) {
        if (std::find(roles.response.begin(), roles.response.end(), name) != roles.response.end()) {
            throw DataError("column '" + name + "' is both response and covariate");
        }
        x_cols.push_back(table.column(name));
    }

    IngestResult result{PairedSample(RowMatrix::Zero(1, 1), RowMatrix::Zero(1, 1)), {}, roles.response, {}, {}, {}};
    std::vector<std::size_t> kept;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const bool missing = std::any_of(y_cols.begin(), y_cols.end(), [&](std::size_t c) { return is_missing(row[c]); }) ||
                             std::any_of(x_cols.begin(), x_cols.end(), [&](std::size_t c) { return is_missing(row[c]); });
        if (missing) {
            result.dropped_lines.push_back(table.line[r]);
        } else {
            kept.push_back(r);
            result.kept_lines.push_back(table.line[r]);
        }
    }
    if (kept.empty()) throw DataError(path.string() + ": no rows without missing values in the used columns");
    if (!result.dropped_lines.empty()) {
        std::string lines;
        for (std::size_t i = 0; i < result.dropped_lines.size(); ++i) {
            lines += (i ? "," : "") + std::to_string(result.dropped_lines[i]);
        }
        result.warnings.push_back("dropped " + std::to_string(result.dropped_lines.size()) +
                                  " rows with missing values (file lines " + lines + ")");
    }

    // Column layout: numeric covariates as-is, categorical ones as indicators, in declared order.
    struct XColumn {
        std::size_t source;
        std::optional<std::string> level;  // indicator for this level
    };
    std::vector<XColumn> layout;
    for (std::size_t j = 0; j < covariates.size(); ++j) {
        const bool categorical =
            std::find(roles.categorical.begin(), roles.categorical.end(), covariates[j]) != roles.categorical.end();
        if (!categorical) {
            layout.push_back({x_cols[j], std::nullopt});
            result.x_names.push_back(covariates[j]);
            continue;
        }
        std::set<std::string> levels;
        for (std::size_t r : kept) levels.insert(table.rows[r][x_cols[j]]);
        if (levels.size() < 2) {
            result.warnings.push_back("categorical column '" + covariates[j] + "' has a single level; omitted");
            continue;
        }
        for (auto it = std::next(levels.begin()); it != levels.end(); ++it) {
            layout.push_back({x_cols[j], *it});
            result.x_names.push_back(covariates[j] + "=" + *it);
        }
    }
    if (layout.empty()) throw DataError(path.string() + ": no usable covariate columns");

    RowMatrix xs(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(layout.size()));
    RowMatrix ys(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(y_cols.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) {
        const auto& row = table.rows[kept[i]];
        const std::size_t line = table.line[kept[i]];
        for (std::size_t j = 0; j < layout.size(); ++j) {
            const auto& col = layout[j];
            xs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                col.level ? (row[col.source] == *col.level ? 1.0 : 0.0)
                          : parse_number(row[col.source], path, line, table.header[col.source]);
        }
        for (std::size_t j = 0; j < y_cols.size(); ++j) {
            ys(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                parse_number(row[y_cols[j]], path, line, table.header[y_cols[j]]);
        }
    }
    result.sample = PairedSample(std::move(xs), std::move(ys));
    return result;
}

std::vector<double> read_numeric_column(const std::filesystem::path& path, const std::string& name) {
    const CsvTable table = read_csv(path);
    const std::size_t c = table.column(name);
    std::vector<double> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (!is_missing(table.rows[r][c])) out.push_back(parse_number(table.rows[r][c], path, table.line[r], name));
    }
    if (out.empty()) throw DataError(path.string() + ": column '" + name + "' has no values");
    return out;
}

}  // namespace macgof::cli
