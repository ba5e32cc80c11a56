#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rekit/config.hpp"

namespace rekit {

inline constexpr const char* kVersion = "0.1.0";

using Cell = std::variant<std::int64_t, double, bool, std::string>;

/// Fixed column order; every row has one cell per column.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
    std::size_t column_index(const std::string& name) const;  // throws std::out_of_range
};

struct Report {
    std::string experiment;
    nlohmann::json meta;
    nlohmann::json summary;
    Table table;
};

nlohmann::json make_meta(const ExperimentConfig& cfg);

/// Doubles use 17 significant digits, booleans 0/1. Strings must not contain
/// commas or newlines.
void write_csv(std::ostream& out, const Table& table);
std::string format_cell(const Cell& cell);

struct CsvDocument {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
CsvDocument read_csv(std::istream& in);

nlohmann::json report_to_json(const Report& report);

/// Report without the fields allowed to differ between runs of the same
/// seed (thread count, output target, timing).
nlohmann::json canonical_form(const Report& report);

/// Writes to path, or to stdout when path is empty or "-". Throws
/// std::ios_base::failure when the file cannot be written.
void write_report(const Report& report, const std::string& path, OutputFormat format);

}  // namespace rekit
