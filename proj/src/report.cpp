#include "rekit/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace rekit {

using nlohmann::json;

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("Table::add_row: width mismatch");
    rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw std::out_of_range("no column '" + name + "'");
}

json make_meta(const ExperimentConfig& cfg) {
    return {{"version", kVersion}, {"seed", cfg.master_seed}, {"config", config_to_json(cfg)}};
}

std::string format_cell(const Cell& cell) {
    struct Visitor {
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(bool v) const { return v ? "1" : "0"; }
        std::string operator()(const std::string& v) const { return v; }
        std::string operator()(double v) const {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }
    };
    return std::visit(Visitor{}, cell);
}

void write_csv(std::ostream& out, const Table& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
        out << '\n';
    }
}

CsvDocument read_csv(std::istream& in) {
    auto split = [](const std::string& line) {
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        return fields;
    };
    CsvDocument doc;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_csv: missing header");
    doc.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split(line);
        if (fields.size() != doc.header.size()) throw std::runtime_error("read_csv: ragged row");
        doc.rows.push_back(std::move(fields));
    }
    return doc;
}

namespace {

json cell_to_json(const Cell& cell) {
    return std::visit([](const auto& v) { return json(v); }, cell);
}

json table_to_json(const Table& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_to_json(row[i]);
        rows.push_back(std::move(obj));
    }
    return rows;
}

}  // namespace

json report_to_json(const Report& report) {
    return {{"meta", report.meta},
            {"experiment", report.experiment},
            {"summary", report.summary},
            {"columns", report.table.columns},
            {"rows", table_to_json(report.table)}};
}

json canonical_form(const Report& report) {
    json doc = report_to_json(report);
    if (doc["meta"].contains("config")) {
        auto& cfg = doc["meta"]["config"];
        cfg.erase("threads");
        cfg.erase("out");
        cfg.erase("format");
    }
    for (auto& row : doc["rows"]) row.erase("runtime_ms");
    auto& cols = doc["columns"];
    for (auto it = cols.begin(); it != cols.end();) {
        if (*it == "runtime_ms")
            it = cols.erase(it);
        else
            ++it;
    }
    return doc;
}

void write_report(const Report& report, const std::string& path, OutputFormat format) {
    auto emit = [&](std::ostream& out) {
        if (format == OutputFormat::csv)
            write_csv(out, report.table);
        else
            out << report_to_json(report).dump(2) << '\n';
    };
    if (path.empty() || path == "-") {
        emit(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot open '" + path + "' for writing");
    emit(out);
    out.flush();
    if (!out) throw std::ios_base::failure("write to '" + path + "' failed");
}

}  // namespace rekit
