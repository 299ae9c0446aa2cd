#pragma once

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "stlf/error.hpp"
#include "stlf/series.hpp"
#include "stlf/timestamp.hpp"

namespace stlf {

/// A timestamp column followed by one or more numeric columns.
struct TimedTable {
    std::vector<std::string> columns;  // numeric column names, header order
    std::vector<Timestamp> timestamps;
    std::vector<std::vector<double>> data;  // data[c][row]

    const std::vector<double>& column(std::string_view name) const {
        for (std::size_t c = 0; c < columns.size(); ++c)
            if (columns[c] == name) return data[c];
        throw DataError("missing column '" + std::string(name) + "'");
    }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    for (auto& f : out) {
        auto b = f.find_first_not_of(" \t");
        auto e = f.find_last_not_of(" \t");
        f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
    }
    return out;
}

inline double parse_number(const std::string& field, std::size_t line_no) {
    if (field.empty()) throw DataError("line " + std::to_string(line_no) + ": empty value");
    char* end = nullptr;
    double v = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size())
        throw DataError("line " + std::to_string(line_no) + ": cannot parse number '" + field + "'");
    return v;
}

}  // namespace detail

inline TimedTable read_timed_table(std::istream& in) {
    TimedTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") != std::string::npos) break;
    }
    auto header = detail::split_csv_line(line);
    if (header.size() < 2) throw DataError("CSV header needs a timestamp column and at least one value column");
    table.columns.assign(header.begin() + 1, header.end());
    table.data.resize(table.columns.size());

    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size())
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        auto ts = parse_timestamp(fields[0]);
        if (!ts) throw DataError("line " + std::to_string(line_no) + ": bad timestamp '" + fields[0] + "'");
        table.timestamps.push_back(*ts);
        for (std::size_t c = 1; c < fields.size(); ++c)
            table.data[c - 1].push_back(detail::parse_number(fields[c], line_no));
    }
    return table;
}

inline TimedTable read_timed_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return read_timed_table(in);
}

/// Reads a `timestamp,load` CSV. The grid must be complete and hourly;
/// gaps and duplicates are rejected rather than imputed.
inline LoadSeries read_load_csv(std::istream& in) {
    auto table = read_timed_table(in);
    const auto& load = table.columns.size() == 1 ? table.data[0] : table.column("load");
    for (std::size_t i = 1; i < table.timestamps.size(); ++i) {
        if (table.timestamps[i] - table.timestamps[i - 1] != std::chrono::hours{1})
            throw DataError("gap or non-hourly step before " + format_timestamp(table.timestamps[i]) +
                            " (row " + std::to_string(i) + ")");
    }
    return LoadSeries(table.timestamps, load);
}

inline LoadSeries read_load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return read_load_csv(in);
}

}  // namespace stlf
