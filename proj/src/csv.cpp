// SPDX-License-Identifier: Apache-2.0
#include "vlcirs/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace vlcirs {

std::string format_double(double value) {
    char buf[64];
    const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const std::from_chars_result res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw std::runtime_error("parse_double: bad number '" + std::string(text) + "'");
    return value;
}

namespace {

void check_cell(const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") != std::string::npos)
        throw std::invalid_argument("csv cell contains a delimiter: '" + cell + "'");
}

} // namespace

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw std::invalid_argument("csv: need at least one column");
    for (const std::string& c : columns_) check_cell(c);
}

CsvWriter& CsvWriter::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size())
        throw std::invalid_argument("csv: row width does not match header");
    for (const std::string& c : cells) check_cell(c);
    rows_.push_back(std::move(cells));
    return *this;
}

std::string CsvWriter::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) out << ',';
        out << columns_[i];
    }
    out << '\n';
    for (const std::vector<std::string>& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    return out.str();
}

void CsvWriter::write(const std::filesystem::path& path) const {
    if (rows_.empty()) throw std::invalid_argument("csv: refusing to write an empty table");
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("csv: cannot open " + tmp.string());
        const std::string text = to_string();
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw std::runtime_error("csv: write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("csv: rename to " + path.string() + " failed: " + ec.message());
}

CsvData read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("csv: cannot open " + path.string());
    CsvData data;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            const std::size_t pos = line.find(',', start);
            if (pos == std::string::npos) {
                cells.push_back(line.substr(start));
                break;
            }
            cells.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        if (first) {
            data.columns = std::move(cells);
            first = false;
        } else {
            data.rows.push_back(std::move(cells));
        }
    }
    return data;
}

} // namespace vlcirs
