// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vlcirs {

/// Shortest round-trip decimal rendering (locale independent).
std::string format_double(double value);
double parse_double(std::string_view text);

/// Header + rows, comma separated, stable column order. Cells must not
/// contain commas, quotes or newlines (all our payloads are numbers and
/// plain labels).
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);

    CsvWriter& add_row(std::vector<std::string> cells);
    std::size_t row_count() const { return rows_.size(); }

    std::string to_string() const;
    /// Writes to `<path>.tmp` then renames, so readers never observe a
    /// partially written file; stray .tmp files mark interrupted runs.
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

struct CsvData {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

CsvData read_csv(const std::filesystem::path& path);

} // namespace vlcirs
