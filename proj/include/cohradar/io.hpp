#pragma once

#include <string>
#include <vector>

namespace cohradar {

// Minimal RFC-4180-style CSV. Writers emit a header row, '.' decimal
// separator and enough digits to round-trip doubles; readers reject
// ragged rows with the offending line number.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const; // -1 if absent
};

std::string format_double(double value);

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

} // namespace cohradar
