#include "cohradar/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cohradar/errors.hpp"

namespace cohradar {

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

std::string format_double(double value) {
    char buffer[32];
    const int len = std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return std::string(buffer, static_cast<std::size_t>(len));
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary); // binary: no CRLF translation
    if (!out) throw IoError("cannot open for writing: " + path);
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out << ',';
        out << table.header[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) {
            throw IoError("csv row width mismatch while writing " + path);
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_double(row[i]);
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

namespace {

// Splits one CSV record; handles quoted fields (RFC-4180 style).
std::vector<std::string> split_record(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

} // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    CsvTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() && in.eof()) break;
        const auto fields = split_record(line);
        if (line_no == 1) {
            table.header = fields;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw IoError(path + ":" + std::to_string(line_no) + ": expected " +
                          std::to_string(table.header.size()) + " fields, got " +
                          std::to_string(fields.size()));
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const std::string& f = fields[i];
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
            if (ec != std::errc{} || ptr != f.data() + f.size()) {
                throw IoError(path + ":" + std::to_string(line_no) + ": field \"" + f +
                              "\" is not a number");
            }
            row.push_back(value);
        }
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty()) throw IoError(path + ": empty csv");
    return table;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

} // namespace cohradar
