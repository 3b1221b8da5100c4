#include "rlab/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "rlab/errors.hpp"

namespace rlab {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw usage_error("format_double failed");
    return std::string(buf, p);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw usage_error("CsvTable: empty header");
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
        throw usage_error("CsvTable: row width " + std::to_string(cells.size()) +
                          " does not match header width " + std::to_string(header_.size()));
    rows_.push_back(std::move(cells));
}

namespace {

void append_field(std::string& out, const std::string& field) {
    const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes) {
        out += field;
        return;
    }
    out += '"';
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

} // namespace

std::string CsvTable::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i) out += ',';
        append_field(out, header_[i]);
    }
    out += "\r\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            append_field(out, row[i]);
        }
        out += "\r\n";
    }
    return out;
}

void CsvTable::write_file(const std::string& path) const {
    write_text_file(path, to_string());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw usage_error("cannot open output file: " + path);
    out << content;
    if (!out) throw usage_error("failed writing: " + path);
}

void write_xy_file(const std::string& path, const std::vector<double>& x,
                   const std::vector<double>& y) {
    if (x.size() != y.size()) throw usage_error("write_xy_file: length mismatch");
    std::string out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        out += format_double(x[i]);
        out += ' ';
        out += format_double(y[i]);
        out += '\n';
    }
    write_text_file(path, out);
}

} // namespace rlab
