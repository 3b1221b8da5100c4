#ifndef RLAB_CSV_HPP
#define RLAB_CSV_HPP

#include <concepts>
#include <cstdint>
#include <string>
#include <vector>

namespace rlab {

// RFC 4180 tables: header row, CRLF line endings, UTF-8, '.' decimal
// separator. Doubles are rendered with shortest round-trip formatting so
// identical runs emit identical bytes.

std::string format_double(double v);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    std::string to_string() const;
    void write_file(const std::string& path) const;
    std::size_t row_count() const { return rows_.size(); }

    static std::string cell(double v) { return format_double(v); }
    static std::string cell(bool v) { return v ? "1" : "0"; }
    static std::string cell(const std::string& v) { return v; }
    template <typename T>
        requires(std::integral<T> && !std::same_as<T, bool>)
    static std::string cell(T v) {
        return std::to_string(v);
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

void write_text_file(const std::string& path, const std::string& content);

// two-column whitespace-separated data file, ready for gnuplot
void write_xy_file(const std::string& path, const std::vector<double>& x,
                   const std::vector<double>& y);

} // namespace rlab

#endif
