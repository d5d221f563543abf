// Deterministic CSV tables: header row, '.' decimal point, 17 significant digits

#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace fermi::cli {

// One formatted cell.
struct Field {
    std::string text;

    Field(double v);
    Field(int v);
    Field(long v);
    Field(long long v);
    Field(unsigned v);
    Field(unsigned long v);
    Field(unsigned long long v);
    Field(const char* v) : text(v) {}
    Field(std::string v) : text(std::move(v)) {}
};

std::string format_double(double v);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add(std::initializer_list<Field> row);
    void add(std::vector<Field> row);

    std::size_t rows() const noexcept { return rows_.size(); }
    const std::vector<std::string>& header() const noexcept { return header_; }
    std::string str() const;
    void save(const std::string& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// "dir/name.csv" + "N100" -> "dir/name_N100.csv"
std::string derived_path(const std::string& out, const std::string& tag);

}  // namespace fermi::cli
