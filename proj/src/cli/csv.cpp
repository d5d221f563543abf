#include "fermi/cli/csv.hpp"

#include "fermi/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fermi::cli {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // folds -0 into 0
    return fmt::format("{:.17g}", v);
}

Field::Field(double v) : text(format_double(v)) {}
Field::Field(int v) : text(std::to_string(v)) {}
Field::Field(long v) : text(std::to_string(v)) {}
Field::Field(long long v) : text(std::to_string(v)) {}
Field::Field(unsigned v) : text(std::to_string(v)) {}
Field::Field(unsigned long v) : text(std::to_string(v)) {}
Field::Field(unsigned long long v) : text(std::to_string(v)) {}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add(std::initializer_list<Field> row) { add(std::vector<Field>(row)); }

void CsvTable::add(std::vector<Field> row) {
    if (row.size() != header_.size()) {
        throw std::logic_error(fmt::format("csv: row has {} fields, header has {}", row.size(), header_.size()));
    }
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (auto& f : row) cells.push_back(std::move(f.text));
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

void CsvTable::save(const std::string& path) const {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    const std::string s = str();
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
    if (!out) throw std::runtime_error("failed writing \"" + path + "\"");
}

std::string derived_path(const std::string& out, const std::string& tag) {
    const std::filesystem::path p(out);
    std::filesystem::path name = p.stem();
    name += "_" + tag;
    name += p.has_extension() ? p.extension() : std::filesystem::path(".csv");
    return (p.parent_path() / name).string();
}

}  // namespace fermi::cli
