#include "einselect/csv.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "einselect/error.hpp"

namespace einselect {

std::string format_double(double v) {
    if (v == 0.0) return "0";
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path), columns_(header.size()) {
    if (!out_) fail(ErrorCategory::invalid_argument, "cannot open " + path + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << csv_escape(header[i]);
    }
    out_ << '\n';
}

void CsvWriter::sep() {
    if (in_row_ > 0) out_ << ',';
    ++in_row_;
}

CsvWriter& CsvWriter::operator<<(double v) {
    sep();
    out_ << format_double(v);
    return *this;
}

CsvWriter& CsvWriter::operator<<(int v) {
    sep();
    out_ << v;
    return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& v) {
    sep();
    out_ << csv_escape(v);
    return *this;
}

void CsvWriter::end_row() {
    if (in_row_ != columns_)
        fail(ErrorCategory::invalid_argument,
             "csv row width mismatch in " + path_ + ": " + std::to_string(in_row_) + " vs " +
                 std::to_string(columns_));
    out_ << '\n';
    in_row_ = 0;
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
    const int c = column(name);
    if (c < 0) fail(ErrorCategory::invalid_argument, "csv column '" + name + "' not found");
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(std::stod(r.at(c)));
    return out;
}

// RFC 4180 fields: quoted cells may contain commas and doubled quotes
static std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cell));
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    out.push_back(std::move(cell));
    return out;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCategory::invalid_argument, "cannot open " + path);
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) fail(ErrorCategory::invalid_argument, path + " is empty");
    t.header = split_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = split_line(line);
        if (row.size() != t.header.size())
            fail(ErrorCategory::invalid_argument, path + ": ragged csv row");
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace einselect
