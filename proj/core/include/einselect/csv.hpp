#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace einselect {

/// Shortest round-trip-safe rendering at 17 significant digits; identical
/// inputs always produce identical bytes.
std::string format_double(double v);

/// Quotes a cell when it contains a comma, quote or newline.
std::string csv_escape(const std::string& v);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    CsvWriter& operator<<(double v);
    CsvWriter& operator<<(int v);
    CsvWriter& operator<<(const std::string& v);
    void end_row();

private:
    void sep();
    std::ofstream out_;
    std::string path_;
    std::size_t columns_;
    std::size_t in_row_ = 0;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  ///< -1 when absent
    std::vector<double> numeric_column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

} // namespace einselect
