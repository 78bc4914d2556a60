#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tabclust::data {

struct CsvTable {
    std::vector<std::string> header;             // empty when the file has none
    std::vector<std::vector<std::string>> rows;  // data rows only
    std::vector<std::size_t> line_numbers;       // 1-based source line of each data row
};

// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF, a UTF-8 BOM.
// Blank lines are skipped. Ragged rows throw DataError with the line number.
CsvTable parse_csv(std::string_view text, char delimiter = ',', bool has_header = true);
CsvTable read_csv_file(const std::string& path, char delimiter = ',', bool has_header = true);

}  // namespace tabclust::data
