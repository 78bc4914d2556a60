#include "tabclust/dataio/csv.hpp"

#include <fstream>
#include <sstream>

#include "tabclust/errors.hpp"

namespace tabclust::data {

CsvTable parse_csv(std::string_view text, char delimiter, bool has_header) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    CsvTable table;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_quoted = false;
    std::size_t line = 1;
    std::size_t record_line = 1;
    bool have_header = false;

    const auto finish_record = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_quoted = false;
        const bool blank = record.size() == 1 && record[0].empty();
        if (!blank) {
            if (has_header && !have_header) {
                table.header = std::move(record);
                have_header = true;
            } else {
                const std::size_t expected = has_header ? table.header.size()
                                             : table.rows.empty() ? record.size()
                                                                  : table.rows.front().size();
                if (record.size() != expected) {
                    throw DataError("csv line " + std::to_string(record_line) + ": expected " +
                                    std::to_string(expected) + " fields, found " + std::to_string(record.size()));
                }
                table.rows.push_back(std::move(record));
                table.line_numbers.push_back(record_line);
            }
        }
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && field.empty() && !field_quoted) {
            in_quotes = true;
            field_quoted = true;
        } else if (c == delimiter) {
            record.push_back(std::move(field));
            field.clear();
            field_quoted = false;
        } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            continue;
        } else if (c == '\n') {
            finish_record();
            ++line;
            record_line = line;
        } else {
            field.push_back(c);
        }
    }
    if (in_quotes) throw DataError("csv line " + std::to_string(record_line) + ": unterminated quoted field");
    if (!field.empty() || !record.empty()) finish_record();
    return table;
}

CsvTable read_csv_file(const std::string& path, char delimiter, bool has_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_csv(buf.str(), delimiter, has_header);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

}  // namespace tabclust::data
