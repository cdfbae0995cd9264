#include "clic/common/csv.hpp"

#include "clic/common/errors.hpp"
#include "clic/common/io.hpp"

namespace clic {

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool row_has_data = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
        row_has_data = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                row_has_data = true;
                break;
            case ',':
                end_field();
                row_has_data = true;
                break;
            case '\r':
                break;
            case '\n':
                if (row_has_data || !field.empty() || !row.empty()) end_row();
                break;
            default:
                field += c;
                row_has_data = true;
                break;
        }
    }
    if (in_quotes) throw ParseError("csv: unterminated quoted field");
    if (row_has_data || !field.empty() || !row.empty()) end_row();
    return rows;
}

CsvTable CsvTable::from_text(std::string_view text) {
    CsvTable t;
    auto rows = parse_csv(text);
    if (rows.empty()) throw ParseError("csv: no header row");
    t.header_ = rows.front();
    for (std::size_t i = 0; i < t.header_.size(); ++i) {
        t.columns_.emplace(t.header_[i], i);
    }
    t.rows_.assign(rows.begin() + 1, rows.end());
    return t;
}

CsvTable CsvTable::from_file(const std::filesystem::path& path) {
    return from_text(read_file(path));
}

bool CsvTable::has_column(const std::string& name) const {
    return columns_.count(name) > 0;
}

const std::string& CsvTable::cell(std::size_t row, const std::string& column) const {
    static const std::string empty;
    auto it = columns_.find(column);
    if (it == columns_.end()) throw ParseError("csv: unknown column '" + column + "'");
    const auto& r = rows_.at(row);
    if (it->second >= r.size()) return empty;
    return r[it->second];
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

}  // namespace clic
