#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace clic {

// RFC-4180 style parser: quoted fields, doubled quotes, CR/LF line ends.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// Table with a header row; cells addressed by column name.
class CsvTable {
public:
    static CsvTable from_text(std::string_view text);
    static CsvTable from_file(const std::filesystem::path& path);

    std::size_t n_rows() const { return rows_.size(); }
    bool has_column(const std::string& name) const;
    // empty string for missing cells
    const std::string& cell(std::size_t row, const std::string& column) const;

private:
    std::vector<std::string> header_;
    std::map<std::string, std::size_t> columns_;
    std::vector<std::vector<std::string>> rows_;
};

std::string csv_escape(const std::string& field);

}  // namespace clic
