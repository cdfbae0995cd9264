#include "clic/data/statements.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "clic/common/csv.hpp"
#include "clic/common/errors.hpp"
#include "clic/common/io.hpp"

namespace clic::data {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool truthy_flag(const std::string& cell) {
    if (cell.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str()) return false;
    return v != 0.0;
}

}  // namespace

std::map<std::string, double> parse_scp_codes(const std::string& text) {
    std::string_view s = trim(text);
    if (s.size() < 2 || s.front() != '{' || s.back() != '}') {
        throw ParseError("scp_codes: expected braced map, got '" + text + "'");
    }
    s = trim(s.substr(1, s.size() - 2));

    std::map<std::string, double> out;
    while (!s.empty()) {
        if (s.front() != '\'' && s.front() != '"') {
            throw ParseError("scp_codes: expected quoted code in '" + text + "'");
        }
        const char quote = s.front();
        s.remove_prefix(1);
        const std::size_t close = s.find(quote);
        if (close == std::string_view::npos) {
            throw ParseError("scp_codes: unterminated code quote in '" + text + "'");
        }
        std::string code(s.substr(0, close));
        std::transform(code.begin(), code.end(), code.begin(),
                       [](unsigned char c) { return std::toupper(c); });
        s = trim(s.substr(close + 1));
        if (s.empty() || s.front() != ':') {
            throw ParseError("scp_codes: expected ':' after code in '" + text + "'");
        }
        s = trim(s.substr(1));
        const std::size_t comma = s.find(',');
        const std::string_view value = comma == std::string_view::npos ? s : trim(s.substr(0, comma));
        char* end = nullptr;
        const std::string value_str(value);
        const double lik = std::strtod(value_str.c_str(), &end);
        if (value_str.empty() || end != value_str.c_str() + value_str.size()) {
            throw ParseError("scp_codes: non-numeric likelihood in '" + text + "'");
        }
        out[code] = lik;
        if (comma == std::string_view::npos) break;
        s = trim(s.substr(comma + 1));
        if (s.empty()) throw ParseError("scp_codes: trailing comma in '" + text + "'");
    }
    return out;
}

StatementTable statement_table_from_csv_text(const std::string& text) {
    const CsvTable csv = CsvTable::from_text(text);
    StatementTable table;
    for (std::size_t r = 0; r < csv.n_rows(); ++r) {
        const std::string& code = csv.cell(r, "");
        if (code.empty()) continue;
        StatementInfo info;
        info.description = csv.cell(r, "description");
        info.is_rhythm = truthy_flag(csv.cell(r, "rhythm"));
        info.is_form = truthy_flag(csv.cell(r, "form"));
        if (truthy_flag(csv.cell(r, "diagnostic"))) {
            const std::string& cls = csv.cell(r, "diagnostic_class");
            const auto parsed = class_from_name(cls);
            if (parsed.has_value()) {
                info.is_diagnostic = true;
                info.diagnostic_class = parsed;
            } else {
                log_warning("scp_statements: diagnostic code '" + code +
                            "' has unknown class '" + cls + "', treated as non-diagnostic");
            }
        }
        table.entries.emplace(code, std::move(info));
    }
    return table;
}

StatementTable load_statement_table(const std::filesystem::path& csv_path) {
    return statement_table_from_csv_text(read_file(csv_path));
}

std::map<Superclass, double> derive_superclasses(const std::map<std::string, double>& scp,
                                                 const StatementTable& table) {
    std::map<Superclass, double> out;
    for (const auto& [code, likelihood] : scp) {
        const StatementInfo* info = table.find(code);
        if (info == nullptr) {
            log_warning("unknown scp code '" + code + "' skipped");
            continue;
        }
        if (!info->is_diagnostic) continue;
        auto [it, inserted] = out.emplace(*info->diagnostic_class, likelihood);
        if (!inserted) it->second = std::max(it->second, likelihood);
    }
    return out;
}

std::optional<Superclass> select_label(const std::map<Superclass, double>& classes,
                                       double threshold) {
    std::optional<Superclass> kept;
    int n_kept = 0;
    for (const auto& [cls, likelihood] : classes) {
        if (likelihood >= threshold || likelihood == 0.0) {
            kept = cls;
            ++n_kept;
        }
    }
    if (n_kept != 1) return std::nullopt;
    return kept;
}

}  // namespace clic::data
