#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "clic/data/types.hpp"

namespace clic::data {

// Parse the scp_codes column value, a braced map literal with single-quoted
// keys: {'NORM': 100.0, 'SR': 0.0}. Codes are upper-cased.
std::map<std::string, double> parse_scp_codes(const std::string& text);

// Load scp_statements.csv (code, description, diagnostic/form/rhythm flags,
// diagnostic_class).
StatementTable load_statement_table(const std::filesystem::path& csv_path);
StatementTable statement_table_from_csv_text(const std::string& text);

// Max likelihood per diagnostic superclass; rhythm/form-only codes are
// ignored, unknown codes are skipped with a warning.
std::map<Superclass, double> derive_superclasses(const std::map<std::string, double>& scp,
                                                 const StatementTable& table);

// Single-label rule: retain classes with likelihood >= threshold or == 0
// (PTB-XL encodes unknown likelihood as 0); a record is kept iff exactly one
// class survives.
std::optional<Superclass> select_label(const std::map<Superclass, double>& classes,
                                       double threshold = 50.0);

}  // namespace clic::data
