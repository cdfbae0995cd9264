#include "clic/data/ptbxl.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "clic/common/csv.hpp"
#include "clic/common/errors.hpp"
#include "clic/common/io.hpp"
#include "clic/data/statements.hpp"

namespace clic::data {

namespace {

std::optional<double> parse_optional_double(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size()) return std::nullopt;
    if (std::isnan(v)) return std::nullopt;
    return v;
}

void fill_code_lists(PatientMeta& meta, const StatementTable& table) {
    for (const auto& [code, lik] : meta.scp_codes) {
        (void)lik;
        const StatementInfo* info = table.find(code);
        if (info == nullptr) continue;
        if (info->is_rhythm) meta.rhythm_codes.push_back(code);
        if (info->is_form) meta.form_codes.push_back(code);
    }
    std::sort(meta.rhythm_codes.begin(), meta.rhythm_codes.end());
    std::sort(meta.form_codes.begin(), meta.form_codes.end());
}

}  // namespace

std::vector<MetadataRow> load_ptbxl_metadata(const std::filesystem::path& csv_path,
                                             const StatementTable& table) {
    const CsvTable csv = CsvTable::from_file(csv_path);
    std::vector<MetadataRow> rows;
    rows.reserve(csv.n_rows());
    for (std::size_t r = 0; r < csv.n_rows(); ++r) {
        MetadataRow row;
        row.meta.id = csv.cell(r, "ecg_id");
        row.meta.age = parse_optional_double(csv.cell(r, "age"));
        if (row.meta.age.has_value() && *row.meta.age < 0) row.meta.age = std::nullopt;

        const auto sex = parse_optional_double(csv.cell(r, "sex"));
        if (!sex.has_value()) row.meta.sex = Sex::Unknown;
        else row.meta.sex = (*sex == 0.0) ? Sex::Male : Sex::Female;

        row.meta.height = parse_optional_double(csv.cell(r, "height"));
        if (row.meta.height.has_value() && *row.meta.height <= 0) row.meta.height = std::nullopt;
        row.meta.weight = parse_optional_double(csv.cell(r, "weight"));
        if (row.meta.weight.has_value() && *row.meta.weight <= 0) row.meta.weight = std::nullopt;

        const std::string& device = csv.cell(r, "device");
        if (!device.empty()) row.meta.device = device;

        row.meta.scp_codes = parse_scp_codes(csv.cell(r, "scp_codes"));
        fill_code_lists(row.meta, table);

        const auto fold = parse_optional_double(csv.cell(r, "strat_fold"));
        if (!fold.has_value()) throw ParseError("ptbxl_database: missing strat_fold for " + row.meta.id);
        row.meta.strat_fold = static_cast<int>(*fold);

        row.filename_hr = csv.cell(r, "filename_hr");
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ManifestRecord> build_manifest(const std::vector<MetadataRow>& rows,
                                           const StatementTable& table,
                                           double label_threshold) {
    std::vector<ManifestRecord> out;
    for (const auto& row : rows) {
        const auto classes = derive_superclasses(row.meta.scp_codes, table);
        const auto label = select_label(classes, label_threshold);
        if (!label.has_value()) continue;
        ManifestRecord rec;
        rec.id = row.meta.id;
        rec.label = *label;
        rec.meta = row.meta;
        rec.signal_path = row.filename_hr;
        out.push_back(std::move(rec));
    }
    return out;
}

void write_manifest(const std::filesystem::path& path,
                    const std::vector<ManifestRecord>& records) {
    std::ostringstream out;
    for (const auto& rec : records) {
        nlohmann::json j;
        j["id"] = rec.id;
        j["label"] = class_name(rec.label);
        j["fold"] = rec.meta.strat_fold;
        if (rec.meta.age) j["age"] = *rec.meta.age;
        j["sex"] = sex_name(rec.meta.sex);
        if (rec.meta.height) j["height"] = *rec.meta.height;
        if (rec.meta.weight) j["weight"] = *rec.meta.weight;
        if (rec.meta.device) j["device"] = *rec.meta.device;
        j["rhythm_codes"] = rec.meta.rhythm_codes;
        j["form_codes"] = rec.meta.form_codes;
        j["signal"] = rec.signal_path;
        out << j.dump() << '\n';
    }
    write_file(path, out.str());
}

std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::vector<ManifestRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("manifest line " + std::to_string(line_no) + ": " + e.what());
        }
        ManifestRecord rec;
        rec.id = j.at("id").get<std::string>();
        const auto label = class_from_name(j.at("label").get<std::string>());
        if (!label) throw ParseError("manifest line " + std::to_string(line_no) + ": bad label");
        rec.label = *label;
        rec.meta.id = rec.id;
        rec.meta.strat_fold = j.at("fold").get<int>();
        if (j.contains("age")) rec.meta.age = j["age"].get<double>();
        rec.meta.sex = sex_from_name(j.at("sex").get<std::string>());
        if (j.contains("height")) rec.meta.height = j["height"].get<double>();
        if (j.contains("weight")) rec.meta.weight = j["weight"].get<double>();
        if (j.contains("device")) rec.meta.device = j["device"].get<std::string>();
        rec.meta.rhythm_codes = j.at("rhythm_codes").get<std::vector<std::string>>();
        rec.meta.form_codes = j.at("form_codes").get<std::vector<std::string>>();
        rec.signal_path = j.at("signal").get<std::string>();
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace clic::data
