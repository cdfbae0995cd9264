#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "clic/data/types.hpp"

namespace clic::data {

struct MetadataRow {
    PatientMeta meta;
    std::string filename_hr;  // signal path relative to the dataset root
};

// Load ptbxl_database.csv. Rhythm/form code lists are filled from scp_codes
// via the statement table; missing numeric cells stay absent.
std::vector<MetadataRow> load_ptbxl_metadata(const std::filesystem::path& csv_path,
                                             const StatementTable& table);

struct ManifestRecord {
    std::string id;
    Superclass label = Superclass::NORM;
    PatientMeta meta;
    std::string signal_path;
};

// Newline-delimited JSON, one record per retained ECG.
void write_manifest(const std::filesystem::path& path,
                    const std::vector<ManifestRecord>& records);
std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path);

// Label derivation over a metadata table: derive superclasses, apply the
// single-label rule, drop the rest.
std::vector<ManifestRecord> build_manifest(const std::vector<MetadataRow>& rows,
                                           const StatementTable& table,
                                           double label_threshold = 50.0);

}  // namespace clic::data
