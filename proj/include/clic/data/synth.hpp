#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "clic/data/types.hpp"

namespace clic::data {

struct SynthRecord {
    EcgRecord ecg;
    PatientMeta meta;
    Superclass label;
};

// Pure function of (cfg, seed): class-conditioned sinusoid mixtures plus
// noise, demographics drawn from per-class profiles. Confounded class pairs
// share signal parameters exactly and differ only through demographics.
std::vector<SynthRecord> synthesize_dataset(const SynthConfig& cfg, std::uint64_t seed);

// Statement table matching the codes the synthesizer emits.
StatementTable synthetic_statement_table();
std::string synthetic_statement_csv();

// Push the demographic profiles of each confound pair to opposite presets
// (age, sex, BMI band, device) so the pair is separable through context only.
void apply_disjoint_demographics(SynthConfig& cfg);

// Materialize a PTB-XL-shaped directory: records500/..., ptbxl_database.csv,
// scp_statements.csv. The rest of the pipeline consumes it exactly like the
// real dataset.
void write_synthetic_ptbxl(const SynthConfig& cfg, std::uint64_t seed,
                           const std::filesystem::path& root);

}  // namespace clic::data
