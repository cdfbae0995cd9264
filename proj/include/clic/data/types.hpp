#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace clic::data {

// Diagnostic superclasses in fixed output-logit order.
enum class Superclass : int { NORM = 0, MI = 1, STTC = 2, CD = 3, HYP = 4 };

inline constexpr int kNumClasses = 5;
inline constexpr std::array<const char*, kNumClasses> kClassNames = {
    "NORM", "MI", "STTC", "CD", "HYP"};

const char* class_name(Superclass c);
std::optional<Superclass> class_from_name(const std::string& name);

enum class Sex { Male, Female, Unknown };

const char* sex_name(Sex s);
Sex sex_from_name(const std::string& name);

struct SignalInfo {
    std::string file_name;
    int storage_format = 16;
    double gain = 0.0;      // adu per mV
    int baseline = 0;       // adu
    std::string lead_name;
};

struct SignalSpec {
    std::string record_name;
    int n_signals = 0;
    double sampling_rate = 0.0;
    int n_samples = 0;
    std::vector<SignalInfo> signals;
};

// Calibrated multi-lead signal, samples[lead * n_samples + t] in mV.
struct EcgRecord {
    std::string id;
    int n_leads = 0;
    int n_samples = 0;
    double sampling_rate = 0.0;
    std::vector<double> samples;

    double at(int lead, int t) const { return samples[static_cast<std::size_t>(lead) * n_samples + t]; }
    double& at(int lead, int t) { return samples[static_cast<std::size_t>(lead) * n_samples + t]; }
};

struct PatientMeta {
    std::string id;
    std::optional<double> age;          // years
    Sex sex = Sex::Unknown;
    std::optional<double> height;       // cm
    std::optional<double> weight;       // kg
    std::optional<std::string> device;
    std::map<std::string, double> scp_codes;   // code -> likelihood 0..100
    std::vector<std::string> rhythm_codes;     // sorted
    std::vector<std::string> form_codes;       // sorted
    int strat_fold = 0;                 // 1..10
};

struct StatementInfo {
    bool is_diagnostic = false;
    std::optional<Superclass> diagnostic_class;
    bool is_rhythm = false;
    bool is_form = false;
    std::string description;
};

struct StatementTable {
    std::map<std::string, StatementInfo> entries;

    const StatementInfo* find(const std::string& code) const {
        auto it = entries.find(code);
        return it == entries.end() ? nullptr : &it->second;
    }
};

struct DatasetSplit {
    std::vector<std::string> train;
    std::vector<std::string> val;
    std::vector<std::string> test;
};

// Per-class generator parameters for the synthetic harness. Classes listed in
// SynthConfig::confound_pairs share signal parameters and differ only here in
// the demographic fields.
struct ClassProfile {
    std::array<double, 4> freqs_hz{};
    std::array<double, 4> amps_mv{};
    double noise_sd = 0.05;
    double age_mean = 60.0, age_sd = 10.0;
    double male_prob = 0.5;
    double bmi_mean = 25.0, bmi_sd = 3.0;
    std::string device = "SYN-GEN";
    std::vector<std::string> rhythm_codes = {"SR"};
};

struct SynthConfig {
    int n_records = 0;
    int n_classes = kNumClasses;
    int signal_length = 1000;
    double sampling_rate = 100.0;
    std::vector<double> class_priors;                 // sums to 1
    std::vector<std::pair<int, int>> confound_pairs;  // (a, b): b copies a's signal params
    std::vector<ClassProfile> profiles;
    std::uint64_t seed = 0;
};

// 5-class default with distinct signal families and mildly distinct demographics.
SynthConfig default_synth_config(int n_records, int signal_length, std::uint64_t seed);

void validate(const SynthConfig& cfg);

}  // namespace clic::data
