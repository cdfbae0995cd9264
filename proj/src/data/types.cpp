#include "clic/data/types.hpp"

#include <cmath>

#include "clic/common/errors.hpp"

namespace clic::data {

const char* class_name(Superclass c) { return kClassNames[static_cast<int>(c)]; }

std::optional<Superclass> class_from_name(const std::string& name) {
    for (int i = 0; i < kNumClasses; ++i) {
        if (name == kClassNames[i]) return static_cast<Superclass>(i);
    }
    return std::nullopt;
}

const char* sex_name(Sex s) {
    switch (s) {
        case Sex::Male: return "male";
        case Sex::Female: return "female";
        default: return "unknown";
    }
}

Sex sex_from_name(const std::string& name) {
    if (name == "male") return Sex::Male;
    if (name == "female") return Sex::Female;
    return Sex::Unknown;
}

SynthConfig default_synth_config(int n_records, int signal_length, std::uint64_t seed) {
    SynthConfig cfg;
    cfg.n_records = n_records;
    cfg.signal_length = signal_length;
    cfg.seed = seed;
    cfg.class_priors.assign(kNumClasses, 1.0 / kNumClasses);
    cfg.profiles.resize(kNumClasses);

    auto& norm = cfg.profiles[0];
    norm.freqs_hz = {1.2, 2.4, 4.8, 9.6};
    norm.amps_mv = {0.9, 0.5, 0.25, 0.12};
    norm.age_mean = 45; norm.age_sd = 12; norm.male_prob = 0.5;
    norm.bmi_mean = 24; norm.bmi_sd = 2.5; norm.device = "SYN-A";

    auto& mi = cfg.profiles[1];
    mi.freqs_hz = {0.8, 3.1, 6.3, 12.7};
    mi.amps_mv = {1.1, 0.3, 0.55, 0.2};
    mi.age_mean = 62; mi.age_sd = 10; mi.male_prob = 0.6;
    mi.bmi_mean = 27; mi.bmi_sd = 3.0; mi.device = "SYN-A";

    auto& sttc = cfg.profiles[2];
    sttc.freqs_hz = {1.6, 2.9, 7.4, 14.8};
    sttc.amps_mv = {0.7, 0.8, 0.2, 0.3};
    sttc.age_mean = 58; sttc.age_sd = 11; sttc.male_prob = 0.45;
    sttc.bmi_mean = 26; sttc.bmi_sd = 3.0; sttc.device = "SYN-B";

    auto& cd = cfg.profiles[3];
    cd.freqs_hz = {0.6, 1.9, 5.1, 10.3};
    cd.amps_mv = {1.3, 0.6, 0.35, 0.1};
    cd.age_mean = 72; cd.age_sd = 7; cd.male_prob = 0.75;
    cd.bmi_mean = 29; cd.bmi_sd = 2.5; cd.device = "SYN-B";

    auto& hyp = cfg.profiles[4];
    hyp.freqs_hz = {1.0, 3.7, 8.2, 16.5};
    hyp.amps_mv = {1.0, 0.4, 0.6, 0.25};
    hyp.age_mean = 55; hyp.age_sd = 9; hyp.male_prob = 0.55;
    hyp.bmi_mean = 30; hyp.bmi_sd = 2.5; hyp.device = "SYN-C";

    return cfg;
}

void validate(const SynthConfig& cfg) {
    if (cfg.n_records <= 0) throw InvalidConfig("synth: n_records must be positive");
    if (cfg.n_classes <= 0 || cfg.n_classes > kNumClasses) {
        throw InvalidConfig("synth: n_classes must be in [1, 5]");
    }
    if (cfg.signal_length <= 0) throw InvalidConfig("synth: signal_length must be positive");
    if (cfg.sampling_rate <= 0) throw InvalidConfig("synth: sampling_rate must be positive");
    if (cfg.class_priors.size() != static_cast<std::size_t>(cfg.n_classes)) {
        throw InvalidConfig("synth: class_priors size must equal n_classes");
    }
    double sum = 0;
    for (double p : cfg.class_priors) {
        if (p < 0) throw InvalidConfig("synth: negative class prior");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InvalidConfig("synth: class priors must sum to 1");
    if (cfg.profiles.size() != static_cast<std::size_t>(cfg.n_classes)) {
        throw InvalidConfig("synth: profiles size must equal n_classes");
    }
    for (const auto& [a, b] : cfg.confound_pairs) {
        if (a < 0 || a >= cfg.n_classes || b < 0 || b >= cfg.n_classes || a == b) {
            throw InvalidConfig("synth: invalid confound pair");
        }
    }
}

}  // namespace clic::data
