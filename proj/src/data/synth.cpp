#include "clic/data/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "clic/common/csv.hpp"
#include "clic/common/errors.hpp"
#include "clic/common/io.hpp"
#include "clic/common/rng.hpp"
#include "clic/data/statements.hpp"
#include "clic/data/wfdb.hpp"

namespace clic::data {

namespace {

constexpr int kLeads = 12;

int draw_class(Rng& rng, const std::vector<double>& priors) {
    const double u = rng.uniform();
    double acc = 0;
    for (std::size_t i = 0; i < priors.size(); ++i) {
        acc += priors[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(priors.size()) - 1;
}

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

}  // namespace

std::vector<SynthRecord> synthesize_dataset(const SynthConfig& cfg, std::uint64_t seed) {
    validate(cfg);

    // Resolve confounds: the second class of each pair copies the first's
    // signal parameters, demographics stay its own.
    std::vector<ClassProfile> profiles = cfg.profiles;
    for (const auto& [a, b] : cfg.confound_pairs) {
        profiles[b].freqs_hz = profiles[a].freqs_hz;
        profiles[b].amps_mv = profiles[a].amps_mv;
        profiles[b].noise_sd = profiles[a].noise_sd;
    }

    Rng rng(seed);
    std::vector<SynthRecord> out;
    out.reserve(cfg.n_records);

    for (int r = 0; r < cfg.n_records; ++r) {
        const int cls = draw_class(rng, cfg.class_priors);
        const ClassProfile& prof = profiles[cls];

        SynthRecord rec;
        char idbuf[16];
        std::snprintf(idbuf, sizeof(idbuf), "S%05d", r + 1);
        rec.label = static_cast<Superclass>(cls);

        rec.ecg.id = idbuf;
        rec.ecg.n_leads = kLeads;
        rec.ecg.n_samples = cfg.signal_length;
        rec.ecg.sampling_rate = cfg.sampling_rate;
        rec.ecg.samples.resize(static_cast<std::size_t>(kLeads) * cfg.signal_length);

        std::array<double, 4> phase{};
        for (auto& p : phase) p = rng.uniform(0.0, 2.0 * M_PI);
        const double amp_jitter = rng.uniform(0.9, 1.1);

        for (int lead = 0; lead < kLeads; ++lead) {
            const double lead_shift = 0.3 * lead;
            for (int t = 0; t < cfg.signal_length; ++t) {
                double v = 0;
                for (int k = 0; k < 4; ++k) {
                    v += amp_jitter * prof.amps_mv[k] *
                         std::sin(2.0 * M_PI * prof.freqs_hz[k] * t / cfg.sampling_rate +
                                  phase[k] + lead_shift);
                }
                rec.ecg.at(lead, t) = v + prof.noise_sd * rng.normal();
            }
        }

        rec.meta.id = idbuf;
        rec.meta.age = std::round(clamp(rng.normal(prof.age_mean, prof.age_sd), 18.0, 95.0));
        rec.meta.sex = rng.uniform() < prof.male_prob ? Sex::Male : Sex::Female;
        const double height = std::round(clamp(rng.normal(170.0, 8.0), 150.0, 198.0));
        const double bmi = clamp(rng.normal(prof.bmi_mean, prof.bmi_sd), 15.0, 45.0);
        const double weight = std::round(bmi * (height / 100.0) * (height / 100.0) * 10.0) / 10.0;
        rec.meta.height = height;
        rec.meta.weight = weight;
        rec.meta.device = prof.device;
        rec.meta.scp_codes[class_name(rec.label)] = 100.0;
        for (const auto& code : prof.rhythm_codes) rec.meta.scp_codes[code] = 0.0;
        rec.meta.rhythm_codes = prof.rhythm_codes;
        std::sort(rec.meta.rhythm_codes.begin(), rec.meta.rhythm_codes.end());
        rec.meta.strat_fold = static_cast<int>(rng.below(10)) + 1;

        out.push_back(std::move(rec));
    }
    return out;
}

std::string synthetic_statement_csv() {
    std::ostringstream out;
    out << ",description,diagnostic,form,rhythm,diagnostic_class\n";
    out << "NORM,normal ECG,1.0,,,NORM\n";
    out << "MI,myocardial infarction,1.0,,,MI\n";
    out << "STTC,ST/T change,1.0,,,STTC\n";
    out << "CD,conduction disturbance,1.0,,,CD\n";
    out << "HYP,hypertrophy,1.0,,,HYP\n";
    out << "SR,sinus rhythm,,,1.0,\n";
    out << "AFIB,atrial fibrillation,,,1.0,\n";
    out << "NST_,non-specific ST changes,,1.0,,\n";
    return out.str();
}

StatementTable synthetic_statement_table() {
    return statement_table_from_csv_text(synthetic_statement_csv());
}

void apply_disjoint_demographics(SynthConfig& cfg) {
    for (const auto& [a, b] : cfg.confound_pairs) {
        auto& pa = cfg.profiles[a];
        pa.age_mean = 40; pa.age_sd = 3; pa.male_prob = 0.0;
        pa.bmi_mean = 22; pa.bmi_sd = 1.0; pa.device = "SYN-P0";
        auto& pb = cfg.profiles[b];
        pb.age_mean = 75; pb.age_sd = 3; pb.male_prob = 1.0;
        pb.bmi_mean = 31; pb.bmi_sd = 1.0; pb.device = "SYN-P1";
    }
}

void write_synthetic_ptbxl(const SynthConfig& cfg, std::uint64_t seed,
                           const std::filesystem::path& root) {
    const auto records = synthesize_dataset(cfg, seed);
    std::filesystem::create_directories(root);

    std::ostringstream db;
    db << "ecg_id,age,sex,height,weight,device,scp_codes,strat_fold,filename_hr\n";

    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        SignalSpec spec;
        spec.record_name = rec.ecg.id;
        spec.n_signals = kLeads;
        spec.sampling_rate = cfg.sampling_rate;
        spec.n_samples = cfg.signal_length;
        static const char* lead_names[kLeads] = {"I",   "II", "III", "AVR", "AVL", "AVF",
                                                 "V1",  "V2", "V3",  "V4",  "V5",  "V6"};
        for (int s = 0; s < kLeads; ++s) {
            SignalInfo info;
            info.file_name = rec.ecg.id + ".dat";
            info.gain = 1000.0;
            info.baseline = 0;
            info.lead_name = lead_names[s];
            spec.signals.push_back(std::move(info));
        }
        const std::string rel_dir = "records500/00000";
        write_record(root / rel_dir, spec, rec.ecg);

        std::ostringstream scp;
        scp << '{';
        bool first = true;
        for (const auto& [code, lik] : rec.meta.scp_codes) {
            if (!first) scp << ", ";
            first = false;
            scp << '\'' << code << "': " << format_fixed(lik, 1);
        }
        scp << '}';

        db << (i + 1) << ',' << format_number(*rec.meta.age) << ','
           << (rec.meta.sex == Sex::Male ? 0 : 1) << ',' << format_number(*rec.meta.height) << ','
           << format_number(*rec.meta.weight) << ',' << csv_escape(*rec.meta.device) << ','
           << csv_escape(scp.str()) << ',' << rec.meta.strat_fold << ',' << rel_dir << '/'
           << rec.ecg.id << '\n';
    }

    write_file(root / "ptbxl_database.csv", db.str());
    write_file(root / "scp_statements.csv", synthetic_statement_csv());
}

}  // namespace clic::data
