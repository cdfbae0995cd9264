#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "clic/common/errors.hpp"
#include "clic/common/io.hpp"
#include "clic/common/rng.hpp"
#include "clic/data/ptbxl.hpp"
#include "clic/data/split.hpp"
#include "clic/data/statements.hpp"
#include "clic/data/synth.hpp"
#include "clic/data/wfdb.hpp"

using namespace clic;
using namespace clic::data;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "clic_tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i;
        else ++j;
        const double fa = static_cast<double>(i) / a.size();
        const double fb = static_cast<double>(j) / b.size();
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

StatementTable test_table() {
    return statement_table_from_csv_text(
        ",description,diagnostic,form,rhythm,diagnostic_class\n"
        "NORM,normal ECG,1.0,,,NORM\n"
        "IMI,inferior myocardial infarction,1.0,,,MI\n"
        "NDT,non-diagnostic T abnormalities,1.0,1.0,,STTC\n"
        "SR,sinus rhythm,,,1.0,\n"
        "AFIB,atrial fibrillation,,,1.0,\n"
        "NST_,non-specific ST changes,,1.0,,\n");
}

}  // namespace

TEST_SUITE_BEGIN("dataset");

TEST_CASE("parse_header: minimal two-signal header") {
    const std::string hea =
        "r 2 500 5000\n"
        "r.dat 16 1000(0)/mV 16 0 0 0 0 I\n"
        "r.dat 16 1000(0)/mV 16 0 0 0 0 II\n";
    const SignalSpec spec = parse_header(hea);
    CHECK(spec.record_name == "r");
    CHECK(spec.n_signals == 2);
    CHECK(spec.sampling_rate == 500.0);
    CHECK(spec.n_samples == 5000);
    REQUIRE(spec.signals.size() == 2);
    CHECK(spec.signals[0].gain == 1000.0);
    CHECK(spec.signals[1].gain == 1000.0);
    CHECK(spec.signals[0].baseline == 0);
    CHECK(spec.signals[0].storage_format == 16);
    CHECK(spec.signals[0].lead_name == "I");
    CHECK(spec.signals[1].lead_name == "II");
}

TEST_CASE("parse_header: ptbxl-style header with negative init and checksum") {
    const std::string hea =
        "00001_hr 12 500 5000\n"
        "00001_hr.dat 16 1000.0(0)/mV 16 0 -119 -1508 0 I\n"
        "00001_hr.dat 16 1000.0(0)/mV 16 0 -55 723 0 II\n"
        "00001_hr.dat 16 1000.0(0)/mV 16 0 64 14758 0 III\n"
        "00001_hr.dat 16 1000.0(0)/mV 16 0 86 14423 0 AVR\n"
        "00001_hr.dat 16 1000.0(0)/mV 16 0 -91 1211 0 AVL\n"
        "00001_hr.dat 16 1000.0(0)/mV 16 0 4 14736 0 AVF\n"
        "00001_hr.dat 16 1000.0(0)/mV 16 0 -69 13827 0 V1\n"
        "00001_hr.dat 16 1000.0(0)/mV 16 0 -31 13842 0 V2\n"
        "00001_hr.dat 16 1000.0(0)/mV 16 0 0 14687 0 V3\n"
        "00001_hr.dat 16 1000.0(0)/mV 16 0 -26 14666 0 V4\n"
        "00001_hr.dat 16 1000.0(0)/mV 16 0 -39 14529 0 V5\n"
        "00001_hr.dat 16 1000.0(0)/mV 16 0 -79 13956 0 V6\n";
    const SignalSpec spec = parse_header(hea);
    CHECK(spec.n_signals == 12);
    CHECK(spec.signals[11].lead_name == "V6");
    for (const auto& s : spec.signals) {
        CHECK(s.gain == 1000.0);
        CHECK(s.baseline == 0);
    }
}

TEST_CASE("parse_header: rejections") {
    CHECK_THROWS_AS(parse_header(""), MalformedHeader);
    CHECK_THROWS_AS(parse_header("r 1 500\n"), MalformedHeader);
    CHECK_THROWS_AS(parse_header("r 1 500 100\n"), MalformedHeader);
    CHECK_THROWS_AS(parse_header("r x 500 100\nr.dat 16 1000 16 0 0 0 0 I\n"), MalformedHeader);
    CHECK_THROWS_AS(parse_header("r 1 500 100\nr.dat 212 1000 16 0 0 0 0 I\n"), UnsupportedFormat);
    CHECK_THROWS_AS(parse_header("r 1 500 100\nr.dat 16 0(0)/mV 16 0 0 0 0 I\n"), MalformedHeader);
    CHECK_THROWS_AS(parse_header("r 1 500 100\nr.dat 16 abc 16 0 0 0 0 I\n"), MalformedHeader);
}

TEST_CASE("parse_header: baseline falls back to adc zero when unparenthesized") {
    const SignalSpec spec = parse_header("r 1 500 4\nr.dat 16 200/mV 16 -7 0 0 0 I\n");
    CHECK(spec.signals[0].gain == 200.0);
    CHECK(spec.signals[0].baseline == -7);
}

TEST_CASE("decode_signal: pinned single-sample vector") {
    SignalSpec spec;
    spec.record_name = "r";
    spec.n_signals = 1;
    spec.sampling_rate = 500;
    spec.n_samples = 1;
    spec.signals.push_back({"r.dat", 16, 1000.0, 0, "I"});
    const EcgRecord rec = decode_signal(spec, {0x01, 0x00});
    CHECK(rec.at(0, 0) == doctest::Approx(0.001).epsilon(1e-15));
}

TEST_CASE("decode_signal: frame interleaving") {
    SignalSpec spec;
    spec.record_name = "r";
    spec.n_signals = 2;
    spec.sampling_rate = 500;
    spec.n_samples = 2;
    spec.signals.push_back({"r.dat", 16, 1.0, 0, "A"});
    spec.signals.push_back({"r.dat", 16, 1.0, 0, "B"});
    // frames (a0,b0,a1,b1) carrying raw 1,2,3,4
    const EcgRecord rec = decode_signal(spec, {1, 0, 2, 0, 3, 0, 4, 0});
    CHECK(rec.at(0, 0) == 1.0);
    CHECK(rec.at(0, 1) == 3.0);
    CHECK(rec.at(1, 0) == 2.0);
    CHECK(rec.at(1, 1) == 4.0);
}

TEST_CASE("decode_signal: errors") {
    SignalSpec spec;
    spec.record_name = "r";
    spec.n_signals = 1;
    spec.sampling_rate = 500;
    spec.n_samples = 2;
    spec.signals.push_back({"r.dat", 16, 1000.0, 0, "I"});
    CHECK_THROWS_AS(decode_signal(spec, {1, 0}), LengthMismatch);  // off by 2 bytes
    CHECK_THROWS_AS(decode_signal(spec, {1, 0, 2, 0, 3, 0}), LengthMismatch);
    CHECK_THROWS_AS(decode_signal(spec, {0x00, 0x80, 1, 0}), MissingSample);  // -32768 sentinel
}

TEST_CASE("decode/encode round trip is bit-exact over random records") {
    Rng rng(20240901);
    for (int trial = 0; trial < 1000; ++trial) {
        SignalSpec spec;
        spec.record_name = "r";
        spec.n_signals = 1 + static_cast<int>(rng.below(4));
        spec.sampling_rate = 500;
        spec.n_samples = 1 + static_cast<int>(rng.below(40));
        static const double gains[] = {200.0, 1000.0, 2000.5};
        for (int s = 0; s < spec.n_signals; ++s) {
            spec.signals.push_back({"r.dat", 16, gains[rng.below(3)],
                                    static_cast<int>(rng.below(11)) - 5, "L"});
        }
        std::vector<std::uint8_t> bytes(2ull * spec.n_signals * spec.n_samples);
        for (std::size_t i = 0; i < bytes.size(); i += 2) {
            const auto raw = static_cast<std::int16_t>(static_cast<int>(rng.below(65535)) - 32767);
            bytes[i] = static_cast<std::uint8_t>(raw & 0xff);
            bytes[i + 1] = static_cast<std::uint8_t>(static_cast<std::uint16_t>(raw) >> 8);
        }
        const EcgRecord rec = decode_signal(spec, bytes);
        CHECK(encode_signal(spec, rec) == bytes);
    }
}

TEST_CASE("calibration linearity: doubling gain halves physical values") {
    SignalSpec spec;
    spec.record_name = "r";
    spec.n_signals = 1;
    spec.sampling_rate = 500;
    spec.n_samples = 3;
    spec.signals.push_back({"r.dat", 16, 500.0, 3, "I"});
    const std::vector<std::uint8_t> bytes = {0x39, 0x30, 0x10, 0x00, 0xf0, 0xff};
    const EcgRecord base = decode_signal(spec, bytes);
    spec.signals[0].gain = 1000.0;
    const EcgRecord halved = decode_signal(spec, bytes);
    for (int t = 0; t < 3; ++t) CHECK(halved.at(0, t) == base.at(0, t) / 2.0);
}

TEST_CASE("write_record / read_record round trip") {
    const auto dir = temp_dir("wfdb_rt");
    SignalSpec spec;
    spec.record_name = "rec01";
    spec.n_signals = 2;
    spec.sampling_rate = 100;
    spec.n_samples = 16;
    spec.signals.push_back({"rec01.dat", 16, 1000.0, 0, "I"});
    spec.signals.push_back({"rec01.dat", 16, 1000.0, 0, "II"});
    EcgRecord rec;
    rec.id = "rec01";
    rec.n_leads = 2;
    rec.n_samples = 16;
    rec.sampling_rate = 100;
    rec.samples.resize(32);
    for (int i = 0; i < 32; ++i) rec.samples[i] = (i - 16) / 1000.0;
    write_record(dir, spec, rec);
    const auto [spec2, rec2] = read_record(dir / "rec01.hea");
    CHECK(spec2.n_signals == 2);
    CHECK(spec2.sampling_rate == 100.0);
    CHECK(rec2.samples == rec.samples);
}

TEST_CASE("parse_scp_codes") {
    const auto m = parse_scp_codes("{'NORM': 100.0, 'SR': 0.0}");
    REQUIRE(m.size() == 2);
    CHECK(m.at("NORM") == 100.0);
    CHECK(m.at("SR") == 0.0);

    CHECK(parse_scp_codes("{}").empty());
    CHECK(parse_scp_codes("  {  }  ").empty());

    const auto lower = parse_scp_codes("{'norm': 80}");
    CHECK(lower.at("NORM") == 80.0);

    CHECK_THROWS_AS(parse_scp_codes("{'NORM' 100}"), clic::ParseError);
    CHECK_THROWS_AS(parse_scp_codes("{'NORM': 100"), clic::ParseError);
    CHECK_THROWS_AS(parse_scp_codes("'NORM': 100}"), clic::ParseError);
    CHECK_THROWS_AS(parse_scp_codes("{NORM: 100}"), clic::ParseError);
    CHECK_THROWS_AS(parse_scp_codes("{'NORM': abc}"), clic::ParseError);
    CHECK_THROWS_AS(parse_scp_codes("{'NORM': 100,}"), clic::ParseError);
}

TEST_CASE("statement table flags") {
    const auto table = test_table();
    CHECK(table.find("IMI")->is_diagnostic);
    CHECK(table.find("IMI")->diagnostic_class == Superclass::MI);
    CHECK(table.find("SR")->is_rhythm);
    CHECK_FALSE(table.find("SR")->is_diagnostic);
    CHECK(table.find("NST_")->is_form);
    CHECK(table.find("NDT")->is_diagnostic);
    CHECK(table.find("NDT")->is_form);
    CHECK(table.find("MISSING") == nullptr);
}

TEST_CASE("derive_superclasses") {
    const auto table = test_table();
    SUBCASE("diagnostic code maps to its class") {
        const auto m = derive_superclasses({{"IMI", 100.0}}, table);
        REQUIRE(m.size() == 1);
        CHECK(m.at(Superclass::MI) == 100.0);
    }
    SUBCASE("rhythm-only codes are ignored") {
        const auto m = derive_superclasses({{"NORM", 100.0}, {"SR", 0.0}}, table);
        REQUIRE(m.size() == 1);
        CHECK(m.at(Superclass::NORM) == 100.0);
    }
    SUBCASE("max likelihood accumulates per class") {
        const auto m = derive_superclasses({{"IMI", 35.0}, {"NORM", 0.0}}, table);
        CHECK(m.at(Superclass::MI) == 35.0);
        CHECK(m.at(Superclass::NORM) == 0.0);
    }
    SUBCASE("unknown codes are skipped") {
        const auto m = derive_superclasses({{"ZZTOP", 90.0}, {"IMI", 80.0}}, table);
        REQUIRE(m.size() == 1);
        CHECK(m.count(Superclass::MI) == 1);
    }
    SUBCASE("empty input") { CHECK(derive_superclasses({}, table).empty()); }
}

TEST_CASE("select_label") {
    CHECK(select_label({{Superclass::MI, 100.0}}) == Superclass::MI);
    CHECK(select_label({{Superclass::MI, 100.0}, {Superclass::STTC, 80.0}}) == std::nullopt);
    CHECK(select_label({}) == std::nullopt);
    // zero likelihood means "unknown" in the source data and is retained
    CHECK(select_label({{Superclass::HYP, 0.0}}) == Superclass::HYP);
    // sub-threshold likelihoods are dropped
    CHECK(select_label({{Superclass::MI, 45.0}}) == std::nullopt);
    CHECK(select_label({{Superclass::MI, 100.0}, {Superclass::STTC, 30.0}}) == Superclass::MI);
    CHECK(select_label({{Superclass::MI, 50.0}}) == Superclass::MI);  // boundary inclusive
    // threshold is a knob
    CHECK(select_label({{Superclass::MI, 45.0}}, 40.0) == Superclass::MI);
}

TEST_CASE("build_split: fold routing") {
    const auto split = build_split({{"a", 3}, {"b", 9}, {"c", 10}, {"d", 1}, {"e", 8}});
    CHECK(split.train == std::vector<std::string>{"a", "d", "e"});
    CHECK(split.val == std::vector<std::string>{"b"});
    CHECK(split.test == std::vector<std::string>{"c"});
    CHECK_THROWS_AS(build_split({{"x", 11}}), InvalidFold);
    CHECK_THROWS_AS(build_split({{"x", 0}}), InvalidFold);
}

TEST_CASE("build_split: partition property over random folds") {
    Rng rng(7);
    std::vector<std::pair<std::string, int>> records;
    for (int i = 0; i < 500; ++i) {
        records.emplace_back("r" + std::to_string(i), static_cast<int>(rng.below(10)) + 1);
    }
    const auto split = build_split(records);
    std::set<std::string> all;
    all.insert(split.train.begin(), split.train.end());
    all.insert(split.val.begin(), split.val.end());
    all.insert(split.test.begin(), split.test.end());
    CHECK(all.size() == records.size());
    CHECK(split.train.size() + split.val.size() + split.test.size() == records.size());
}

TEST_CASE("synthesize_dataset: determinism") {
    const auto cfg = default_synth_config(100, 64, 42);
    const auto a = synthesize_dataset(cfg, 42);
    const auto b = synthesize_dataset(cfg, 42);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].ecg.samples == b[i].ecg.samples);
        CHECK(a[i].meta.age == b[i].meta.age);
        CHECK(a[i].meta.strat_fold == b[i].meta.strat_fold);
        CHECK(a[i].label == b[i].label);
    }
    const auto c = synthesize_dataset(cfg, 43);
    CHECK(a[0].ecg.samples != c[0].ecg.samples);
}

TEST_CASE("synthesize_dataset: class priors within binomial bounds") {
    auto cfg = default_synth_config(100, 64, 1);
    cfg.class_priors = {0.5, 0.5, 0.0, 0.0, 0.0};
    const auto records = synthesize_dataset(cfg, 1);
    int count0 = 0;
    for (const auto& r : records) {
        if (r.label == Superclass::NORM) ++count0;
    }
    // normal approximation to the binomial 99% interval:
    // 50 +- 2.576 * sqrt(100 * 0.25) = [37.1, 62.9]
    CHECK(count0 >= 38);
    CHECK(count0 <= 62);
}

TEST_CASE("synthesize_dataset: confound pair is signal-indistinguishable") {
    auto cfg = default_synth_config(400, 64, 5);
    cfg.confound_pairs = {{2, 3}};  // STTC, CD
    apply_disjoint_demographics(cfg);
    const auto records = synthesize_dataset(cfg, 5);

    std::vector<double> energy_a, energy_b;
    for (const auto& r : records) {
        if (r.label != Superclass::STTC && r.label != Superclass::CD) continue;
        double e = 0;
        for (double v : r.ecg.samples) e += v * v;
        e /= static_cast<double>(r.ecg.samples.size());
        (r.label == Superclass::STTC ? energy_a : energy_b).push_back(e);
    }
    REQUIRE(energy_a.size() > 20);
    REQUIRE(energy_b.size() > 20);

    const double d = ks_statistic(energy_a, energy_b);
    // alpha = 0.01 critical value: c = sqrt(-ln(0.005)/2) = 1.6277
    const double n = static_cast<double>(energy_a.size());
    const double m = static_cast<double>(energy_b.size());
    const double critical = 1.6277 * std::sqrt((n + m) / (n * m));
    CHECK(d < critical);

    // while the demographics do differ
    double age_a = 0, age_b = 0;
    int na = 0, nb = 0;
    for (const auto& r : records) {
        if (r.label == Superclass::STTC) { age_a += *r.meta.age; ++na; }
        if (r.label == Superclass::CD) { age_b += *r.meta.age; ++nb; }
    }
    CHECK(age_a / na < 50.0);
    CHECK(age_b / nb > 65.0);
}

TEST_CASE("synthesize_dataset: invalid configs") {
    auto cfg = default_synth_config(10, 64, 0);
    cfg.class_priors = {0.5, 0.5, 0.0, 0.0, 0.1};
    CHECK_THROWS_AS(synthesize_dataset(cfg, 0), InvalidConfig);
    cfg = default_synth_config(10, 64, 0);
    cfg.confound_pairs = {{0, 9}};
    CHECK_THROWS_AS(synthesize_dataset(cfg, 0), InvalidConfig);
    cfg = default_synth_config(0, 64, 0);
    CHECK_THROWS_AS(synthesize_dataset(cfg, 0), InvalidConfig);
}

TEST_CASE("ptbxl metadata loading from csv") {
    const auto dir = temp_dir("meta_csv");
    const std::string csv =
        "ecg_id,age,sex,height,weight,device,scp_codes,strat_fold,filename_hr\n"
        "1,56.0,1,,70.0,CS-12,\"{'NORM': 100.0, 'SR': 0.0}\",3,records500/00000/00001_hr\n"
        "2,,0,168.0,59.0,CS-12,\"{'IMI': 100.0, 'NST_': 50.0}\",10,records500/00000/00002_hr\n";
    write_file(dir / "ptbxl_database.csv", csv);
    const auto rows = load_ptbxl_metadata(dir / "ptbxl_database.csv", test_table());
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].meta.id == "1");
    CHECK(rows[0].meta.age == 56.0);
    CHECK(rows[0].meta.sex == Sex::Female);
    CHECK_FALSE(rows[0].meta.height.has_value());  // missing stays absent, never zero
    CHECK(rows[0].meta.weight == 70.0);
    CHECK(rows[0].meta.device == std::string("CS-12"));
    CHECK(rows[0].meta.rhythm_codes == std::vector<std::string>{"SR"});
    CHECK(rows[0].meta.strat_fold == 3);
    CHECK(rows[0].filename_hr == "records500/00000/00001_hr");
    CHECK_FALSE(rows[1].meta.age.has_value());
    CHECK(rows[1].meta.sex == Sex::Male);
    CHECK(rows[1].meta.form_codes == std::vector<std::string>{"NST_"});
}

TEST_CASE("build_manifest applies the single-label rule") {
    const auto table = test_table();
    std::vector<MetadataRow> rows(3);
    rows[0].meta.id = "1";
    rows[0].meta.scp_codes = {{"NORM", 100.0}, {"SR", 0.0}};
    rows[0].meta.strat_fold = 1;
    rows[1].meta.id = "2";
    rows[1].meta.scp_codes = {{"IMI", 100.0}, {"NDT", 100.0}};  // two classes -> dropped
    rows[1].meta.strat_fold = 2;
    rows[2].meta.id = "3";
    rows[2].meta.scp_codes = {{"IMI", 40.0}};  // sub-threshold -> dropped
    rows[2].meta.strat_fold = 3;
    const auto manifest = build_manifest(rows, table);
    REQUIRE(manifest.size() == 1);
    CHECK(manifest[0].id == "1");
    CHECK(manifest[0].label == Superclass::NORM);
}

TEST_CASE("manifest write/read round trip") {
    const auto dir = temp_dir("manifest");
    std::vector<ManifestRecord> records(2);
    records[0].id = "1";
    records[0].label = Superclass::CD;
    records[0].meta.id = "1";
    records[0].meta.age = 71;
    records[0].meta.sex = Sex::Male;
    records[0].meta.strat_fold = 4;
    records[0].meta.rhythm_codes = {"SR"};
    records[0].signal_path = "records500/00000/S00001";
    records[1].id = "2";
    records[1].label = Superclass::NORM;
    records[1].meta.id = "2";
    records[1].meta.sex = Sex::Unknown;
    records[1].meta.height = 170;
    records[1].meta.weight = 65;
    records[1].meta.strat_fold = 9;
    records[1].signal_path = "records500/00000/S00002";

    write_manifest(dir / "manifest.jsonl", records);
    const auto loaded = read_manifest(dir / "manifest.jsonl");
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].label == Superclass::CD);
    CHECK(loaded[0].meta.age == 71.0);
    CHECK(loaded[0].meta.rhythm_codes == std::vector<std::string>{"SR"});
    CHECK_FALSE(loaded[0].meta.height.has_value());
    CHECK(loaded[1].meta.sex == Sex::Unknown);
    CHECK(loaded[1].signal_path == "records500/00000/S00002");

    // byte determinism of the writer
    write_manifest(dir / "manifest2.jsonl", records);
    CHECK(read_file(dir / "manifest.jsonl") == read_file(dir / "manifest2.jsonl"));
}

TEST_CASE("write_synthetic_ptbxl produces a loadable dataset") {
    const auto dir = temp_dir("synth_root");
    auto cfg = default_synth_config(20, 64, 3);
    write_synthetic_ptbxl(cfg, 3, dir);
    const auto table = load_statement_table(dir / "scp_statements.csv");
    const auto rows = load_ptbxl_metadata(dir / "ptbxl_database.csv", table);
    REQUIRE(rows.size() == 20);
    const auto manifest = build_manifest(rows, table);
    CHECK(manifest.size() == 20);  // synthetic records are single-label by construction
    const auto [spec, rec] = read_record(dir / (manifest[0].signal_path + ".hea"));
    CHECK(rec.n_leads == 12);
    CHECK(rec.n_samples == 64);
}

TEST_SUITE_END();
