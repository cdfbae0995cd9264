#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "clic/common/errors.hpp"
#include "clic/common/rng.hpp"
#include "clic/data/synth.hpp"
#include "clic/metrics/export.hpp"
#include "clic/metrics/metrics.hpp"
#include "clic/model/preprocess.hpp"

using namespace clic;
using namespace clic::metrics;
using data::Superclass;

namespace {

std::vector<Superclass> classes_of(std::initializer_list<int> v) {
    std::vector<Superclass> out;
    for (int c : v) out.push_back(static_cast<Superclass>(c));
    return out;
}

// independent oracle: recount TP/FP/FN per class directly from the raw lists
struct BruteForce {
    std::array<double, 5> precision{}, recall{}, f1{};
    double macro_f1 = 0, accuracy = 0;

    BruteForce(const std::vector<Superclass>& preds, const std::vector<Superclass>& labels) {
        int correct = 0;
        for (std::size_t i = 0; i < preds.size(); ++i) {
            if (preds[i] == labels[i]) ++correct;
        }
        accuracy = static_cast<double>(correct) / static_cast<double>(preds.size());
        for (int c = 0; c < 5; ++c) {
            int tp = 0, fp = 0, fn = 0;
            for (std::size_t i = 0; i < preds.size(); ++i) {
                const bool p = static_cast<int>(preds[i]) == c;
                const bool l = static_cast<int>(labels[i]) == c;
                if (p && l) ++tp;
                if (p && !l) ++fp;
                if (!p && l) ++fn;
            }
            precision[c] = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
            recall[c] = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
            f1[c] = precision[c] + recall[c] == 0
                        ? 0.0
                        : 2 * precision[c] * recall[c] / (precision[c] + recall[c]);
            macro_f1 += f1[c] / 5.0;
        }
    }
};

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("confusion_matrix: direct tally") {
    const auto cm = confusion_matrix(classes_of({0, 1, 1}), classes_of({0, 1, 0}));
    CHECK(cm.counts[0][0] == 1);
    CHECK(cm.counts[1][1] == 1);
    CHECK(cm.counts[0][1] == 1);
    CHECK(cm.n == 3);
    std::int64_t total = 0;
    for (const auto& row : cm.counts) {
        for (auto v : row) total += v;
    }
    CHECK(total == cm.n);
}

TEST_CASE("confusion_matrix: perfect predictions are diagonal") {
    const auto preds = classes_of({0, 1, 2, 3, 4, 2, 2});
    const auto cm = confusion_matrix(preds, preds);
    for (int t = 0; t < 5; ++t) {
        for (int p = 0; p < 5; ++p) {
            if (t != p) CHECK(cm.counts[t][p] == 0);
        }
    }
    CHECK(cm.counts[2][2] == 3);
}

TEST_CASE("confusion_matrix: errors") {
    CHECK_THROWS_AS(confusion_matrix(classes_of({0}), classes_of({0, 1})), LengthMismatch);
    CHECK_THROWS_AS(confusion_matrix({}, {}), EmptyInput);
}

TEST_CASE("summarize: perfect diagonal gives all ones") {
    const auto preds = classes_of({0, 1, 2, 3, 4});
    const auto report = summarize(confusion_matrix(preds, preds));
    for (int c = 0; c < 5; ++c) {
        CHECK(report.per_class[c].precision == 1.0);
        CHECK(report.per_class[c].recall == 1.0);
        CHECK(report.per_class[c].f1 == 1.0);
    }
    CHECK(report.macro_f1 == 1.0);
    CHECK(report.accuracy == 1.0);
}

TEST_CASE("summarize: zero-support class defaults to zero by the 0/0 rule") {
    // class 4 never appears in labels nor predictions
    const auto report =
        summarize(confusion_matrix(classes_of({0, 1, 2, 3}), classes_of({0, 1, 2, 3})));
    CHECK(report.per_class[4].f1 == 0.0);
    CHECK(report.per_class[4].recall == 0.0);
    CHECK(report.per_class[4].support == 0);
    CHECK(report.macro_f1 == doctest::Approx(0.8));
}

TEST_CASE("summarize: matches brute-force recounting over random trials") {
    Rng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Superclass> preds, labels;
        for (int i = 0; i < 200; ++i) {
            preds.push_back(static_cast<Superclass>(rng.below(5)));
            labels.push_back(static_cast<Superclass>(rng.below(5)));
        }
        const auto report = summarize(confusion_matrix(preds, labels));
        const BruteForce oracle(preds, labels);
        for (int c = 0; c < 5; ++c) {
            CHECK(std::abs(report.per_class[c].precision - oracle.precision[c]) < 1e-12);
            CHECK(std::abs(report.per_class[c].recall - oracle.recall[c]) < 1e-12);
            CHECK(std::abs(report.per_class[c].f1 - oracle.f1[c]) < 1e-12);
        }
        CHECK(std::abs(report.macro_f1 - oracle.macro_f1) < 1e-12);
        CHECK(std::abs(report.accuracy - oracle.accuracy) < 1e-12);
    }
}

TEST_CASE("summarize: micro consistency of accuracy") {
    Rng rng(103);
    std::vector<Superclass> preds, labels;
    for (int i = 0; i < 500; ++i) {
        preds.push_back(static_cast<Superclass>(rng.below(5)));
        labels.push_back(static_cast<Superclass>(rng.below(5)));
    }
    const auto report = summarize(confusion_matrix(preds, labels));
    int matches = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] == labels[i]) ++matches;
    }
    CHECK(report.accuracy == static_cast<double>(matches) / 500.0);
}

TEST_CASE("macro_f1 invariant under simultaneous class permutation") {
    Rng rng(104);
    std::vector<Superclass> preds, labels;
    for (int i = 0; i < 300; ++i) {
        preds.push_back(static_cast<Superclass>(rng.below(5)));
        labels.push_back(static_cast<Superclass>(rng.below(5)));
    }
    const double base = summarize(confusion_matrix(preds, labels)).macro_f1;
    const int perm[5] = {3, 0, 4, 1, 2};
    std::vector<Superclass> p2, l2;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        p2.push_back(static_cast<Superclass>(perm[static_cast<int>(preds[i])]));
        l2.push_back(static_cast<Superclass>(perm[static_cast<int>(labels[i])]));
    }
    CHECK(summarize(confusion_matrix(p2, l2)).macro_f1 == doctest::Approx(base).epsilon(1e-15));
}

TEST_CASE("aggregate_runs: two-point mean and population std") {
    MetricsReport a, b;
    a.macro_f1 = 0.7;
    b.macro_f1 = 0.8;
    const auto agg = aggregate_runs({a, b});
    CHECK(agg.n_runs == 2);
    CHECK(agg.stats.at("macro_f1").mean == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(agg.stats.at("macro_f1").std_dev == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("aggregate_runs: single report has zero std") {
    MetricsReport a;
    a.macro_f1 = 0.66;
    a.accuracy = 0.71;
    const auto agg = aggregate_runs({a});
    CHECK(agg.stats.at("macro_f1").std_dev == 0.0);
    CHECK(agg.stats.at("accuracy").std_dev == 0.0);
    CHECK(agg.n_runs == 1);
}

TEST_CASE("aggregate_runs: identical reports have zero std everywhere") {
    MetricsReport a;
    a.macro_f1 = 0.5;
    a.accuracy = 0.5;
    for (auto& m : a.per_class) m = {0.4, 0.3, 0.34, 10};
    const auto agg = aggregate_runs({a, a, a});
    for (const auto& [key, stat] : agg.stats) {
        INFO(key);
        CHECK(stat.std_dev == 0.0);
    }
}

TEST_CASE("aggregate_runs: bitwise permutation invariance") {
    Rng rng(105);
    std::vector<MetricsReport> reports(5);
    for (auto& r : reports) {
        r.macro_f1 = rng.uniform();
        r.accuracy = rng.uniform();
        for (auto& m : r.per_class) {
            m.precision = rng.uniform();
            m.recall = rng.uniform();
            m.f1 = rng.uniform();
        }
    }
    const auto a = aggregate_runs(reports);
    std::vector<MetricsReport> shuffled = {reports[4], reports[2], reports[0], reports[3],
                                           reports[1]};
    const auto b = aggregate_runs(shuffled);
    for (const auto& [key, stat] : a.stats) {
        CHECK(stat.mean == b.stats.at(key).mean);
        CHECK(stat.std_dev == b.stats.at(key).std_dev);
    }
    CHECK_THROWS_AS(aggregate_runs({}), EmptyInput);
}

namespace {

std::vector<std::pair<std::string, AggregateReport>> two_mode_table() {
    MetricsReport lo, hi;
    lo.macro_f1 = 0.60;
    lo.accuracy = 0.70;
    hi.macro_f1 = 0.72;
    hi.accuracy = 0.81;
    for (int c = 0; c < 5; ++c) {
        lo.per_class[c] = {0.5, 0.5, 0.5, 10};
        hi.per_class[c] = {0.7, 0.7, 0.7, 10};
    }
    return {{"ecg", aggregate_runs({lo})}, {"clic-dtt", aggregate_runs({hi})}};
}

}  // namespace

TEST_CASE("render_table: cell format m.mmm±s.sss") {
    MetricsReport r;
    r.macro_f1 = 0.75;
    MetricsReport r2 = r;
    r2.macro_f1 = 0.85;  // std 0.05
    const auto agg = aggregate_runs({r, r2});
    const auto text = render_table({{"ecg", agg}}, TableFormat::Csv);
    CHECK(text.find("0.800±0.050") != std::string::npos);
}

TEST_CASE("render_table: markdown bold best, underline second per column") {
    const auto text = render_table(two_mode_table(), TableFormat::Markdown);
    std::size_t bold = 0, underline = 0, pos = 0;
    while ((pos = text.find("**0.", pos)) != std::string::npos) {
        ++bold;
        pos += 3;
    }
    pos = 0;
    while ((pos = text.find("<u>", pos)) != std::string::npos) {
        ++underline;
        pos += 3;
    }
    // 12 columns: exactly one bold and one underline in each
    CHECK(bold == 12);
    CHECK(underline == 12);
    CHECK(text.find("| Model |") == 0);
}

TEST_CASE("render_table: json round-trips structurally") {
    const auto text = render_table(two_mode_table(), TableFormat::Json);
    const auto parsed = nlohmann::json::parse(text);
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].at("mode") == "ecg");
    CHECK(parsed[1].at("metrics").at("macro_f1").at("mean").get<double>() ==
          doctest::Approx(0.72).epsilon(1e-15));
    CHECK(nlohmann::json::parse(parsed.dump()) == parsed);
}

TEST_CASE("render_table: rendered cells parse back within 5e-4") {
    Rng rng(106);
    std::vector<MetricsReport> reports(3);
    for (auto& r : reports) {
        r.macro_f1 = rng.uniform();
        r.accuracy = rng.uniform();
        for (auto& m : r.per_class) {
            m.f1 = rng.uniform();
            m.recall = rng.uniform();
            m.precision = rng.uniform();
        }
    }
    const auto agg = aggregate_runs(reports);
    const auto text = render_table({{"m", agg}}, TableFormat::Csv);
    // second line holds the cells in a fixed column order
    const auto line = text.substr(text.find('\n') + 1);
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (start <= line.size()) {
        auto end = line.find(',', start);
        if (end == std::string::npos) end = line.find('\n', start);
        cells.push_back(line.substr(start, end - start));
        if (end == std::string::npos || line[end] == '\n') break;
        start = end + 1;
    }
    REQUIRE(cells.size() == 13);  // mode + 12 metric cells
    const char* keys[12] = {"NORM.f1", "NORM.recall", "MI.f1",   "MI.recall",
                            "STTC.f1", "STTC.recall", "CD.f1",   "CD.recall",
                            "HYP.f1",  "HYP.recall",  "macro_f1", "accuracy"};
    for (int i = 0; i < 12; ++i) {
        const auto& cell = cells[i + 1];
        const auto sep = cell.find("±");
        REQUIRE(sep != std::string::npos);
        const double mean = std::stod(cell.substr(0, sep));
        const double sd = std::stod(cell.substr(sep + 2));
        CHECK(std::abs(mean - agg.stats.at(keys[i]).mean) <= 5e-4);
        CHECK(std::abs(sd - agg.stats.at(keys[i]).std_dev) <= 5e-4);
    }
}

TEST_CASE("metrics json schema round trip") {
    MetricsReport r;
    r.macro_f1 = 0.704;
    r.accuracy = 0.8;
    r.n = 2198;
    for (int c = 0; c < 5; ++c) r.per_class[c] = {0.6 + c * 0.01, 0.5, 0.55, 100 + c};
    const auto text = metrics_report_json("clic-dtt", 3, r);
    const auto parsed = nlohmann::json::parse(text);
    CHECK(parsed.at("mode") == "clic-dtt");
    CHECK(parsed.at("seed") == 3);
    CHECK(parsed.at("per_class").at("NORM").at("precision").get<double>() ==
          doctest::Approx(0.6).epsilon(1e-15));

    const auto back = metrics_report_from_json(text);
    CHECK(back.macro_f1 == r.macro_f1);
    CHECK(back.accuracy == r.accuracy);
    for (int c = 0; c < 5; ++c) {
        CHECK(back.per_class[c].precision == r.per_class[c].precision);
        CHECK(back.per_class[c].support == r.per_class[c].support);
    }
}

TEST_CASE("export_embeddings_csv: shape, determinism, shared schema") {
    using namespace clic::model;
    using namespace clic::training;

    auto cfg = data::default_synth_config(50, 64, 12);
    const auto records = data::synthesize_dataset(cfg, 12);
    LoadedDataset ds;
    ds.n_leads = 12;
    ds.signal_len = 64;
    for (const auto& rec : records) {
        ds.ids.push_back(rec.ecg.id);
        ds.labels.push_back(rec.label);
        ds.folds.push_back(rec.meta.strat_fold);
        ds.metas.push_back(rec.meta);
        ds.signals.push_back(standardize_record(rec.ecg));
    }
    std::vector<int> idx(50);
    std::iota(idx.begin(), idx.end(), 0);

    ModelConfig mcfg;
    mcfg.mode = Mode::EcgOnly;
    mcfg.n_stages = 1;
    ClicNet net(mcfg);
    net.init(2);

    const auto csv = export_embeddings_csv(net, ds, idx, nullptr);
    // 51 lines: header + 50 rows
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 51);
    CHECK(csv.rfind("id,label,e0,", 0) == 0);
    const auto header = csv.substr(0, csv.find('\n'));
    CHECK(std::count(header.begin(), header.end(), ',') == 65);  // id + label + e0..e63
    CHECK(header.substr(header.size() - 4) == ",e63");

    CHECK(export_embeddings_csv(net, ds, idx, nullptr) == csv);  // deterministic

    ModelConfig dcfg;
    dcfg.mode = Mode::ClicDtT;
    dcfg.n_stages = 1;
    ClicNet dtt(dcfg);
    dtt.init(2);
    Mat ctx(50, 768);
    Rng rng(3);
    for (auto& v : ctx.v) v = rng.normal();
    const auto csv2 = export_embeddings_csv(dtt, ds, idx, &ctx);
    CHECK(csv2.substr(0, csv2.find('\n')) == header);  // same column schema across modes
}

TEST_SUITE_END();
