#include "clic/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "clic/common/errors.hpp"
#include "clic/common/io.hpp"

namespace clic::metrics {

ConfusionMatrix confusion_matrix(const std::vector<data::Superclass>& preds,
                                 const std::vector<data::Superclass>& labels) {
    if (preds.size() != labels.size()) {
        throw LengthMismatch("preds size " + std::to_string(preds.size()) + ", labels size " +
                             std::to_string(labels.size()));
    }
    if (preds.empty()) throw EmptyInput("confusion matrix over empty input");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        ++cm.counts[static_cast<int>(labels[i])][static_cast<int>(preds[i])];
    }
    cm.n = static_cast<std::int64_t>(preds.size());
    return cm;
}

namespace {

double ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) return 0.0;  // 0/0 convention
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricsReport summarize(const ConfusionMatrix& cm) {
    if (cm.n <= 0) throw EmptyInput("confusion matrix is empty");
    MetricsReport report;
    report.n = cm.n;

    std::int64_t trace = 0;
    for (int c = 0; c < data::kNumClasses; ++c) {
        const std::int64_t tp = cm.counts[c][c];
        std::int64_t fp = 0, fn = 0;
        for (int o = 0; o < data::kNumClasses; ++o) {
            if (o == c) continue;
            fp += cm.counts[o][c];
            fn += cm.counts[c][o];
        }
        ClassMetrics m;
        m.support = tp + fn;
        m.precision = ratio(tp, tp + fp);
        m.recall = ratio(tp, tp + fn);
        m.f1 = (m.precision + m.recall == 0.0)
                   ? 0.0
                   : 2.0 * m.precision * m.recall / (m.precision + m.recall);
        if (m.support == 0) {
            log_warning(std::string("class ") + data::class_name(static_cast<data::Superclass>(c)) +
                        " has zero support; its metrics default to 0");
        }
        report.per_class[c] = m;
        report.macro_f1 += m.f1;
        trace += tp;
    }
    report.macro_f1 /= data::kNumClasses;
    report.accuracy = static_cast<double>(trace) / static_cast<double>(cm.n);
    return report;
}

namespace {

std::vector<std::pair<std::string, double>> flatten(const MetricsReport& r) {
    std::vector<std::pair<std::string, double>> out;
    for (int c = 0; c < data::kNumClasses; ++c) {
        const std::string base = data::class_name(static_cast<data::Superclass>(c));
        out.emplace_back(base + ".precision", r.per_class[c].precision);
        out.emplace_back(base + ".recall", r.per_class[c].recall);
        out.emplace_back(base + ".f1", r.per_class[c].f1);
    }
    out.emplace_back("macro_f1", r.macro_f1);
    out.emplace_back("accuracy", r.accuracy);
    return out;
}

// summed over sorted values so aggregation is exactly permutation-invariant;
// all-equal inputs short-circuit so their std is exactly zero
AggregateStat stat_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    if (values.front() == values.back()) return AggregateStat{values.front(), 0.0};
    const double n = static_cast<double>(values.size());
    double sum = 0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    double sq = 0;
    for (double v : values) sq += (v - mean) * (v - mean);
    return AggregateStat{mean, std::sqrt(sq / n)};
}

}  // namespace

AggregateReport aggregate_runs(const std::vector<MetricsReport>& reports) {
    if (reports.empty()) throw EmptyInput("no reports to aggregate");
    AggregateReport agg;
    agg.n_runs = static_cast<int>(reports.size());
    std::map<std::string, std::vector<double>> columns;
    for (const auto& r : reports) {
        for (const auto& [key, value] : flatten(r)) columns[key].push_back(value);
    }
    for (auto& [key, values] : columns) agg.stats[key] = stat_of(std::move(values));
    return agg;
}

namespace {

std::string cell(const AggregateStat& s) {
    return format_fixed(s.mean, 3) + "±" + format_fixed(s.std_dev, 3);
}

std::vector<std::string> table_columns() {
    std::vector<std::string> cols;
    for (int c = 0; c < data::kNumClasses; ++c) {
        const std::string base = data::class_name(static_cast<data::Superclass>(c));
        cols.push_back(base + ".f1");
        cols.push_back(base + ".recall");
    }
    cols.push_back("macro_f1");
    cols.push_back("accuracy");
    return cols;
}

std::string column_label(const std::string& key) {
    if (key == "macro_f1") return "Macro-F1";
    if (key == "accuracy") return "Accuracy";
    const auto dot = key.find('.');
    std::string label = key.substr(0, dot);
    label += key.substr(dot) == ".f1" ? " F1" : " Recall";
    return label;
}

}  // namespace

std::string render_table(const std::vector<std::pair<std::string, AggregateReport>>& table,
                         TableFormat format) {
    if (table.empty()) throw EmptyInput("no rows to render");
    const auto cols = table_columns();

    if (format == TableFormat::Json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& [mode, agg] : table) {
            nlohmann::json row;
            row["mode"] = mode;
            row["n_runs"] = agg.n_runs;
            for (const auto& [key, stat] : agg.stats) {
                row["metrics"][key] = {{"mean", stat.mean}, {"std", stat.std_dev}};
            }
            j.push_back(row);
        }
        return j.dump(2) + "\n";
    }

    // best and second-best mean per column
    std::vector<int> best(cols.size(), -1), second(cols.size(), -1);
    for (std::size_t c = 0; c < cols.size(); ++c) {
        for (std::size_t r = 0; r < table.size(); ++r) {
            const auto it = table[r].second.stats.find(cols[c]);
            if (it == table[r].second.stats.end()) continue;
            const double mean = it->second.mean;
            auto mean_of = [&](int row) { return table[row].second.stats.at(cols[c]).mean; };
            if (best[c] < 0 || mean > mean_of(best[c])) {
                second[c] = best[c];
                best[c] = static_cast<int>(r);
            } else if (second[c] < 0 || mean > mean_of(second[c])) {
                second[c] = static_cast<int>(r);
            }
        }
    }

    std::ostringstream out;
    const char* sep = format == TableFormat::Csv ? "," : " | ";
    if (format == TableFormat::Markdown) out << "| ";
    out << "Model";
    for (const auto& c : cols) out << sep << column_label(c);
    if (format == TableFormat::Markdown) {
        out << " |\n|---";
        for (std::size_t c = 0; c < cols.size(); ++c) out << "|---";
        out << "|";
    }
    out << '\n';

    for (std::size_t r = 0; r < table.size(); ++r) {
        if (format == TableFormat::Markdown) out << "| ";
        out << table[r].first;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const auto it = table[r].second.stats.find(cols[c]);
            std::string text = it == table[r].second.stats.end() ? "-" : cell(it->second);
            if (format == TableFormat::Markdown) {
                if (static_cast<int>(r) == best[c]) text = "**" + text + "**";
                else if (static_cast<int>(r) == second[c]) text = "<u>" + text + "</u>";
            }
            out << sep << text;
        }
        if (format == TableFormat::Markdown) out << " |";
        out << '\n';
    }
    return out.str();
}

std::string metrics_report_json(const std::string& mode, std::optional<std::uint64_t> seed,
                                const MetricsReport& report) {
    nlohmann::json j;
    j["mode"] = mode;
    if (seed.has_value()) j["seed"] = *seed;
    for (int c = 0; c < data::kNumClasses; ++c) {
        const auto& m = report.per_class[c];
        j["per_class"][data::class_name(static_cast<data::Superclass>(c))] = {
            {"f1", m.f1}, {"recall", m.recall}, {"precision", m.precision}, {"support", m.support}};
    }
    j["macro_f1"] = report.macro_f1;
    j["accuracy"] = report.accuracy;
    j["n"] = report.n;
    j["std_estimator"] = "population";
    return j.dump(2) + "\n";
}

MetricsReport metrics_report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("metrics json: ") + e.what());
    }
    MetricsReport report;
    for (int c = 0; c < data::kNumClasses; ++c) {
        const auto& m = j.at("per_class").at(data::class_name(static_cast<data::Superclass>(c)));
        report.per_class[c].f1 = m.at("f1").get<double>();
        report.per_class[c].recall = m.at("recall").get<double>();
        report.per_class[c].precision = m.at("precision").get<double>();
        report.per_class[c].support = m.at("support").get<std::int64_t>();
    }
    report.macro_f1 = j.at("macro_f1").get<double>();
    report.accuracy = j.at("accuracy").get<double>();
    report.n = j.value("n", static_cast<std::int64_t>(0));
    return report;
}

}  // namespace clic::metrics
