#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clic/data/types.hpp"

namespace clic::metrics {

struct ConfusionMatrix {
    std::array<std::array<std::int64_t, data::kNumClasses>, data::kNumClasses> counts{};
    std::int64_t n = 0;
};

ConfusionMatrix confusion_matrix(const std::vector<data::Superclass>& preds,
                                 const std::vector<data::Superclass>& labels);

struct ClassMetrics {
    double precision = 0;
    double recall = 0;
    double f1 = 0;
    std::int64_t support = 0;
};

struct MetricsReport {
    std::array<ClassMetrics, data::kNumClasses> per_class{};
    double macro_f1 = 0;
    double accuracy = 0;
    std::int64_t n = 0;
};

// precision = TP/(TP+FP), recall = TP/(TP+FN), F1 = 2PR/(P+R); 0/0 is defined
// as 0. macro-F1 is the unweighted mean of class F1, accuracy is trace/n.
MetricsReport summarize(const ConfusionMatrix& cm);

struct AggregateStat {
    double mean = 0;
    double std_dev = 0;  // population (divide by n)
};

struct AggregateReport {
    std::map<std::string, AggregateStat> stats;  // "NORM.f1", ..., "macro_f1", "accuracy"
    int n_runs = 0;
};

AggregateReport aggregate_runs(const std::vector<MetricsReport>& reports);

enum class TableFormat { Markdown, Csv, Json };

// One row per mode: class-wise F1/recall, then macro-F1 and accuracy, cells
// rendered "m.mmm±s.sss". Markdown bolds the best mean per column and
// underlines the second best.
std::string render_table(const std::vector<std::pair<std::string, AggregateReport>>& table,
                         TableFormat format);

std::string metrics_report_json(const std::string& mode, std::optional<std::uint64_t> seed,
                                const MetricsReport& report);
MetricsReport metrics_report_from_json(const std::string& text);

}  // namespace clic::metrics
