#pragma once

#include <filesystem>

#include "clic/metrics/metrics.hpp"
#include "clic/model/attr.hpp"
#include "clic/training/trainer.hpp"

namespace clic::training {

struct ExperimentSpec {
    model::ModelConfig model;
    TrainConfig train;
    const LoadedDataset* data = nullptr;
    std::vector<int> train_idx, val_idx, test_idx;
    const model::Mat* context = nullptr;  // aligned with dataset records
    model::AttrSchema schema;             // persisted into checkpoints
    std::filesystem::path out_dir;        // runs land in out_dir/{mode}/{seed}/
    int jobs = 1;
    bool persist = true;
};

struct RunOutcome {
    std::uint64_t seed = 0;
    TrainResult train;
    metrics::MetricsReport test_report;
};

struct ExperimentResult {
    std::vector<RunOutcome> runs;           // one per seed, in seed order
    metrics::AggregateReport aggregate;
};

// One independent training run per seed (optionally in parallel), each
// evaluated on the test split; reports aggregated as mean +- population std.
ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace clic::training
