#include "clic/training/experiment.hpp"

#include <atomic>
#include <fstream>
#include <iostream>
#include <thread>

#include "clic/common/errors.hpp"
#include "clic/common/io.hpp"
#include "clic/model/checkpoint.hpp"

namespace clic::training {

namespace {

RunOutcome run_one(const ExperimentSpec& spec, std::uint64_t seed) {
    model::ModelConfig cfg = spec.model;
    cfg.seed = seed;
    model::ClicNet net(cfg);

    const std::filesystem::path run_dir =
        spec.out_dir / model::mode_name(cfg.mode) / std::to_string(seed);
    std::ofstream log;
    if (spec.persist) {
        std::filesystem::create_directories(run_dir);
        log.open(run_dir / "train.log", std::ios::trunc);
    }

    RunOutcome outcome;
    outcome.seed = seed;
    outcome.train = train_model(net, spec.train, *spec.data, spec.train_idx, spec.val_idx,
                                spec.context, seed, spec.persist ? &log : nullptr);

    const EvalResult test =
        evaluate(net, *spec.data, spec.test_idx, spec.context, spec.train.batch_size);
    std::vector<data::Superclass> labels;
    labels.reserve(spec.test_idx.size());
    for (int i : spec.test_idx) labels.push_back(spec.data->labels[i]);
    outcome.test_report = metrics::summarize(metrics::confusion_matrix(test.preds, labels));

    if (spec.persist) {
        model::save_checkpoint(net, spec.schema, run_dir / "checkpoint.bin");
        write_file(run_dir / "losses.csv", loss_curve_csv(outcome.train));
        write_file(run_dir / "metrics.json",
                   metrics::metrics_report_json(model::mode_name(cfg.mode), seed,
                                                outcome.test_report));
    }
    return outcome;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.train.validate();
    if (spec.data == nullptr) throw InvalidConfig("experiment needs a dataset");

    const auto& seeds = spec.train.seeds;
    ExperimentResult result;
    result.runs.resize(seeds.size());

    const int jobs = std::max(1, std::min<int>(spec.jobs, static_cast<int>(seeds.size())));
    if (jobs == 1) {
        for (std::size_t i = 0; i < seeds.size(); ++i) result.runs[i] = run_one(spec, seeds[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> errors(seeds.size());
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < seeds.size(); i = next.fetch_add(1)) {
                    try {
                        result.runs[i] = run_one(spec, seeds[i]);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : workers) t.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    std::vector<metrics::MetricsReport> reports;
    reports.reserve(result.runs.size());
    for (const auto& run : result.runs) reports.push_back(run.test_report);
    result.aggregate = metrics::aggregate_runs(reports);
    return result;
}

}  // namespace clic::training
