#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "clic/data/ptbxl.hpp"
#include "clic/model/network.hpp"

namespace clic::training {

struct TrainConfig {
    double lr = 1e-3;
    int batch_size = 16;
    int max_epochs = 1000;
    int patience = 50;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};

    void validate() const;
};

// Decoded, standardized dataset held in memory; signals float32, converted to
// double at batch assembly.
struct LoadedDataset {
    int n_leads = 0;
    int signal_len = 0;
    std::vector<std::string> ids;
    std::vector<data::Superclass> labels;
    std::vector<int> folds;
    std::vector<data::PatientMeta> metas;
    std::vector<std::vector<float>> signals;

    int size() const { return static_cast<int>(ids.size()); }
    std::vector<int> indices_for_fold_range(int lo, int hi) const;  // inclusive
};

LoadedDataset load_dataset(const std::filesystem::path& data_root,
                           const std::vector<data::ManifestRecord>& manifest);

// Train batches: seeded permutation, reshuffled each epoch from the same
// stream. Validation/test: identity order, fixed across epochs.
std::vector<std::vector<int>> epoch_batches(int n, int batch_size, bool shuffle, Rng* rng);

struct Batch {
    model::Batch3 signals;
    model::Mat context;   // rows == batch when context_dim > 0
    model::Mat targets;   // one-hot [B x 5]
    std::vector<int> record_idx;
};

// context: optional [dataset.size() x ctx_dim] matrix aligned with record
// indices.
Batch assemble_batch(const LoadedDataset& data, const std::vector<int>& idx,
                     const model::Mat* context);

struct EvalResult {
    double loss = 0;
    std::vector<data::Superclass> preds;
    model::Mat logits;
    model::Mat penultimate;
};

// Eval mode, unshuffled; no parameter or batch-norm side effects.
EvalResult evaluate(model::ClicNet& net, const LoadedDataset& data, const std::vector<int>& idx,
                    const model::Mat* context, int batch_size);

// Forward + loss + reverse pass in train mode; gradients are left in the
// parameter refs.
double loss_and_grad(model::ClicNet& net, const Batch& batch);

struct TrainResult {
    std::uint64_t seed = 0;
    int best_epoch = 0;
    int stopped_epoch = 0;
    std::vector<std::array<double, 2>> loss_curve;  // (train, val) per epoch
};

// Epoch loop with early stopping on validation loss; the network holds the
// best checkpoint's tensors on return.
TrainResult train_model(model::ClicNet& net, const TrainConfig& cfg, const LoadedDataset& data,
                        const std::vector<int>& train_idx, const std::vector<int>& val_idx,
                        const model::Mat* context, std::uint64_t seed, std::ostream* log);

std::string loss_curve_csv(const TrainResult& result);

}  // namespace clic::training
