#include "clic/training/trainer.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "clic/common/errors.hpp"
#include "clic/common/io.hpp"
#include "clic/data/wfdb.hpp"
#include "clic/model/preprocess.hpp"
#include "clic/training/adam.hpp"
#include "clic/training/early_stopping.hpp"
#include "clic/training/loss.hpp"

namespace clic::training {

void TrainConfig::validate() const {
    if (batch_size < 1) throw InvalidConfig("batch_size must be >= 1");
    if (patience >= max_epochs) throw InvalidConfig("patience must be < max_epochs");
    if (lr <= 0) throw InvalidConfig("lr must be positive");
    if (seeds.empty()) throw InvalidConfig("at least one seed required");
}

std::vector<int> LoadedDataset::indices_for_fold_range(int lo, int hi) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i) {
        if (folds[i] >= lo && folds[i] <= hi) out.push_back(i);
    }
    return out;
}

LoadedDataset load_dataset(const std::filesystem::path& data_root,
                           const std::vector<data::ManifestRecord>& manifest) {
    LoadedDataset out;
    for (const auto& rec : manifest) {
        auto [spec, ecg] = data::read_record(data_root / (rec.signal_path + ".hea"));
        if (out.n_leads == 0) {
            out.n_leads = ecg.n_leads;
            out.signal_len = ecg.n_samples;
        } else if (ecg.n_leads != out.n_leads || ecg.n_samples != out.signal_len) {
            throw ShapeMismatch("record " + rec.id + " shape differs from the rest of the dataset");
        }
        out.ids.push_back(rec.id);
        out.labels.push_back(rec.label);
        out.folds.push_back(rec.meta.strat_fold);
        out.metas.push_back(rec.meta);
        out.signals.push_back(model::standardize_record(ecg));
    }
    return out;
}

std::vector<std::vector<int>> epoch_batches(int n, int batch_size, bool shuffle, Rng* rng) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (shuffle) {
        if (rng == nullptr) throw InvalidConfig("shuffled batches need an rng");
        rng->shuffle(order);
    }
    std::vector<std::vector<int>> batches;
    for (int start = 0; start < n; start += batch_size) {
        const int end = std::min(n, start + batch_size);
        batches.emplace_back(order.begin() + start, order.begin() + end);
    }
    return batches;
}

Batch assemble_batch(const LoadedDataset& data, const std::vector<int>& idx,
                     const model::Mat* context) {
    const int b = static_cast<int>(idx.size());
    Batch batch;
    batch.record_idx = idx;
    batch.signals = model::Batch3(b, data.n_leads, data.signal_len);
    batch.targets = model::Mat(b, data::kNumClasses);
    if (context != nullptr) batch.context = model::Mat(b, context->cols);

    for (int i = 0; i < b; ++i) {
        const int r = idx[i];
        const std::vector<float>& sig = data.signals[r];
        double* dst = batch.signals.lane(i, 0);
        for (std::size_t j = 0; j < sig.size(); ++j) dst[j] = sig[j];
        batch.targets.at(i, static_cast<int>(data.labels[r])) = 1.0;
        if (context != nullptr) {
            const double* src = context->row(r);
            std::copy(src, src + context->cols, batch.context.row(i));
        }
    }
    return batch;
}

double loss_and_grad(model::ClicNet& net, const Batch& batch) {
    net.zero_grad();
    const model::Mat* ctx = batch.context.rows > 0 ? &batch.context : nullptr;
    const model::Mat logits = net.forward(batch.signals, ctx, /*train=*/true);
    const double loss = bce_with_logits(logits, batch.targets);
    net.backward(bce_with_logits_grad(logits, batch.targets));
    return loss;
}

EvalResult evaluate(model::ClicNet& net, const LoadedDataset& data, const std::vector<int>& idx,
                    const model::Mat* context, int batch_size) {
    if (idx.empty()) throw EmptySplit("cannot evaluate an empty split");
    EvalResult out;
    out.logits = model::Mat(static_cast<int>(idx.size()), data::kNumClasses);
    const int pen_dim = net.config().head_dims[1];
    out.penultimate = model::Mat(static_cast<int>(idx.size()), pen_dim);

    double loss_sum = 0;
    int row = 0;
    for (const auto& bidx : epoch_batches(static_cast<int>(idx.size()), batch_size, false, nullptr)) {
        std::vector<int> records;
        records.reserve(bidx.size());
        for (int i : bidx) records.push_back(idx[i]);
        const Batch batch = assemble_batch(data, records, context);
        const model::Mat* ctx = batch.context.rows > 0 ? &batch.context : nullptr;
        const model::Mat logits = net.forward(batch.signals, ctx, /*train=*/false);
        loss_sum += bce_with_logits(logits, batch.targets) * static_cast<double>(bidx.size());
        const model::Mat& pen = net.penultimate();
        for (int i = 0; i < logits.rows; ++i, ++row) {
            std::copy(logits.row(i), logits.row(i) + logits.cols, out.logits.row(row));
            std::copy(pen.row(i), pen.row(i) + pen_dim, out.penultimate.row(row));
            out.preds.push_back(static_cast<data::Superclass>(
                model::predict(logits.row(i), logits.cols)));
        }
    }
    out.loss = loss_sum / static_cast<double>(idx.size());
    return out;
}

namespace {

struct Snapshot {
    std::vector<std::vector<double>> tensors;

    static Snapshot take(model::ClicNet& net) {
        Snapshot s;
        for (const auto& t : net.all_tensors()) s.tensors.push_back(*t.value);
        return s;
    }
    void restore(model::ClicNet& net) const {
        auto refs = net.all_tensors();
        for (std::size_t i = 0; i < refs.size(); ++i) *refs[i].value = tensors[i];
    }
};

}  // namespace

TrainResult train_model(model::ClicNet& net, const TrainConfig& cfg, const LoadedDataset& data,
                        const std::vector<int>& train_idx, const std::vector<int>& val_idx,
                        const model::Mat* context, std::uint64_t seed, std::ostream* log) {
    cfg.validate();
    if (train_idx.empty() || val_idx.empty()) throw EmptySplit("train and val must be nonempty");

    net.init(seed);
    Adam optimizer(net.parameters(), AdamConfig{cfg.lr, cfg.beta1, cfg.beta2, cfg.eps});
    Rng shuffle_rng(seed ^ 0x9E3779B97F4A7C15ULL);

    TrainResult result;
    result.seed = seed;
    EarlyStopState state;
    Snapshot best = Snapshot::take(net);

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        double train_loss_sum = 0;
        for (const auto& bidx :
             epoch_batches(static_cast<int>(train_idx.size()), cfg.batch_size, true, &shuffle_rng)) {
            std::vector<int> records;
            records.reserve(bidx.size());
            for (int i : bidx) records.push_back(train_idx[i]);
            const Batch batch = assemble_batch(data, records, context);
            train_loss_sum += loss_and_grad(net, batch) * static_cast<double>(bidx.size());
            optimizer.step();
        }
        const double train_loss = train_loss_sum / static_cast<double>(train_idx.size());
        const double val_loss = evaluate(net, data, val_idx, context, cfg.batch_size).loss;
        result.loss_curve.push_back({train_loss, val_loss});
        result.stopped_epoch = epoch;

        const StopDecision decision = early_stop_update(state, val_loss, epoch, cfg.patience);
        if (state.best_epoch == epoch) best = Snapshot::take(net);
        if (log != nullptr) {
            (*log) << "epoch " << epoch << " train_loss " << train_loss << " val_loss " << val_loss
                   << " patience " << state.epochs_since_improvement << '/' << cfg.patience
                   << '\n';
        }
        if (decision == StopDecision::Stop) break;
    }

    result.best_epoch = state.best_epoch;
    best.restore(net);
    return result;
}

std::string loss_curve_csv(const TrainResult& result) {
    std::ostringstream out;
    out << "epoch,train_loss,val_loss\n";
    out.precision(17);
    for (std::size_t i = 0; i < result.loss_curve.size(); ++i) {
        out << (i + 1) << ',' << result.loss_curve[i][0] << ',' << result.loss_curve[i][1] << '\n';
    }
    return out.str();
}

}  // namespace clic::training
