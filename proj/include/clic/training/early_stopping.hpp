#pragma once

#include <limits>

namespace clic::training {

struct EarlyStopState {
    double best_val_loss = std::numeric_limits<double>::infinity();
    int best_epoch = 0;
    int epochs_since_improvement = 0;
};

enum class StopDecision { Continue, Stop };

// Strict improvement (new < best) resets the counter; the caller snapshots the
// checkpoint when state.best_epoch == epoch afterwards. Stops when the counter
// reaches patience.
StopDecision early_stop_update(EarlyStopState& state, double val_loss, int epoch, int patience);

}  // namespace clic::training
