#include "clic/training/early_stopping.hpp"

#include <cmath>

#include "clic/common/errors.hpp"

namespace clic::training {

StopDecision early_stop_update(EarlyStopState& state, double val_loss, int epoch, int patience) {
    if (!std::isfinite(val_loss)) throw NonFiniteInput("validation loss is not finite");
    if (val_loss < state.best_val_loss) {
        state.best_val_loss = val_loss;
        state.best_epoch = epoch;
        state.epochs_since_improvement = 0;
        return StopDecision::Continue;
    }
    ++state.epochs_since_improvement;
    return state.epochs_since_improvement >= patience ? StopDecision::Stop
                                                      : StopDecision::Continue;
}

}  // namespace clic::training
