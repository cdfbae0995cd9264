#include "clic/training/loss.hpp"

#include <cmath>

#include "clic/common/errors.hpp"

namespace clic::training {

namespace {

void validate(const model::Mat& logits, const model::Mat& targets) {
    if (logits.rows != targets.rows || logits.cols != targets.cols) {
        throw ShapeMismatch("logits and targets disagree in shape");
    }
    if (logits.rows == 0 || logits.cols == 0) throw EmptyInput("empty loss input");
    for (double z : logits.v) {
        if (!std::isfinite(z)) throw NonFiniteInput("non-finite logit");
    }
    for (int r = 0; r < targets.rows; ++r) {
        int ones = 0;
        for (int c = 0; c < targets.cols; ++c) {
            const double y = targets.at(r, c);
            if (y != 0.0 && y != 1.0) throw InvalidInput("targets must be 0/1");
            if (y == 1.0) ++ones;
        }
        if (ones != 1) throw InvalidInput("targets must be one-hot rows");
    }
}

}  // namespace

double bce_with_logits(const model::Mat& logits, const model::Mat& targets) {
    validate(logits, targets);
    double sum = 0;
    for (std::size_t i = 0; i < logits.v.size(); ++i) {
        const double z = logits.v[i];
        const double y = targets.v[i];
        sum += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
    }
    return sum / static_cast<double>(logits.v.size());
}

model::Mat bce_with_logits_grad(const model::Mat& logits, const model::Mat& targets) {
    validate(logits, targets);
    model::Mat g(logits.rows, logits.cols);
    const double scale = 1.0 / static_cast<double>(logits.v.size());
    for (std::size_t i = 0; i < logits.v.size(); ++i) {
        const double z = logits.v[i];
        const double sig = z >= 0 ? 1.0 / (1.0 + std::exp(-z))
                                  : std::exp(z) / (1.0 + std::exp(z));
        g.v[i] = (sig - targets.v[i]) * scale;
    }
    return g;
}

}  // namespace clic::training
