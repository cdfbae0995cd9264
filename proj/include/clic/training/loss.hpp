#pragma once

#include "clic/model/nn.hpp"

namespace clic::training {

// Elementwise binary cross-entropy over unnormalized logits, averaged over
// all B*K elements; targets are one-hot rows. Stable form:
//   max(z, 0) - z*y + log(1 + exp(-|z|))
double bce_with_logits(const model::Mat& logits, const model::Mat& targets);

// d loss / d z = (sigmoid(z) - y) / (B*K)
model::Mat bce_with_logits_grad(const model::Mat& logits, const model::Mat& targets);

}  // namespace clic::training
