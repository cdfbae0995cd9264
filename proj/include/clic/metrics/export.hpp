#pragma once

#include <string>
#include <vector>

#include "clic/training/trainer.hpp"

namespace clic::metrics {

// Penultimate-layer activations for external projection tools: CSV with
// header id,label,e0..e{d-1}, one row per record in split order.
std::string export_embeddings_csv(model::ClicNet& net, const training::LoadedDataset& data,
                                  const std::vector<int>& idx, const model::Mat* context,
                                  int batch_size = 16);

}  // namespace clic::metrics
