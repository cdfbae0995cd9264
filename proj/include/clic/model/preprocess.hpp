#pragma once

#include <vector>

#include "clic/data/types.hpp"

namespace clic::model {

inline constexpr double kVarianceFloor = 1e-8;

// Per-record, per-lead standardization to zero mean and unit variance with a
// variance floor. Returns [lead * n_samples + t] in float32 for compact
// in-memory datasets.
std::vector<float> standardize_record(const data::EcgRecord& record);

}  // namespace clic::model
