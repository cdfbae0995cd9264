#pragma once

#include <string>
#include <utility>
#include <vector>

#include "clic/data/types.hpp"

namespace clic::data {

// Folds 1-8 train, 9 validation, 10 test.
DatasetSplit build_split(const std::vector<std::pair<std::string, int>>& records);

}  // namespace clic::data
