#include "clic/data/split.hpp"

#include "clic/common/errors.hpp"

namespace clic::data {

DatasetSplit build_split(const std::vector<std::pair<std::string, int>>& records) {
    DatasetSplit split;
    for (const auto& [id, fold] : records) {
        if (fold < 1 || fold > 10) {
            throw InvalidFold("strat_fold " + std::to_string(fold) + " for record " + id);
        }
        if (fold <= 8) split.train.push_back(id);
        else if (fold == 9) split.val.push_back(id);
        else split.test.push_back(id);
    }
    return split;
}

}  // namespace clic::data
