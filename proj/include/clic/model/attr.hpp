#pragma once

#include <string>
#include <vector>

#include "clic/data/types.hpp"

namespace clic::model {

// Numeric attribute layout:
//   [age/100, age-missing, sex male, sex female, bmi/50, bmi-missing,
//    device one-hot, rhythm multi-hot, form multi-hot]
// Vocabularies are fit on the training split only; unseen categories map to
// all-zero blocks.
struct AttrSchema {
    std::vector<std::string> device_vocab;
    std::vector<std::string> rhythm_vocab;
    std::vector<std::string> form_vocab;

    int dim() const {
        return 6 + static_cast<int>(device_vocab.size() + rhythm_vocab.size() + form_vocab.size());
    }

    bool operator==(const AttrSchema&) const = default;
};

AttrSchema build_attr_schema(const std::vector<data::PatientMeta>& train_metas);

std::vector<double> vectorize_attributes(const data::PatientMeta& meta, const AttrSchema& schema);

}  // namespace clic::model
