#include "clic/model/attr.hpp"

#include <algorithm>
#include <set>

#include "clic/textgen/bmi.hpp"

namespace clic::model {

AttrSchema build_attr_schema(const std::vector<data::PatientMeta>& train_metas) {
    std::set<std::string> devices, rhythms, forms;
    for (const auto& meta : train_metas) {
        if (meta.device.has_value() && !meta.device->empty()) devices.insert(*meta.device);
        rhythms.insert(meta.rhythm_codes.begin(), meta.rhythm_codes.end());
        forms.insert(meta.form_codes.begin(), meta.form_codes.end());
    }
    AttrSchema schema;
    schema.device_vocab.assign(devices.begin(), devices.end());
    schema.rhythm_vocab.assign(rhythms.begin(), rhythms.end());
    schema.form_vocab.assign(forms.begin(), forms.end());
    return schema;
}

namespace {

void one_hot(std::vector<double>& out, std::size_t base, const std::vector<std::string>& vocab,
             const std::string& value) {
    const auto it = std::lower_bound(vocab.begin(), vocab.end(), value);
    if (it != vocab.end() && *it == value) out[base + (it - vocab.begin())] = 1.0;
}

}  // namespace

std::vector<double> vectorize_attributes(const data::PatientMeta& meta, const AttrSchema& schema) {
    std::vector<double> v(schema.dim(), 0.0);
    if (meta.age.has_value()) v[0] = *meta.age / 100.0;
    else v[1] = 1.0;
    if (meta.sex == data::Sex::Male) v[2] = 1.0;
    else if (meta.sex == data::Sex::Female) v[3] = 1.0;

    const auto bmi = textgen::compute_bmi(meta.weight, meta.height);
    if (bmi.has_value()) v[4] = *bmi / 50.0;
    else v[5] = 1.0;

    std::size_t base = 6;
    if (meta.device.has_value()) one_hot(v, base, schema.device_vocab, *meta.device);
    base += schema.device_vocab.size();
    for (const auto& code : meta.rhythm_codes) one_hot(v, base, schema.rhythm_vocab, code);
    base += schema.rhythm_vocab.size();
    for (const auto& code : meta.form_codes) one_hot(v, base, schema.form_vocab, code);
    return v;
}

}  // namespace clic::model
