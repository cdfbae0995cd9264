#include "clic/model/preprocess.hpp"

#include <cmath>

namespace clic::model {

std::vector<float> standardize_record(const data::EcgRecord& record) {
    std::vector<float> out(record.samples.size());
    const int L = record.n_samples;
    for (int lead = 0; lead < record.n_leads; ++lead) {
        const double* src = record.samples.data() + static_cast<std::size_t>(lead) * L;
        double mean = 0;
        for (int t = 0; t < L; ++t) mean += src[t];
        mean /= L;
        double var = 0;
        for (int t = 0; t < L; ++t) {
            const double d = src[t] - mean;
            var += d * d;
        }
        var /= L;
        const double inv = 1.0 / std::sqrt(std::max(var, kVarianceFloor));
        float* dst = out.data() + static_cast<std::size_t>(lead) * L;
        for (int t = 0; t < L; ++t) dst[t] = static_cast<float>((src[t] - mean) * inv);
    }
    return out;
}

}  // namespace clic::model
