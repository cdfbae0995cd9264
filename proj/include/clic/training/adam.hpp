#pragma once

#include <cstdint>
#include <vector>

#include "clic/model/nn.hpp"

namespace clic::training {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Standard Adam with bias correction and no weight decay. Parameters are
// updated through the refs; moments live here.
class Adam {
public:
    Adam(std::vector<model::ParamRef> params, AdamConfig cfg);

    void step();
    std::int64_t t() const { return t_; }

private:
    std::vector<model::ParamRef> params_;
    AdamConfig cfg_;
    std::vector<std::vector<double>> m_, v_;
    std::int64_t t_ = 0;
};

}  // namespace clic::training
