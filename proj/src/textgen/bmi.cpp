#include "clic/textgen/bmi.hpp"

#include "clic/common/errors.hpp"

namespace clic::textgen {

std::optional<double> compute_bmi(std::optional<double> weight_kg,
                                  std::optional<double> height_cm) {
    if (!weight_kg.has_value() || !height_cm.has_value()) return std::nullopt;
    if (*weight_kg <= 0) throw NonPositiveDimension("weight must be positive, got " +
                                                    std::to_string(*weight_kg));
    if (*height_cm <= 0) throw NonPositiveDimension("height must be positive, got " +
                                                    std::to_string(*height_cm));
    const double h_m = *height_cm / 100.0;
    return *weight_kg / (h_m * h_m);
}

BmiCategory bmi_category(double bmi) {
    if (bmi <= 0) throw NonPositiveDimension("bmi must be positive");
    if (bmi < 18.5) return BmiCategory::Underweight;
    if (bmi < 25.0) return BmiCategory::NormalWeight;
    if (bmi < 30.0) return BmiCategory::Overweight;
    return BmiCategory::Obese;
}

const char* bmi_category_name(BmiCategory c) {
    switch (c) {
        case BmiCategory::Underweight: return "underweight";
        case BmiCategory::NormalWeight: return "normal weight";
        case BmiCategory::Overweight: return "overweight";
        default: return "obese";
    }
}

}  // namespace clic::textgen
