#pragma once

#include <optional>
#include <string>

namespace clic::textgen {

// weight in kg, height in cm; absent when either input is absent. Present but
// non-positive values throw NonPositiveDimension.
std::optional<double> compute_bmi(std::optional<double> weight_kg,
                                  std::optional<double> height_cm);

enum class BmiCategory { Underweight, NormalWeight, Overweight, Obese };

// WHO adult cutoffs 18.5 / 25 / 30, left-closed intervals.
BmiCategory bmi_category(double bmi);
const char* bmi_category_name(BmiCategory c);

}  // namespace clic::textgen
