#pragma once

#include <string_view>

namespace ecsafe::data {

/// Contents of data/class_polynomials.txt at build time.
extern const std::string_view kClassPolynomials;
/// Contents of data/standard_curves.txt at build time.
extern const std::string_view kStandardCurves;

}  // namespace ecsafe::data
