#pragma once

#include <cmath>
#include <stdexcept>

namespace taox {

/// A device counts as driven to compliance once |I| reaches this fraction of
/// the limit; forming detection and the step reports share the convention.
inline constexpr double kComplianceDetectionFraction = 0.95;

/// Series current-limiting layer. Its conductivity follows the base value
/// until the field across it reaches max_field(), beyond which it is reduced
/// so the layer passes exactly i_cc. Dimensions are taken from the geometry.
struct ComplianceConfig {
    double i_cc = 5e-4;        // A
    double sigma_base = 1e5;   // S/m, used below threshold and whenever limiting is off
    double width = 40e-9;      // m
    double depth = 20e-9;      // m
    double thickness = 10e-9;  // m

    double max_field() const { return i_cc / (sigma_base * width * depth); }

    void validate() const {
        if (i_cc <= 0 || sigma_base <= 0 || width <= 0 || depth <= 0 || thickness <= 0)
            throw std::invalid_argument("compliance: all parameters must be positive");
    }
};

/// Conductivity of the limiting layer for a given applied bias v1 and top
/// electrode potential v2. With zero drop across the layer the field threshold
/// is not reached and the base conductivity applies.
inline double cml_conductance(double v1, double v2, const ComplianceConfig& c) {
    double drop = std::abs(v1 - v2);
    double field = drop / c.thickness;
    if (field >= c.max_field())
        return c.i_cc * c.thickness / (drop * c.width * c.depth);
    return c.sigma_base;
}

} // namespace taox
