// units.hpp — Physical constants, material presets and the macrospin of a magnetic sphere.
//
// Angular frequencies (rad/s) are used everywhere inside the library; conversion to Hz
// happens only at output boundaries (see to_hz).

#pragma once

#include <Eigen/Core>

#include <numbers>

namespace hml {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

namespace constants {
inline constexpr double pi = std::numbers::pi;
inline constexpr double mu0 = 4.0e-7 * pi;          // T·m/A
inline constexpr double hbar = 1.054571817e-34;     // J·s
} // namespace constants

inline constexpr double to_hz(double omega) noexcept { return omega / (2.0 * constants::pi); }
inline constexpr double from_hz(double f) noexcept { return 2.0 * constants::pi * f; }

struct MaterialParams {
    double gamma0{0};   // magnet gyromagnetic ratio, rad·Hz/T
    double gammaq{0};   // qubit gyromagnetic ratio, rad·Hz/T
    double Ms{0};       // saturation magnetization, A/m
    double ka{0};       // anisotropy energy density, J/m^3
    double DeltaNV{0};  // NV zero-field splitting, rad/s
};

// Throws domain_error unless every field is strictly positive.
void validate(const MaterialParams& mat);

// Bias field magnitude; the direction is -z by convention.
struct FieldBias {
    double B0{0};  // T
};

void validate(const FieldBias& field);

// Larmor frequency gamma0 * B0.
inline double larmor_frequency(const MaterialParams& mat, const FieldBias& field) noexcept {
    return mat.gamma0 * field.B0;
}

MaterialParams yig_preset();

struct MagnetMoment {
    double mu{0};  // A·m^2
    double F{0};   // dimensionless total spin mu / (hbar gamma0)
};

// Uniformly magnetized sphere of radius R.
MagnetMoment magnet_moment(double R, const MaterialParams& mat);

} // namespace hml
