// geometry.hpp — Loop inductance, resonator modes, flux geometry factors, dipole fields,
// critical placement distance and the bone-shaped coupler.

#pragma once

#include "hml/errors.hpp"
#include "hml/units.hpp"

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <vector>

namespace hml {

struct LoopSpec {
    double l{0};                       // loop radius, m
    double tau{0};                     // wire thickness, m
    std::optional<double> Cap;         // total capacitance, F
    std::optional<double> per_unit_L;  // H/m
    std::optional<double> per_unit_C;  // F/m
};

// Rejects tau >= l and non-positive sizes; tau >= l/10 only warns.
void validate(const LoopSpec& loop, Warnings* warnings = nullptr);

struct Placement {
    double d{0};  // in-plane gap between magnet centre and nearest wire point, m
    double h{0};  // height above the loop plane, m
};

void validate(const Placement& place);

enum class InductanceModel { full, leading_log };

// Self-inductance of a circular loop of round wire: mu0 l [ln(8l/tau) - 7/4] (full) or
// mu0 l ln(8l/tau) (leading_log).
double loop_inductance(const LoopSpec& loop, InductanceModel model = InductanceModel::full,
                       Warnings* warnings = nullptr);

// Transmission-line ring modes omega_n = n / (l sqrt(L_l C_l)), n = 1..n_max.
std::vector<double> resonator_mode_frequencies(const LoopSpec& loop, int n_max);

// --------------------------------------------------------------------------------
// Flux geometry factors

// Dimensionless I_x, I_z of a circular coil for a magnet at in-plane gap d and height h,
// as functions of l/d and h/d. I_y vanishes identically for this placement.
struct FluxIntegrals {
    double Ix{0};
    double Iz{0};
    double error{0};  // summed quadrature error estimate
};

// Integrands over u in [-pi/2, pi/2] after the substitution lambda = (l/d) sin u, taken over
// one half of the contour. The full-contour factor is -2 times their integral (both halves
// contribute equally; the sign fixes the traversal so that I_x > 0 in the plane).
double flux_integrand_z(double u, double l_over_d, double h_over_d) noexcept;
double flux_integrand_x(double u, double l_over_d, double h_over_d) noexcept;

FluxIntegrals flux_integrals_circular(double l_over_d, double h_over_d, double abs_tol = 1e-9);

struct FluxFactors {
    double Ix{0}, Iy{0}, Iz{0};
    double Phi_e{0};     // hbar gamma0 mu0 / (4 pi d), Wb
    double Phi_bias{0};  // flux of the equilibrium moment -mu z through the loop, Wb
    double quad_error{0};
};

// Full flux description for one magnet-loop pair. Phi_bias is exactly zero for h = 0.
FluxFactors flux_factors_circular(const LoopSpec& loop, const Placement& place,
                                  const MaterialParams& mat, double total_spin,
                                  double abs_tol = 1e-9);

// --------------------------------------------------------------------------------
// Dipole field

// B at r_obs from a point dipole mu at r_src.
template <typename Derived1, typename Derived2, typename Derived3>
auto dipole_field(const Eigen::MatrixBase<Derived1>& mu, const Eigen::MatrixBase<Derived2>& r_src,
                  const Eigen::MatrixBase<Derived3>& r_obs) {
    using Scalar = typename Derived1::Scalar;
    using V3 = Eigen::Matrix<Scalar, 3, 1>;
    const V3 dr = r_obs - r_src;
    const Scalar r2 = dr.squaredNorm();
    if (!(r2 > Scalar(0))) {
        throw domain_error("dipole_field: observation point coincides with the source");
    }
    const Scalar r = std::sqrt(r2);
    const Scalar r3 = r2 * r;
    const Scalar r5 = r3 * r2;
    const Scalar k = Scalar(constants::mu0) / (Scalar(4) * Scalar(constants::pi));
    return V3(k * (Scalar(3) * dr * mu.dot(dr) / r5 - mu / r3));
}

// --------------------------------------------------------------------------------
// Superconducting wire limits

// Minimal centre-to-wire distance such that the z field at the closest wire point
// equals Bc: tau/2 + (2 mu0 Ms / (3 Bc))^(1/3) R.
double critical_distance(double R, const MaterialParams& mat, double Bc, double tau);

// Inverse of critical_distance: field magnitude at the nearest wire point for a
// magnet at distance d.
double wire_field(double R, const MaterialParams& mat, double d, double tau);

// --------------------------------------------------------------------------------
// Bone-shaped coupler

// Magnon tunneling rate gamma0^2 mu0^2 hbar F / (8 d^2 L) with L the inductance of a
// circular end-ring of radius d. Independent of the middle-wire length.
// When the magnet radius R is given, R >= d emits a validity warning.
double bone_tunneling(double d, double tau, double total_spin, const MaterialParams& mat,
                      std::optional<double> R = std::nullopt, Warnings* warnings = nullptr);

} // namespace hml
