// couplings.hpp — Quadratic magnon-network coefficients and qubit–magnon couplings.
//
// All rates are angular frequencies (rad/s). Loop-mediated couplings follow the
// circuit-eliminated model: one loop of inductance L shared by every magnet in the list.

#pragma once

#include "hml/errors.hpp"
#include "hml/geometry.hpp"
#include "hml/units.hpp"

#include <Eigen/Core>

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace hml {

using cdouble = std::complex<double>;

struct SitePair {
    Vec3 r_i{Vec3::Zero()};
    Vec3 r_j{Vec3::Zero()};
    double r_ij{0};
    double theta_ij{0};  // polar angle of r_i - r_j measured from z, in [0, pi]
    double phi_ij{0};    // azimuth of r_i - r_j
};

SitePair make_site_pair(const Vec3& r_i, const Vec3& r_j);

// J_ij = (hbar gamma0 mu0 / 4pi)^2 I_i^* I_j F / (2 hbar d_i d_j L), I_j = I_x + i I_y.
cdouble loop_tunneling(const FluxFactors& flux_i, const FluxFactors& flux_j, double d_i, double d_j,
                       double L, double total_spin, const MaterialParams& mat);

// J^d_ij = -hbar gamma0^2 mu0 F (3 sin^2 theta_ij - 2) / (8 pi r_ij^3).
double dipolar_tunneling(const SitePair& pair, double total_spin, const MaterialParams& mat);

// Static dipolar frequency shift on site j from a neighbour:
// hbar gamma0^2 mu0 (3 cos^2 theta - 1) F / (4 pi r^3).
double dipolar_shift(const SitePair& pair, double total_spin, const MaterialParams& mat);

// omega_j = gamma0 B0 + 2 gamma0 ka / Ms + J_jj + sum of dipolar_shift over neighbours.
double site_frequency(const MaterialParams& mat, const FieldBias& field, double J_self,
                      std::span<const SitePair> neighbours, double total_spin);

// One magnet coupled to the shared loop.
struct MagnetSite {
    Vec3 position{Vec3::Zero()};
    double d{0};        // in-plane gap to the loop wire
    FluxFactors flux;
};

struct QuadraticModel {
    Eigen::VectorXd omega;    // site frequencies
    Eigen::MatrixXcd J;       // loop-mediated tunneling (Hermitian)
    Eigen::MatrixXd Jd;       // dipolar tunneling, zero diagonal
    Eigen::MatrixXcd Lambda;  // counter-rotating coefficients (diagnostic only)
    Eigen::VectorXcd chi;     // circuit-magnon couplings; empty unless a capacitance is known
    Eigen::VectorXcd eta;     // linear terms
};

struct CounterRotatingTerms {
    Eigen::MatrixXcd Lambda;
    Eigen::VectorXcd chi;
    Eigen::VectorXcd eta;
};

// Lambda_ij, chi_j and eta_j for the sites sharing one loop. chi requires the loop
// capacitance: when `capacitance` is empty and `need_chi` is true a config_error is thrown,
// otherwise chi is returned empty. These enter no time evolution.
CounterRotatingTerms counter_rotating_and_linear(std::span<const MagnetSite> sites, double L,
                                                 double total_spin, const MaterialParams& mat,
                                                 std::optional<double> capacitance,
                                                 bool need_chi = false);

// Assemble every quadratic coefficient for magnets around a single loop.
QuadraticModel build_quadratic_model(std::span<const MagnetSite> sites, const LoopSpec& loop,
                                     const MaterialParams& mat, const FieldBias& field,
                                     double total_spin);

// Per-site gauge f_j -> exp(i phase_j) f_j chosen so the tunneling matrix becomes real.
// `residual` is the largest imaginary part left; it is zero for the rank-one matrices of a
// single loop.
struct GaugeFixedTunneling {
    Eigen::MatrixXd J;
    Eigen::VectorXd phase;
    double residual{0};
};

GaugeFixedTunneling absorb_tunneling_phases(const Eigen::MatrixXcd& J);

// --------------------------------------------------------------------------------
// Qubit (NV centre) coupled to one magnet

struct QubitCoupling {
    double omega_sigma_bare{0};  // omega_sigma(theta)
    double xi_theta{0};
    double g_theta{0};
    double W_theta{0};
    double Theta{0};             // dressing angle in [0, pi]
    double omega_sigma{0};       // dressed qubit frequency
    cdouble xi{0};               // dressed longitudinal coupling
    double g{0};                 // dressed exchange coupling
    double W{0};                 // dressed counter-exchange coupling
    double omega_q{0};           // Delta_NV - gammaq B0
};

// The qubit sits at r_q (sin theta cos varphi, sin theta sin varphi, cos theta) from the
// magnet centre. Requires r_q > R.
QubitCoupling qubit_coupling(double theta, double varphi, double r_q, double R,
                             const MaterialParams& mat, double B0);

// Site parameters of the Jaynes–Cummings model for a qubit on the x axis of a magnet.
struct JaynesCummingsSite {
    double omega_sigma{0};  // omega_q + hbar gamma0 gammaq mu0 F / (4 pi r_q^3)
    double omega_magnon{0};
    double g{0};            // dressed coupling, used for dynamics
    double g_maintext{0};   // 3 hbar gamma0 gammaq mu0 sqrt(2F) / (8 pi r_q^3) = sqrt(2) g(pi/2)
    bool rwa_valid{true};
};

// Flags (via warnings and rwa_valid) couplings or detunings above 10% of the magnon frequency.
JaynesCummingsSite jaynes_cummings_site(const QubitCoupling& qc, double omega_magnon, double r_q,
                                        double R, const MaterialParams& mat,
                                        Warnings* warnings = nullptr);

} // namespace hml
