// dynamics.hpp — Two qubits exchanging an excitation through the two normal modes of a
// loop-coupled magnet pair: full master equation, the adiabatically eliminated two-qubit
// model, SWAP fidelity, error optimization and the linear error coefficients.
//
// Rates are angular frequencies (rad/s) and times are seconds. Simulations run in a frame
// rotating at the qubit frequency unless another frame is requested.

#pragma once

#include "hml/errors.hpp"
#include "hml/lindblad.hpp"
#include "hml/nelder_mead.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace hml {

struct TwoSiteModel {
    double omega0{0};       // magnon frequency
    double Jrate{0};        // tunneling; normal modes at omega0 +- J
    double omega_sigma{0};  // qubit frequency
    double g{0};            // qubit-magnon coupling
    double kappa{0};        // magnon decay
    double gamma{0};        // qubit dephasing, pi / T2*
};

void validate(const TwoSiteModel& m);

// Delta = omega0 + J - omega_sigma.
inline double detuning(const TwoSiteModel& m) noexcept { return m.omega0 + m.Jrate - m.omega_sigma; }

// Model with the requested detuning; omega_sigma = omega0 + J - Delta.
TwoSiteModel dispersive_model(double g, double Delta, double J, double kappa, double gamma, double omega0 = 0.0);

enum class Backend { excitation_sector, truncated_fock };

struct FullModelOptions {
    Backend backend{Backend::excitation_sector};
    int n_max{2};                 // per-mode Fock cutoff (truncated_fock only)
    std::optional<double> frame;  // rotating-frame frequency; defaults to omega_sigma
};

// Operators are expressed in the backend's basis. The excitation-sector basis is
// (|10,vac>, |01,vac>, |00,1+>, |00,1->, |00,vac>).
struct FullModel {
    LindbladSystem system;
    Eigen::VectorXcd initial;  // |10> (x) |vac>
    Eigen::VectorXcd target;   // |01> (x) |vac>
    Eigen::VectorXcd vacuum;   // |00> (x) |vac>
    Eigen::MatrixXcd f_plus, f_minus;
    Eigen::MatrixXcd sigma_minus_1, sigma_minus_2;
    Eigen::MatrixXcd sigma_z_1, sigma_z_2;
};

FullModel build_full_model(const TwoSiteModel& m, const FullModelOptions& opts = {});

// --------------------------------------------------------------------------------
// Effective two-qubit model

struct EffectiveModel {
    double Delta{0};
    double g_eff{0};
    double kappa_eff{0};
    double Gamma_eff{0};
    double omega_sigma_tilde{0};
    double C0{0};             // g^2 / (gamma kappa); +inf when gamma kappa = 0
    bool dispersive{true};    // g/|Delta| and g/|Delta - 2J| below the threshold
};

// Throws domain_error when Delta = 0 or Delta = 2J. Dispersive-regime violations only warn.
EffectiveModel effective_model(const TwoSiteModel& m, double threshold = 0.1, Warnings* warnings = nullptr);

// Basis |q1 q2> with index 2 q1 + q2 (1 = excited).
struct EffectiveSystem {
    LindbladSystem system;
    Eigen::VectorXcd initial;  // |10>
    Eigen::VectorXcd target;   // |01>
};

EffectiveSystem build_effective_system(const TwoSiteModel& m, const EffectiveModel& eff,
                                       std::optional<double> frame = std::nullopt);

double cooperativity(double g, double kappa, double gamma);

// --------------------------------------------------------------------------------
// SWAP fidelity

struct SwapOptions {
    FullModelOptions model;
    int nt{2048};
    std::optional<double> t_max;  // default 3 pi / (2 |g_eff|)
    double rel_tol{1e-6};         // golden-section time resolution relative to t_star
    EvolveOptions evolve;
    bool keep_curve{true};
};

struct SwapOutcome {
    std::vector<double> times;     // empty unless keep_curve
    std::vector<double> fidelity;
    double t_max{0};
    double t_star{0};
    double fidelity_max{0};
    double epsilon{1};
    double max_trace_drift{0};
    double max_antihermitian{0};
    double min_eigenvalue{0};
    Warnings warnings;
};

// Transfer |10,vac> -> |01,vac> under the full master equation.
SwapOutcome swap_fidelity(const TwoSiteModel& m, const SwapOptions& opts = {});

// The same protocol under the effective two-qubit master equation.
SwapOutcome effective_swap_fidelity(const TwoSiteModel& m, const SwapOptions& opts = {});

// --------------------------------------------------------------------------------
// Linear error model and optimization

struct Alphas {
    double gamma{0.779};
    double kappa{0.006};
};

// eps = alpha_gamma gamma / g_eff + alpha_kappa kappa_eff / g_eff with the effective rates
// written out in Delta and J.
double linear_error_model(double g, double Delta, double J, double kappa, double gamma, const Alphas& alphas);

struct AnalyticOptimum {
    double J_star{0};           // = Delta_star = sqrt(2 alpha_kappa g^2 kappa T2* / (pi alpha_gamma))
    double epsilon_formula{0};  // sqrt(alpha_kappa alpha_gamma / (2 C0))
    double epsilon_model{0};    // linear_error_model evaluated at Delta = J = J_star
};

AnalyticOptimum analytic_optimum(double g, double kappa, double gamma, const Alphas& alphas);

enum class OptimizeOver { Delta, DeltaJ };
enum class Objective { full_model, linear_model };

struct OptimizeOptions {
    OptimizeOver over{OptimizeOver::DeltaJ};
    Objective objective{Objective::full_model};
    Alphas alphas;        // used for the analytic cross-check and the linear objective
    int grid{9};          // points per dimension of the coarse log grid
    double decades{1.5};  // J searched within J_ref * 10^(+-decades)
    NelderMeadOptions simplex{200, 1e-5, 1e-10, 0.1};
    SwapOptions swap{{}, 1024, std::nullopt, 1e-6, {}, false};
};

struct OptimumReport {
    double Delta_star{0};
    double J_star{0};
    double epsilon_star{1};
    AnalyticOptimum analytic;
    double C0{0};
    int evaluations{0};
    bool converged{false};
};

// Minimizes eps over (Delta) at the model's J, or over (Delta, J). Delta is searched as a
// fraction of J in (0, 2) so the qubit stays between the two normal modes.
OptimumReport optimize_epsilon(const TwoSiteModel& m, const OptimizeOptions& opts = {});

// --------------------------------------------------------------------------------
// Linear regression of the error coefficients

struct LineFit {
    std::vector<double> x, y;
    double slope{0};
    double r2{0};
    bool poor{false};  // r2 < 0.98
};

// Least-squares line through the origin; r2 against the mean of y.
LineFit fit_through_origin(std::vector<double> x, std::vector<double> y);

struct FitAlphaOptions {
    int n_points{10};
    double x_lo{1e-3};
    double x_hi{1e-1};
    SwapOptions swap{{}, 2048, std::nullopt, 1e-6, {}, false};
};

struct AlphaFit {
    LineFit kappa;        // eps - eps0 against kappa / g_eff (gamma = 0)
    LineFit gamma;        // eps - eps0 against gamma / g_eff (kappa = 0)
    double alpha_kappa{0};
    double alpha_gamma{0};
    double alpha_kappa_eff{0};  // slope against kappa_eff / g_eff, for comparison
    double epsilon0{0};         // lossless error subtracted from every point
    int trajectories{0};
    Warnings warnings;
};

// At Delta = J, kappa (gamma) is chosen so that kappa_eff / g_eff (gamma / g_eff) spans
// linspace(x_lo, x_hi, n_points). The model's g, J and omega0 are kept.
AlphaFit fit_alpha(const TwoSiteModel& base, const FitAlphaOptions& opts = {});

struct CooperativityGrid {
    std::vector<double> kappa;
    std::vector<double> T2;
    Eigen::MatrixXd C0;  // rows: kappa, columns: T2
};

CooperativityGrid cooperativity_map(double g, const std::vector<double>& kappa, const std::vector<double>& T2);

} // namespace hml
