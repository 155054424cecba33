// lindblad.hpp — Dense Lindblad master equations for small Hilbert spaces, integrated with
// fixed-step fourth-order Runge–Kutta.
//
// Units: hbar = 1, H in rad/s. The generator is
//   d rho/dt = -i[H, rho] + sum_c rate_c (A_c rho B_c^dag - 1/2 {B_c^dag A_c, rho}),
// which with A = B is the usual dissipator and with A != B covers cross terms.

#pragma once

#include "hml/errors.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <complex>
#include <map>
#include <vector>

namespace hml {

using cdouble = std::complex<double>;

struct Dissipator {
    double rate{0};
    Eigen::MatrixXcd A;
    Eigen::MatrixXcd B;
};

// Dissipator with A = B = op.
Dissipator channel(double rate, Eigen::MatrixXcd op);

struct LindbladSystem {
    Eigen::MatrixXcd H;
    std::vector<Dissipator> channels;
};

Eigen::MatrixXcd lindblad_rhs(const LindbladSystem& sys, const Eigen::MatrixXcd& rho);

// Column-major vectorized generator: vec(d rho/dt) = L vec(rho).
Eigen::SparseMatrix<cdouble> liouvillian(const LindbladSystem& sys);

struct EvolveOptions {
    // Upper bound on h * (max |eigenvalue of H| + sum of rates).
    double step_factor = 0.05;
    // Systems up to this dimension use a dense one-step RK4 propagator raised to the required
    // power by repeated squaring; their step is further divided by dense_refinement.
    int dense_max_dim = 8;
    int dense_refinement = 256;
    double trace_tol = 1e-8;
    double positivity_tol = 1e-8;
    bool check_positivity = true;
};

struct Trajectory {
    std::vector<double> t;
    std::vector<Eigen::MatrixXcd> rho;
    double step{0};                // RK4 step actually used (largest over intervals)
    double max_trace_drift{0};
    double max_antihermitian{0};   // max |rho - rho^dag|
    double min_eigenvalue{0};
};

// Fixed-step RK4 propagator for one system. Each call to advance() integrates exactly over
// dt with ceil(dt / h_max) equal steps. Propagators for repeated dt values are cached.
class Evolver {
public:
    explicit Evolver(const LindbladSystem& sys, EvolveOptions opts = {});

    Eigen::MatrixXcd advance(const Eigen::MatrixXcd& rho, double dt);

    double max_step() const noexcept { return h_max_; }
    bool dense() const noexcept { return dense_; }
    Eigen::Index dim() const noexcept { return n_; }

private:
    Eigen::VectorXcd advance_vec(const Eigen::VectorXcd& v, double dt);
    const Eigen::MatrixXcd& dense_propagator(double dt);

    Eigen::Index n_{0};
    EvolveOptions opts_;
    double h_max_{0};
    bool dense_{false};
    Eigen::SparseMatrix<cdouble> L_;
    Eigen::MatrixXcd L_dense_;
    std::map<double, Eigen::MatrixXcd> cache_;
};

// State checks applied at every output time: trace drift, anti-Hermitian part and the
// smallest eigenvalue. Throws convergence_error on trace drift above tol or eigenvalues below
// -positivity_tol.
struct StateCheck {
    double trace_drift{0};
    double antihermitian{0};
    double min_eigenvalue{0};
};

StateCheck check_state(const Eigen::MatrixXcd& rho, double reference_trace, const EvolveOptions& opts);

// Integrates from t_grid.front() (where rho = rho0) through every subsequent grid time.
// rho0 must be Hermitian with unit trace and no negative eigenvalues.
Trajectory evolve(const LindbladSystem& sys, const Eigen::MatrixXcd& rho0, const std::vector<double>& t_grid,
                  const EvolveOptions& opts = {});

// Small operator helpers.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
Eigen::MatrixXcd projector(const Eigen::VectorXcd& ket);

} // namespace hml
