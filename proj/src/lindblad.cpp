#include "hml/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <sstream>

namespace hml {

Dissipator channel(double rate, Eigen::MatrixXcd op) {
    Dissipator d;
    d.rate = rate;
    d.A = op;
    d.B = std::move(op);
    return d;
}

Eigen::MatrixXcd lindblad_rhs(const LindbladSystem& sys, const Eigen::MatrixXcd& rho) {
    const cdouble I(0.0, 1.0);
    Eigen::MatrixXcd out = -I * (sys.H * rho - rho * sys.H);
    for (const auto& c : sys.channels) {
        if (c.rate == 0.0) continue;
        const Eigen::MatrixXcd BdA = c.B.adjoint() * c.A;
        out += c.rate * (c.A * rho * c.B.adjoint() - 0.5 * (BdA * rho + rho * BdA));
    }
    return out;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Eigen::MatrixXcd projector(const Eigen::VectorXcd& ket) { return ket * ket.adjoint(); }

namespace {

using Triplets = std::vector<Eigen::Triplet<cdouble>>;

// Appends scale * (a kron b) without forming the dense product.
void add_kron(Triplets& out, const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, cdouble scale) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (a(i, j) == 0.0) continue;
            for (Eigen::Index k = 0; k < b.rows(); ++k) {
                for (Eigen::Index l = 0; l < b.cols(); ++l) {
                    if (b(k, l) == 0.0) continue;
                    out.emplace_back(i * b.rows() + k, j * b.cols() + l, scale * a(i, j) * b(k, l));
                }
            }
        }
    }
}

double spectral_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

} // namespace

Eigen::SparseMatrix<cdouble> liouvillian(const LindbladSystem& sys) {
    const Eigen::Index n = sys.H.rows();
    if (sys.H.cols() != n) throw domain_error("liouvillian: H must be square");
    const Eigen::MatrixXcd Id = Eigen::MatrixXcd::Identity(n, n);
    const cdouble I(0.0, 1.0);
    Triplets t;
    add_kron(t, Id, sys.H, -I);
    add_kron(t, sys.H.transpose(), Id, I);
    for (const auto& c : sys.channels) {
        if (c.rate == 0.0) continue;
        if (c.A.rows() != n || c.B.rows() != n) throw domain_error("liouvillian: channel dimension mismatch");
        const Eigen::MatrixXcd BdA = c.B.adjoint() * c.A;
        add_kron(t, c.B.conjugate(), c.A, c.rate);
        add_kron(t, Id, BdA, -0.5 * c.rate);
        add_kron(t, BdA.transpose(), Id, -0.5 * c.rate);
    }
    Eigen::SparseMatrix<cdouble> L(n * n, n * n);
    L.setFromTriplets(t.begin(), t.end());
    L.makeCompressed();
    return L;
}

Evolver::Evolver(const LindbladSystem& sys, EvolveOptions opts) : n_(sys.H.rows()), opts_(opts) {
    if (!(opts_.step_factor > 0.0)) throw domain_error("evolve: step_factor must be > 0");
    if ((sys.H - sys.H.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, sys.H.cwiseAbs().maxCoeff())) {
        throw domain_error("evolve: Hamiltonian is not Hermitian");
    }
    double scale = 0.0;
    if (n_ > 0) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sys.H, Eigen::EigenvaluesOnly);
        scale = es.eigenvalues().cwiseAbs().maxCoeff();
    }
    for (const auto& c : sys.channels) {
        if (c.rate < 0.0 && c.A.isApprox(c.B)) throw domain_error("evolve: dissipation rates must be >= 0");
        scale += std::abs(c.rate) * spectral_norm(c.A) * spectral_norm(c.B);
    }
    h_max_ = scale > 0.0 ? opts_.step_factor / scale : std::numeric_limits<double>::infinity();
    L_ = liouvillian(sys);
    dense_ = n_ <= opts_.dense_max_dim;
    if (dense_) {
        L_dense_ = Eigen::MatrixXcd(L_);
        if (std::isfinite(h_max_)) h_max_ /= std::max(1, opts_.dense_refinement);
    }
}

const Eigen::MatrixXcd& Evolver::dense_propagator(double dt) {
    if (auto it = cache_.find(dt); it != cache_.end()) return it->second;
    if (cache_.size() > 64) cache_.clear();

    const double steps = std::isfinite(h_max_) ? std::ceil(dt / h_max_) : 1.0;
    const auto n = static_cast<unsigned long long>(std::max(1.0, steps));
    const double h = dt / static_cast<double>(n);
    // Built in extended precision: the product of many squarings otherwise accumulates enough
    // round-off to show up as trace drift on long horizons.
    using MatrixXcl = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
    const Eigen::Index m = L_dense_.rows();
    const MatrixXcl hL = static_cast<long double>(h) * L_dense_.cast<std::complex<long double>>();
    // One RK4 step of a linear system is its degree-4 Taylor polynomial.
    MatrixXcl term = MatrixXcl::Identity(m, m);
    MatrixXcl step = term;
    for (int k = 1; k <= 4; ++k) {
        term = (hL * term) / static_cast<long double>(k);
        step += term;
    }
    MatrixXcl acc = MatrixXcl::Identity(m, m);
    MatrixXcl base = step;
    for (unsigned long long e = n; e > 0; e >>= 1) {
        if (e & 1ULL) acc = base * acc;
        if (e > 1) base = base * base;
    }
    Eigen::MatrixXcd result = acc.cast<cdouble>();
    return cache_.emplace(dt, std::move(result)).first->second;
}

Eigen::VectorXcd Evolver::advance_vec(const Eigen::VectorXcd& v, double dt) {
    if (dense_) return dense_propagator(dt) * v;
    const double steps = std::isfinite(h_max_) ? std::ceil(dt / h_max_) : 1.0;
    const auto n = static_cast<long long>(std::max(1.0, steps));
    const double h = dt / static_cast<double>(n);
    Eigen::VectorXcd x = v, k1, k2, k3, k4;
    for (long long s = 0; s < n; ++s) {
        k1 = L_ * x;
        k2 = L_ * (x + 0.5 * h * k1);
        k3 = L_ * (x + 0.5 * h * k2);
        k4 = L_ * (x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

Eigen::MatrixXcd Evolver::advance(const Eigen::MatrixXcd& rho, double dt) {
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw domain_error("evolve: time steps must be finite and >= 0");
    if (rho.rows() != n_ || rho.cols() != n_) throw domain_error("evolve: state dimension mismatch");
    if (dt == 0.0) return rho;
    const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
    const Eigen::VectorXcd w = advance_vec(v, dt);
    return Eigen::Map<const Eigen::MatrixXcd>(w.data(), n_, n_);
}

StateCheck check_state(const Eigen::MatrixXcd& rho, double reference_trace, const EvolveOptions& opts) {
    StateCheck c;
    c.trace_drift = std::abs(rho.trace() - reference_trace);
    c.antihermitian = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
    c.min_eigenvalue = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(herm, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (c.trace_drift > opts.trace_tol) {
        std::ostringstream msg;
        msg << "evolve: trace drift " << c.trace_drift << " exceeds " << opts.trace_tol;
        throw convergence_error(msg.str(), c.trace_drift);
    }
    if (opts.check_positivity && c.min_eigenvalue < -opts.positivity_tol) {
        std::ostringstream msg;
        msg << "evolve: density matrix lost positivity (min eigenvalue " << c.min_eigenvalue << ")";
        throw convergence_error(msg.str(), c.min_eigenvalue);
    }
    return c;
}

Trajectory evolve(const LindbladSystem& sys, const Eigen::MatrixXcd& rho0, const std::vector<double>& t_grid,
                  const EvolveOptions& opts) {
    if (t_grid.empty()) throw domain_error("evolve: empty time grid");
    const Eigen::Index n = sys.H.rows();
    if (rho0.rows() != n || rho0.cols() != n) throw domain_error("evolve: rho0 dimension mismatch");
    if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw domain_error("evolve: rho0 is not Hermitian");
    if (std::abs(rho0.trace() - 1.0) > 1e-10) throw domain_error("evolve: rho0 must have unit trace");
    const double min0 = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(rho0, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (min0 < -1e-10) throw domain_error("evolve: rho0 is not positive semidefinite");

    Evolver ev(sys, opts);
    Trajectory tr;
    tr.t = t_grid;
    tr.rho.reserve(t_grid.size());
    tr.rho.push_back(rho0);
    tr.min_eigenvalue = min0;
    Eigen::MatrixXcd rho = rho0;
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double dt = t_grid[i] - t_grid[i - 1];
        if (dt < 0.0) throw domain_error("evolve: time grid must be nondecreasing");
        rho = ev.advance(rho, dt);
        const auto c = check_state(rho, 1.0, opts);
        tr.max_trace_drift = std::max(tr.max_trace_drift, c.trace_drift);
        tr.max_antihermitian = std::max(tr.max_antihermitian, c.antihermitian);
        tr.min_eigenvalue = std::min(tr.min_eigenvalue, c.min_eigenvalue);
        if (std::isfinite(ev.max_step()) && dt > 0.0) {
            tr.step = std::max(tr.step, dt / std::ceil(dt / ev.max_step()));
        }
        tr.rho.push_back(rho);
    }
    return tr;
}

} // namespace hml
