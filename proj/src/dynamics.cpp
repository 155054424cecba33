#include "hml/dynamics.hpp"

#include "hml/parallel.hpp"
#include "hml/units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hml {

using constants::pi;

void validate(const TwoSiteModel& m) {
    const double vals[] = {m.omega0, m.Jrate, m.omega_sigma, m.g, m.kappa, m.gamma};
    for (double v : vals) {
        if (!std::isfinite(v)) throw domain_error("two-site model: parameters must be finite");
    }
    if (m.kappa < 0.0) throw domain_error("two-site model: kappa must be >= 0");
    if (m.gamma < 0.0) throw domain_error("two-site model: gamma must be >= 0");
}

TwoSiteModel dispersive_model(double g, double Delta, double J, double kappa, double gamma, double omega0) {
    TwoSiteModel m;
    m.omega0 = omega0;
    m.Jrate = J;
    m.omega_sigma = omega0 + J - Delta;
    m.g = g;
    m.kappa = kappa;
    m.gamma = gamma;
    return m;
}

namespace {

Eigen::VectorXcd basis(Eigen::Index dim, Eigen::Index i) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v(i) = 1.0;
    return v;
}

Eigen::MatrixXcd ket_bra(Eigen::Index dim, Eigen::Index i, Eigen::Index j) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    m(i, j) = 1.0;
    return m;
}

void add_loss_channels(LindbladSystem& sys, const TwoSiteModel& m, const FullModel& fm) {
    if (m.kappa > 0.0) {
        sys.channels.push_back(channel(m.kappa, fm.f_plus));
        sys.channels.push_back(channel(m.kappa, fm.f_minus));
    }
    if (m.gamma > 0.0) {
        sys.channels.push_back(channel(m.gamma, fm.sigma_z_1));
        sys.channels.push_back(channel(m.gamma, fm.sigma_z_2));
    }
}

FullModel excitation_sector(const TwoSiteModel& m, double nu) {
    enum : Eigen::Index { Q1 = 0, Q2 = 1, P = 2, M = 3, V = 4, dim = 5 };
    FullModel fm;
    const double c = m.g / std::sqrt(2.0);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
    H(Q1, Q1) = m.omega_sigma - nu;
    H(Q2, Q2) = m.omega_sigma - nu;
    H(P, P) = m.omega0 + m.Jrate - nu;
    H(M, M) = m.omega0 - m.Jrate - nu;
    H(Q1, P) = H(P, Q1) = -c;
    H(Q2, P) = H(P, Q2) = -c;
    H(Q1, M) = H(M, Q1) = -c;
    H(Q2, M) = H(M, Q2) = c;

    fm.f_plus = ket_bra(dim, V, P);
    fm.f_minus = ket_bra(dim, V, M);
    fm.sigma_minus_1 = ket_bra(dim, V, Q1);
    fm.sigma_minus_2 = ket_bra(dim, V, Q2);
    fm.sigma_z_1 = Eigen::VectorXcd::Constant(dim, -1.0).asDiagonal();
    fm.sigma_z_1(Q1, Q1) = 1.0;
    fm.sigma_z_2 = Eigen::VectorXcd::Constant(dim, -1.0).asDiagonal();
    fm.sigma_z_2(Q2, Q2) = 1.0;
    fm.initial = basis(dim, Q1);
    fm.target = basis(dim, Q2);
    fm.vacuum = basis(dim, V);
    fm.system.H = H;
    add_loss_channels(fm.system, m, fm);
    return fm;
}

FullModel truncated_fock(const TwoSiteModel& m, double nu, int n_max) {
    const Eigen::Index nm = n_max + 1;
    const Eigen::MatrixXcd Iq = Eigen::MatrixXcd::Identity(2, 2);
    const Eigen::MatrixXcd Im = Eigen::MatrixXcd::Identity(nm, nm);
    Eigen::MatrixXcd sm = Eigen::MatrixXcd::Zero(2, 2);  // |0><1|, 1 = excited
    sm(0, 1) = 1.0;
    Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(2, 2);
    sz(0, 0) = -1.0;
    sz(1, 1) = 1.0;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(nm, nm);
    for (Eigen::Index k = 1; k < nm; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));

    // Ordering: qubit 1, qubit 2, mode +, mode -.
    auto op = [&](const Eigen::MatrixXcd& q1, const Eigen::MatrixXcd& q2, const Eigen::MatrixXcd& mp,
                  const Eigen::MatrixXcd& mm) { return kron(kron(kron(q1, q2), mp), mm); };

    FullModel fm;
    fm.sigma_minus_1 = op(sm, Iq, Im, Im);
    fm.sigma_minus_2 = op(Iq, sm, Im, Im);
    fm.sigma_z_1 = op(sz, Iq, Im, Im);
    fm.sigma_z_2 = op(Iq, sz, Im, Im);
    fm.f_plus = op(Iq, Iq, a, Im);
    fm.f_minus = op(Iq, Iq, Im, a);

    const auto& s1 = fm.sigma_minus_1;
    const auto& s2 = fm.sigma_minus_2;
    const Eigen::MatrixXcd nq = s1.adjoint() * s1 + s2.adjoint() * s2;
    Eigen::MatrixXcd H = (m.omega_sigma - nu) * nq +
                         (m.omega0 + m.Jrate - nu) * (fm.f_plus.adjoint() * fm.f_plus) +
                         (m.omega0 - m.Jrate - nu) * (fm.f_minus.adjoint() * fm.f_minus);
    const Eigen::MatrixXcd X = fm.f_plus * (s1.adjoint() + s2.adjoint()) + fm.f_minus * (s1.adjoint() - s2.adjoint());
    H -= m.g / std::sqrt(2.0) * (X + X.adjoint());

    const Eigen::Index dim = H.rows();
    const Eigen::Index per_qubit_pair = nm * nm;
    fm.initial = basis(dim, 2 * per_qubit_pair);  // q1 = 1, q2 = 0, vacuum
    fm.target = basis(dim, per_qubit_pair);       // q1 = 0, q2 = 1, vacuum
    fm.vacuum = basis(dim, 0);
    fm.system.H = H;
    add_loss_channels(fm.system, m, fm);
    return fm;
}

} // namespace

FullModel build_full_model(const TwoSiteModel& m, const FullModelOptions& opts) {
    validate(m);
    const double nu = opts.frame.value_or(m.omega_sigma);
    switch (opts.backend) {
    case Backend::excitation_sector:
        return excitation_sector(m, nu);
    case Backend::truncated_fock:
        if (opts.n_max < 1) throw domain_error("truncated Fock backend needs n_max >= 1");
        return truncated_fock(m, nu, opts.n_max);
    }
    throw domain_error("unknown backend");
}

EffectiveModel effective_model(const TwoSiteModel& m, double threshold, Warnings* warnings) {
    validate(m);
    EffectiveModel e;
    e.Delta = detuning(m);
    const double D = e.Delta, D2 = e.Delta - 2.0 * m.Jrate;
    if (D == 0.0 || D2 == 0.0) {
        throw domain_error("effective model: qubit resonant with a magnon normal mode (Delta = 0 or Delta = 2J)");
    }
    const double g2 = m.g * m.g;
    e.omega_sigma_tilde = m.omega_sigma - g2 * (1.0 / D2 + 1.0 / D);
    e.g_eff = g2 * (1.0 / D - 1.0 / D2);
    const double denom = D * D * D2 * D2;
    e.kappa_eff = m.kappa * g2 * (D * D + D2 * D2) / denom;
    e.Gamma_eff = m.kappa * g2 * (D * D - D2 * D2) / denom;
    e.C0 = cooperativity(m.g, m.kappa, m.gamma);
    const double r1 = std::abs(m.g / D), r2 = std::abs(m.g / D2);
    if (!(r1 < threshold) || !(r2 < threshold)) {
        e.dispersive = false;
        std::ostringstream msg;
        msg << "outside the dispersive regime: g/|Delta| = " << r1 << ", g/|Delta - 2J| = " << r2
            << " (threshold " << threshold << ")";
        warn(warnings, msg.str());
    }
    return e;
}

EffectiveSystem build_effective_system(const TwoSiteModel& m, const EffectiveModel& eff, std::optional<double> frame) {
    const double nu = frame.value_or(eff.omega_sigma_tilde);
    const Eigen::MatrixXcd Iq = Eigen::MatrixXcd::Identity(2, 2);
    Eigen::MatrixXcd sm = Eigen::MatrixXcd::Zero(2, 2);
    sm(0, 1) = 1.0;
    Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(2, 2);
    sz(0, 0) = -1.0;
    sz(1, 1) = 1.0;
    const Eigen::MatrixXcd s1 = kron(sm, Iq), s2 = kron(Iq, sm);
    const Eigen::MatrixXcd z1 = kron(sz, Iq), z2 = kron(Iq, sz);

    EffectiveSystem es;
    const Eigen::MatrixXcd hop = s1.adjoint() * s2;
    es.system.H = (eff.omega_sigma_tilde - nu) * (s1.adjoint() * s1 + s2.adjoint() * s2) -
                  eff.g_eff * (hop + hop.adjoint());
    if (eff.kappa_eff > 0.0) {
        es.system.channels.push_back(channel(eff.kappa_eff, s1));
        es.system.channels.push_back(channel(eff.kappa_eff, s2));
    }
    if (eff.Gamma_eff != 0.0) {
        es.system.channels.push_back(Dissipator{eff.Gamma_eff, s1, s2});
        es.system.channels.push_back(Dissipator{eff.Gamma_eff, s2, s1});
    }
    if (m.gamma > 0.0) {
        es.system.channels.push_back(channel(m.gamma, z1));
        es.system.channels.push_back(channel(m.gamma, z2));
    }
    es.initial = basis(4, 2);
    es.target = basis(4, 1);
    return es;
}

double cooperativity(double g, double kappa, double gamma) {
    const double den = gamma * kappa;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return g * g / den;
}

namespace {

double resolve_t_max(const TwoSiteModel& m, const SwapOptions& opts, Warnings& warnings) {
    std::optional<double> g_eff;
    try {
        g_eff = effective_model(m, 0.1).g_eff;
    } catch (const domain_error&) {
        if (!opts.t_max) throw;
    }
    double t_max = 0.0;
    if (opts.t_max) {
        t_max = *opts.t_max;
    } else {
        if (*g_eff == 0.0) throw domain_error("swap_fidelity: t_max is required when g_eff = 0");
        t_max = 3.0 * pi / (2.0 * std::abs(*g_eff));
    }
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw domain_error("swap_fidelity: t_max must be > 0");
    if (g_eff && *g_eff != 0.0 && t_max < pi / (2.0 * std::abs(*g_eff))) {
        std::ostringstream msg;
        msg << "t_max = " << t_max << " s is shorter than pi/(2 g_eff) = " << pi / (2.0 * std::abs(*g_eff))
            << " s; the fidelity maximum may be missed";
        warnings.push_back(msg.str());
    }
    return t_max;
}

SwapOutcome run_swap(const LindbladSystem& sys, const Eigen::VectorXcd& initial, const Eigen::VectorXcd& target,
                     double t_max, const SwapOptions& opts, Warnings warnings) {
    if (opts.nt < 2) throw domain_error("swap_fidelity: nt must be >= 2");
    Evolver ev(sys, opts.evolve);
    auto fidelity = [&](const Eigen::MatrixXcd& rho) {
        return std::clamp((target.adjoint() * rho * target)(0, 0).real(), 0.0, 1.0);
    };

    SwapOutcome out;
    out.t_max = t_max;
    out.warnings = std::move(warnings);
    const double dt = t_max / (opts.nt - 1);
    Eigen::MatrixXcd rho = projector(initial);
    Eigen::MatrixXcd prev = rho;          // state one grid point before the current best
    Eigen::MatrixXcd before_best = rho;
    int best = 0;
    double best_f = fidelity(rho);
    out.min_eigenvalue = 0.0;
    if (opts.keep_curve) {
        out.times.reserve(static_cast<std::size_t>(opts.nt));
        out.fidelity.reserve(static_cast<std::size_t>(opts.nt));
        out.times.push_back(0.0);
        out.fidelity.push_back(best_f);
    }
    for (int i = 1; i < opts.nt; ++i) {
        prev = rho;
        rho = ev.advance(rho, dt);
        const auto c = check_state(rho, 1.0, opts.evolve);
        out.max_trace_drift = std::max(out.max_trace_drift, c.trace_drift);
        out.max_antihermitian = std::max(out.max_antihermitian, c.antihermitian);
        out.min_eigenvalue = std::min(out.min_eigenvalue, c.min_eigenvalue);
        const double f = fidelity(rho);
        if (opts.keep_curve) {
            out.times.push_back(i * dt);
            out.fidelity.push_back(f);
        }
        // Equal peaks within rounding keep the earliest transfer.
        if (f > best_f + 1e-12) {
            best_f = f;
            best = i;
            before_best = prev;
        }
    }

    out.t_star = best * dt;
    out.fidelity_max = best_f;
    if (best > 0) {
        // Golden-section refinement on [t_{best-1}, t_{best+1}], propagating from t_{best-1}.
        const double t0 = (best - 1) * dt;
        double lo = t0, hi = std::min(t_max, (best + 1) * dt);
        auto f_at = [&](double t) { return fidelity(ev.advance(before_best, t - t0)); };
        const double r = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
        double f1 = f_at(x1), f2 = f_at(x2);
        while (hi - lo > opts.rel_tol * out.t_star) {
            if (f1 > f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - r * (hi - lo);
                f1 = f_at(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + r * (hi - lo);
                f2 = f_at(x2);
            }
        }
        const double tm = 0.5 * (lo + hi);
        const double fm = f_at(tm);
        if (fm > out.fidelity_max) {
            out.fidelity_max = fm;
            out.t_star = tm;
        }
    }
    out.epsilon = std::clamp(1.0 - out.fidelity_max, 0.0, 1.0);
    return out;
}

} // namespace

SwapOutcome swap_fidelity(const TwoSiteModel& m, const SwapOptions& opts) {
    validate(m);
    Warnings warnings;
    const double t_max = resolve_t_max(m, opts, warnings);
    const FullModel fm = build_full_model(m, opts.model);
    return run_swap(fm.system, fm.initial, fm.target, t_max, opts, std::move(warnings));
}

SwapOutcome effective_swap_fidelity(const TwoSiteModel& m, const SwapOptions& opts) {
    validate(m);
    Warnings warnings;
    const auto eff = effective_model(m, 0.1, &warnings);
    const double t_max = resolve_t_max(m, opts, warnings);
    const EffectiveSystem es = build_effective_system(m, eff);
    return run_swap(es.system, es.initial, es.target, t_max, opts, std::move(warnings));
}

double linear_error_model(double g, double Delta, double J, double kappa, double gamma, const Alphas& alphas) {
    const double D2 = Delta - 2.0 * J;
    const double term_gamma = -alphas.gamma * gamma * Delta * D2 / (2.0 * g * g * J);
    const double term_kappa = -alphas.kappa * 0.5 * kappa * (Delta * Delta + D2 * D2) / (J * Delta * D2);
    return term_gamma + term_kappa;
}

AnalyticOptimum analytic_optimum(double g, double kappa, double gamma, const Alphas& alphas) {
    AnalyticOptimum a;
    const double inf = std::numeric_limits<double>::infinity();
    if (gamma > 0.0) {
        const double T2 = pi / gamma;
        a.J_star = std::sqrt(2.0 * alphas.kappa * g * g * kappa * T2 / (pi * alphas.gamma));
    } else {
        a.J_star = kappa > 0.0 ? inf : 0.0;
    }
    const double C0 = cooperativity(g, kappa, gamma);
    a.epsilon_formula = std::sqrt(alphas.kappa * alphas.gamma / (2.0 * C0));
    a.epsilon_model = (a.J_star > 0.0 && std::isfinite(a.J_star))
                          ? linear_error_model(g, a.J_star, a.J_star, kappa, gamma, alphas)
                          : a.epsilon_formula;
    return a;
}

OptimumReport optimize_epsilon(const TwoSiteModel& m, const OptimizeOptions& opts) {
    validate(m);
    if (m.kappa == 0.0 && m.gamma == 0.0) throw domain_error("optimize_epsilon: kappa and gamma cannot both be zero");
    if (!(m.g > 0.0)) throw domain_error("optimize_epsilon: g must be > 0");
    if (opts.grid < 2) throw domain_error("optimize_epsilon: grid must be >= 2");

    OptimumReport rep;
    rep.analytic = analytic_optimum(m.g, m.kappa, m.gamma, opts.alphas);
    rep.C0 = cooperativity(m.g, m.kappa, m.gamma);

    const bool fit_J = opts.over == OptimizeOver::DeltaJ;
    double J_ref = m.Jrate;
    if (fit_J) {
        if (m.kappa > 0.0 && m.gamma > 0.0) J_ref = rep.analytic.J_star;
        else if (m.gamma == 0.0) J_ref = 100.0 * m.g;
        else J_ref = 10.0 * m.g;
    } else if (!(J_ref > 0.0)) {
        throw domain_error("optimize_epsilon: J must be > 0 when optimizing Delta only");
    }
    const double v_lo = 0.1, v_hi = 1.9;

    // x = (v) or (v, u) with Delta = v J and J = J_ref 10^u.
    auto objective = [&](const Eigen::VectorXd& x) {
        const double v = x(0);
        const double u = fit_J ? x(1) : 0.0;
        if (!(v > 0.0 && v < 2.0) || std::abs(u) > opts.decades) return std::numeric_limits<double>::infinity();
        const double J = J_ref * std::pow(10.0, u);
        const double Delta = v * J;
        if (opts.objective == Objective::linear_model) {
            return linear_error_model(m.g, Delta, J, m.kappa, m.gamma, opts.alphas);
        }
        try {
            return swap_fidelity(dispersive_model(m.g, Delta, J, m.kappa, m.gamma, m.omega0), opts.swap).epsilon;
        } catch (const domain_error&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    std::vector<Eigen::VectorXd> grid;
    for (int i = 0; i < opts.grid; ++i) {
        const double v = v_lo + (v_hi - v_lo) * i / (opts.grid - 1);
        if (!fit_J) {
            grid.push_back(Eigen::VectorXd::Constant(1, v));
            continue;
        }
        for (int j = 0; j < opts.grid; ++j) {
            Eigen::VectorXd x(2);
            x << v, -opts.decades + 2.0 * opts.decades * j / (opts.grid - 1);
            grid.push_back(x);
        }
    }
    const auto values = parallel_map(grid, objective);
    rep.evaluations = static_cast<int>(values.size());
    const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());

    NelderMeadOptions nm = opts.simplex;
    nm.initial_step = std::min(nm.initial_step, 0.5 * (v_hi - v_lo) / (opts.grid - 1));
    const auto res = nelder_mead(objective, grid[best], nm);
    rep.evaluations += res.evals;

    const Eigen::VectorXd& x = res.f <= values[best] ? res.x : grid[best];
    rep.epsilon_star = std::min(res.f, values[best]);
    rep.J_star = fit_J ? J_ref * std::pow(10.0, x(1)) : J_ref;
    rep.Delta_star = x(0) * rep.J_star;
    const bool on_edge = fit_J && std::abs(std::abs(x(1)) - opts.decades) < 1e-3;
    rep.converged = res.converged && !on_edge;
    return rep;
}

LineFit fit_through_origin(std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size() || x.size() < 2) throw domain_error("fit_through_origin: need >= 2 paired points");
    LineFit fit;
    double sxx = 0.0, sxy = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        mean += y[i];
    }
    mean /= static_cast<double>(y.size());
    fit.slope = sxy / sxx;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ss_res += (y[i] - fit.slope * x[i]) * (y[i] - fit.slope * x[i]);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
    fit.poor = fit.r2 < 0.98;
    fit.x = std::move(x);
    fit.y = std::move(y);
    return fit;
}

AlphaFit fit_alpha(const TwoSiteModel& base, const FitAlphaOptions& opts) {
    validate(base);
    if (opts.n_points < 2) throw domain_error("fit_alpha: n_points must be >= 2");
    if (!(opts.x_lo > 0.0) || !(opts.x_hi > opts.x_lo)) throw domain_error("fit_alpha: need 0 < x_lo < x_hi");
    const double J = base.Jrate, g = base.g;
    const TwoSiteModel lossless = dispersive_model(g, J, J, 0.0, 0.0, base.omega0);
    AlphaFit out;
    const auto eff = effective_model(lossless, 0.1, &out.warnings);
    const double D = J, D2 = -J;
    const double kappa_eff_per_kappa = g * g * (D * D + D2 * D2) / (D * D * D2 * D2);

    std::vector<double> xs(static_cast<std::size_t>(opts.n_points));
    for (int i = 0; i < opts.n_points; ++i) {
        xs[static_cast<std::size_t>(i)] = opts.x_lo + (opts.x_hi - opts.x_lo) * i / (opts.n_points - 1);
    }
    std::vector<TwoSiteModel> jobs{lossless};
    for (double x : xs) {
        TwoSiteModel mk = lossless;
        mk.kappa = x * eff.g_eff / kappa_eff_per_kappa;
        jobs.push_back(mk);
    }
    for (double x : xs) {
        TwoSiteModel mg = lossless;
        mg.gamma = x * eff.g_eff;
        jobs.push_back(mg);
    }
    const auto eps = parallel_map(jobs, [&](const TwoSiteModel& m) { return swap_fidelity(m, opts.swap).epsilon; });
    out.trajectories = static_cast<int>(jobs.size());
    out.epsilon0 = eps[0];

    const std::size_t n = xs.size();
    std::vector<double> xk, yk, yg;
    for (std::size_t i = 0; i < n; ++i) {
        xk.push_back(jobs[1 + i].kappa / eff.g_eff);
        yk.push_back(eps[1 + i] - out.epsilon0);
        yg.push_back(eps[1 + n + i] - out.epsilon0);
    }
    out.alpha_kappa_eff = fit_through_origin(xs, yk).slope;
    out.kappa = fit_through_origin(std::move(xk), std::move(yk));
    out.gamma = fit_through_origin(xs, std::move(yg));
    out.alpha_kappa = out.kappa.slope;
    out.alpha_gamma = out.gamma.slope;
    if (out.kappa.poor) out.warnings.push_back("fit_alpha: poor linearity in the kappa sweep (R^2 < 0.98)");
    if (out.gamma.poor) out.warnings.push_back("fit_alpha: poor linearity in the gamma sweep (R^2 < 0.98)");
    return out;
}

CooperativityGrid cooperativity_map(double g, const std::vector<double>& kappa, const std::vector<double>& T2) {
    if (kappa.empty() || T2.empty()) throw domain_error("cooperativity_map: empty range");
    for (double k : kappa) {
        if (!(k > 0.0)) throw domain_error("cooperativity_map: kappa values must be > 0");
    }
    for (double t : T2) {
        if (!(t > 0.0)) throw domain_error("cooperativity_map: T2 values must be > 0");
    }
    CooperativityGrid grid;
    grid.kappa = kappa;
    grid.T2 = T2;
    grid.C0.resize(static_cast<Eigen::Index>(kappa.size()), static_cast<Eigen::Index>(T2.size()));
    for (std::size_t i = 0; i < kappa.size(); ++i) {
        for (std::size_t j = 0; j < T2.size(); ++j) {
            grid.C0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cooperativity(g, kappa[i], pi / T2[j]);
        }
    }
    return grid;
}

} // namespace hml
