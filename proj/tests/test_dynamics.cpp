#include "hml/dynamics.hpp"
#include "hml/units.hpp"

#include <doctest.h>

#include <cmath>

using namespace hml;
using constants::pi;
using Eigen::MatrixXcd;

namespace {

std::vector<double> grid(double t_end, int n) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = t_end * i / (n - 1);
    return t;
}

// g = 1, J = 20: g/Delta = 0.05 at Delta = J.
TwoSiteModel lossless() { return dispersive_model(1.0, 20.0, 20.0, 0.0, 0.0); }

} // namespace

TEST_CASE("effective rates by substitution") {
    const double g = 0.7, J = 13.0;
    for (double D : {3.0, 13.0, 21.0, -5.0, 40.0}) {
        const auto e = effective_model(dispersive_model(g, D, J, 0.3, 0.1, 2.0));
        const double D2 = D - 2 * J;
        CHECK(e.Delta == doctest::Approx(D));
        CHECK(e.g_eff == doctest::Approx(g * g * (1 / D - 1 / D2)));
        CHECK(e.kappa_eff == doctest::Approx(0.3 * g * g * (D * D + D2 * D2) / (D * D * D2 * D2)));
        CHECK(e.Gamma_eff == doctest::Approx(0.3 * g * g * (D * D - D2 * D2) / (D * D * D2 * D2)));
        CHECK(e.omega_sigma_tilde == doctest::Approx(2.0 + J - D - g * g * (1 / D2 + 1 / D)));
        CHECK(e.C0 == doctest::Approx(g * g / (0.3 * 0.1)));
    }
    const auto at_J = effective_model(dispersive_model(g, J, J, 0.3, 0.0));
    CHECK(at_J.g_eff == doctest::Approx(2 * g * g / J));
    CHECK(at_J.kappa_eff == doctest::Approx(2 * 0.3 * g * g / (J * J)));
    CHECK(at_J.Gamma_eff == 0.0);
    CHECK(at_J.omega_sigma_tilde == doctest::Approx(dispersive_model(g, J, J, 0.3, 0.0).omega_sigma));

    const auto far = effective_model(dispersive_model(g, 1e9, J, 0.3, 0.0));
    CHECK(std::abs(far.g_eff) < 1e-9);
    CHECK(far.kappa_eff < 1e-9);
}

TEST_CASE("resonances and dispersive diagnostics") {
    CHECK_THROWS_AS(effective_model(dispersive_model(1.0, 0.0, 20.0, 0, 0)), domain_error);
    CHECK_THROWS_AS(effective_model(dispersive_model(1.0, 40.0, 20.0, 0, 0)), domain_error);
    Warnings w;
    const auto e = effective_model(dispersive_model(1.0, 5.0, 20.0, 0, 0), 0.1, &w);
    CHECK_FALSE(e.dispersive);
    CHECK(w.size() == 1);
    CHECK(effective_model(lossless()).dispersive);
}

TEST_CASE("lossless SWAP through the magnon bus") {
    const auto m = lossless();
    const auto e = effective_model(m);
    const auto out = swap_fidelity(m);
    CHECK(out.epsilon < 1e-3);
    CHECK(out.max_trace_drift < 1e-8);
    CHECK(out.max_antihermitian < 1e-10);
    // The coupling as written exchanges at g_eff / 2, so the full model peaks near pi / g_eff.
    CHECK(out.t_star * e.g_eff / pi == doctest::Approx(1.0).epsilon(0.02));
    CHECK(out.times.size() == 2048);

    SwapOptions first;
    first.t_max = pi / e.g_eff;
    const auto eff = effective_swap_fidelity(m, first);
    CHECK(eff.epsilon < 1e-9);
    CHECK(eff.t_star * e.g_eff / pi == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("full model follows the two-qubit model at half the printed rates") {
    const auto m = lossless();
    auto e = effective_model(m);
    e.g_eff *= 0.5;
    e.omega_sigma_tilde = m.omega_sigma + 0.5 * (e.omega_sigma_tilde - m.omega_sigma);
    const auto es = build_effective_system(m, e);
    const auto fm = build_full_model(m);
    const auto t = grid(pi / e.g_eff, 201);
    const auto a = evolve(es.system, projector(es.initial), t);
    const auto b = evolve(fm.system, projector(fm.initial), t);
    double worst = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double fa = (es.target.adjoint() * a.rho[i] * es.target)(0, 0).real();
        const double fb = (fm.target.adjoint() * b.rho[i] * fm.target)(0, 0).real();
        worst = std::max(worst, std::abs(fa - fb));
    }
    CHECK(worst < 5 * 0.05 * 0.05);
}

TEST_CASE("backends agree") {
    auto m = dispersive_model(1.0, 20.0, 20.0, 0.002, 0.001);
    const double tg = pi / effective_model(m).g_eff;
    SwapOptions a;
    a.t_max = 0.3 * tg;
    a.nt = 61;
    SwapOptions b = a;
    b.model.backend = Backend::truncated_fock;
    b.model.n_max = 2;
    b.evolve.step_factor = 0.03;
    const auto fa = swap_fidelity(m, a);
    const auto fb = swap_fidelity(m, b);
    REQUIRE(fa.fidelity.size() == fb.fidelity.size());
    for (std::size_t i = 0; i < fa.fidelity.size(); ++i) CHECK(std::abs(fa.fidelity[i] - fb.fidelity[i]) < 1e-8);
}

TEST_CASE("unitary limit keeps the state pure") {
    const auto m = lossless();
    const auto fm = build_full_model(m);
    const auto tr = evolve(fm.system, projector(fm.initial), grid(pi / effective_model(m).g_eff, 41));
    for (const auto& rho : tr.rho) CHECK(std::abs((rho * rho).trace().real() - 1.0) < 1e-8);
}

TEST_CASE("trivial couplings") {
    auto m = lossless();
    m.g = 0.0;
    SwapOptions o;
    o.t_max = 10.0;
    o.nt = 64;
    const auto none = swap_fidelity(m, o);
    for (double f : none.fidelity) CHECK(f == 0.0);
    CHECK_THROWS_AS(swap_fidelity(m), domain_error);

    // J = 0: each qubit talks to its own magnet only.
    TwoSiteModel iso{0.0, 0.0, -20.0, 1.0, 0.0, 0.0};
    o.t_max = 200.0;
    o.nt = 400;
    CHECK(swap_fidelity(iso, o).fidelity_max < 1e-12);

    // g = 0: populations stay put.
    const auto fm = build_full_model(m);
    const auto tr = evolve(fm.system, projector(fm.initial), grid(5.0, 11));
    for (const auto& rho : tr.rho) CHECK(rho(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single magnon decay") {
    const double kappa = 0.05;
    const auto m = dispersive_model(0.0, 20.0, 20.0, kappa, 0.0);
    const auto fm = build_full_model(m);
    const Eigen::VectorXcd plus = fm.f_plus.adjoint() * fm.vacuum;
    const auto t = grid(40.0, 41);
    const auto tr = evolve(fm.system, projector(plus), t);
    const MatrixXcd n = fm.f_plus.adjoint() * fm.f_plus;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double p = (n * tr.rho[i]).trace().real();
        CHECK(std::abs(p / std::exp(-kappa * t[i]) - 1.0) < 1e-6);
    }
}

TEST_CASE("qubit dephasing") {
    const double gamma = 0.02;
    const auto m = dispersive_model(0.0, 20.0, 20.0, 0.0, gamma);
    const auto fm = build_full_model(m);
    const Eigen::VectorXcd psi = (fm.initial + fm.target) / std::sqrt(2.0);
    const auto t = grid(30.0, 31);
    const auto tr = evolve(fm.system, projector(psi), t);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& rho = tr.rho[i];
        CHECK((fm.initial.adjoint() * rho * fm.initial)(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
        const double coh = std::abs((fm.initial.adjoint() * rho * fm.target)(0, 0));
        CHECK(coh == doctest::Approx(0.5 * std::exp(-4 * gamma * t[i])).epsilon(1e-8));
    }
}

TEST_CASE("free magnon modes oscillate at omega0 +- J") {
    const double omega0 = 100.0, J = 20.0;
    auto m = dispersive_model(0.0, J, J, 0.0, 0.0, omega0);
    FullModelOptions lab;
    lab.frame = 0.0;
    const auto fm = build_full_model(m, lab);
    const Eigen::VectorXcd psi =
        (fm.vacuum + fm.f_plus.adjoint() * fm.vacuum + fm.f_minus.adjoint() * fm.vacuum) / std::sqrt(3.0);
    const auto t = grid(0.05, 51);
    const auto tr = evolve(fm.system, projector(psi), t);
    for (int s : {+1, -1}) {
        const MatrixXcd& f = s > 0 ? fm.f_plus : fm.f_minus;
        double prev = 0, unwrapped = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double ph = std::arg((f * tr.rho[i]).trace());
            if (i > 0) unwrapped += std::remainder(ph - prev, 2 * pi);
            prev = ph;
        }
        const double freq = -unwrapped / t.back();
        CHECK(freq == doctest::Approx(omega0 + s * J).epsilon(1e-9));
    }
}

TEST_CASE("linear fits through the origin") {
    const auto exact = fit_through_origin({1, 2, 3, 4}, {2.5, 5, 7.5, 10});
    CHECK(exact.slope == doctest::Approx(2.5));
    CHECK(exact.r2 == doctest::Approx(1.0));
    CHECK_FALSE(exact.poor);
    const auto noisy = fit_through_origin({1, 2, 3, 4}, {3, 1, 4, 1});
    CHECK(noisy.poor);
    CHECK_THROWS_AS(fit_through_origin({1}, {1}), domain_error);
}

TEST_CASE("error grows monotonically with loss and the slopes collapse under rescaling") {
    FitAlphaOptions o;
    o.n_points = 6;
    const auto a = fit_alpha(dispersive_model(1.0, 20.0, 20.0, 0, 0), o);
    const auto b = fit_alpha(dispersive_model(3.0, 60.0, 60.0, 0, 0), o);
    for (const auto* fit : {&a.kappa, &a.gamma}) {
        for (std::size_t i = 1; i < fit->y.size(); ++i) CHECK(fit->y[i] > fit->y[i - 1]);
    }
    CHECK(a.trajectories == 13);
    CHECK(b.alpha_kappa == doctest::Approx(a.alpha_kappa).epsilon(0.05));
    CHECK(b.alpha_gamma == doctest::Approx(a.alpha_gamma).epsilon(0.05));
    CHECK(a.alpha_kappa > 0);
    CHECK(a.alpha_gamma > 0);
}

TEST_CASE("linear error model optimum") {
    const Alphas al;
    const double g = 1.0, kappa = 0.01, gamma = 0.001;
    OptimizeOptions o;
    o.objective = Objective::linear_model;
    const auto rep = optimize_epsilon(dispersive_model(g, 20, 20, kappa, gamma), o);
    CHECK(rep.epsilon_star == doctest::Approx(rep.analytic.epsilon_model).epsilon(1e-4));
    CHECK(rep.J_star == doctest::Approx(rep.analytic.J_star).epsilon(1e-2));
    CHECK(rep.Delta_star == doctest::Approx(rep.J_star).epsilon(1e-2));
    // The linear model's minimum is twice the quoted closed form.
    CHECK(rep.analytic.epsilon_model == doctest::Approx(2 * rep.analytic.epsilon_formula));
    CHECK(rep.analytic.epsilon_formula == doctest::Approx(std::sqrt(al.kappa * al.gamma / (2 * g * g / (kappa * gamma)))));

    const double s = 7.0;
    const auto scaled = optimize_epsilon(dispersive_model(s * g, s * 20, s * 20, s * kappa, s * gamma), o);
    CHECK(scaled.epsilon_star == doctest::Approx(rep.epsilon_star).epsilon(1e-6));
    CHECK(scaled.J_star == doctest::Approx(s * rep.J_star).epsilon(1e-3));

    const auto doubled = optimize_epsilon(dispersive_model(2 * g, 20, 20, kappa, gamma), o);
    CHECK(doubled.epsilon_star == doctest::Approx(0.5 * rep.epsilon_star).epsilon(1e-4));

    CHECK_THROWS_AS(optimize_epsilon(lossless(), o), domain_error);
}

TEST_CASE("cooperativity") {
    CHECK(cooperativity(2.0, 1.0, 4.0) == doctest::Approx(1.0));
    CHECK(std::isinf(cooperativity(1.0, 0.0, 1.0)));
    const auto map = cooperativity_map(1.0, std::vector<double>{1.0, 0.5}, std::vector<double>{pi, 2 * pi, 4 * pi});
    CHECK(map.C0.rows() == 2);
    CHECK(map.C0.cols() == 3);
    CHECK(map.C0(1, 0) == doctest::Approx(2 * map.C0(0, 0)));
    CHECK(map.C0(0, 0) == doctest::Approx(1.0));
    CHECK(map.C0(0, 2) == doctest::Approx(4.0));
}
