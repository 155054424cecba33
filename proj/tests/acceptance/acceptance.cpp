// Acceptance run: one PASS/FAIL line per criterion, followed by indented diagnostics.

#include "commands.hpp"
#include "hml/couplings.hpp"
#include "hml/dynamics.hpp"
#include "hml/geometry.hpp"
#include "hml/lattice.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

using namespace hml;
using constants::pi;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
    bool pass{true};
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        notes.push_back((ok ? "ok   " : "FAIL ") + what);
    }
    void info(const std::string& what) { notes.push_back("     " + what); }
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int failures = 0;

void criterion(int n, const std::string& title, double budget_s, const std::function<void(Verdict&)>& body) {
    Verdict v;
    const auto t0 = Clock::now();
    try {
        body(v);
    } catch (const std::exception& e) {
        v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (budget_s > 0) v.require(secs < budget_s, fmt("runtime %.2f s (budget %.0f s)", secs, budget_s));
    else v.info(fmt("runtime %.2f s", secs));
    if (!v.pass) ++failures;
    std::printf("%s  %2d. %s\n", v.pass ? "PASS" : "FAIL", n, title.c_str());
    for (const auto& s : v.notes) std::printf("        %s\n", s.c_str());
    std::fflush(stdout);
}

double max_gap(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a.size() != b.size()) return INFINITY;
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

const json pair_config = json::parse(R"({
  "material": "yig",
  "loop": {"l": 30e-6, "tau": 50e-9},
  "placement": {"d": 1.5e-6, "h": 0},
  "magnet_radius": 1e-6,
  "field": {"B0": 0.07}
})");

// Dispersive two-site model used for the alpha regression and the consistency check.
TwoSiteModel reference_model() { return dispersive_model(1.0, 20.0, 20.0, 0.0, 0.0); }

Alphas measured{0.0, 0.0};
double alpha_kappa_eff = 0.0;  // slope against kappa_eff / g_eff

} // namespace

int main() {
    criterion(1, "geometry factor I at h = 0, l/d = 20", 1.0, [](Verdict& v) {
        const auto f = flux_integrals_circular(20.0, 0.0);
        v.info(fmt("Ix = %.6f, Iz = %.3g, quadrature error %.2g", f.Ix, f.Iz, f.error));
        v.require(std::abs(f.Ix / 1.9 - 1.0) <= 0.15, "Ix within 15% of 1.9");
    });

    criterion(2, "two-magnet tunneling ratio and rates", 1.0, [](Verdict& v) {
        Warnings w;
        const auto j = json::parse(cli::cmd_coupling(cli::parse_config(pair_config), {}, w));
        const double ratio = j.at("ratio").get<double>();
        const double J12 = j.at("J12").at("hz").get<double>();
        const double Jd = j.at("J12_dipolar").at("hz").get<double>();
        v.info(fmt("J12/2pi = %.4g MHz, Jd12/2pi = %.4g MHz", J12 * 1e-6, Jd * 1e-6));
        v.info(fmt("ratio %.2f; leading-order ratio %.2f; ratio with I taken linearly %.2f",
                   ratio, j.at("ratio_leading_order").get<double>(), j.at("ratio_I_linear").get<double>()));
        v.require(ratio >= 50.0 && ratio <= 115.0, "J12/Jd12 in [50, 115]");
        v.require(J12 > 5.85e6 / 10 && J12 < 5.85e6 * 10, "J12/2pi within 10x of 5.85 MHz");
        v.require(Jd > 0.09e6 / 10 && Jd < 0.09e6 * 10, "Jd12/2pi within 10x of 0.09 MHz");
    });

    criterion(3, "finite lattice matches Bloch spectra", 10.0, [](Verdict& v) {
        struct Case {
            LatticeKind kind;
            int N;
            const char* name;
        };
        for (const Case c : {Case{LatticeKind::chain, 8, "chain N=8"}, Case{LatticeKind::ring, 6, "ring N=6"},
                             Case{LatticeKind::checkerboard, 6, "checkerboard 6x6"}}) {
            LatticeSpec s;
            s.kind = c.kind;
            s.N = c.N;
            s.omega0 = 2 * pi * 4.0e9;
            s.Jrate = 2 * pi * 5.0e6;
            s.a = 63e-6;
            const double gap = max_gap(finite_lattice_oracle(s), bloch_spectrum_on_grid(s));
            v.require(gap <= 1e-9 * s.Jrate, fmt("%s: max deviation %.2e J", c.name, gap / s.Jrate));
        }
    });

    criterion(4, "chain band edges at omega0 +- 2J", 0.0, [](Verdict& v) {
        LatticeSpec s;
        s.omega0 = 2 * pi * 4.0e9;
        s.Jrate = 2 * pi * 5.0e6;
        s.N = 8;
        s.a = 63e-6;
        const auto b = chain_dispersion(s, 256);
        const double top = b.bands.maxCoeff(), bottom = b.bands.minCoeff();
        const double e_top = std::abs(top / (s.omega0 + 2 * s.Jrate) - 1.0);
        const double e_bot = std::abs(bottom / (s.omega0 - 2 * s.Jrate) - 1.0);
        v.require(e_top <= 1e-12, fmt("upper edge relative error %.2e", e_top));
        v.require(e_bot <= 1e-12, fmt("lower edge relative error %.2e", e_bot));
    });

    criterion(5, "qubit coupling scaling law", 1.0, [](Verdict& v) {
        const auto mat = yig_preset();
        double worst = 0;
        int points = 0;
        for (double R = 100; R <= 1000; R += 50) {
            for (double f = 1.02; f <= 3.0 + 1e-9; f += 0.04) {
                const double rq = R * f;
                const double law = 5.2e2 * std::pow(std::sqrt(R) / rq, 3) * 1e6;
                const double g = to_hz(qubit_coupling(pi / 2, 0.0, rq * 1e-9, R * 1e-9, mat, 0.07).g);
                worst = std::max(worst, std::abs(g / law - 1.0));
                ++points;
            }
        }
        v.require(worst <= 0.05, fmt("worst relative deviation %.3f%% over %d points", 100 * worst, points));
    });

    criterion(6, "alpha regression", 300.0, [](Verdict& v) {
        const auto fit = fit_alpha(reference_model());
        measured = {fit.alpha_gamma, fit.alpha_kappa};
        alpha_kappa_eff = fit.alpha_kappa_eff;
        v.info(fmt("g/Delta = 0.05, Delta = J, %d trajectories, eps0 = %.3g", fit.trajectories, fit.epsilon0));
        v.info(fmt("alpha_kappa against kappa_eff/g_eff: %.4g", fit.alpha_kappa_eff));
        v.require(std::abs(fit.alpha_gamma / 0.779 - 1.0) <= 0.15,
                  fmt("alpha_gamma = %.4f (0.779 +- 15%%)", fit.alpha_gamma));
        v.require(std::abs(fit.alpha_kappa / 0.006 - 1.0) <= 0.5,
                  fmt("alpha_kappa = %.5f (0.006 +- 50%%)", fit.alpha_kappa));
        v.require(fit.kappa.r2 >= 0.98, fmt("R2 kappa fit = %.5f", fit.kappa.r2));
        v.require(fit.gamma.r2 >= 0.98, fmt("R2 gamma fit = %.5f", fit.gamma.r2));
        v.require(fit.trajectories <= 40, "at most 40 trajectories");
    });

    criterion(7, "optimal error against sqrt(alpha_kappa alpha_gamma / (2 C0))", 600.0, [](Verdict& v) {
        if (!(measured.kappa > 0 && measured.gamma > 0)) throw std::runtime_error("criterion 6 produced no alphas");
        // kappa / gamma fixed so that the optimum sits well inside the dispersive regime.
        const double g = 1.0, r = 4.0e4;
        for (double C0 : {1e2, 1e3, 1e4}) {
            const double kappa = g * std::sqrt(r / C0), gamma = kappa / r;
            OptimizeOptions o;
            o.alphas = measured;
            const auto rep = optimize_epsilon(dispersive_model(g, 20.0, 20.0, kappa, gamma), o);
            const double formula = std::sqrt(measured.kappa * measured.gamma / (2 * C0));
            v.require(std::abs(rep.epsilon_star / formula - 1.0) <= 0.2,
                      fmt("C0 = %.0e: eps* = %.4g, formula %.4g (ratio %.3f), J*/g = %.1f, Delta*/J* = %.3f", C0,
                          rep.epsilon_star, formula, rep.epsilon_star / formula, rep.J_star / g,
                          rep.Delta_star / rep.J_star));
            // Same slopes read against the abscissa the linear error model actually uses, at that
            // model's own minimum (twice the closed form).
            const double consistent = 2 * std::sqrt(alpha_kappa_eff * measured.gamma / (2 * C0));
            v.info(fmt("  with the kappa_eff/g_eff slope %.4g: linear-model minimum %.4g (ratio %.3f)",
                       alpha_kappa_eff, consistent, rep.epsilon_star / consistent));
        }
    });

    criterion(8, "full model against the effective exchange rate", 0.0, [](Verdict& v) {
        const auto m = reference_model();
        const auto e = effective_model(m);
        const auto out = swap_fidelity(m);
        const double target = pi / (2 * e.g_eff);
        v.info(fmt("g_eff = %.6g (2 g^2 / J = %.6g)", e.g_eff, 2 * m.g * m.g / m.Jrate));
        v.require(std::abs(out.t_star / target - 1.0) <= 0.02,
                  fmt("t* = %.6g, pi/(2 g_eff) = %.6g, t* g_eff / pi = %.4f", out.t_star, target,
                      out.t_star * e.g_eff / pi));
        v.require(out.epsilon < 1e-3, fmt("eps = %.3g", out.epsilon));
    });

    criterion(9, "open-system sanity", 0.0, [](Verdict& v) {
        auto m = reference_model();
        m.kappa = 0.05;
        m.gamma = 0.002;
        const auto lossy = swap_fidelity(m);
        v.require(lossy.max_trace_drift < 1e-8, fmt("trace drift %.2e", lossy.max_trace_drift));
        v.require(lossy.max_antihermitian < 1e-10, fmt("Hermiticity %.2e", lossy.max_antihermitian));

        const auto clean = reference_model();
        const auto fm = build_full_model(clean);
        std::vector<double> t(101);
        const double t_end = 2 * pi / effective_model(clean).g_eff;
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = t_end * static_cast<double>(i) / 100.0;
        const auto tr = evolve(fm.system, projector(fm.initial), t);
        double purity = 0;
        for (const auto& rho : tr.rho) purity = std::max(purity, std::abs((rho * rho).trace().real() - 1.0));
        v.require(purity < 1e-8, fmt("unitary purity deviation %.2e", purity));

        const double kappa = 0.05;
        const auto decay = build_full_model(dispersive_model(0.0, 20.0, 20.0, kappa, 0.0));
        const Eigen::VectorXcd plus = decay.f_plus.adjoint() * decay.vacuum;
        std::vector<double> td(81);
        for (std::size_t i = 0; i < td.size(); ++i) td[i] = 0.5 * static_cast<double>(i);
        const auto trd = evolve(decay.system, projector(plus), td);
        const Eigen::MatrixXcd n = decay.f_plus.adjoint() * decay.f_plus;
        double worst = 0;
        for (std::size_t i = 0; i < td.size(); ++i) {
            worst = std::max(worst, std::abs((n * trd.rho[i]).trace().real() / std::exp(-kappa * td[i]) - 1.0));
        }
        v.require(worst < 1e-6, fmt("single-mode decay relative error %.2e", worst));
    });

    criterion(10, "property suite", 0.0, [](Verdict& v) {
        for (const char* exe : {HML_TEST_UNITS, HML_TEST_QUADRATURE, HML_TEST_GEOMETRY, HML_TEST_COUPLINGS,
                                HML_TEST_LATTICE, HML_TEST_LINDBLAD, HML_TEST_DYNAMICS, HML_TEST_CLI}) {
            const std::string cmd = std::string(exe) + " -m > /dev/null 2>&1";
            const int status = std::system(cmd.c_str());
            const std::string name = std::string(exe).substr(std::string(exe).find_last_of('/') + 1);
            v.require(status == 0, name);
        }
        // Large-loop limit of the flux factors; the unit suite tolerates its failure, so it is judged here.
        double worst_x = 0, worst_z = 0;
        for (double h = 0.0; h <= 2.0 + 1e-12; h += 0.25) {
            const auto a = flux_integrals_circular(100.0, h);
            const auto b = flux_integrals_circular(1000.0, h);
            worst_x = std::max(worst_x, std::abs(a.Ix - b.Ix) / std::abs(b.Ix));
            if (h > 0) worst_z = std::max(worst_z, std::abs(a.Iz - b.Iz) / std::abs(b.Iz));
        }
        v.require(worst_z <= 0.02, fmt("Iz at l/d = 100 vs 1000, h/d <= 2: worst %.2f%%", 100 * worst_z));
        v.require(worst_x <= 0.02, fmt("Ix at l/d = 100 vs 1000, h/d <= 2: worst %.2f%%", 100 * worst_x));
    });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
