#include "commands.hpp"

#include "hml/couplings.hpp"
#include "hml/parallel.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace hml::cli {

using nlohmann::json;
using constants::pi;

// --------------------------------------------------------------------------------
// Formatting

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double round12(double v) {
    if (!std::isfinite(v)) return v;
    return std::strtod(format_number(v).c_str(), nullptr);
}

namespace {

json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round12(v);
}

json freq(double omega) { return json{{"rad_s", num(omega)}, {"hz", num(to_hz(omega))}}; }

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string csv() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
        os << '\n';
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_number(r[i]);
            os << '\n';
        }
        return os.str();
    }

    json to_json() const {
        json rs = json::array();
        for (const auto& r : rows) {
            json row = json::array();
            for (double v : r) row.push_back(num(v));
            rs.push_back(std::move(row));
        }
        return json{{"columns", columns}, {"rows", std::move(rs)}};
    }
};

std::string render_json(json doc, const Warnings& warnings) {
    doc["warnings"] = warnings;
    return doc.dump(2) + "\n";
}

std::string render_table(const Table& t, const RunConfig& cfg) {
    if (cfg.output.format && *cfg.output.format == "json") return t.to_json().dump(2) + "\n";
    return t.csv();
}

bool wants_json(const RunConfig& cfg, bool default_json) {
    if (cfg.output.format) return *cfg.output.format == "json";
    return default_json;
}

template <typename T>
const T& need(const std::optional<T>& v, const std::string& path) {
    if (!v) throw config_error(path, "required for this command");
    return *v;
}

// Two identical magnets on opposite sides of one loop. The pair axis is the moment axis z, so
// theta_12 = 0; h is applied along x.
struct PairPhysics {
    double F{0};
    FluxFactors flux;
    double L_full{0};
    double r12{0};
    double J12{0};
    double Jd12{0};
    double omega_j{0};
    double gauge_residual{0};
};

PairPhysics pair_physics(const RunConfig& cfg, Warnings& warnings) {
    const auto& loop = need(cfg.loop, "loop");
    const auto& place = need(cfg.placement, "placement");
    const double R = need(cfg.magnet_radius, "magnet_radius");
    PairPhysics p;
    p.F = magnet_moment(R, cfg.material).F;
    p.flux = flux_factors_circular(loop, place, cfg.material, p.F);
    p.L_full = loop_inductance(loop, InductanceModel::full, &warnings);
    const double x = loop.l + place.d;
    std::vector<MagnetSite> sites{{Vec3(place.h, 0.0, -x), place.d, p.flux}, {Vec3(place.h, 0.0, x), place.d, p.flux}};
    const auto model = build_quadratic_model(sites, loop, cfg.material, cfg.field, p.F);
    const auto gauge = absorb_tunneling_phases(model.J);
    p.r12 = 2.0 * x;
    p.J12 = gauge.J(0, 1);
    p.gauge_residual = gauge.residual;
    p.Jd12 = model.Jd(0, 1);
    p.omega_j = model.omega(0);
    return p;
}

double isolated_magnet_frequency(const RunConfig& cfg) {
    return cfg.material.gamma0 * cfg.field.B0 + 2.0 * cfg.material.gamma0 * cfg.material.ka / cfg.material.Ms;
}

QubitCoupling qubit_at(const RunConfig& cfg, double theta) {
    const auto& q = need(cfg.qubit, "qubit");
    const double R = need(cfg.magnet_radius, "magnet_radius");
    return qubit_coupling(theta, q.varphi, q.r_q, R, cfg.material, cfg.field.B0);
}

// Dynamics parameters: explicit values win; g falls back to the configured qubit, J to g/0.05
// and Delta to J.
TwoSiteModel dynamics_model(const RunConfig& cfg) {
    const auto& D = cfg.dynamics;
    double g = 0.0;
    if (D.g) g = *D.g;
    else if (cfg.qubit && cfg.magnet_radius) g = qubit_at(cfg, cfg.qubit->theta).g;
    else throw config_error("dynamics.g", "required unless qubit and magnet_radius are given");
    const double J = D.J.value_or(g / 0.05);
    if (!(J > 0.0)) throw config_error("dynamics.J", "must be > 0");
    const double Delta = D.Delta.value_or(J);
    const double gamma = D.T2_star ? pi / *D.T2_star : 0.0;
    return dispersive_model(g, Delta, J, D.kappa, gamma, D.omega0);
}

SwapOptions swap_options(const RunConfig& cfg, bool keep_curve) {
    SwapOptions o;
    o.model.backend = cfg.dynamics.backend;
    o.model.n_max = cfg.dynamics.n_max;
    o.nt = cfg.dynamics.n_t;
    o.t_max = cfg.dynamics.t_max;
    o.keep_curve = keep_curve;
    return o;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

std::vector<double> logspace(double a, double b, int n) {
    auto v = linspace(std::log10(a), std::log10(b), n);
    for (double& x : v) x = std::pow(10.0, x);
    return v;
}

void append_freq_columns(std::vector<std::string>& cols, const std::string& name) {
    cols.push_back(name + "_rad_s");
    cols.push_back(name + "_hz");
}

void append_freq(std::vector<double>& row, double omega) {
    row.push_back(omega);
    row.push_back(to_hz(omega));
}

void require_sweep_key(const CommandOptions& opt, std::initializer_list<const char*> keys) {
    if (!opt.sweep) return;
    for (const char* k : keys) {
        if (opt.sweep->key == k) return;
    }
    throw config_error("--sweep", "unsupported sweep key '" + opt.sweep->key + "' for this command");
}

} // namespace

// --------------------------------------------------------------------------------
// Sweep parsing

double parse_scalar(const std::string& text) {
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw config_error("--sweep", "cannot parse '" + text + "'");
        }
        if (used != s.size()) throw config_error("--sweep", "cannot parse '" + text + "'");
        return v;
    };
    if (text == "pi") return pi;
    if (text.size() > 3 && text.compare(text.size() - 3, 3, "*pi") == 0) {
        return number(text.substr(0, text.size() - 3)) * pi;
    }
    if (text.size() > 3 && text.compare(0, 3, "pi/") == 0) return pi / number(text.substr(3));
    return number(text);
}

SweepSpec parse_sweep(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw config_error("--sweep", "expected key=a:b:n");
    SweepSpec s;
    s.key = text.substr(0, eq);
    const std::string rest = text.substr(eq + 1);
    const auto c1 = rest.find(':');
    const auto c2 = c1 == std::string::npos ? c1 : rest.find(':', c1 + 1);
    if (c2 == std::string::npos) throw config_error("--sweep", "expected key=a:b:n");
    s.from = parse_scalar(rest.substr(0, c1));
    s.to = parse_scalar(rest.substr(c1 + 1, c2 - c1 - 1));
    const std::string n = rest.substr(c2 + 1);
    try {
        std::size_t used = 0;
        s.n = std::stoi(n, &used);
        if (used != n.size()) throw std::invalid_argument(n);
    } catch (const std::exception&) {
        throw config_error("--sweep", "point count must be an integer");
    }
    if (s.n < 1) throw config_error("--sweep", "point count must be >= 1");
    return s;
}

std::vector<double> SweepSpec::values() const { return linspace(from, to, n); }

// --------------------------------------------------------------------------------
// geometry

std::string cmd_geometry(const RunConfig& cfg, const CommandOptions& opt, Warnings& warnings) {
    require_sweep_key(opt, {"h_over_d"});
    const auto& loop = need(cfg.loop, "loop");
    const auto& place = need(cfg.placement, "placement");
    const double l_over_d = opt.l_over_d.value_or(loop.l / place.d);

    if (opt.sweep) {
        const auto hs = opt.sweep->values();
        const auto rows = parallel_map(hs, [&](double h) {
            if (h < 0.0) throw domain_error("h_over_d must be >= 0");
            const auto I = flux_integrals_circular(l_over_d, h);
            return std::vector<double>{h, I.Ix, I.Iz};
        });
        Table t{{"h_over_d", "Ix", "Iz"}, rows};
        return render_table(t, cfg);
    }

    const auto I = flux_integrals_circular(l_over_d, place.h / place.d);
    const double Phi_e = constants::hbar * cfg.material.gamma0 * constants::mu0 / (4.0 * pi * place.d);
    json doc;
    doc["l_over_d"] = num(l_over_d);
    doc["h_over_d"] = num(place.h / place.d);
    doc["Ix"] = num(I.Ix);
    doc["Iy"] = 0.0;
    doc["Iz"] = num(I.Iz);
    doc["quadrature_error"] = num(I.error);
    doc["L_full"] = num(loop_inductance(loop, InductanceModel::full, &warnings));
    doc["L_leading_log"] = num(loop_inductance(loop, InductanceModel::leading_log));
    doc["Phi_e"] = num(Phi_e);
    doc["d_c"] = nullptr;
    doc["Phi_bias"] = nullptr;
    if (cfg.magnet_radius) {
        const double R = *cfg.magnet_radius;
        const double F = magnet_moment(R, cfg.material).F;
        doc["F"] = num(F);
        doc["Phi_bias"] = num(flux_factors_circular(loop, place, cfg.material, F).Phi_bias);
        if (cfg.Bc) doc["d_c"] = num(critical_distance(R, cfg.material, *cfg.Bc, loop.tau));
        if (place.d > 0.5 * loop.tau) doc["wire_field_T"] = num(wire_field(R, cfg.material, place.d, loop.tau));
        if (place.d > loop.tau) doc["J_bone"] = freq(bone_tunneling(place.d, loop.tau, F, cfg.material, R, &warnings));
    }
    if (loop.per_unit_L && loop.per_unit_C) {
        json modes = json::array();
        for (double w : resonator_mode_frequencies(loop, 3)) modes.push_back(freq(w));
        doc["resonator_modes"] = modes;
    }
    return render_json(doc, warnings);
}

// --------------------------------------------------------------------------------
// coupling

std::string cmd_coupling(const RunConfig& cfg, const CommandOptions& opt, Warnings& warnings) {
    require_sweep_key(opt, {"theta", "B0"});
    if (opt.sweep && opt.sweep->key == "theta") {
        std::vector<std::string> cols{"theta_rad"};
        for (const char* c : {"omega_sigma_bare", "xi_theta", "g_theta", "W_theta", "omega_sigma", "xi_abs", "g", "W"}) {
            append_freq_columns(cols, c);
        }
        cols.push_back("Theta_rad");
        Table t{cols, {}};
        for (double th : opt.sweep->values()) {
            const auto q = qubit_at(cfg, th);
            std::vector<double> row{th};
            for (double w : {q.omega_sigma_bare, q.xi_theta, q.g_theta, q.W_theta, q.omega_sigma, std::abs(q.xi), q.g, q.W}) {
                append_freq(row, w);
            }
            row.push_back(q.Theta);
            t.rows.push_back(std::move(row));
        }
        return render_table(t, cfg);
    }
    if (opt.sweep && opt.sweep->key == "B0") {
        const auto& qc = need(cfg.qubit, "qubit");
        std::vector<std::string> cols{"B0_T"};
        for (const char* c : {"omega0", "omega_plus", "omega_minus", "omega_sigma"}) append_freq_columns(cols, c);
        Table t{cols, {}};
        for (double B0 : opt.sweep->values()) {
            RunConfig c = cfg;
            c.field.B0 = B0;
            validate(c.field);
            const auto p = pair_physics(c, warnings);
            const auto q = qubit_at(c, qc.theta);
            std::vector<double> row{B0};
            for (double w : {p.omega_j, p.omega_j + std::abs(p.J12), p.omega_j - std::abs(p.J12), q.omega_sigma}) {
                append_freq(row, w);
            }
            t.rows.push_back(std::move(row));
        }
        return render_table(t, cfg);
    }

    if (!cfg.loop && !cfg.qubit) throw config_error("loop", "coupling needs a loop/placement or a qubit section");
    json doc;
    std::optional<double> omega_magnon;
    if (cfg.loop) {
        const auto p = pair_physics(cfg, warnings);
        omega_magnon = p.omega_j;
        const double ratio = std::abs(p.J12 / p.Jd12);
        doc["F"] = num(p.F);
        doc["Ix"] = num(p.flux.Ix);
        doc["Iz"] = num(p.flux.Iz);
        doc["L_full"] = num(p.L_full);
        doc["r12"] = num(p.r12);
        doc["J12"] = freq(p.J12);
        // Reading I_ij = I (one flux factor) instead of I_i* I_j.
        doc["J12_I_linear"] = p.flux.Ix != 0.0 ? freq(p.J12 / p.flux.Ix) : json(nullptr);
        doc["J12_dipolar"] = freq(p.Jd12);
        doc["ratio"] = num(ratio);
        doc["ratio_I_linear"] = p.flux.Ix != 0.0 ? num(ratio / std::abs(p.flux.Ix)) : json(nullptr);
        const auto& loop = *cfg.loop;
        const double ld = loop.l / cfg.placement->d;
        doc["ratio_leading_order"] =
            num(ld * ld * 2.0 * p.flux.Ix * p.flux.Ix / (pi * std::log(8.0 * loop.l / loop.tau)));
        doc["omega_j"] = freq(p.omega_j);
        doc["gauge_residual"] = num(p.gauge_residual);
    }
    if (cfg.qubit) {
        const auto& qc = *cfg.qubit;
        const auto q = qubit_at(cfg, qc.theta);
        const double R = need(cfg.magnet_radius, "magnet_radius");
        const auto site =
            jaynes_cummings_site(q, omega_magnon.value_or(isolated_magnet_frequency(cfg)), qc.r_q, R, cfg.material, &warnings);
        doc["g_dressed"] = freq(q.g);
        doc["g_maintext"] = freq(site.g_maintext);
        doc["omega_sigma"] = freq(q.omega_sigma);
        doc["omega_sigma_maintext"] = freq(site.omega_sigma);
        doc["omega_q"] = freq(q.omega_q);
        doc["xi"] = freq(std::abs(q.xi));
        doc["W"] = freq(q.W);
        doc["Theta"] = num(q.Theta);
        doc["rwa_valid"] = site.rwa_valid;
    }
    return render_json(doc, warnings);
}

// --------------------------------------------------------------------------------
// bands

std::string cmd_bands(const RunConfig& cfg, const CommandOptions& opt, Warnings& warnings) {
    if (opt.sweep) throw config_error("--sweep", "bands does not take a sweep");
    const auto& L = cfg.lattice;
    LatticeSpec spec;
    spec.kind = opt.kind ? *opt.kind : need(L.kind, "lattice.kind");
    spec.N = L.N.value_or(8);
    spec.boundary = L.boundary;
    const int nk = opt.nk.value_or(L.nk.value_or(64));
    if (nk < 1) throw config_error("--nk", "must be >= 1");

    if (L.omega0 && L.J) {
        spec.omega0 = *L.omega0;
        spec.Jrate = *L.J;
    } else if (cfg.loop && cfg.placement && cfg.magnet_radius) {
        const auto p = pair_physics(cfg, warnings);
        spec.omega0 = L.omega0.value_or(p.omega_j);
        spec.Jrate = L.J.value_or(p.J12);
    } else {
        throw config_error(L.omega0 ? "lattice.J" : "lattice.omega0",
                           "required unless loop, placement and magnet_radius are given");
    }
    if (L.a) spec.a = *L.a;
    else if (spec.kind == LatticeKind::ring) spec.a = 1.0;
    else if (cfg.loop && cfg.placement) spec.a = lattice_constant(spec.kind, cfg.loop->l, cfg.placement->d);
    else throw config_error("lattice.a", "required unless loop and placement are given");
    validate(spec);

    const bool as_json = wants_json(cfg, false);
    Table t;
    BandResult bands;
    switch (spec.kind) {
    case LatticeKind::chain:
        bands = chain_dispersion(spec, nk);
        t.columns = {"kx", "band_index", "omega_rad_s", "omega_hz"};
        for (std::size_t i = 0; i < bands.kpoints.size(); ++i) {
            const double w = bands.bands(static_cast<Eigen::Index>(i), 0);
            t.rows.push_back({bands.kpoints[i].x(), 0.0, w, to_hz(w)});
        }
        break;
    case LatticeKind::checkerboard:
        bands = checkerboard_bands(spec, nk);
        t.columns = {"kx", "ky", "band_index", "omega_rad_s", "omega_hz"};
        for (std::size_t i = 0; i < bands.kpoints.size(); ++i) {
            for (Eigen::Index b = 0; b < 2; ++b) {
                const double w = bands.bands(static_cast<Eigen::Index>(i), b);
                t.rows.push_back({bands.kpoints[i].x(), bands.kpoints[i].y(), double(b), w, to_hz(w)});
            }
        }
        break;
    case LatticeKind::ring: {
        const auto ev = ring_spectrum(spec);
        t.columns = {"band_index", "omega_rad_s", "omega_hz"};
        for (std::size_t i = 0; i < ev.size(); ++i) t.rows.push_back({double(i), ev[i], to_hz(ev[i])});
        break;
    }
    }
    if (!as_json) return t.csv();

    json doc;
    doc["kind"] = to_string(spec.kind);
    doc["omega0"] = freq(spec.omega0);
    doc["J"] = freq(spec.Jrate);
    doc["a"] = num(spec.a);
    doc["N"] = spec.N;
    doc["nk"] = nk;
    json edges = json::array();
    if (spec.kind == LatticeKind::ring) {
        edges.push_back({{"min", freq(t.rows.front()[1])}, {"max", freq(t.rows.back()[1])}});
    } else {
        for (Eigen::Index b = 0; b < bands.bands.cols(); ++b) {
            edges.push_back({{"min", freq(bands.bands.col(b).minCoeff())}, {"max", freq(bands.bands.col(b).maxCoeff())}});
        }
    }
    doc["bands"] = edges;
    const long sites = spec.kind == LatticeKind::checkerboard ? 2L * spec.N * spec.N : spec.N;
    if (spec.boundary == Boundary::periodic && sites <= finite_lattice_budget) {
        const auto a = finite_lattice_oracle(spec);
        const auto b = bloch_spectrum_on_grid(spec);
        double dev = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) dev = std::max(dev, std::abs(a[i] - b[i]));
        doc["oracle_max_deviation"] = freq(dev);
    }
    if (spec.kind == LatticeKind::checkerboard) {
        const auto rep = closed_form_report(spec, nk);
        const auto saddle = paper_closed_form_bands(spec, Vec2(pi / (2.0 * spec.a), pi / (2.0 * spec.a)));
        doc["closed_form"] = {{"flagged_points", rep.flagged},
                              {"complex_points", rep.complex_points},
                              {"total_points", rep.rows.size()},
                              {"max_deviation", freq(rep.max_deviation)},
                              {"saddle_plus", freq(saddle.plus)},
                              {"saddle_minus", freq(saddle.minus)}};
    }
    return render_json(doc, warnings);
}

// --------------------------------------------------------------------------------
// swap

std::string cmd_swap(const RunConfig& cfg, const CommandOptions& opt, Warnings& warnings) {
    if (opt.sweep) throw config_error("--sweep", "swap does not take a sweep");
    const TwoSiteModel m = dynamics_model(cfg);
    const bool as_json = wants_json(cfg, false);
    const auto eff = effective_model(m, 0.1, &warnings);
    const auto out = swap_fidelity(m, swap_options(cfg, !as_json));
    warnings.insert(warnings.end(), out.warnings.begin(), out.warnings.end());
    if (!as_json) {
        Table t{{"t_s", "fidelity"}, {}};
        for (std::size_t i = 0; i < out.times.size(); ++i) t.rows.push_back({out.times[i], out.fidelity[i]});
        return t.csv();
    }
    json doc;
    doc["t_star_s"] = num(out.t_star);
    doc["epsilon"] = num(out.epsilon);
    doc["g_eff_rad_s"] = num(eff.g_eff);
    doc["kappa_eff_rad_s"] = num(eff.kappa_eff);
    doc["Gamma_eff_rad_s"] = num(eff.Gamma_eff);
    doc["C0"] = num(eff.C0);
    doc["alpha_gamma"] = nullptr;
    doc["alpha_kappa"] = nullptr;
    doc["g_eff_hz"] = num(to_hz(eff.g_eff));
    doc["t_max_s"] = num(out.t_max);
    doc["fidelity_max"] = num(out.fidelity_max);
    doc["Delta_rad_s"] = num(eff.Delta);
    doc["max_trace_drift"] = num(out.max_trace_drift);
    return render_json(doc, warnings);
}

// --------------------------------------------------------------------------------
// fit-alpha

std::string cmd_fit_alpha(const RunConfig& cfg, const CommandOptions& opt, Warnings& warnings) {
    if (opt.sweep) throw config_error("--sweep", "fit-alpha does not take a sweep");
    const TwoSiteModel m = dynamics_model(cfg);
    FitAlphaOptions fo;
    fo.n_points = cfg.dynamics.n_points;
    fo.swap = swap_options(cfg, false);
    const auto fit = fit_alpha(m, fo);
    warnings.insert(warnings.end(), fit.warnings.begin(), fit.warnings.end());
    if (!wants_json(cfg, true)) {
        Table t{{"series", "x", "delta_epsilon"}, {}};
        for (std::size_t i = 0; i < fit.kappa.x.size(); ++i) t.rows.push_back({0.0, fit.kappa.x[i], fit.kappa.y[i]});
        for (std::size_t i = 0; i < fit.gamma.x.size(); ++i) t.rows.push_back({1.0, fit.gamma.x[i], fit.gamma.y[i]});
        return t.csv();
    }
    auto points = [](const LineFit& f) {
        json arr = json::array();
        for (std::size_t i = 0; i < f.x.size(); ++i) arr.push_back({{"x", num(f.x[i])}, {"delta_epsilon", num(f.y[i])}});
        return arr;
    };
    json doc;
    doc["alpha_gamma"] = num(fit.alpha_gamma);
    doc["alpha_kappa"] = num(fit.alpha_kappa);
    doc["r2_gamma"] = num(fit.gamma.r2);
    doc["r2_kappa"] = num(fit.kappa.r2);
    doc["alpha_kappa_vs_kappa_eff"] = num(fit.alpha_kappa_eff);
    doc["epsilon0"] = num(fit.epsilon0);
    doc["trajectories"] = fit.trajectories;
    doc["g"] = freq(m.g);
    doc["J"] = freq(m.Jrate);
    doc["points_kappa"] = points(fit.kappa);
    doc["points_gamma"] = points(fit.gamma);
    return render_json(doc, warnings);
}

// --------------------------------------------------------------------------------
// cooperativity

std::string cmd_cooperativity(const RunConfig& cfg, const CommandOptions& opt, Warnings& warnings) {
    if (opt.sweep) throw config_error("--sweep", "cooperativity does not take a sweep");
    const TwoSiteModel m = dynamics_model(cfg);
    const auto& C = cfg.cooperativity;
    const auto grid = cooperativity_map(m.g, logspace(C.kappa_min, C.kappa_max, C.n_kappa),
                                        logspace(C.T2_min, C.T2_max, C.n_T2));
    if (!wants_json(cfg, false)) {
        Table t{{"kappa_rad_s", "kappa_hz", "T2_s", "gamma_rad_s", "C0"}, {}};
        for (std::size_t i = 0; i < grid.kappa.size(); ++i) {
            for (std::size_t j = 0; j < grid.T2.size(); ++j) {
                t.rows.push_back({grid.kappa[i], to_hz(grid.kappa[i]), grid.T2[j], pi / grid.T2[j],
                                  grid.C0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
            }
        }
        return t.csv();
    }
    json doc;
    doc["g"] = freq(m.g);
    json ks = json::array(), ts = json::array(), c0 = json::array();
    for (double k : grid.kappa) ks.push_back(num(k));
    for (double t2 : grid.T2) ts.push_back(num(t2));
    for (Eigen::Index i = 0; i < grid.C0.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < grid.C0.cols(); ++j) row.push_back(num(grid.C0(i, j)));
        c0.push_back(std::move(row));
    }
    doc["kappa_rad_s"] = ks;
    doc["T2_s"] = ts;
    doc["C0"] = c0;
    return render_json(doc, warnings);
}

// --------------------------------------------------------------------------------
// Entry point

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hybrid magnetic lattice calculations", "hml"};
    app.require_subcommand(1);
    std::string config_path, out_path, sweep, kind;
    std::optional<double> l_over_d;
    std::optional<int> nk;

    struct Sub {
        const char* name;
        const char* help;
        std::string (*fn)(const RunConfig&, const CommandOptions&, Warnings&);
    };
    const Sub subs[] = {
        {"geometry", "flux factors, inductance and critical distance", cmd_geometry},
        {"coupling", "magnon tunneling and qubit couplings", cmd_coupling},
        {"bands", "lattice band structure", cmd_bands},
        {"swap", "qubit SWAP fidelity through the magnon bus", cmd_swap},
        {"fit-alpha", "linear error coefficients", cmd_fit_alpha},
        {"cooperativity", "cooperativity map", cmd_cooperativity},
    };
    std::vector<CLI::App*> handles;
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_path, "output file (default: output.path or stdout)");
        if (std::string(s.name) == "geometry" || std::string(s.name) == "coupling") {
            sub->add_option("--sweep", sweep, "key=a:b:n");
        }
        if (std::string(s.name) == "geometry") sub->add_option("--l_over_d", l_over_d, "override l/d for the flux factors");
        if (std::string(s.name) == "bands") {
            sub->add_option("--kind", kind, "chain, ring or checkerboard");
            sub->add_option("--nk", nk, "k-points per dimension");
        }
        handles.push_back(sub);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    }

    try {
        std::size_t which = 0;
        while (which < handles.size() && !handles[which]->parsed()) ++which;
        const RunConfig cfg = load_config(config_path);
        CommandOptions opt;
        if (!sweep.empty()) opt.sweep = parse_sweep(sweep);
        opt.l_over_d = l_over_d;
        if (l_over_d && !(*l_over_d > 0.0)) throw config_error("--l_over_d", "must be > 0");
        if (!kind.empty()) opt.kind = parse_lattice_kind(kind, "--kind");
        opt.nk = nk;

        Warnings warnings = cfg.warnings;
        const std::string text = subs[which].fn(cfg, opt, warnings);
        for (const auto& w : warnings) err << "warning: " << w << "\n";

        const std::string target = !out_path.empty() ? out_path : cfg.output.path.value_or("");
        if (target.empty()) {
            out << text;
        } else {
            std::ofstream f(target, std::ios::binary);
            if (!f) throw config_error("--out", "cannot write '" + target + "'");
            f << text;
        }
        return exit_ok;
    } catch (const config_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const domain_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_domain;
    } catch (const convergence_error& e) {
        err << "error: " << e.what() << " (achieved " << e.achieved() << ")\n";
        return exit_convergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
}

} // namespace hml::cli
