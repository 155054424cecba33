#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace hml::cli {

using nlohmann::json;

namespace {

// View of one JSON object with a dotted path and a fixed set of allowed keys.
class Section {
public:
    Section(const json& j, std::string path, std::set<std::string> allowed) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw config_error(path_.empty() ? "<root>" : path_, "expected an object");
        for (const auto& [key, _] : j_.items()) {
            if (!allowed.count(key)) throw config_error(child(key), "unknown key");
        }
    }

    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }
    const json& at(const std::string& key) const { return j_.at(key); }

    std::optional<double> number(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        const json& v = j_.at(key);
        if (!v.is_number()) throw config_error(child(key), "expected a number");
        return v.get<double>();
    }
    double require_number(const std::string& key) const {
        auto v = number(key);
        if (!v) throw config_error(child(key), "required field is missing");
        return *v;
    }
    std::optional<int> integer(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        const json& v = j_.at(key);
        if (!v.is_number_integer()) throw config_error(child(key), "expected an integer");
        return v.get<int>();
    }
    std::optional<std::string> string(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        const json& v = j_.at(key);
        if (!v.is_string()) throw config_error(child(key), "expected a string");
        return v.get<std::string>();
    }

private:
    const json& j_;
    std::string path_;
};

// Re-raises physics validation failures as config errors on the owning section.
template <typename F>
void validated(const std::string& path, F&& check) {
    try {
        check();
    } catch (const domain_error& e) {
        throw config_error(path, e.what());
    }
}

MaterialParams parse_material(const json& j, std::string& name) {
    if (j.is_string()) {
        name = j.get<std::string>();
        if (name == "yig") return yig_preset();
        throw config_error("material", "unknown preset '" + name + "'");
    }
    const Section s(j, "material", {"gamma0", "gammaq", "Ms", "ka", "DeltaNV"});
    MaterialParams m;
    m.gamma0 = s.require_number("gamma0");
    m.gammaq = s.require_number("gammaq");
    m.Ms = s.require_number("Ms");
    m.ka = s.require_number("ka");
    m.DeltaNV = s.require_number("DeltaNV");
    name = "custom";
    validated("material", [&] { validate(m); });
    return m;
}

} // namespace

std::string to_string(LatticeKind kind) {
    switch (kind) {
    case LatticeKind::chain:
        return "chain";
    case LatticeKind::ring:
        return "ring";
    case LatticeKind::checkerboard:
        return "checkerboard";
    }
    return "?";
}

LatticeKind parse_lattice_kind(const std::string& s, const std::string& path) {
    if (s == "chain") return LatticeKind::chain;
    if (s == "ring") return LatticeKind::ring;
    if (s == "checkerboard") return LatticeKind::checkerboard;
    throw config_error(path, "expected one of chain, ring, checkerboard");
}

RunConfig parse_config(const json& doc) {
    const Section root(doc, "", {"material", "loop", "placement", "magnet_radius", "qubit", "field", "lattice",
                                 "dynamics", "cooperativity", "output"});
    RunConfig cfg;
    if (root.has("material")) cfg.material = parse_material(root.at("material"), cfg.material_name);

    if (root.has("loop")) {
        const Section s(root.at("loop"), "loop", {"l", "tau", "Cap", "per_unit_L", "per_unit_C", "Bc"});
        LoopSpec loop;
        loop.l = s.require_number("l");
        loop.tau = s.require_number("tau");
        loop.Cap = s.number("Cap");
        loop.per_unit_L = s.number("per_unit_L");
        loop.per_unit_C = s.number("per_unit_C");
        cfg.Bc = s.number("Bc");
        if (cfg.Bc && !(*cfg.Bc > 0.0)) throw config_error("loop.Bc", "must be > 0");
        validated("loop", [&] { validate(loop, &cfg.warnings); });
        cfg.loop = loop;
    }
    if (root.has("placement")) {
        const Section s(root.at("placement"), "placement", {"d", "h"});
        Placement p;
        p.d = s.require_number("d");
        p.h = s.number("h").value_or(0.0);
        validated("placement", [&] { validate(p); });
        cfg.placement = p;
    }
    if (root.has("magnet_radius")) {
        cfg.magnet_radius = root.number("magnet_radius");
        if (!(*cfg.magnet_radius > 0.0)) throw config_error("magnet_radius", "must be > 0");
    }
    if (root.has("qubit")) {
        const Section s(root.at("qubit"), "qubit", {"r_q", "theta", "varphi"});
        QubitConfig q;
        q.r_q = s.require_number("r_q");
        q.theta = s.number("theta").value_or(constants::pi / 2.0);
        q.varphi = s.number("varphi").value_or(0.0);
        if (!(q.r_q > 0.0)) throw config_error("qubit.r_q", "must be > 0");
        if (cfg.magnet_radius && !(q.r_q > *cfg.magnet_radius)) {
            throw config_error("qubit.r_q", "qubit must sit outside the magnet (r_q > magnet_radius)");
        }
        if (!(q.theta >= 0.0 && q.theta <= constants::pi)) throw config_error("qubit.theta", "must lie in [0, pi]");
        cfg.qubit = q;
    }
    if (root.has("field")) {
        const Section s(root.at("field"), "field", {"B0"});
        cfg.field.B0 = s.require_number("B0");
        validated("field", [&] { validate(cfg.field); });
    }
    if (root.has("lattice")) {
        const Section s(root.at("lattice"), "lattice", {"kind", "N", "nk", "omega0", "J", "a", "boundary"});
        auto& L = cfg.lattice;
        if (auto k = s.string("kind")) L.kind = parse_lattice_kind(*k, "lattice.kind");
        L.N = s.integer("N");
        L.nk = s.integer("nk");
        L.omega0 = s.number("omega0");
        L.J = s.number("J");
        L.a = s.number("a");
        if (auto b = s.string("boundary")) {
            if (*b == "periodic") L.boundary = Boundary::periodic;
            else if (*b == "open") L.boundary = Boundary::open;
            else throw config_error("lattice.boundary", "expected periodic or open");
        }
        if (L.N && *L.N < 2) throw config_error("lattice.N", "must be >= 2");
        if (L.nk && *L.nk < 1) throw config_error("lattice.nk", "must be >= 1");
        if (L.a && !(*L.a > 0.0)) throw config_error("lattice.a", "must be > 0");
    }
    if (root.has("dynamics")) {
        const Section s(root.at("dynamics"), "dynamics",
                        {"g", "J", "Delta", "omega0", "kappa", "T2_star", "t_max", "n_t", "n_points", "backend",
                         "n_max"});
        auto& D = cfg.dynamics;
        D.g = s.number("g");
        D.J = s.number("J");
        D.Delta = s.number("Delta");
        D.omega0 = s.number("omega0").value_or(0.0);
        D.kappa = s.number("kappa").value_or(0.0);
        D.T2_star = s.number("T2_star");
        D.t_max = s.number("t_max");
        D.n_t = s.integer("n_t").value_or(D.n_t);
        D.n_points = s.integer("n_points").value_or(D.n_points);
        D.n_max = s.integer("n_max").value_or(D.n_max);
        if (auto b = s.string("backend")) {
            if (*b == "excitation_sector") D.backend = Backend::excitation_sector;
            else if (*b == "truncated_fock") D.backend = Backend::truncated_fock;
            else throw config_error("dynamics.backend", "expected excitation_sector or truncated_fock");
        }
        if (D.g && !(*D.g >= 0.0)) throw config_error("dynamics.g", "must be >= 0");
        if (D.J && !(*D.J > 0.0)) throw config_error("dynamics.J", "must be > 0");
        if (!(D.kappa >= 0.0)) throw config_error("dynamics.kappa", "must be >= 0");
        if (D.T2_star && !(*D.T2_star > 0.0)) throw config_error("dynamics.T2_star", "must be > 0");
        if (D.t_max && !(*D.t_max > 0.0)) throw config_error("dynamics.t_max", "must be > 0");
        if (D.n_t < 2) throw config_error("dynamics.n_t", "must be >= 2");
        if (D.n_points < 2) throw config_error("dynamics.n_points", "must be >= 2");
        if (D.n_max < 1) throw config_error("dynamics.n_max", "must be >= 1");
    }
    if (root.has("cooperativity")) {
        const Section s(root.at("cooperativity"), "cooperativity",
                        {"kappa_min", "kappa_max", "n_kappa", "T2_min", "T2_max", "n_T2"});
        auto& C = cfg.cooperativity;
        C.kappa_min = s.number("kappa_min").value_or(C.kappa_min);
        C.kappa_max = s.number("kappa_max").value_or(C.kappa_max);
        C.n_kappa = s.integer("n_kappa").value_or(C.n_kappa);
        C.T2_min = s.number("T2_min").value_or(C.T2_min);
        C.T2_max = s.number("T2_max").value_or(C.T2_max);
        C.n_T2 = s.integer("n_T2").value_or(C.n_T2);
        if (!(C.kappa_min > 0.0) || !(C.kappa_max >= C.kappa_min)) {
            throw config_error("cooperativity.kappa_max", "need 0 < kappa_min <= kappa_max");
        }
        if (!(C.T2_min > 0.0) || !(C.T2_max >= C.T2_min)) {
            throw config_error("cooperativity.T2_max", "need 0 < T2_min <= T2_max");
        }
        if (C.n_kappa < 1) throw config_error("cooperativity.n_kappa", "must be >= 1");
        if (C.n_T2 < 1) throw config_error("cooperativity.n_T2", "must be >= 1");
    }
    if (root.has("output")) {
        const Section s(root.at("output"), "output", {"path", "format"});
        cfg.output.path = s.string("path");
        cfg.output.format = s.string("format");
        if (cfg.output.format && *cfg.output.format != "csv" && *cfg.output.format != "json") {
            throw config_error("output.format", "expected csv or json");
        }
    }
    if (cfg.loop && cfg.placement && cfg.magnet_radius && cfg.placement->d <= *cfg.magnet_radius) {
        cfg.warnings.push_back("placement.d does not exceed magnet_radius: the magnet overlaps the wire");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("--config", "cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error("--config", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

} // namespace hml::cli
