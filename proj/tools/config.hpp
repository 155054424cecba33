// config.hpp — Run configuration for the hml command-line tool.
//
// A config is one JSON object. Unknown keys anywhere are rejected; errors name the offending
// field path (e.g. "loop.tau"). Physical values are validated when the file is loaded.

#pragma once

#include "hml/dynamics.hpp"
#include "hml/errors.hpp"
#include "hml/geometry.hpp"
#include "hml/lattice.hpp"
#include "hml/units.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace hml::cli {

struct QubitConfig {
    double r_q{0};
    double theta{0};
    double varphi{0};
};

struct LatticeConfig {
    std::optional<LatticeKind> kind;
    std::optional<int> N;
    std::optional<int> nk;
    std::optional<double> omega0;
    std::optional<double> J;
    std::optional<double> a;
    Boundary boundary{Boundary::periodic};
};

struct DynamicsConfig {
    std::optional<double> g;
    std::optional<double> J;
    std::optional<double> Delta;
    double omega0{0};
    double kappa{0};
    std::optional<double> T2_star;
    std::optional<double> t_max;
    int n_t{2048};
    int n_points{10};
    Backend backend{Backend::excitation_sector};
    int n_max{2};
};

struct CooperativityConfig {
    double kappa_min{2.0 * constants::pi * 1e3};
    double kappa_max{2.0 * constants::pi * 1e7};
    int n_kappa{41};
    double T2_min{1e-6};
    double T2_max{1.0};
    int n_T2{41};
};

struct OutputConfig {
    std::optional<std::string> path;
    std::optional<std::string> format;  // "csv" or "json"
};

struct RunConfig {
    std::string material_name{"yig"};
    MaterialParams material{yig_preset()};
    std::optional<LoopSpec> loop;
    std::optional<double> Bc;  // critical field of the wire, T
    std::optional<Placement> placement;
    std::optional<double> magnet_radius;
    std::optional<QubitConfig> qubit;
    FieldBias field{};
    LatticeConfig lattice;
    DynamicsConfig dynamics;
    CooperativityConfig cooperativity;
    OutputConfig output;
    Warnings warnings;  // load-time validity warnings
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

std::string to_string(LatticeKind kind);
LatticeKind parse_lattice_kind(const std::string& s, const std::string& path);

} // namespace hml::cli
