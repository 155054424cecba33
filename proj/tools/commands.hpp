// commands.hpp — Subcommands of the hml tool and the argument-level entry point.

#pragma once

#include "config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace hml::cli {

// Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_domain = 3;
inline constexpr int exit_convergence = 4;

// `key=a:b:n`: n evenly spaced values from a to b inclusive. a and b accept plain numbers,
// "pi", "<x>*pi" and "pi/<x>".
struct SweepSpec {
    std::string key;
    double from{0};
    double to{0};
    int n{0};

    std::vector<double> values() const;
};

SweepSpec parse_sweep(const std::string& text);
double parse_scalar(const std::string& text);

// Fixed 12-significant-digit rendering shared by CSV and JSON output.
std::string format_number(double v);
double round12(double v);

struct CommandOptions {
    std::optional<SweepSpec> sweep;
    std::optional<double> l_over_d;
    std::optional<LatticeKind> kind;
    std::optional<int> nk;
};

// Each returns the complete output document (CSV or JSON text) and appends diagnostics to
// `warnings`.
std::string cmd_geometry(const RunConfig& cfg, const CommandOptions& opt, Warnings& warnings);
std::string cmd_coupling(const RunConfig& cfg, const CommandOptions& opt, Warnings& warnings);
std::string cmd_bands(const RunConfig& cfg, const CommandOptions& opt, Warnings& warnings);
std::string cmd_swap(const RunConfig& cfg, const CommandOptions& opt, Warnings& warnings);
std::string cmd_fit_alpha(const RunConfig& cfg, const CommandOptions& opt, Warnings& warnings);
std::string cmd_cooperativity(const RunConfig& cfg, const CommandOptions& opt, Warnings& warnings);

// Full command line without the program name, e.g. {"geometry", "--config", "c.json"}.
// Output goes to --out, output.path or `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hml::cli
