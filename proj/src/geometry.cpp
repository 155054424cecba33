#include "hml/geometry.hpp"

#include "hml/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace hml {

using constants::hbar;
using constants::mu0;
using constants::pi;

void validate(const LoopSpec& loop, Warnings* warnings) {
    if (!(loop.l > 0.0) || !std::isfinite(loop.l)) throw domain_error("loop radius l must be > 0");
    if (!(loop.tau > 0.0) || !std::isfinite(loop.tau)) throw domain_error("wire thickness tau must be > 0");
    if (loop.tau >= loop.l) throw domain_error("wire thickness tau must be smaller than the loop radius l");
    if (loop.tau >= loop.l / 10.0) {
        std::ostringstream msg;
        msg << "thin-wire approximation questionable: tau/l = " << loop.tau / loop.l << " >= 0.1";
        warn(warnings, msg.str());
    }
    auto check_opt = [](const std::optional<double>& v, const char* name) {
        if (v && (!(*v > 0.0) || !std::isfinite(*v))) {
            throw domain_error(std::string("loop parameter ") + name + " must be > 0 when set");
        }
    };
    check_opt(loop.Cap, "Cap");
    check_opt(loop.per_unit_L, "per_unit_L");
    check_opt(loop.per_unit_C, "per_unit_C");
}

void validate(const Placement& place) {
    if (!(place.d > 0.0) || !std::isfinite(place.d)) throw domain_error("placement gap d must be > 0");
    if (!(place.h >= 0.0) || !std::isfinite(place.h)) throw domain_error("placement height h must be >= 0");
}

double loop_inductance(const LoopSpec& loop, InductanceModel model, Warnings* warnings) {
    validate(loop, warnings);
    const double log_term = std::log(8.0 * loop.l / loop.tau);
    switch (model) {
    case InductanceModel::full:
        return mu0 * loop.l * (log_term - 1.75);
    case InductanceModel::leading_log:
        return mu0 * loop.l * log_term;
    }
    return 0.0;
}

std::vector<double> resonator_mode_frequencies(const LoopSpec& loop, int n_max) {
    if (!loop.per_unit_L) throw config_error("loop.per_unit_L", "required for resonator modes");
    if (!loop.per_unit_C) throw config_error("loop.per_unit_C", "required for resonator modes");
    if (n_max < 1) throw domain_error("resonator_mode_frequencies: n_max must be >= 1");
    validate(loop);
    const double base = 1.0 / (loop.l * std::sqrt(*loop.per_unit_L * *loop.per_unit_C));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) out.push_back(n * base);
    return out;
}

// Distances are in units of d: x = l/d, y = h/d. With lambda = x sin u the squared
// magnet-to-wire distance is y^2 + 1 + 2x(x+1)(1 + sin u); 1 + sin u is evaluated as
// 2 sin^2(u/2 + pi/4) to keep the near-wire point free of cancellation.
namespace {
inline double one_plus_sin(double u) noexcept {
    const double s = std::sin(0.5 * u + 0.25 * pi);
    return 2.0 * s * s;
}
inline double denominator(double u, double x, double y) noexcept {
    const double q = y * y + 1.0 + 2.0 * x * (x + 1.0) * one_plus_sin(u);
    return q * std::sqrt(q);
}
} // namespace

double flux_integrand_z(double u, double l_over_d, double h_over_d) noexcept {
    const double x = l_over_d, y = h_over_d;
    return y * x * std::sin(u) / denominator(u, x, y);
}

double flux_integrand_x(double u, double l_over_d, double h_over_d) noexcept {
    const double x = l_over_d, y = h_over_d;
    // x^2 cos^2 u + x sin u (x + 1 + x sin u) = x(x+1)(1 + sin u) - x
    const double numerator = x * (x + 1.0) * one_plus_sin(u) - x;
    return numerator / denominator(u, x, y);
}

FluxIntegrals flux_integrals_circular(double l_over_d, double h_over_d, double abs_tol) {
    if (!(l_over_d > 0.0) || !std::isfinite(l_over_d)) throw domain_error("flux integrals: l/d must be > 0");
    if (!(h_over_d >= 0.0) || !std::isfinite(h_over_d)) throw domain_error("flux integrals: h/d must be >= 0");

    // The factor 2 maps the half-contour integral to the full loop; tolerance is split
    // accordingly so each reported factor meets abs_tol.
    quad::AdaptiveOptions opt;
    opt.abs_tol = abs_tol / 2.0;
    const double a = -0.5 * pi, b = 0.5 * pi;

    FluxIntegrals out;
    const auto ix = quad::adaptive<double>(
        [&](double u) { return flux_integrand_x(u, l_over_d, h_over_d); }, a, b, opt);
    out.Ix = -2.0 * ix.value;
    out.error = 2.0 * ix.error;
    if (h_over_d > 0.0) {
        const auto iz = quad::adaptive<double>(
            [&](double u) { return flux_integrand_z(u, l_over_d, h_over_d); }, a, b, opt);
        out.Iz = -2.0 * iz.value;
        out.error += 2.0 * iz.error;
    }
    return out;
}

FluxFactors flux_factors_circular(const LoopSpec& loop, const Placement& place,
                                  const MaterialParams& mat, double total_spin, double abs_tol) {
    validate(loop);
    validate(place);
    validate(mat);
    if (!(total_spin > 0.0)) throw domain_error("flux_factors_circular: total spin F must be > 0");

    const auto integrals = flux_integrals_circular(loop.l / place.d, place.h / place.d, abs_tol);
    FluxFactors f;
    f.Ix = integrals.Ix;
    f.Iy = 0.0;
    f.Iz = integrals.Iz;
    f.quad_error = integrals.error;
    f.Phi_e = hbar * mat.gamma0 * mu0 / (4.0 * pi * place.d);
    // Equilibrium macrospin is -F z, so only I_z contributes.
    f.Phi_bias = place.h == 0.0 ? 0.0 : -f.Phi_e * total_spin * f.Iz;
    return f;
}

double critical_distance(double R, const MaterialParams& mat, double Bc, double tau) {
    if (!(Bc > 0.0)) throw domain_error("critical_distance: Bc must be > 0");
    if (!(R > 0.0)) throw domain_error("critical_distance: R must be > 0");
    if (!(tau >= 0.0)) throw domain_error("critical_distance: tau must be >= 0");
    validate(mat);
    return 0.5 * tau + std::cbrt(2.0 * mu0 * mat.Ms / (3.0 * Bc)) * R;
}

double wire_field(double R, const MaterialParams& mat, double d, double tau) {
    const double gap = d - 0.5 * tau;
    if (!(gap > 0.0)) throw domain_error("wire_field: d must exceed tau/2");
    if (!(R > 0.0)) throw domain_error("wire_field: R must be > 0");
    validate(mat);
    const double ratio = R / gap;
    return 2.0 * mu0 * mat.Ms / 3.0 * ratio * ratio * ratio;
}

double bone_tunneling(double d, double tau, double total_spin, const MaterialParams& mat,
                      std::optional<double> R, Warnings* warnings) {
    if (!(d > tau)) throw domain_error("bone_tunneling: end-ring radius d must exceed tau");
    if (!(total_spin > 0.0)) throw domain_error("bone_tunneling: total spin F must be > 0");
    validate(mat);
    if (R && *R >= d) {
        std::ostringstream msg;
        msg << "bone coupler: magnet radius R = " << *R << " m is not smaller than the end-ring radius d = " << d
            << " m; the centred-dipole flux estimate is outside its stated range";
        warn(warnings, msg.str());
    }
    const double L = loop_inductance(LoopSpec{d, tau, {}, {}, {}}, InductanceModel::full, warnings);
    return mat.gamma0 * mat.gamma0 * mu0 * mu0 * hbar * total_spin / (8.0 * d * d * L);
}

} // namespace hml
