#include "hml/couplings.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hml {

using constants::hbar;
using constants::mu0;
using constants::pi;

SitePair make_site_pair(const Vec3& r_i, const Vec3& r_j) {
    SitePair p;
    p.r_i = r_i;
    p.r_j = r_j;
    const Vec3 dr = r_i - r_j;
    p.r_ij = dr.norm();
    if (!(p.r_ij > 0.0)) throw domain_error("make_site_pair: sites coincide");
    p.theta_ij = std::acos(std::clamp(dr.z() / p.r_ij, -1.0, 1.0));
    p.phi_ij = std::atan2(dr.y(), dr.x());
    return p;
}

namespace {
inline cdouble flux_phasor(const FluxFactors& f) { return {f.Ix, f.Iy}; }

void require_spin(double F) {
    if (!(F > 0.0) || !std::isfinite(F)) throw domain_error("total spin F must be > 0");
}
} // namespace

cdouble loop_tunneling(const FluxFactors& flux_i, const FluxFactors& flux_j, double d_i, double d_j,
                       double L, double total_spin, const MaterialParams& mat) {
    if (!(L > 0.0)) throw domain_error("loop_tunneling: inductance must be > 0");
    if (!(d_i > 0.0) || !(d_j > 0.0)) throw domain_error("loop_tunneling: gaps must be > 0");
    require_spin(total_spin);
    const double pref = hbar * mat.gamma0 * mu0 / (4.0 * pi);
    // Grouped so that swapping i and j yields the exact complex conjugate.
    const double scale = pref * pref * total_spin / (2.0 * hbar * (d_i * d_j) * L);
    return scale * (std::conj(flux_phasor(flux_i)) * flux_phasor(flux_j));
}

double dipolar_tunneling(const SitePair& pair, double total_spin, const MaterialParams& mat) {
    if (!(pair.r_ij > 0.0)) throw domain_error("dipolar_tunneling: r_ij must be > 0");
    require_spin(total_spin);
    const double s = std::sin(pair.theta_ij);
    const double r3 = pair.r_ij * pair.r_ij * pair.r_ij;
    return -hbar * mat.gamma0 * mat.gamma0 * mu0 * total_spin * (3.0 * s * s - 2.0) / (8.0 * pi * r3);
}

double dipolar_shift(const SitePair& pair, double total_spin, const MaterialParams& mat) {
    const double c = std::cos(pair.theta_ij);
    const double r3 = pair.r_ij * pair.r_ij * pair.r_ij;
    return hbar * mat.gamma0 * mat.gamma0 * mu0 * (3.0 * c * c - 1.0) * total_spin / (4.0 * pi * r3);
}

double site_frequency(const MaterialParams& mat, const FieldBias& field, double J_self,
                      std::span<const SitePair> neighbours, double total_spin) {
    validate(mat);
    validate(field);
    double omega = mat.gamma0 * field.B0 + 2.0 * mat.gamma0 * mat.ka / mat.Ms + J_self;
    for (const auto& p : neighbours) omega += dipolar_shift(p, total_spin, mat);
    return omega;
}

CounterRotatingTerms counter_rotating_and_linear(std::span<const MagnetSite> sites, double L,
                                                 double total_spin, const MaterialParams& mat,
                                                 std::optional<double> capacitance, bool need_chi) {
    if (!(L > 0.0)) throw domain_error("counter_rotating_and_linear: inductance must be > 0");
    require_spin(total_spin);
    const auto n = static_cast<Eigen::Index>(sites.size());
    CounterRotatingTerms out;
    out.Lambda = Eigen::MatrixXcd::Zero(n, n);
    out.eta = Eigen::VectorXcd::Zero(n);

    const double dip = hbar * mat.gamma0 * mat.gamma0 * mu0 * total_spin;
    const double sqrt2F = std::sqrt(2.0 * total_spin);
    double phi_bias_total = 0.0;
    for (const auto& s : sites) phi_bias_total += s.flux.Phi_bias;

    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& si = sites[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& sj = sites[static_cast<std::size_t>(j)];
            cdouble value = si.flux.Phi_e * sj.flux.Phi_e * total_spin / (2.0 * hbar * L) *
                            flux_phasor(sj.flux) * flux_phasor(si.flux);
            if (i != j) {
                const auto pair = make_site_pair(si.position, sj.position);
                const double s = std::sin(pair.theta_ij);
                const double r3 = pair.r_ij * pair.r_ij * pair.r_ij;
                value += -3.0 * dip * s * s / (16.0 * pi * r3) * std::polar(1.0, 2.0 * pair.phi_ij);
            }
            out.Lambda(i, j) = value;
        }
    }

    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& sj = sites[static_cast<std::size_t>(j)];
        cdouble eta = sj.flux.Phi_e * phi_bias_total * sqrt2F / (2.0 * hbar * L) * flux_phasor(sj.flux);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == j) continue;
            const auto pair = make_site_pair(sites[static_cast<std::size_t>(i)].position, sj.position);
            const double r3 = pair.r_ij * pair.r_ij * pair.r_ij;
            eta += 3.0 * dip * sqrt2F / (8.0 * pi * r3) * std::cos(pair.theta_ij) * std::sin(pair.theta_ij) *
                   std::polar(1.0, 2.0 * pair.phi_ij);
        }
        out.eta(j) = eta;
    }

    if (capacitance) {
        if (!(*capacitance > 0.0)) throw domain_error("loop capacitance must be > 0");
        const double omega_c = 1.0 / std::sqrt(L * *capacitance);
        const double phi_c = std::sqrt(hbar / (2.0 * *capacitance * omega_c));
        out.chi.resize(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& sj = sites[static_cast<std::size_t>(j)];
            out.chi(j) = sj.flux.Phi_e * phi_c / (2.0 * hbar * L) * sqrt2F * flux_phasor(sj.flux);
        }
    } else if (need_chi) {
        throw config_error("loop.Cap", "circuit-magnon couplings chi need the loop capacitance");
    }
    return out;
}

QuadraticModel build_quadratic_model(std::span<const MagnetSite> sites, const LoopSpec& loop,
                                     const MaterialParams& mat, const FieldBias& field,
                                     double total_spin) {
    const double L = loop_inductance(loop, InductanceModel::full);
    const auto n = static_cast<Eigen::Index>(sites.size());
    QuadraticModel m;
    m.J.resize(n, n);
    m.Jd = Eigen::MatrixXd::Zero(n, n);
    m.omega.resize(n);

    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& si = sites[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& sj = sites[static_cast<std::size_t>(j)];
            m.J(i, j) = loop_tunneling(si.flux, sj.flux, si.d, sj.d, L, total_spin, mat);
            if (i != j) {
                m.Jd(i, j) = dipolar_tunneling(make_site_pair(si.position, sj.position), total_spin, mat);
            }
        }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        std::vector<SitePair> neighbours;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == j) continue;
            neighbours.push_back(make_site_pair(sites[static_cast<std::size_t>(i)].position,
                                                sites[static_cast<std::size_t>(j)].position));
        }
        m.omega(j) = site_frequency(mat, field, m.J(j, j).real(), neighbours, total_spin);
    }
    auto extra = counter_rotating_and_linear(sites, L, total_spin, mat, loop.Cap);
    m.Lambda = std::move(extra.Lambda);
    m.chi = std::move(extra.chi);
    m.eta = std::move(extra.eta);
    return m;
}

GaugeFixedTunneling absorb_tunneling_phases(const Eigen::MatrixXcd& J) {
    const Eigen::Index n = J.rows();
    GaugeFixedTunneling out;
    out.phase = Eigen::VectorXd::Zero(n);
    out.J = Eigen::MatrixXd::Zero(n, n);
    if (n == 0) return out;

    // Reference row: the site with the strongest self-coupling.
    Eigen::Index ref = 0;
    J.diagonal().cwiseAbs().maxCoeff(&ref);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(J(ref, j)) > 0.0) out.phase(j) = -std::arg(J(ref, j));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const cdouble v = J(i, j) * std::polar(1.0, out.phase(j) - out.phase(i));
            out.J(i, j) = v.real();
            out.residual = std::max(out.residual, std::abs(v.imag()));
        }
    }
    return out;
}

QubitCoupling qubit_coupling(double theta, double varphi, double r_q, double R,
                             const MaterialParams& mat, double B0) {
    if (!(R > 0.0)) throw domain_error("qubit_coupling: magnet radius must be > 0");
    if (!(r_q > R)) throw domain_error("qubit_coupling: the qubit must sit outside the magnet (r_q > R)");
    if (!(theta >= 0.0 && theta <= pi)) throw domain_error("qubit_coupling: theta must lie in [0, pi]");
    validate(mat);
    const double F = magnet_moment(R, mat).F;
    const double r3 = r_q * r_q * r_q;
    const double base = hbar * mat.gamma0 * mat.gammaq * mu0 / r3;
    const double st = std::sin(theta), ct = std::cos(theta);

    QubitCoupling q;
    q.omega_q = mat.DeltaNV - mat.gammaq * B0;
    q.omega_sigma_bare = q.omega_q - base / (4.0 * pi) * F * (3.0 * ct * ct - 1.0);
    q.xi_theta = 3.0 * base / (4.0 * pi) * std::sqrt(2.0 * F) * st * ct;
    q.W_theta = base / (8.0 * pi) * std::sqrt(F) * (3.0 * st * st - 2.0);
    q.g_theta = 3.0 * base / (8.0 * pi) * std::sqrt(F) * st * st;

    const double mixing = std::atan(std::sqrt(F) * std::abs(q.xi_theta) / std::abs(q.omega_sigma_bare));
    q.Theta = (q.xi_theta / q.omega_sigma_bare < 0.0) ? pi - mixing : mixing;

    q.omega_sigma = std::sqrt(q.omega_sigma_bare * q.omega_sigma_bare + F * q.xi_theta * q.xi_theta);
    const double sT = std::sin(q.Theta);
    const double cT = std::cos(q.Theta);
    const double cH = std::cos(0.5 * q.Theta);
    const double sH = std::sin(0.5 * q.Theta);
    q.xi = q.xi_theta * std::polar(1.0, varphi) * cT +
           (q.W_theta * std::polar(1.0, -varphi) + q.g_theta * std::polar(1.0, 2.0 * varphi)) * sT;
    q.g = 0.25 * q.xi_theta * sT + q.g_theta * cH * cH - q.W_theta * sH * sH;
    q.W = 0.25 * q.xi_theta * sT + q.W_theta * cH - q.g_theta * sH;
    return q;
}

JaynesCummingsSite jaynes_cummings_site(const QubitCoupling& qc, double omega_magnon, double r_q,
                                        double R, const MaterialParams& mat, Warnings* warnings) {
    if (!(r_q > R) || !(R > 0.0)) throw domain_error("jaynes_cummings_site: need r_q > R > 0");
    const double F = magnet_moment(R, mat).F;
    const double r3 = r_q * r_q * r_q;
    JaynesCummingsSite s;
    s.omega_magnon = omega_magnon;
    s.omega_sigma = qc.omega_q + hbar * mat.gamma0 * mat.gammaq * mu0 * F / (4.0 * pi * r3);
    s.g = qc.g;
    s.g_maintext = 3.0 * hbar * mat.gamma0 * mat.gammaq * mu0 * std::sqrt(2.0 * F) / (8.0 * pi * r3);

    const double scale = std::abs(omega_magnon);
    const double ratio_g = std::abs(s.g) / scale;
    const double ratio_det = std::abs(omega_magnon - s.omega_sigma) / scale;
    if (!(ratio_g < 0.1) || !(ratio_det < 0.1)) {
        s.rwa_valid = false;
        std::ostringstream msg;
        msg << "rotating-wave approximation questionable: g/omega = " << ratio_g
            << ", |omega - omega_sigma|/omega = " << ratio_det;
        warn(warnings, msg.str());
    }
    return s;
}

} // namespace hml
