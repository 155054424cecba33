#include "hml/lattice.hpp"

#include "hml/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <sstream>

namespace hml {

using constants::pi;

void validate(const LatticeSpec& spec) {
    if (spec.N < 2) throw domain_error("lattice: N must be >= 2");
    if (!(spec.a > 0.0) || !std::isfinite(spec.a)) throw domain_error("lattice: a must be > 0");
    if (!std::isfinite(spec.omega0) || !std::isfinite(spec.Jrate)) {
        throw domain_error("lattice: omega0 and J must be finite");
    }
}

double lattice_constant(LatticeKind kind, double l, double d) {
    if (!(l > 0.0) || !(d > 0.0)) throw domain_error("lattice_constant: l and d must be > 0");
    switch (kind) {
    case LatticeKind::chain:
        return 2.0 * (l + d);
    case LatticeKind::checkerboard:
        return std::sqrt(2.0) * (l + d);
    case LatticeKind::ring:
        break;
    }
    throw domain_error("lattice_constant: the ring geometry has no lattice constant");
}

namespace {

void require_kind(const LatticeSpec& spec, LatticeKind kind, const char* what) {
    if (spec.kind != kind) throw domain_error(std::string(what) + ": wrong lattice kind");
}

// Symmetric index range -M/2 .. M/2 - 1.
inline int first_index(int M) { return -(M / 2); }

// D-to-A displacements in units of a.
constexpr std::array<std::array<double, 2>, 4> kDA{{{0.0, -1.0}, {0.0, 1.0}, {1.0, 0.0}, {-1.0, 0.0}}};

} // namespace

BandResult chain_dispersion(const LatticeSpec& spec, int nk) {
    require_kind(spec, LatticeKind::chain, "chain_dispersion");
    validate(spec);
    const int M = nk > 0 ? nk : spec.N;
    BandResult out;
    out.kpoints.reserve(static_cast<std::size_t>(M));
    out.bands.resize(M, 1);
    for (int i = 0; i < M; ++i) {
        const double k = 2.0 * pi * (first_index(M) + i) / (M * spec.a);
        out.kpoints.emplace_back(k, 0.0);
        out.bands(i, 0) = spec.omega0 + 2.0 * spec.Jrate * std::cos(k * spec.a);
    }
    return out;
}

std::vector<double> ring_spectrum(const LatticeSpec& spec) {
    require_kind(spec, LatticeKind::ring, "ring_spectrum");
    validate(spec);
    std::vector<double> ev(static_cast<std::size_t>(spec.N), spec.omega0 - spec.Jrate);
    ev.back() = spec.omega0 + (spec.N - 1) * spec.Jrate;
    std::sort(ev.begin(), ev.end());
    return ev;
}

Eigen::Matrix2cd checkerboard_bloch_matrix(const LatticeSpec& spec, const Vec2& k) {
    require_kind(spec, LatticeKind::checkerboard, "checkerboard_bloch_matrix");
    const double a = spec.a, J = spec.Jrate;
    const Vec2 v1(2.0 * a, 0.0), v2(a, a);
    std::complex<double> da = 0.0;
    for (const auto& r : kDA) da += std::polar(1.0, k.x() * r[0] * a + k.y() * r[1] * a);
    Eigen::Matrix2cd H;
    H(0, 0) = spec.omega0 + 2.0 * J * std::cos(k.dot(v1));
    H(1, 1) = spec.omega0 + 2.0 * J * std::cos(k.dot(v2 - v1));
    H(0, 1) = J * da;
    H(1, 0) = std::conj(H(0, 1));
    return H;
}

std::pair<double, double> checkerboard_bloch(const LatticeSpec& spec, const Vec2& k) {
    const Eigen::Matrix2cd H = checkerboard_bloch_matrix(spec, k);
    const double mean = 0.5 * (H(0, 0).real() + H(1, 1).real());
    const double half = 0.5 * (H(0, 0).real() - H(1, 1).real());
    const double split = std::hypot(half, std::abs(H(0, 1)));
    return {mean + split, mean - split};
}

std::pair<Vec2, Vec2> checkerboard_reciprocal(double a) {
    return {Vec2(pi / a, -pi / a), Vec2(0.0, 2.0 * pi / a)};
}

std::vector<Vec2> checkerboard_kgrid(const LatticeSpec& spec, int M) {
    if (M < 1) throw domain_error("checkerboard_kgrid: grid size must be >= 1");
    const auto [b1, b2] = checkerboard_reciprocal(spec.a);
    std::vector<Vec2> ks;
    ks.reserve(static_cast<std::size_t>(M) * static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
            const double m1 = first_index(M) + i, m2 = first_index(M) + j;
            ks.emplace_back((m1 * b1 + m2 * b2) / M);
        }
    }
    return ks;
}

BandResult checkerboard_bands(const LatticeSpec& spec, int nk) {
    require_kind(spec, LatticeKind::checkerboard, "checkerboard_bands");
    validate(spec);
    BandResult out;
    out.kpoints = checkerboard_kgrid(spec, nk);
    const auto values = parallel_map(out.kpoints, [&](const Vec2& k) { return checkerboard_bloch(spec, k); });
    out.bands.resize(static_cast<Eigen::Index>(values.size()), 2);
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.bands(static_cast<Eigen::Index>(i), 0) = values[i].second;
        out.bands(static_cast<Eigen::Index>(i), 1) = values[i].first;
    }
    return out;
}

ClosedFormBands paper_closed_form_bands(const LatticeSpec& spec, const Vec2& k) {
    require_kind(spec, LatticeKind::checkerboard, "paper_closed_form_bands");
    const double cx = std::cos(k.x() * spec.a), cy = std::cos(k.y() * spec.a);
    const double c2x = std::cos(2.0 * k.x() * spec.a), c2y = std::cos(2.0 * k.y() * spec.a);
    ClosedFormBands out;
    out.Lambda = 4.0 + 4.0 * cx * cy - c2y - cx + 2.0 * c2x * c2y;
    const double centre = spec.omega0 + 8.0 * spec.Jrate * cx * cy;
    if (out.Lambda < 0.0) {
        out.complex_band = true;
        out.plus = out.minus = centre;
    } else {
        const double root = std::sqrt(out.Lambda);
        out.plus = centre + 2.0 * spec.Jrate * root;
        out.minus = centre - 2.0 * spec.Jrate * root;
    }
    return out;
}

ClosedFormReport closed_form_report(const LatticeSpec& spec, int M, double rel_threshold) {
    validate(spec);
    ClosedFormReport rep;
    rep.threshold = rel_threshold * std::abs(spec.Jrate);
    for (const Vec2& k : checkerboard_kgrid(spec, M)) {
        ClosedFormRow row;
        row.k = k;
        std::tie(row.bloch_plus, row.bloch_minus) = checkerboard_bloch(spec, k);
        row.closed = paper_closed_form_bands(spec, k);
        const double hi = std::max(row.closed.plus, row.closed.minus);
        const double lo = std::min(row.closed.plus, row.closed.minus);
        row.deviation = std::max(std::abs(hi - row.bloch_plus), std::abs(lo - row.bloch_minus));
        row.flagged = row.closed.complex_band || row.deviation > rep.threshold;
        rep.max_deviation = std::max(rep.max_deviation, row.deviation);
        if (row.flagged) ++rep.flagged;
        if (row.closed.complex_band) ++rep.complex_points;
        rep.rows.push_back(row);
    }
    return rep;
}

Eigen::MatrixXd finite_lattice_hamiltonian(const LatticeSpec& spec) {
    validate(spec);
    const int N = spec.N;
    const double J = spec.Jrate;
    const bool periodic = spec.boundary == Boundary::periodic;

    switch (spec.kind) {
    case LatticeKind::ring: {
        Eigen::MatrixXd H = Eigen::MatrixXd::Constant(N, N, J);
        H.diagonal().setConstant(spec.omega0);
        return H;
    }
    case LatticeKind::chain: {
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
        H.diagonal().setConstant(spec.omega0);
        for (int i = 0; i < N; ++i) {
            const int j = i + 1;
            if (j == N && !periodic) continue;
            const int jj = j % N;
            H(i, jj) += J;
            H(jj, i) += J;
        }
        return H;
    }
    case LatticeKind::checkerboard:
        break;
    }

    const int sites = 2 * N * N;
    if (sites > finite_lattice_budget) throw domain_error("finite lattice exceeds the dense size budget");
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(sites, sites);
    H.diagonal().setConstant(spec.omega0);
    // Cell (n1, n2) -> D index 2(n1 N + n2), A index D + 1. Returns -1 off an open lattice.
    auto index = [&](int n1, int n2, int sub) {
        if (!periodic && (n1 < 0 || n1 >= N || n2 < 0 || n2 >= N)) return -1;
        n1 = ((n1 % N) + N) % N;
        n2 = ((n2 % N) + N) % N;
        return 2 * (n1 * N + n2) + sub;
    };
    auto bond = [&](int p, int q) {
        if (p < 0 || q < 0) return;
        H(p, q) += J;
        H(q, p) += J;
    };
    for (int n1 = 0; n1 < N; ++n1) {
        for (int n2 = 0; n2 < N; ++n2) {
            const int D = index(n1, n2, 0);
            bond(D, index(n1 + 1, n2, 0));          // D-D along v1
            bond(index(n1, n2, 1), index(n1 - 1, n2 + 1, 1));  // A-A along v2 - v1
            bond(D, index(n1, n2, 1));              // (a, 0)
            bond(D, index(n1 - 1, n2, 1));          // (-a, 0)
            bond(D, index(n1 - 1, n2 + 1, 1));      // (0, a)
            bond(D, index(n1, n2 - 1, 1));          // (0, -a)
        }
    }
    return H;
}

std::vector<double> finite_lattice_oracle(const LatticeSpec& spec) {
    validate(spec);
    const long sites = spec.kind == LatticeKind::checkerboard ? 2L * spec.N * spec.N : spec.N;
    if (sites > finite_lattice_budget) {
        std::ostringstream msg;
        msg << "finite_lattice_oracle: " << sites << " sites exceed the budget of " << finite_lattice_budget;
        throw domain_error(msg.str());
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(finite_lattice_hamiltonian(spec),
                                                            Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    std::vector<double> out(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> bloch_spectrum_on_grid(const LatticeSpec& spec) {
    std::vector<double> out;
    switch (spec.kind) {
    case LatticeKind::ring:
        return ring_spectrum(spec);
    case LatticeKind::chain: {
        const auto bands = chain_dispersion(spec, spec.N).bands;
        out.assign(bands.data(), bands.data() + bands.size());
        break;
    }
    case LatticeKind::checkerboard: {
        const auto bands = checkerboard_bands(spec, spec.N).bands;
        out.assign(bands.data(), bands.data() + bands.size());
        break;
    }
    }
    std::sort(out.begin(), out.end());
    return out;
}

DensityOfStates density_of_states(const LatticeSpec& spec, int nbins, int nk, std::optional<int> band) {
    validate(spec);
    if (nbins < 1 || nk < 1) throw domain_error("density_of_states: nbins and nk must be >= 1");
    if (spec.kind == LatticeKind::ring) throw domain_error("density_of_states: not defined for the ring");

    std::vector<double> samples;
    if (spec.kind == LatticeKind::chain) {
        if (band && *band != 0) throw domain_error("density_of_states: the chain has a single band");
        samples.reserve(static_cast<std::size_t>(nk));
        for (int i = 0; i < nk; ++i) {
            const double ka = 2.0 * pi * (i + 0.5) / nk;
            samples.push_back(spec.omega0 + 2.0 * spec.Jrate * std::cos(ka));
        }
    } else {
        if (band && (*band < 0 || *band > 1)) throw domain_error("density_of_states: band must be 0 or 1");
        const auto [b1, b2] = checkerboard_reciprocal(spec.a);
        std::vector<int> rows(static_cast<std::size_t>(nk));
        for (int i = 0; i < nk; ++i) rows[static_cast<std::size_t>(i)] = i;
        const auto per_row = parallel_map(rows, [&](int i) {
            std::vector<double> vals;
            vals.reserve(2 * static_cast<std::size_t>(nk));
            for (int j = 0; j < nk; ++j) {
                const Vec2 k = ((i + 0.5) / nk) * b1 + ((j + 0.5) / nk) * b2;
                const auto [plus, minus] = checkerboard_bloch(spec, k);
                if (!band || *band == 0) vals.push_back(minus);
                if (!band || *band == 1) vals.push_back(plus);
            }
            return vals;
        });
        for (const auto& r : per_row) samples.insert(samples.end(), r.begin(), r.end());
    }

    DensityOfStates dos;
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    dos.lo = *mn;
    dos.hi = *mx;
    const double span = dos.hi - dos.lo;
    if (!(span > 1e-12 * std::max(1.0, std::abs(dos.lo)))) {
        // Flat band: a single unit-weight bin centred on the common value.
        dos.width = 1.0;
        dos.lo = *mn - 0.5;
        dos.hi = *mn + 0.5;
        dos.centers = {*mn};
        dos.density = {1.0};
        return dos;
    }
    dos.width = span / nbins;
    dos.centers.resize(static_cast<std::size_t>(nbins));
    dos.density.assign(static_cast<std::size_t>(nbins), 0.0);
    for (int b = 0; b < nbins; ++b) dos.centers[static_cast<std::size_t>(b)] = dos.lo + (b + 0.5) * dos.width;
    for (double w : samples) {
        int b = static_cast<int>((w - dos.lo) / dos.width);
        b = std::clamp(b, 0, nbins - 1);
        dos.density[static_cast<std::size_t>(b)] += 1.0;
    }
    const double norm = 1.0 / (static_cast<double>(samples.size()) * dos.width);
    for (double& v : dos.density) v *= norm;
    return dos;
}

} // namespace hml
