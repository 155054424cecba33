// lattice.hpp — Tight-binding spectra of the three loop-magnet lattices: the 1D chain, the
// all-to-all ring and the 2D checkerboard, plus a dense real-space oracle and DOS sampling.
//
// The checkerboard cell holds one D site at the origin and one A site at (a, 0); the Bravais
// vectors are v1 = (2a, 0) and v2 = (a, a). Bonds (all with rate J):
//   D-D along +-v1, A-A along +-(v2 - v1), and D-A to the four A sites at (+-a, 0), (0, +-a).

#pragma once

#include "hml/errors.hpp"
#include "hml/units.hpp"

#include <Eigen/Core>

#include <optional>
#include <utility>
#include <vector>

namespace hml {

enum class LatticeKind { chain, ring, checkerboard };
enum class Boundary { periodic, open };

struct LatticeSpec {
    LatticeKind kind{LatticeKind::chain};
    double omega0{0};  // site frequency, rad/s
    double Jrate{0};   // real tunneling rate after gauge fixing, rad/s
    double a{1};       // lattice constant, m
    int N{2};          // sites (chain, ring) or cells per dimension (checkerboard)
    Boundary boundary{Boundary::periodic};
};

void validate(const LatticeSpec& spec);

// Lattice constant from loop radius l and gap d: 2(l + d) for the chain and sqrt(2)(l + d)
// for the checkerboard. The ring has no lattice constant.
double lattice_constant(LatticeKind kind, double l, double d);

struct BandResult {
    std::vector<Vec2> kpoints;  // rad/m; chain uses only the x component
    Eigen::MatrixXd bands;      // one row per k-point, one column per band (ascending)
};

// omega0 + 2J cos(ka) at k = 2 pi n / (M a), n = -M/2 .. M/2 - 1, with M = nk or N when nk = 0.
BandResult chain_dispersion(const LatticeSpec& spec, int nk = 0);

// Eigenvalues of omega0 I + J (11^T - I), ascending.
std::vector<double> ring_spectrum(const LatticeSpec& spec);

// 2x2 Bloch matrix assembled from the bond list, each unordered bond counted once.
Eigen::Matrix2cd checkerboard_bloch_matrix(const LatticeSpec& spec, const Vec2& k);

// (omega_plus, omega_minus) with omega_plus >= omega_minus.
std::pair<double, double> checkerboard_bloch(const LatticeSpec& spec, const Vec2& k);

// Reciprocal basis dual to (v1, v2): b_i . v_j = 2 pi delta_ij.
std::pair<Vec2, Vec2> checkerboard_reciprocal(double a);

// Allowed wavevectors (m1 b1 + m2 b2) / M for m_i = -M/2 .. M/2 - 1.
std::vector<Vec2> checkerboard_kgrid(const LatticeSpec& spec, int M);

BandResult checkerboard_bands(const LatticeSpec& spec, int nk);

// Closed form omega0 + 2J[4 cos(kx a) cos(ky a) +- sqrt(Lambda)] as printed. When Lambda < 0
// the bands are complex; `complex_band` is set and both values carry the real part.
struct ClosedFormBands {
    double plus{0};
    double minus{0};
    double Lambda{0};
    bool complex_band{false};
};

ClosedFormBands paper_closed_form_bands(const LatticeSpec& spec, const Vec2& k);

struct ClosedFormRow {
    Vec2 k;
    double bloch_plus{0}, bloch_minus{0};
    ClosedFormBands closed;
    double deviation{0};  // max over the two bands, rad/s
    bool flagged{false};
};

struct ClosedFormReport {
    std::vector<ClosedFormRow> rows;
    double threshold{0};       // rad/s
    std::size_t flagged{0};
    std::size_t complex_points{0};
    double max_deviation{0};
};

// Compares the printed closed form with the bond-list bands on an M x M grid. Points with a
// deviation above rel_threshold * |J| (or a complex closed form) are flagged.
ClosedFormReport closed_form_report(const LatticeSpec& spec, int M, double rel_threshold = 1e-6);

// Dense real-space coupling matrix (omega0 on the diagonal). Bonds that coincide on small
// periodic lattices accumulate.
Eigen::MatrixXd finite_lattice_hamiltonian(const LatticeSpec& spec);

inline constexpr int finite_lattice_budget = 512;

// Sorted eigenvalues of finite_lattice_hamiltonian. Throws domain_error above the budget.
std::vector<double> finite_lattice_oracle(const LatticeSpec& spec);

// Sorted union of Bloch eigenvalues over the allowed k of a periodic lattice of spec.N
// (chain: N points, checkerboard: N x N cells, ring: ring_spectrum).
std::vector<double> bloch_spectrum_on_grid(const LatticeSpec& spec);

struct DensityOfStates {
    double lo{0}, hi{0}, width{0};
    std::vector<double> centers;  // rad/s
    std::vector<double> density;  // per rad/s; sum(density) * width = 1
};

// Histogram of band frequencies sampled on a uniform midpoint grid (nk points for the chain,
// nk x nk for the checkerboard). `band` restricts to one band index (0 = lower).
DensityOfStates density_of_states(const LatticeSpec& spec, int nbins, int nk,
                                  std::optional<int> band = std::nullopt);

} // namespace hml
