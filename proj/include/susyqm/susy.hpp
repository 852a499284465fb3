#pragma once

// Witten factorization of a discretized 1D Hamiltonian.
//
//   H0 = A+ A,  H1 = A A+,  A = (1/sqrt2) d/dx + W,  A+ = -(1/sqrt2) d/dx + W
//   V0 = W^2 - W'/sqrt2,    V1 = W^2 + W'/sqrt2,     W = -(1/sqrt2) phi0'/phi0
//
// The discrete A uses the antisymmetric central difference, and the discrete
// A+ is its transpose. W is built from the discrete ground state with the
// same stencil, so A annihilates that state up to rounding wherever W is not
// extrapolated.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "susyqm/error.hpp"
#include "susyqm/graded.hpp"
#include "susyqm/schrodinger.hpp"
#include "susyqm/tridiagonal.hpp"

namespace susyqm {

inline constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

struct FactorOptions {
    /// Eigensolver residual tolerance, relative to ||H||.
    double tol = 1e-10;
    /// W is trusted only where phi0 > clamp_delta * max(phi0).
    double clamp_delta = 1e-6;
    /// Partner-potential samples are capped at this value.
    double v_max = 1e8;
    unsigned threads = 1;
};

/// W_i = -(phi0_{i+1} - phi0_{i-1}) / (2 h sqrt2 phi0_i) where phi0 exceeds
/// clamp_delta * max(phi0); linear extrapolation from the two nearest trusted
/// samples elsewhere. Throws NodeError if phi0 changes sign anywhere between
/// the first and last samples above the threshold in magnitude.
inline std::vector<double> superpotential_from_ground(const Grid1D& grid, std::span<const double> phi0,
                                                      double clamp_delta = 1e-6) {
    const std::size_t n = grid.n;
    if (phi0.size() != n) throw DimensionError("superpotential_from_ground: length differs from grid.n");
    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(phi0[i]) > std::abs(phi0[imax])) imax = i;
    }
    const double sign = phi0[imax] < 0 ? -1.0 : 1.0;
    const double peak = std::abs(phi0[imax]);
    if (peak == 0.0) throw DomainError("superpotential_from_ground: zero state");
    const double threshold = clamp_delta * peak;
    const auto value = [&](std::size_t i) { return sign * phi0[i]; };

    std::size_t lo = n;
    std::size_t hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(phi0[i]) > threshold) {
            lo = std::min(lo, i);
            hi = i;
        }
    }
    if (lo == n || hi - lo < 1) throw DomainError("superpotential_from_ground: fewer than two trusted samples");
    for (std::size_t i = lo; i <= hi; ++i) {
        if (!(value(i) > 0.0)) {
            throw NodeError("superpotential_from_ground: state has an interior node near x = " +
                                std::to_string(grid.x(i)),
                            i);
        }
    }

    const double c = -kInvSqrt2 / (2.0 * grid.h());
    std::vector<double> w(n);
    for (std::size_t i = lo; i <= hi; ++i) {
        const double right = i + 1 < n ? value(i + 1) : 0.0;
        const double left = i > 0 ? value(i - 1) : 0.0;
        w[i] = c * (right - left) / value(i);
    }
    const double slope_lo = (w[lo + 1] - w[lo]) / grid.h();
    for (std::size_t i = 0; i < lo; ++i) w[i] = w[lo] - slope_lo * static_cast<double>(lo - i) * grid.h();
    const double slope_hi = (w[hi] - w[hi - 1]) / grid.h();
    for (std::size_t i = hi + 1; i < n; ++i) w[i] = w[hi] + slope_hi * static_cast<double>(i - hi) * grid.h();
    return w;
}

/// dW/dx: central differences inside, one-sided at the first and last sample.
inline std::vector<double> derivative(const Grid1D& grid, std::span<const double> w) {
    const std::size_t n = w.size();
    const double h = grid.h();
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (w[i + 1] - w[i - 1]) / (2.0 * h);
    d[0] = (w[1] - w[0]) / h;
    d[n - 1] = (w[n - 1] - w[n - 2]) / h;
    return d;
}

/// W^2 + sign * W'/sqrt2: sign -1 recovers the original potential, +1 gives the partner.
inline std::vector<double> potential_from_superpotential(const Grid1D& grid, std::span<const double> w, double sign) {
    const auto dw = derivative(grid, w);
    std::vector<double> v(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] * w[i] + sign * kInvSqrt2 * dw[i];
    return v;
}

/// (A psi)_i = (psi_{i+1} - psi_{i-1}) / (2 h sqrt2) + W_i psi_i
inline std::vector<double> apply_a(const Grid1D& grid, std::span<const double> w, std::span<const double> psi) {
    if (w.size() != grid.n || psi.size() != grid.n) throw DimensionError("apply_a: length differs from grid.n");
    auto out = central_difference<double>(grid, psi);
    for (std::size_t i = 0; i < grid.n; ++i) out[i] = kInvSqrt2 * out[i] + w[i] * psi[i];
    return out;
}

/// Transpose of apply_a.
inline std::vector<double> apply_a_dag(const Grid1D& grid, std::span<const double> w, std::span<const double> psi) {
    if (w.size() != grid.n || psi.size() != grid.n) throw DimensionError("apply_a_dag: length differs from grid.n");
    auto out = central_difference<double>(grid, psi);
    for (std::size_t i = 0; i < grid.n; ++i) out[i] = -kInvSqrt2 * out[i] + w[i] * psi[i];
    return out;
}

struct SusyPair {
    Grid1D grid;
    double lambda0 = 0.0;  // ground energy of the unshifted H0
    std::vector<double> w;
    std::vector<double> v0;          // original potential samples
    std::vector<double> v0_shifted;  // v0 - lambda0
    std::vector<double> v1;          // partner, capped at v_max
    Spectrum spectrum0;              // of H0 - lambda0
    Spectrum spectrum1;              // of H1
};

/// Factorizes H0 = -1/2 D2 + V. Tracks k_levels + 1 levels of the shifted H0
/// and k_levels levels of its partner.
inline SusyPair factorize(const Grid1D& grid, const PotentialSpec& potential, std::size_t k_levels,
                          const FactorOptions& opt = {}) {
    if (k_levels < 1) throw DomainError("factorize: need k_levels >= 1");
    if (k_levels + 1 > grid.n) throw DomainError("factorize: k_levels exceeds the number of grid states");
    EigenOptions eo;
    eo.tol = opt.tol;
    eo.threads = opt.threads;

    SusyPair pair;
    pair.grid = grid;
    pair.v0 = sample_potential(grid, potential);
    const auto h_tilde = build_hamiltonian(grid, std::span<const double>(pair.v0));
    pair.lambda0 = smallest_eigenvalues(h_tilde, 1, 1).front();

    pair.v0_shifted = pair.v0;
    for (double& v : pair.v0_shifted) v -= pair.lambda0;
    pair.spectrum0 = solve_lowest(grid, build_hamiltonian(grid, std::span<const double>(pair.v0_shifted)), k_levels + 1, eo);

    pair.w = superpotential_from_ground(grid, pair.spectrum0.eigenvectors.front(), opt.clamp_delta);
    pair.v1 = potential_from_superpotential(grid, pair.w, +1.0);
    for (double& v : pair.v1) v = std::min(v, opt.v_max);
    pair.spectrum1 = solve_lowest(grid, build_hamiltonian(grid, std::span<const double>(pair.v1)), k_levels, eo);
    return pair;
}

struct DegeneracyEntry {
    std::size_t m;
    double lam0;  // lambda_m(H0)
    double lam1;  // lambda_{m-1}(H1)
    double rel_err;
    bool pass;
};

struct IntertwiningEntry {
    std::size_t m;
    double forward;   // |<A phi_m^(0), phi_{m-1}^(1)>| after normalization
    double backward;  // |<A+ phi_{m-1}^(1), phi_m^(0)>| after normalization
    bool pass;
};

struct DegeneracyReport {
    std::vector<DegeneracyEntry> levels;
    std::vector<IntertwiningEntry> intertwining;
    double kernel_norm = 0.0;  // ||A phi_0|| / ||phi_0||
    bool kernel_pass = false;

    bool all_passed() const {
        if (!kernel_pass) return false;
        for (const auto& e : levels) {
            if (!e.pass) return false;
        }
        for (const auto& e : intertwining) {
            if (!e.pass) return false;
        }
        return true;
    }
};

struct DegeneracyOptions {
    double tol_rel = 1e-2;
    double min_overlap = 0.999;
    double kernel_tol = 1e-3;
};

namespace detail {
inline double normalized_overlap(const Grid1D& grid, std::span<const double> f, std::span<const double> g) {
    const double nf = grid_norm(grid, f);
    const double ng = grid_norm(grid, g);
    if (nf == 0.0 || ng == 0.0) return 0.0;
    return std::abs(inner(grid, f, g)) / (nf * ng);
}
}  // namespace detail

/// For m = 1..k compares lambda_m(H0) with lambda_{m-1}(H1) and checks that A
/// and A+ carry eigenvectors between the partners.
inline DegeneracyReport degeneracy_check(const SusyPair& pair, std::size_t k, const DegeneracyOptions& opt = {}) {
    if (pair.spectrum0.size() < k + 1 || pair.spectrum1.size() < k) {
        throw DomainError("degeneracy_check: pair tracks fewer than k partner levels");
    }
    const Grid1D& g = pair.grid;
    DegeneracyReport rep;
    const auto& phi0 = pair.spectrum0.eigenvectors.front();
    rep.kernel_norm = grid_norm(g, apply_a(g, pair.w, phi0)) / grid_norm(g, phi0);
    rep.kernel_pass = rep.kernel_norm < opt.kernel_tol;
    for (std::size_t m = 1; m <= k; ++m) {
        const double l0 = pair.spectrum0.eigenvalues[m];
        const double l1 = pair.spectrum1.eigenvalues[m - 1];
        const double rel = std::abs(l0 - l1) / std::abs(l0);
        rep.levels.push_back({m, l0, l1, rel, rel <= opt.tol_rel});

        const auto& up = pair.spectrum0.eigenvectors[m];
        const auto& down = pair.spectrum1.eigenvectors[m - 1];
        const double fwd = detail::normalized_overlap(g, apply_a(g, pair.w, up), down);
        const double bwd = detail::normalized_overlap(g, apply_a_dag(g, pair.w, down), up);
        rep.intertwining.push_back({m, fwd, bwd, fwd >= opt.min_overlap && bwd >= opt.min_overlap});
    }
    return rep;
}

// ---- graded block form ----

struct BlockSupercharge {
    GradedMatrix q;      // [[0, 0], [A, 0]]
    GradedMatrix q_dag;  // [[0, A+], [0, 0]]
    GradedMatrix h;      // diag(A+A, AA+)
};

/// Dense matrix of the discrete A on the interior points.
inline Eigen::MatrixXd dense_a(const Grid1D& grid, std::span<const double> w) {
    if (w.size() != grid.n) throw DimensionError("dense_a: W length differs from grid.n");
    const auto n = static_cast<Eigen::Index>(grid.n);
    const double c = kInvSqrt2 / (2.0 * grid.h());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, i) = w[static_cast<std::size_t>(i)];
        if (i + 1 < n) a(i, i + 1) = c;
        if (i > 0) a(i, i - 1) = -c;
    }
    return a;
}

inline constexpr std::size_t kMaxDenseBlock = 2048;

/// Q = A (x) Psi, Q+ = A+ (x) Psi+ and H = [[Q+, Q]] over the (n|n) superspace.
inline BlockSupercharge block_assemble(const SusyPair& pair, std::size_t max_block = kMaxDenseBlock) {
    if (pair.w.size() != pair.grid.n) throw DimensionError("block_assemble: W length differs from grid.n");
    if (pair.grid.n > max_block) throw DimensionError("block_assemble: grid too large for the dense block form");
    const auto n = static_cast<Eigen::Index>(pair.grid.n);
    const ComplexMatrix a = dense_a(pair.grid, pair.w).cast<Complex>();
    const ComplexMatrix a_dag = a.adjoint();
    const ComplexMatrix zero = ComplexMatrix::Zero(n, n);
    GradedMatrix q = GradedMatrix::odd_blocks(zero, a);
    GradedMatrix qd = GradedMatrix::odd_blocks(a_dag, zero);
    GradedMatrix h = supercommutator(qd, q);
    return {std::move(q), std::move(qd), std::move(h)};
}

// ---- hierarchy ----

struct HierarchyLevel {
    std::size_t depth;
    SusyPair pair;
    double ground_energy;     // lambda0 of this level's unshifted Hamiltonian
    double cumulative_shift;  // sum of ground energies removed up to and including this level
};

struct HierarchyOptions {
    std::size_t max_depth = 2;
    /// Eigenvalues tracked at level 0 (level m tracks levels - m); 0 means max_depth + 2.
    std::size_t levels = 0;
    /// Original-scale energy ceiling for counting bound levels.
    double ceiling = std::numeric_limits<double>::infinity();
    FactorOptions factor;
};

/// Level 0 factorizes V; level m+1 factorizes the partner potential of level m.
/// Stops early, without error, once fewer than two levels remain.
inline std::vector<HierarchyLevel> hierarchy(const Grid1D& grid, const PotentialSpec& potential,
                                             const HierarchyOptions& opt = {}) {
    if (opt.max_depth < 1) throw DomainError("hierarchy: max_depth must be >= 1");
    const std::size_t levels = opt.levels == 0 ? opt.max_depth + 2 : opt.levels;
    std::vector<HierarchyLevel> out;
    PotentialSpec current = potential;
    double cumulative = 0.0;
    for (std::size_t depth = 0; depth <= opt.max_depth; ++depth) {
        if (depth >= levels) break;
        const std::size_t k = levels - depth;
        const auto samples = sample_potential(grid, current);
        const auto hm = build_hamiltonian(grid, std::span<const double>(samples));
        if (count_below(hm, opt.ceiling - cumulative) < 2) break;
        SusyPair pair = factorize(grid, GridSamples{samples}, k, opt.factor);
        cumulative += pair.lambda0;
        const double ground = pair.lambda0;
        current = GridSamples{pair.v1};
        out.push_back({depth, std::move(pair), ground, cumulative});
    }
    return out;
}

}  // namespace susyqm
