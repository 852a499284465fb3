#pragma once

// Stationary 1D Schrodinger problem -1/2 psi'' + V psi = E psi on (a, b) with
// Dirichlet walls, discretized by second-order central differences
// (hbar = m = 1). Grid vectors hold the n interior samples only.

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "susyqm/error.hpp"
#include "susyqm/tridiagonal.hpp"

namespace susyqm {

struct Grid1D {
    double a = 0.0;
    double b = 1.0;
    std::size_t n = 3;

    Grid1D() = default;
    Grid1D(double a_, double b_, std::size_t n_) : a(a_), b(b_), n(n_) {
        if (!(b > a)) throw DomainError("Grid1D: need b > a");
        if (n < 3) throw DomainError("Grid1D: need at least 3 interior points");
    }

    double h() const noexcept { return (b - a) / static_cast<double>(n + 1); }
    /// Position of interior sample i (zero-based), i.e. x_{i+1}.
    double x(std::size_t i) const noexcept { return a + static_cast<double>(i + 1) * h(); }

    std::vector<double> points() const {
        std::vector<double> xs(n);
        for (std::size_t i = 0; i < n; ++i) xs[i] = x(i);
        return xs;
    }

    friend bool operator==(const Grid1D&, const Grid1D&) = default;
};

// ---- potentials ----

/// V = 0 inside; the walls are the Dirichlet ends of the grid.
struct InfiniteWell {};

/// V = omega^2 (x - center)^2 / 2
struct Harmonic {
    double omega = 1.0;
    double center = 0.0;
};

/// Piecewise-linear interpolation of (x, V) samples; x strictly increasing.
struct Tabulated {
    std::vector<double> xs;
    std::vector<double> values;
};

/// Values given directly on the interior points of a grid (partner
/// potentials produced by factorization are carried this way).
struct GridSamples {
    std::vector<double> values;
};

using PotentialSpec = std::variant<InfiniteWell, Harmonic, Tabulated, GridSamples>;

inline std::string potential_kind(const PotentialSpec& v) {
    struct Name {
        std::string operator()(const InfiniteWell&) const { return "infinite_well"; }
        std::string operator()(const Harmonic&) const { return "harmonic"; }
        std::string operator()(const Tabulated&) const { return "tabulated"; }
        std::string operator()(const GridSamples&) const { return "samples"; }
    };
    return std::visit(Name{}, v);
}

inline void validate(const Tabulated& t) {
    if (t.xs.size() < 2 || t.xs.size() != t.values.size()) {
        throw InputError("tabulated potential: need at least two (x, V) rows");
    }
    for (std::size_t i = 0; i < t.xs.size(); ++i) {
        if (!std::isfinite(t.xs[i]) || !std::isfinite(t.values[i])) {
            throw InputError("tabulated potential: non-finite sample at row " + std::to_string(i));
        }
        if (i > 0 && !(t.xs[i] > t.xs[i - 1])) {
            throw InputError("tabulated potential: x must be strictly increasing (row " + std::to_string(i) + ")");
        }
    }
}

inline double interpolate(const Tabulated& t, double x) {
    if (x < t.xs.front() || x > t.xs.back()) {
        throw InputError("tabulated potential does not cover x = " + std::to_string(x));
    }
    const auto it = std::upper_bound(t.xs.begin(), t.xs.end(), x);
    if (it == t.xs.end()) return t.values.back();
    const std::size_t hi = static_cast<std::size_t>(it - t.xs.begin());
    const std::size_t lo = hi - 1;
    const double w = (x - t.xs[lo]) / (t.xs[hi] - t.xs[lo]);
    return (1.0 - w) * t.values[lo] + w * t.values[hi];
}

/// V sampled on the interior points.
inline std::vector<double> sample_potential(const Grid1D& grid, const PotentialSpec& spec) {
    std::vector<double> v(grid.n, 0.0);
    if (const auto* hmn = std::get_if<Harmonic>(&spec)) {
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double d = grid.x(i) - hmn->center;
            v[i] = 0.5 * hmn->omega * hmn->omega * d * d;
        }
    } else if (const auto* tab = std::get_if<Tabulated>(&spec)) {
        validate(*tab);
        for (std::size_t i = 0; i < grid.n; ++i) v[i] = interpolate(*tab, grid.x(i));
    } else if (const auto* s = std::get_if<GridSamples>(&spec)) {
        if (s->values.size() != grid.n) throw DimensionError("GridSamples: length differs from grid.n");
        v = s->values;
    }
    for (std::size_t i = 0; i < grid.n; ++i) {
        if (!std::isfinite(v[i])) throw DomainError("potential is not finite at x = " + std::to_string(grid.x(i)));
    }
    return v;
}

/// Parses `x,V` rows; a non-numeric first line is taken as a header.
inline Tabulated parse_potential_csv(std::istream& in) {
    Tabulated t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InputError("potential CSV line " + std::to_string(lineno) + ": expected `x,V`");
        const std::string sx = line.substr(0, comma);
        const std::string sv = line.substr(comma + 1);
        double x = 0.0;
        double val = 0.0;
        try {
            std::size_t px = 0;
            std::size_t pv = 0;
            x = std::stod(sx, &px);
            val = std::stod(sv, &pv);
            if (sx.find_first_not_of(" \t", px) != std::string::npos ||
                sv.find_first_not_of(" \t", pv) != std::string::npos) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception&) {
            if (t.xs.empty() && lineno == 1) continue;  // header
            throw InputError("potential CSV line " + std::to_string(lineno) + ": malformed number");
        }
        t.xs.push_back(x);
        t.values.push_back(val);
    }
    validate(t);
    return t;
}

inline Tabulated load_potential_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open potential file: " + path);
    return parse_potential_csv(in);
}

// ---- Hamiltonian ----

/// -1/2 D2 + diag(V): diagonal 1/h^2 + V_i, off-diagonal -1/(2h^2).
inline TridiagonalOperator build_hamiltonian(const Grid1D& grid, std::span<const double> potential) {
    if (potential.size() != grid.n) throw DimensionError("build_hamiltonian: potential length differs from grid.n");
    const double h = grid.h();
    TridiagonalOperator t;
    t.diagonal.resize(grid.n);
    t.offdiagonal.assign(grid.n - 1, -0.5 / (h * h));
    for (std::size_t i = 0; i < grid.n; ++i) {
        if (!std::isfinite(potential[i])) throw DomainError("build_hamiltonian: non-finite potential sample");
        t.diagonal[i] = 1.0 / (h * h) + potential[i];
    }
    return t;
}

inline TridiagonalOperator build_hamiltonian(const Grid1D& grid, const PotentialSpec& spec) {
    const auto v = sample_potential(grid, spec);
    return build_hamiltonian(grid, std::span<const double>(v));
}

/// Lowest k eigenpairs with eigenvectors normalized as h * sum(phi^2) = 1.
inline Spectrum solve_lowest(const Grid1D& grid, const TridiagonalOperator& hm, std::size_t k,
                             EigenOptions opt = {}) {
    opt.weight = grid.h();
    return eigen_smallest(hm, k, opt);
}

// ---- analytic square well ----

struct WellState {
    double energy;
    std::vector<double> wavefunction;
};

/// sqrt(2/L) sin(m pi x / L) with the left wall at grid.a, and E_m = m^2 pi^2 / (2 L^2).
inline WellState analytic_well(double length, int m, const Grid1D& grid) {
    if (!(length > 0.0)) throw DomainError("analytic_well: L must be positive");
    if (m <= 0) throw DomainError("analytic_well: level index must be >= 1");
    const double pi = std::numbers::pi;
    WellState s;
    s.energy = m * m * pi * pi / (2.0 * length * length);
    s.wavefunction.resize(grid.n);
    const double amp = std::sqrt(2.0 / length);
    for (std::size_t i = 0; i < grid.n; ++i) s.wavefunction[i] = amp * std::sin(m * pi * (grid.x(i) - grid.a) / length);
    return s;
}

// ---- grid-level observables ----

using ComplexGridVector = std::vector<std::complex<double>>;

/// <f, g> = h sum conj(f_i) g_i
inline std::complex<double> inner(const Grid1D& grid, std::span<const std::complex<double>> f,
                                  std::span<const std::complex<double>> g) {
    std::complex<double> s{};
    for (std::size_t i = 0; i < f.size(); ++i) s += std::conj(f[i]) * g[i];
    return grid.h() * s;
}

inline double inner(const Grid1D& grid, std::span<const double> f, std::span<const double> g) {
    return grid.h() * detail::dot(f, g);
}

inline double grid_norm(const Grid1D& grid, std::span<const double> f) { return std::sqrt(inner(grid, f, f)); }

/// Antisymmetric central difference with zero Dirichlet ends.
template <class T>
std::vector<T> central_difference(const Grid1D& grid, std::span<const T> f) {
    const std::size_t n = f.size();
    const double inv = 1.0 / (2.0 * grid.h());
    std::vector<T> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const T right = i + 1 < n ? f[i + 1] : T{};
        const T left = i > 0 ? f[i - 1] : T{};
        d[i] = (right - left) * inv;
    }
    return d;
}

struct Uncertainty {
    double delta_x;
    double delta_p;
    double product;
    double mean_x;
    std::complex<double> mean_p;  // real up to rounding for real states
};

/// Position is diagonal; momentum is -i times the central difference.
inline Uncertainty uncertainty_product(std::span<const std::complex<double>> state, const Grid1D& grid,
                                       double norm_tol = 1e-6) {
    if (state.size() != grid.n) throw DimensionError("uncertainty_product: state length differs from grid.n");
    const double h = grid.h();
    double n2 = 0.0;
    double mx = 0.0;
    double mx2 = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double p = std::norm(state[i]);
        const double x = grid.x(i);
        n2 += p;
        mx += p * x;
        mx2 += p * x * x;
    }
    n2 *= h;
    if (std::abs(n2 - 1.0) > norm_tol) throw DomainError("uncertainty_product: state is not normalized");
    mx *= h;
    mx2 *= h;
    const auto d = central_difference<std::complex<double>>(grid, state);
    std::complex<double> mp{};
    double mp2 = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        mp += std::conj(state[i]) * (std::complex<double>{0.0, -1.0} * d[i]);
        mp2 += std::norm(d[i]);
    }
    mp *= h;
    mp2 *= h;
    const double dx = std::sqrt(std::max(0.0, mx2 - mx * mx));
    const double dp = std::sqrt(std::max(0.0, mp2 - std::norm(mp)));
    return {dx, dp, dx * dp, mx, mp};
}

inline Uncertainty uncertainty_product(std::span<const double> state, const Grid1D& grid, double norm_tol = 1e-6) {
    ComplexGridVector c(state.begin(), state.end());
    return uncertainty_product(std::span<const std::complex<double>>(c), grid, norm_tol);
}

}  // namespace susyqm
