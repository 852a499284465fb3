#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

#include "susyqm/schrodinger.hpp"

using namespace susyqm;
using Catch::Approx;

namespace {

constexpr double pi = std::numbers::pi;

// Composite Simpson rule on [a, b] with an even number of panels.
template <class F>
double simpson(F f, double a, double b, int panels = 20000) {
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("grid geometry") {
    const Grid1D g(0.0, pi, 3);
    CHECK(g.h() == Approx(pi / 4));
    CHECK(g.x(0) == Approx(pi / 4));
    CHECK(g.x(2) == Approx(3 * pi / 4));
    CHECK_THROWS_AS(Grid1D(1.0, 1.0, 10), DomainError);
    CHECK_THROWS_AS(Grid1D(0.0, 1.0, 2), DomainError);
}

TEST_CASE("hamiltonian assembly") {
    const Grid1D g(0.0, pi, 3);
    const double h = pi / 4;
    const auto t = build_hamiltonian(g, InfiniteWell{});
    for (double d : t.diagonal) CHECK(d == Approx(1.0 / (h * h)));
    for (double e : t.offdiagonal) CHECK(e == Approx(-0.5 / (h * h)));

    SECTION("harmonic adds x^2/2 on the diagonal") {
        const Grid1D hg(-2.0, 2.0, 7);
        const auto th = build_hamiltonian(hg, Harmonic{});
        const auto tw = build_hamiltonian(hg, InfiniteWell{});
        for (std::size_t i = 0; i < hg.n; ++i) CHECK(th.diagonal[i] - tw.diagonal[i] == Approx(0.5 * hg.x(i) * hg.x(i)));
        CHECK(th.offdiagonal == tw.offdiagonal);
    }
    SECTION("zero tabulated potential equals the well") {
        const auto tz = build_hamiltonian(g, Tabulated{{0.0, pi}, {0.0, 0.0}});
        CHECK(tz.diagonal == t.diagonal);
        CHECK(tz.offdiagonal == t.offdiagonal);
    }
    SECTION("length mismatch") {
        const std::vector<double> v(4, 0.0);
        CHECK_THROWS_AS(build_hamiltonian(g, std::span<const double>(v)), DimensionError);
        CHECK_THROWS_AS(build_hamiltonian(g, GridSamples{v}), DimensionError);
    }
}

TEST_CASE("potential CSV") {
    SECTION("header and data") {
        std::istringstream in("x,V\n0,1\n0.5,2\n1,3\n");
        const auto t = parse_potential_csv(in);
        CHECK(t.xs.size() == 3);
        CHECK(interpolate(t, 0.25) == Approx(1.5));
        CHECK(interpolate(t, 1.0) == Approx(3.0));
        CHECK_THROWS_AS(interpolate(t, 1.5), InputError);
    }
    SECTION("no header") {
        std::istringstream in("0,0\r\n1,1\r\n");
        CHECK(parse_potential_csv(in).values[1] == 1.0);
    }
    SECTION("malformed rows") {
        std::istringstream bad("x,V\n0,1\nzero,2\n");
        CHECK_THROWS_AS(parse_potential_csv(bad), InputError);
        std::istringstream nocomma("0 1\n1 2\n");
        CHECK_THROWS_AS(parse_potential_csv(nocomma), InputError);
        std::istringstream trailing("0,1x\n1,2\n");
        CHECK_THROWS_AS(parse_potential_csv(trailing), InputError);
    }
    SECTION("x must increase") {
        std::istringstream in("0,1\n1,2\n1,3\n");
        CHECK_THROWS_AS(parse_potential_csv(in), InputError);
    }
    SECTION("grid outside the table") {
        const Tabulated t{{0.0, 1.0}, {0.0, 0.0}};
        CHECK_THROWS_AS(sample_potential(Grid1D(-1.0, 1.0, 10), t), InputError);
    }
    CHECK_THROWS_AS(load_potential_csv("/nonexistent/potential.csv"), InputError);
}

TEST_CASE("square well spectrum") {
    const Grid1D g(0.0, pi, 2000);
    const auto s = solve_lowest(g, build_hamiltonian(g, InfiniteWell{}), 5);
    for (int m = 1; m <= 5; ++m) {
        const double exact = 0.5 * m * m;
        CHECK(std::abs(s.eigenvalues[static_cast<std::size_t>(m - 1)] - exact) / exact < 1e-5);
    }
    for (const auto& v : s.eigenvectors) CHECK(grid_norm(g, v) == Approx(1.0).margin(1e-12));

    SECTION("eigenvector matches the analytic state") {
        const auto w = analytic_well(pi, 2, g);
        CHECK(std::abs(inner(g, s.eigenvectors[1], w.wavefunction)) == Approx(1.0).margin(1e-5));
    }
}

TEST_CASE("discretization error is second order") {
    const auto error = [](std::size_t n) {
        const Grid1D g(0.0, pi, n);
        return smallest_eigenvalues(build_hamiltonian(g, InfiniteWell{}), 3).back() - 4.5;
    };
    const double ratio = error(199) / error(399);
    CHECK(ratio == Approx(4.0).margin(0.05));
}

TEST_CASE("harmonic oscillator spectrum") {
    const Grid1D g(-10.0, 10.0, 3000);
    const auto s = solve_lowest(g, build_hamiltonian(g, Harmonic{}), 6);
    for (std::size_t m = 0; m < 6; ++m) CHECK(s.eigenvalues[m] == Approx(m + 0.5).margin(1e-4));
}

TEST_CASE("analytic well states") {
    const Grid1D g(0.0, pi, 1000);
    CHECK(analytic_well(pi, 1, g).energy == Approx(0.5).epsilon(1e-15));
    CHECK(analytic_well(pi, 2, g).energy == Approx(2.0).epsilon(1e-15));
    CHECK(grid_norm(g, analytic_well(pi, 3, g).wavefunction) == Approx(1.0).margin(1e-6));
    CHECK_THROWS_AS(analytic_well(pi, 0, g), DomainError);
    CHECK_THROWS_AS(analytic_well(pi, -1, g), DomainError);
}

TEST_CASE("uncertainty product") {
    SECTION("well ground state against quadrature") {
        const double L = pi;
        const auto psi = [L](double x) { return std::sqrt(2.0 / L) * std::sin(pi * x / L); };
        const auto dpsi = [L](double x) { return std::sqrt(2.0 / L) * (pi / L) * std::cos(pi * x / L); };
        const double mx = simpson([&](double x) { return x * psi(x) * psi(x); }, 0.0, L);
        const double mx2 = simpson([&](double x) { return x * x * psi(x) * psi(x); }, 0.0, L);
        const double mp2 = simpson([&](double x) { return dpsi(x) * dpsi(x); }, 0.0, L);
        const double oracle = std::sqrt(mx2 - mx * mx) * std::sqrt(mp2);
        CHECK(oracle == Approx(std::sqrt((pi * pi - 6.0) / 12.0)).margin(1e-9));

        const Grid1D g(0.0, L, 2000);
        const auto u = uncertainty_product(analytic_well(L, 1, g).wavefunction, g);
        CHECK(u.product == Approx(oracle).margin(1e-3));
        CHECK(u.mean_x == Approx(L / 2).margin(1e-9));
        CHECK(std::abs(u.mean_p) < 1e-12);
    }
    SECTION("moving gaussian saturates the bound") {
        const Grid1D g(-10.0, 10.0, 4000);
        const double sigma = 0.8;
        const double k0 = 1.3;
        ComplexGridVector psi(g.n);
        for (std::size_t i = 0; i < g.n; ++i) {
            const double x = g.x(i);
            psi[i] = std::pow(pi * sigma * sigma, -0.25) * std::exp(-x * x / (2 * sigma * sigma)) *
                     std::exp(std::complex<double>{0.0, k0 * x});
        }
        const auto u = uncertainty_product(std::span<const std::complex<double>>(psi), g);
        CHECK(u.product == Approx(0.5).margin(1e-3));
        CHECK(u.mean_p.real() == Approx(k0).margin(1e-3));
        CHECK(std::abs(u.mean_p.imag()) < 1e-12);
    }
    SECTION("random smooth states respect the bound") {
        const Grid1D g(0.0, 1.0, 2000);
        std::mt19937_64 rng(5);
        std::normal_distribution<double> nd;
        std::uniform_real_distribution<double> uu(0.0, 1.0);
        double lowest = 1e300;
        for (int trial = 0; trial < 500; ++trial) {
            ComplexGridVector psi(g.n);
            const double x0 = 0.35 + 0.3 * uu(rng);
            const double width = 0.03 + 0.07 * uu(rng);
            const double k0 = 100.0 * (uu(rng) - 0.5);
            for (std::size_t i = 0; i < g.n; ++i) {
                const double x = g.x(i);
                psi[i] = std::exp(-0.5 * (x - x0) * (x - x0) / (width * width)) * std::polar(1.0, k0 * x);
            }
            const double mix = trial % 2 == 0 ? 0.0 : 0.2 * uu(rng);
            for (int m = 1; m <= 4; ++m) {
                const std::complex<double> c = mix * std::complex<double>{nd(rng), nd(rng)};
                for (std::size_t i = 0; i < g.n; ++i) psi[i] += c * std::sin(m * pi * g.x(i));
            }
            double n2 = 0.0;
            for (const auto& z : psi) n2 += std::norm(z);
            const double scale = 1.0 / std::sqrt(n2 * g.h());
            for (auto& z : psi) z *= scale;
            const auto u = uncertainty_product(std::span<const std::complex<double>>(psi), g);
            CHECK(u.product >= 0.5 - 1e-3);
            lowest = std::min(lowest, u.product);
        }
        // Pure packets sit on the bound, so the suite exercises it.
        CHECK(lowest < 0.51);
    }
    SECTION("real states have real mean momentum") {
        const Grid1D g(0.0, 1.0, 500);
        std::vector<double> psi(g.n);
        for (std::size_t i = 0; i < g.n; ++i) psi[i] = std::sin(pi * g.x(i)) + 0.3 * std::sin(2 * pi * g.x(i));
        const double nrm = grid_norm(g, psi);
        for (auto& v : psi) v /= nrm;
        CHECK(std::abs(uncertainty_product(psi, g).mean_p) < 1e-12);
    }
    SECTION("unnormalized input is rejected") {
        const Grid1D g(0.0, pi, 100);
        auto psi = analytic_well(pi, 1, g).wavefunction;
        for (auto& v : psi) v *= 2.0;
        CHECK_THROWS_AS(uncertainty_product(psi, g), DomainError);
        CHECK_THROWS_AS(uncertainty_product(std::vector<double>(5, 0.0), g), DimensionError);
    }
}
