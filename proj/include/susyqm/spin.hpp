#pragma once

// Spin-1/2: observables a0*I + a.sigma, their spectra, and measurement.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <utility>

#include "susyqm/error.hpp"

namespace susyqm::spin {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double kDegeneracyTolerance = 1e-12;

inline double norm3(const Vec3& v) { return std::hypot(v[0], v[1], v[2]); }

struct SpinState {
    Complex up;
    Complex down;

    double norm() const { return std::sqrt(std::norm(up) + std::norm(down)); }

    SpinState normalized() const {
        const double n = norm();
        if (n == 0.0) throw DomainError("SpinState: cannot normalize the zero vector");
        return {up / n, down / n};
    }

    /// <this, other>, antilinear in the first slot.
    Complex inner(const SpinState& o) const { return std::conj(up) * o.up + std::conj(down) * o.down; }
};

inline SpinState operator*(Complex z, const SpinState& s) { return {z * s.up, z * s.down}; }

struct SpinObservable {
    double a0 = 0.0;
    Vec3 a{0.0, 0.0, 0.0};

    Matrix2 matrix() const {
        Matrix2 m;
        m << Complex{a0 + a[2], 0.0}, Complex{a[0], -a[1]},
             Complex{a[0], a[1]},     Complex{a0 - a[2], 0.0};
        return m;
    }

    /// Inverse of matrix(); the input must be Hermitian.
    static SpinObservable from_matrix(const Matrix2& m) {
        if (m(0, 0).imag() != 0.0 || m(1, 1).imag() != 0.0 || m(1, 0) != std::conj(m(0, 1))) {
            throw DomainError("SpinObservable::from_matrix: matrix is not Hermitian");
        }
        const double d0 = m(0, 0).real();
        const double d1 = m(1, 1).real();
        return {(d0 + d1) / 2.0, {m(1, 0).real(), m(1, 0).imag(), (d0 - d1) / 2.0}};
    }
};

/// (lambda_minus, lambda_plus) = a0 -/+ |a|.
inline std::pair<double, double> eigenvalues(const SpinObservable& obs) {
    const double r = norm3(obs.a);
    return {obs.a0 - r, obs.a0 + r};
}

/// m.u = (mu_B / 2) u.sigma
inline SpinObservable moment_projection(const Vec3& u, double mu_b = 1.0) {
    const double s = mu_b / 2.0;
    return {0.0, {s * u[0], s * u[1], s * u[2]}};
}

/// Orthonormal eigenvectors (for lambda_minus, lambda_plus) of a
/// non-degenerate observable. The branch is chosen on the sign of a3 so the
/// normalizing factor never cancels.
inline std::pair<SpinState, SpinState> eigenvectors(const SpinObservable& obs) {
    const auto [a1, a2, a3] = obs.a;
    const double r = norm3(obs.a);
    if (r < kDegeneracyTolerance) {
        throw DegenerateObservableError("spin observable is degenerate; eigenbasis is not unique");
    }
    const Complex ap{a1, a2};  // a1 + i a2
    SpinState plus, minus;
    if (a3 >= 0.0) {
        plus = {Complex{a3 + r, 0.0}, ap};
        minus = {-std::conj(ap), Complex{a3 + r, 0.0}};
    } else {
        plus = {std::conj(ap), Complex{r - a3, 0.0}};
        minus = {Complex{r - a3, 0.0}, -ap};
    }
    return {minus.normalized(), plus.normalized()};
}

inline double expectation(const SpinState& state, const SpinObservable& obs) {
    // <s|A|s> written out in Pauli parameters; real by construction.
    const Complex cross = std::conj(state.up) * state.down;
    const double pu = std::norm(state.up);
    const double pd = std::norm(state.down);
    return obs.a0 * (pu + pd) + obs.a[2] * (pu - pd) + 2.0 * (obs.a[0] * cross.real() + obs.a[1] * cross.imag());
}

struct Outcome {
    double eigenvalue;
    double probability;
    SpinState collapsed;
};

/// Outcomes are ordered (lambda_minus, lambda_plus).
struct MeasurementResult {
    std::array<Outcome, 2> outcomes;

    double mean() const {
        return outcomes[0].eigenvalue * outcomes[0].probability +
               outcomes[1].eigenvalue * outcomes[1].probability;
    }
};

inline MeasurementResult measure(const SpinState& state, const SpinObservable& obs) {
    if (std::abs(state.norm() - 1.0) > 1e-12) {
        throw DomainError("measure: state must be normalized");
    }
    const auto [lm, lp] = eigenvalues(obs);
    const auto [em, ep] = eigenvectors(obs);
    const double pm = std::norm(em.inner(state));
    const double pp = std::norm(ep.inner(state));
    return {{Outcome{lm, pm, em}, Outcome{lp, pp, ep}}};
}

}  // namespace susyqm::spin
