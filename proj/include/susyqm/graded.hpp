#pragma once

// Z2-graded complex linear algebra on a superspace C^{p|q}.
//
// A GradedMatrix is a homogeneous endomorphism: its parity is declared at
// construction and the block pattern is validated exactly (even matrices have
// zero off-diagonal blocks, odd matrices zero diagonal blocks).

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "susyqm/error.hpp"

namespace susyqm {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

enum class Parity : std::uint8_t { Even = 0, Odd = 1 };

constexpr Parity operator+(Parity a, Parity b) noexcept {
    return static_cast<Parity>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}

/// (-1)^{|a||b|}
constexpr double grading_sign(Parity a, Parity b) noexcept {
    return (a == Parity::Odd && b == Parity::Odd) ? -1.0 : 1.0;
}

inline const char* to_string(Parity p) noexcept { return p == Parity::Even ? "even" : "odd"; }

namespace detail {

inline double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline void require_same_square(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
        throw DimensionError(std::string(op) + ": operands must be square with equal dimensions");
    }
}

}  // namespace detail

class GradedMatrix {
public:
    /// Throws ParityError when a block that must vanish for `parity` holds a
    /// nonzero entry.
    GradedMatrix(Index dim_even, Index dim_odd, ComplexMatrix entries, Parity parity)
        : p_(dim_even), q_(dim_odd), m_(std::move(entries)), parity_(parity) {
        if (p_ < 0 || q_ < 0) throw DimensionError("GradedMatrix: negative block dimension");
        if (m_.rows() != p_ + q_ || m_.cols() != p_ + q_) {
            throw DimensionError("GradedMatrix: entries must be (p+q)x(p+q)");
        }
        if (!satisfies_pattern(p_, q_, m_, parity_)) {
            throw ParityError(std::string("GradedMatrix: block pattern violates declared ") +
                              to_string(parity_) + " parity");
        }
    }

    static GradedMatrix zero(Index p, Index q, Parity parity) {
        return {p, q, ComplexMatrix::Zero(p + q, p + q), parity};
    }

    static GradedMatrix identity(Index p, Index q) {
        return {p, q, ComplexMatrix::Identity(p + q, p + q), Parity::Even};
    }

    /// Even matrix diag(top, bottom).
    static GradedMatrix even_blocks(const ComplexMatrix& top, const ComplexMatrix& bottom) {
        const Index p = top.rows();
        const Index q = bottom.rows();
        ComplexMatrix m = ComplexMatrix::Zero(p + q, p + q);
        m.topLeftCorner(p, p) = top;
        m.bottomRightCorner(q, q) = bottom;
        return {p, q, std::move(m), Parity::Even};
    }

    /// Odd matrix [[0, upper], [lower, 0]] with upper p x q and lower q x p.
    static GradedMatrix odd_blocks(const ComplexMatrix& upper, const ComplexMatrix& lower) {
        const Index p = upper.rows();
        const Index q = lower.rows();
        if (upper.cols() != q || lower.cols() != p) {
            throw DimensionError("GradedMatrix::odd_blocks: block shapes do not match a (p|q) split");
        }
        ComplexMatrix m = ComplexMatrix::Zero(p + q, p + q);
        m.topRightCorner(p, q) = upper;
        m.bottomLeftCorner(q, p) = lower;
        return {p, q, std::move(m), Parity::Odd};
    }

    static bool satisfies_pattern(Index p, Index q, const ComplexMatrix& m, Parity parity) {
        if (parity == Parity::Even) {
            return (m.topRightCorner(p, q).array() == Complex{}).all() &&
                   (m.bottomLeftCorner(q, p).array() == Complex{}).all();
        }
        return (m.topLeftCorner(p, p).array() == Complex{}).all() &&
               (m.bottomRightCorner(q, q).array() == Complex{}).all();
    }

    Index dim_even() const noexcept { return p_; }
    Index dim_odd() const noexcept { return q_; }
    Index dim() const noexcept { return p_ + q_; }
    Parity parity() const noexcept { return parity_; }
    const ComplexMatrix& entries() const noexcept { return m_; }

    bool same_split(const GradedMatrix& o) const noexcept { return p_ == o.p_ && q_ == o.q_; }

    GradedMatrix adjoint() const { return {p_, q_, m_.adjoint(), parity_}; }

    friend GradedMatrix operator*(const GradedMatrix& a, const GradedMatrix& b) {
        a.require_split(b, "product");
        return {a.p_, a.q_, a.m_ * b.m_, a.parity_ + b.parity_};
    }

    friend GradedMatrix operator+(const GradedMatrix& a, const GradedMatrix& b) {
        a.require_split(b, "sum");
        a.require_parity(b, "sum");
        return {a.p_, a.q_, a.m_ + b.m_, a.parity_};
    }

    friend GradedMatrix operator-(const GradedMatrix& a, const GradedMatrix& b) {
        a.require_split(b, "difference");
        a.require_parity(b, "difference");
        return {a.p_, a.q_, a.m_ - b.m_, a.parity_};
    }

    friend GradedMatrix operator*(Complex s, const GradedMatrix& a) {
        return {a.p_, a.q_, s * a.m_, a.parity_};
    }

    /// Reinterprets with the other parity; only legal for the zero matrix.
    GradedMatrix with_parity(Parity parity) const { return {p_, q_, m_, parity}; }

private:
    void require_split(const GradedMatrix& o, const char* op) const {
        if (!same_split(o)) {
            throw DimensionError(std::string("GradedMatrix ") + op + ": (p|q) splits differ");
        }
    }
    void require_parity(const GradedMatrix& o, const char* op) const {
        if (parity_ != o.parity_) {
            throw ParityError(std::string("GradedMatrix ") + op +
                              ": operands must share a parity to stay homogeneous");
        }
    }

    Index p_;
    Index q_;
    ComplexMatrix m_;
    Parity parity_;
};

// Ungraded brackets on plain square matrices.

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    detail::require_same_square(a, b, "commutator");
    return a * b - b * a;
}

inline ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    detail::require_same_square(a, b, "anticommutator");
    return a * b + b * a;
}

/// i(AB - BA), the quantum bracket with hbar = 1.
inline ComplexMatrix dirac_bracket(const ComplexMatrix& a, const ComplexMatrix& b) {
    detail::require_same_square(a, b, "dirac_bracket");
    return Complex{0.0, 1.0} * (a * b - b * a);
}

/// [[f,g]] = fg - (-1)^{|f||g|} gf, homogeneous of parity |f|+|g|.
inline GradedMatrix supercommutator(const GradedMatrix& f, const GradedMatrix& g) {
    if (!f.same_split(g)) throw DimensionError("supercommutator: (p|q) splits differ");
    const double s = grading_sign(f.parity(), g.parity());
    ComplexMatrix m = f.entries() * g.entries() - s * (g.entries() * f.entries());
    return {f.dim_even(), f.dim_odd(), std::move(m), f.parity() + g.parity()};
}

struct AlgebraReport {
    std::string relation_name;
    double max_residual = 0.0;
    bool passed = false;
};

inline constexpr double kDefaultAlgebraTolerance = 1e-12;

inline AlgebraReport make_report(std::string name, double residual, double tol) {
    return {std::move(name), residual, residual <= tol};
}

inline bool all_passed(const std::vector<AlgebraReport>& reports) {
    for (const auto& r : reports) {
        if (!r.passed) return false;
    }
    return true;
}

/// Residual of [[f,[[g,h]]]] - [[[[f,g]],h]] - (-1)^{|f||g|} [[g,[[f,h]]]].
inline AlgebraReport verify_super_jacobi(const GradedMatrix& f, const GradedMatrix& g,
                                         const GradedMatrix& h,
                                         double tol = kDefaultAlgebraTolerance) {
    if (!f.same_split(g) || !f.same_split(h)) {
        throw DimensionError("verify_super_jacobi: (p|q) splits differ");
    }
    const ComplexMatrix lhs = supercommutator(f, supercommutator(g, h)).entries();
    const ComplexMatrix t1 = supercommutator(supercommutator(f, g), h).entries();
    const ComplexMatrix t2 = supercommutator(g, supercommutator(f, h)).entries();
    const double s = grading_sign(f.parity(), g.parity());
    return make_report("graded Jacobi", detail::max_abs(lhs - t1 - s * t2), tol);
}

/// Checks [[Q+,Q]] = H, [[Q+,H]] = 0, [[Q,H]] = 0 and nilpotency of both charges.
inline std::vector<AlgebraReport> verify_super_heisenberg(const GradedMatrix& h,
                                                          const GradedMatrix& q,
                                                          const GradedMatrix& qd,
                                                          double tol = kDefaultAlgebraTolerance) {
    if (!h.same_split(q) || !h.same_split(qd)) {
        throw DimensionError("verify_super_heisenberg: (p|q) splits differ");
    }
    if (h.parity() != Parity::Even) throw ParityError("verify_super_heisenberg: H must be even");
    if (q.parity() != Parity::Odd || qd.parity() != Parity::Odd) {
        throw ParityError("verify_super_heisenberg: supercharges must be odd");
    }
    using detail::max_abs;
    std::vector<AlgebraReport> out;
    out.push_back(make_report("[[Q+,Q]] = H",
                              max_abs(supercommutator(qd, q).entries() - h.entries()), tol));
    out.push_back(make_report("[[Q+,H]] = 0", max_abs(supercommutator(qd, h).entries()), tol));
    out.push_back(make_report("[[Q,H]] = 0", max_abs(supercommutator(q, h).entries()), tol));
    out.push_back(make_report("Q^2 = 0", max_abs((q * q).entries()), tol));
    out.push_back(make_report("Q+^2 = 0", max_abs((qd * qd).entries()), tol));
    return out;
}

/// The superspace C^{1|1}: the homogeneous basis {Phi, Psi+, Psi, Phi+} and
/// the Pauli-style basis {sigma0, sigma+, sigma-, sigma3}.
namespace c11 {

inline ComplexMatrix mat(Complex a, Complex b, Complex c, Complex d) {
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

inline GradedMatrix phi() { return {1, 1, mat(1, 0, 0, 0), Parity::Even}; }
inline GradedMatrix phi_dag() { return {1, 1, mat(0, 0, 0, 1), Parity::Even}; }
inline GradedMatrix psi() { return {1, 1, mat(0, 0, 1, 0), Parity::Odd}; }
inline GradedMatrix psi_dag() { return {1, 1, mat(0, 1, 0, 0), Parity::Odd}; }

inline ComplexMatrix sigma0() { return mat(1, 0, 0, 0); }
inline ComplexMatrix sigma_plus() { return mat(0, 1, 0, 0); }
inline ComplexMatrix sigma_minus() { return mat(0, 0, 1, 0); }
inline ComplexMatrix sigma3() { return mat(1, 0, 0, -1); }

/// f = f00 Phi + f01 Psi+ + f10 Psi + f11 Phi+
struct Coordinates {
    Complex f00, f01, f10, f11;
};

inline Coordinates decompose(const ComplexMatrix& f) {
    if (f.rows() != 2 || f.cols() != 2) throw DimensionError("c11::decompose: expected 2x2");
    return {f(0, 0), f(0, 1), f(1, 0), f(1, 1)};
}

inline ComplexMatrix reassemble(const Coordinates& c) {
    return c.f00 * phi().entries() + c.f01 * psi_dag().entries() + c.f10 * psi().entries() +
           c.f11 * phi_dag().entries();
}

}  // namespace c11

}  // namespace susyqm
