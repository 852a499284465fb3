#pragma once

// Exact arithmetic in Z[sqrt 2, sqrt 3, sqrt 5, ...]: integer combinations of
// square roots of squarefree integers. Bosonic ladder matrix elements sqrt(mu)
// live here, so products like sqrt(3)*sqrt(3) come out as exactly 3.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <utility>
#include <vector>

#include "susyqm/error.hpp"

namespace susyqm {

class Surd {
public:
    using Term = std::pair<std::uint64_t, std::int64_t>;  // (squarefree radicand, coefficient)

    Surd() = default;
    Surd(std::int64_t n) {  // NOLINT(google-explicit-constructor): integers embed exactly
        if (n != 0) terms_.push_back({1, n});
    }

    /// sqrt(n) for n >= 0, with the square part pulled out.
    static Surd sqrt_of(std::int64_t n) {
        if (n < 0) throw DomainError("Surd::sqrt_of: negative radicand");
        if (n == 0) return {};
        auto [outer, inner] = split_square(static_cast<std::uint64_t>(n));
        Surd s;
        s.terms_.push_back({inner, static_cast<std::int64_t>(outer)});
        return s;
    }

    bool is_zero() const noexcept { return terms_.empty(); }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    double to_double() const {
        double v = 0.0;
        for (const auto& [r, c] : terms_) v += static_cast<double>(c) * std::sqrt(static_cast<double>(r));
        return v;
    }

    friend bool operator==(const Surd&, const Surd&) = default;

    friend Surd operator+(const Surd& a, const Surd& b) {
        Surd out;
        out.terms_.reserve(a.terms_.size() + b.terms_.size());
        auto i = a.terms_.begin();
        auto j = b.terms_.begin();
        while (i != a.terms_.end() || j != b.terms_.end()) {
            if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
                out.terms_.push_back(*i++);
            } else if (i == a.terms_.end() || j->first < i->first) {
                out.terms_.push_back(*j++);
            } else {
                const std::int64_t c = i->second + j->second;
                if (c != 0) out.terms_.push_back({i->first, c});
                ++i;
                ++j;
            }
        }
        return out;
    }

    friend Surd operator-(const Surd& a) {
        Surd out = a;
        for (auto& t : out.terms_) t.second = -t.second;
        return out;
    }

    friend Surd operator-(const Surd& a, const Surd& b) { return a + (-b); }

    friend Surd operator*(const Surd& a, const Surd& b) {
        Surd out;
        for (const auto& [ra, ca] : a.terms_) {
            for (const auto& [rb, cb] : b.terms_) {
                // ra, rb squarefree: ra*rb = g^2 * (ra/g)(rb/g)
                const std::uint64_t g = std::gcd(ra, rb);
                Surd t;
                t.terms_.push_back({(ra / g) * (rb / g), ca * cb * static_cast<std::int64_t>(g)});
                out = out + t;
            }
        }
        return out;
    }

    Surd& operator+=(const Surd& o) { return *this = *this + o; }
    Surd& operator-=(const Surd& o) { return *this = *this - o; }
    Surd& operator*=(const Surd& o) { return *this = *this * o; }

    friend std::ostream& operator<<(std::ostream& os, const Surd& s) {
        if (s.is_zero()) return os << '0';
        bool first = true;
        for (const auto& [r, c] : s.terms_) {
            if (!first) os << (c < 0 ? " - " : " + ");
            else if (c < 0) os << '-';
            first = false;
            os << (c < 0 ? -c : c);
            if (r != 1) os << "*sqrt(" << r << ')';
        }
        return os;
    }

private:
    static std::pair<std::uint64_t, std::uint64_t> split_square(std::uint64_t n) {
        std::uint64_t outer = 1;
        std::uint64_t inner = 1;
        for (std::uint64_t p = 2; p * p <= n; ++p) {
            while (n % (p * p) == 0) {
                n /= p * p;
                outer *= p;
            }
            if (n % p == 0) {
                n /= p;
                inner *= p;
            }
        }
        return {outer, inner * n};
    }

    std::vector<Term> terms_;  // sorted by radicand, no zero coefficients
};

/// Per-scalar hooks used by the generic sparse and Fock code.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
    static double sqrt_int(std::int64_t n) { return std::sqrt(static_cast<double>(n)); }
    static double conj(double x) { return x; }
    static double magnitude(double x) { return std::abs(x); }
};

template <>
struct ScalarTraits<std::complex<double>> {
    static std::complex<double> sqrt_int(std::int64_t n) { return {std::sqrt(static_cast<double>(n)), 0.0}; }
    static std::complex<double> conj(std::complex<double> x) { return std::conj(x); }
    static double magnitude(std::complex<double> x) { return std::abs(x); }
};

template <>
struct ScalarTraits<Surd> {
    static Surd sqrt_int(std::int64_t n) { return Surd::sqrt_of(n); }
    static Surd conj(const Surd& x) { return x; }
    static double magnitude(const Surd& x) { return std::abs(x.to_double()); }
};

}  // namespace susyqm
