#pragma once

// Smallest eigenpairs of a real symmetric tridiagonal matrix.
//
// Eigenvalues come from Sturm-sequence bisection, each index bracketed
// independently (so the brackets can be spread over threads without changing
// a single bit of the result). Eigenvectors come from inverse iteration on a
// pivoted LU factorization of T - lambda I, with Gram-Schmidt against earlier
// vectors of the same cluster.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <thread>
#include <vector>

#include "susyqm/error.hpp"

namespace susyqm {

struct TridiagonalOperator {
    std::vector<double> diagonal;
    std::vector<double> offdiagonal;  // size n-1

    std::size_t size() const noexcept { return diagonal.size(); }

    void validate() const {
        if (diagonal.empty()) throw DimensionError("TridiagonalOperator: empty");
        if (offdiagonal.size() + 1 != diagonal.size()) {
            throw DimensionError("TridiagonalOperator: off-diagonal must have n-1 entries");
        }
        for (double d : diagonal) {
            if (!std::isfinite(d)) throw DomainError("TridiagonalOperator: non-finite diagonal entry");
        }
        for (double e : offdiagonal) {
            if (!std::isfinite(e)) throw DomainError("TridiagonalOperator: non-finite off-diagonal entry");
        }
    }

    std::vector<double> apply(std::span<const double> x) const {
        const std::size_t n = size();
        if (x.size() != n) throw DimensionError("TridiagonalOperator::apply: length mismatch");
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double v = diagonal[i] * x[i];
            if (i > 0) v += offdiagonal[i - 1] * x[i - 1];
            if (i + 1 < n) v += offdiagonal[i] * x[i + 1];
            y[i] = v;
        }
        return y;
    }

    /// Max absolute row sum; bounds the spectral norm.
    double norm_inf() const {
        double m = 0.0;
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i) {
            double s = std::abs(diagonal[i]);
            if (i > 0) s += std::abs(offdiagonal[i - 1]);
            if (i + 1 < n) s += std::abs(offdiagonal[i]);
            m = std::max(m, s);
        }
        return m;
    }

    /// Gershgorin enclosure of the spectrum.
    std::pair<double, double> gershgorin() const {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0.0;
            if (i > 0) r += std::abs(offdiagonal[i - 1]);
            if (i + 1 < n) r += std::abs(offdiagonal[i]);
            lo = std::min(lo, diagonal[i] - r);
            hi = std::max(hi, diagonal[i] + r);
        }
        return {lo, hi};
    }

    TridiagonalOperator shifted(double sigma) const {
        TridiagonalOperator t = *this;
        for (double& d : t.diagonal) d -= sigma;
        return t;
    }
};

struct Spectrum {
    std::vector<double> eigenvalues;                // ascending
    std::vector<std::vector<double>> eigenvectors;  // weight * sum(v^2) == 1
    std::vector<double> residuals;                  // ||T v - lambda v||_2 / ||v||_2
    double weight = 1.0;

    std::size_t size() const noexcept { return eigenvalues.size(); }
};

struct EigenOptions {
    /// Residual bound relative to ||T||.
    double tol = 1e-10;
    /// Inner-product weight used to normalize eigenvectors (grid spacing h).
    double weight = 1.0;
    /// Worker threads for bisection; 1 keeps everything on the caller's thread.
    unsigned threads = 1;
    int max_inverse_iterations = 8;
};

namespace detail {

inline double pivot_min(const TridiagonalOperator& t) {
    double emax = 1.0;
    for (double e : t.offdiagonal) emax = std::max(emax, e * e);
    return std::numeric_limits<double>::min() * emax;
}

/// Number of eigenvalues strictly less than x (LDL^T inertia).
inline std::size_t sturm_count(const TridiagonalOperator& t, double x, double pivmin) {
    std::size_t count = 0;
    double q = t.diagonal[0] - x;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0) ++count;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double e = t.offdiagonal[i - 1];
        q = t.diagonal[i] - x - e * e / q;
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0) ++count;
    }
    return count;
}

/// The index-th smallest eigenvalue (zero-based) by bisection.
inline double bisect_eigenvalue(const TridiagonalOperator& t, std::size_t index, double lo, double hi,
                                double pivmin) {
    const double eps = std::numeric_limits<double>::epsilon();
    for (int it = 0; it < 4000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi)) + pivmin || mid <= lo || mid >= hi) {
            break;
        }
        if (sturm_count(t, mid, pivmin) > index) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Pivoted LU of a tridiagonal (T - lambda I), solved repeatedly.
class TridiagonalLU {
public:
    TridiagonalLU(const TridiagonalOperator& t, double lambda, double tiny) : n_(t.size()) {
        // Rows hold (d, u1, u2) after elimination; l stores multipliers.
        d_.resize(n_);
        u1_.assign(n_, 0.0);
        u2_.assign(n_, 0.0);
        l_.assign(n_, 0.0);
        swapped_.assign(n_, 0);
        std::vector<double> diag(n_), sub(n_ > 0 ? n_ - 1 : 0), sup(n_ > 0 ? n_ - 1 : 0);
        for (std::size_t i = 0; i < n_; ++i) diag[i] = t.diagonal[i] - lambda;
        for (std::size_t i = 0; i + 1 < n_; ++i) sub[i] = sup[i] = t.offdiagonal[i];

        double cur_d = diag[0];
        double cur_u1 = n_ > 1 ? sup[0] : 0.0;
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            const double below = sub[i];
            const double next_d = diag[i + 1];
            const double next_u1 = i + 2 < n_ ? sup[i + 1] : 0.0;
            if (std::abs(cur_d) >= std::abs(below)) {
                if (cur_d == 0.0) cur_d = tiny;
                const double m = below / cur_d;
                l_[i] = m;
                d_[i] = cur_d;
                u1_[i] = cur_u1;
                u2_[i] = 0.0;
                cur_d = next_d - m * cur_u1;
                cur_u1 = next_u1;
            } else {
                const double m = cur_d / below;
                l_[i] = m;
                swapped_[i] = 1;
                d_[i] = below;
                u1_[i] = next_d;
                u2_[i] = next_u1;
                cur_d = cur_u1 - m * next_d;
                cur_u1 = -m * next_u1;
            }
        }
        if (cur_d == 0.0) cur_d = tiny;
        d_[n_ - 1] = cur_d;
        for (double& v : d_) {
            if (std::abs(v) < tiny) v = std::copysign(tiny, v == 0.0 ? 1.0 : v);
        }
    }

    void solve(std::vector<double>& b) const {
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (swapped_[i]) {
                std::swap(b[i], b[i + 1]);
            }
            b[i + 1] -= l_[i] * b[i];
        }
        for (std::size_t ii = n_; ii-- > 0;) {
            double v = b[ii];
            if (ii + 1 < n_) v -= u1_[ii] * b[ii + 1];
            if (ii + 2 < n_) v -= u2_[ii] * b[ii + 2];
            b[ii] = v / d_[ii];
        }
    }

private:
    std::size_t n_;
    std::vector<double> d_, u1_, u2_, l_;
    std::vector<char> swapped_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// Deterministic start vector: a fixed 64-bit LCG mapped to (-1, 1).
inline std::vector<double> start_vector(std::size_t n, std::size_t seed) {
    std::uint64_t s = 0x9E3779B97F4A7C15ULL ^ (seed * 0xBF58476D1CE4E5B9ULL);
    std::vector<double> v(n);
    for (auto& x : v) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        x = static_cast<double>(s >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    }
    return v;
}

inline double residual_norm(const TridiagonalOperator& t, std::span<const double> v, double lambda) {
    const auto tv = t.apply(v);
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double r = tv[i] - lambda * v[i];
        s += r * r;
    }
    return std::sqrt(s) / norm2(v);
}

}  // namespace detail

/// Number of eigenvalues of t strictly below x.
inline std::size_t count_below(const TridiagonalOperator& t, double x) {
    t.validate();
    return detail::sturm_count(t, x, detail::pivot_min(t));
}

/// The k smallest eigenvalues of t, ascending.
inline std::vector<double> smallest_eigenvalues(const TridiagonalOperator& t, std::size_t k, unsigned threads = 1) {
    t.validate();
    if (k < 1 || k > t.size()) throw DomainError("smallest_eigenvalues: need 1 <= k <= n");
    const double pivmin = detail::pivot_min(t);
    auto [glo, ghi] = t.gershgorin();
    const double pad = 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(glo), std::abs(ghi)) + pivmin;
    glo -= pad;
    ghi += pad;
    std::vector<double> values(k);
    const auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t j = first; j < k; j += stride) values[j] = detail::bisect_eigenvalue(t, j, glo, ghi, pivmin);
    };
    const std::size_t nthreads = std::clamp<std::size_t>(threads, 1, k);
    if (nthreads == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < nthreads; ++w) pool.emplace_back(work, w, nthreads);
    }
    return values;
}

/// k smallest eigenpairs. Eigenvectors are normalized in the weighted norm and
/// sign-fixed so the largest-magnitude entry is positive. Throws
/// NotConvergedError when a residual stays above tol * ||t||.
inline Spectrum eigen_smallest(const TridiagonalOperator& t, std::size_t k, const EigenOptions& opt = {}) {
    if (!(opt.tol > 0.0)) throw DomainError("eigen_smallest: tolerance must be positive");
    if (!(opt.weight > 0.0)) throw DomainError("eigen_smallest: weight must be positive");
    Spectrum out;
    out.weight = opt.weight;
    out.eigenvalues = smallest_eigenvalues(t, k, opt.threads);
    const std::size_t n = t.size();
    const double tnorm = std::max(t.norm_inf(), std::numeric_limits<double>::min());
    const double eps = std::numeric_limits<double>::epsilon();
    const double tiny = eps * tnorm;
    const double cluster_gap = 1e-3 * tnorm;

    for (std::size_t j = 0; j < k; ++j) {
        double lambda = out.eigenvalues[j];
        // Keep the shift off an exact eigenvalue of a cluster already treated.
        if (j > 0 && std::abs(lambda - out.eigenvalues[j - 1]) < 10.0 * tiny) lambda += 10.0 * tiny * static_cast<double>(j);
        const detail::TridiagonalLU lu(t, lambda, tiny);
        std::vector<double> v = detail::start_vector(n, j);
        std::size_t cluster_start = j;
        while (cluster_start > 0 && std::abs(out.eigenvalues[j] - out.eigenvalues[cluster_start - 1]) < cluster_gap) {
            --cluster_start;
        }
        double res = std::numeric_limits<double>::infinity();
        for (int it = 0; it < opt.max_inverse_iterations; ++it) {
            lu.solve(v);
            for (std::size_t p = cluster_start; p < j; ++p) {
                const auto& u = out.eigenvectors[p];
                const double c = detail::dot(u, v) * opt.weight;
                for (std::size_t i = 0; i < n; ++i) v[i] -= c * u[i];
            }
            const double nv = detail::norm2(v);
            if (nv == 0.0 || !std::isfinite(nv)) {
                v = detail::start_vector(n, j + 1000 * static_cast<std::size_t>(it + 1));
                continue;
            }
            for (double& x : v) x /= nv;
            res = detail::residual_norm(t, v, out.eigenvalues[j]);
            if (it >= 1 && res <= 0.1 * opt.tol * tnorm) break;
        }
        if (!(res <= opt.tol * tnorm)) {
            throw NotConvergedError("eigen_smallest: inverse iteration did not converge for eigenvalue " +
                                        std::to_string(j),
                                    res);
        }
        // Sign: largest-magnitude entry positive; scale to the weighted norm.
        std::size_t imax = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
        }
        const double scale = (v[imax] < 0 ? -1.0 : 1.0) / (detail::norm2(v) * std::sqrt(opt.weight));
        for (double& x : v) x *= scale;
        out.residuals.push_back(res);
        out.eigenvectors.push_back(std::move(v));
    }
    return out;
}

}  // namespace susyqm
