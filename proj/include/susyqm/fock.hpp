#pragma once

// Finite-dimensional second quantization over r truncated boson modes
// (occupations 0..M) and s fermion modes (occupations 0, 1).
//
// Basis ordering: fermion occupation bits are the low bits of the basis index,
// boson occupations follow in mixed radix (M+1). Fermionic signs use the
// Jordan-Wigner string over lower-indexed modes, so b_k+ picks up
// (-1)^(nu_1 + ... + nu_{k-1}). Boson matrix elements carry the sqrt(mu)
// normalization; the truncation makes [a, a+] = 1 fail only on mu = M.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "susyqm/error.hpp"
#include "susyqm/graded.hpp"
#include "susyqm/sparse.hpp"
#include "susyqm/surd.hpp"

namespace susyqm::fock {

struct FockSpec {
    int n_boson_modes = 0;
    int boson_cutoff = 0;
    int n_fermion_modes = 0;

    void validate() const {
        if (n_boson_modes < 0 || boson_cutoff < 0 || n_fermion_modes < 0) {
            throw DomainError("FockSpec: counts must be non-negative");
        }
        if (n_fermion_modes > 30) throw DomainError("FockSpec: too many fermion modes");
        const double dim = std::pow(boson_cutoff + 1.0, n_boson_modes) * std::ldexp(1.0, n_fermion_modes);
        if (dim > 1e8) throw DomainError("FockSpec: Hilbert space too large");
    }

    std::size_t fermion_dim() const { return std::size_t{1} << n_fermion_modes; }

    std::size_t boson_stride(int r) const {
        std::size_t s = fermion_dim();
        for (int i = 0; i < r; ++i) s *= static_cast<std::size_t>(boson_cutoff + 1);
        return s;
    }

    std::size_t dimension() const { return boson_stride(n_boson_modes); }
};

/// |mu_1 ... mu_r ; nu_1 ... nu_s>
struct Occupation {
    std::vector<int> bosons;
    std::vector<int> fermions;

    int boson_count() const { return std::accumulate(bosons.begin(), bosons.end(), 0); }
    int fermion_count() const { return std::accumulate(fermions.begin(), fermions.end(), 0); }

    friend bool operator==(const Occupation&, const Occupation&) = default;
};

inline std::size_t encode(const FockSpec& spec, const Occupation& occ) {
    if (static_cast<int>(occ.bosons.size()) != spec.n_boson_modes ||
        static_cast<int>(occ.fermions.size()) != spec.n_fermion_modes) {
        throw DimensionError("encode: occupation length does not match the spec");
    }
    std::size_t idx = 0;
    for (int k = 0; k < spec.n_fermion_modes; ++k) {
        const int nu = occ.fermions[static_cast<std::size_t>(k)];
        if (nu != 0 && nu != 1) throw DomainError("encode: fermion occupations must be 0 or 1");
        idx |= static_cast<std::size_t>(nu) << k;
    }
    for (int r = 0; r < spec.n_boson_modes; ++r) {
        const int mu = occ.bosons[static_cast<std::size_t>(r)];
        if (mu < 0 || mu > spec.boson_cutoff) throw DomainError("encode: boson occupation outside 0..M");
        idx += static_cast<std::size_t>(mu) * spec.boson_stride(r);
    }
    return idx;
}

inline Occupation decode(const FockSpec& spec, std::size_t idx) {
    Occupation occ;
    occ.fermions.resize(static_cast<std::size_t>(spec.n_fermion_modes));
    occ.bosons.resize(static_cast<std::size_t>(spec.n_boson_modes));
    for (int k = 0; k < spec.n_fermion_modes; ++k) occ.fermions[static_cast<std::size_t>(k)] = static_cast<int>((idx >> k) & 1U);
    std::size_t rest = idx >> spec.n_fermion_modes;
    for (int r = 0; r < spec.n_boson_modes; ++r) {
        occ.bosons[static_cast<std::size_t>(r)] = static_cast<int>(rest % static_cast<std::size_t>(spec.boson_cutoff + 1));
        rest /= static_cast<std::size_t>(spec.boson_cutoff + 1);
    }
    return occ;
}

inline int boson_occupation(const FockSpec& spec, std::size_t idx, int r) {
    return static_cast<int>((idx / spec.boson_stride(r)) % static_cast<std::size_t>(spec.boson_cutoff + 1));
}

inline int fermion_number(std::size_t idx, int n_fermion_modes) {
    const std::size_t mask = (std::size_t{1} << n_fermion_modes) - 1;
    return std::popcount(idx & mask);
}

/// True when every boson occupation is strictly below the cutoff; the
/// canonical commutation relations hold exactly on this sub-basis.
inline bool below_cutoff(const FockSpec& spec, std::size_t idx) {
    for (int r = 0; r < spec.n_boson_modes; ++r) {
        if (boson_occupation(spec, idx, r) >= spec.boson_cutoff) return false;
    }
    return true;
}

template <class T>
std::vector<T> basis_vector(const FockSpec& spec, const Occupation& occ) {
    std::vector<T> v(spec.dimension(), T{});
    v[encode(spec, occ)] = T{1};
    return v;
}

template <class T = double>
struct FockOperator {
    SparseMatrix<T> matrix;
    std::string label;

    FockOperator adjoint(std::string new_label) const { return {matrix.adjoint(), std::move(new_label)}; }
};

template <class T>
struct LadderPair {
    FockOperator<T> annihilate;
    FockOperator<T> create;
};

/// (b_k, b_k+) for k = 1..s.
template <class T = double>
std::vector<LadderPair<T>> fermion_ops(const FockSpec& spec) {
    spec.validate();
    const std::size_t dim = spec.dimension();
    std::vector<LadderPair<T>> out;
    for (int k = 0; k < spec.n_fermion_modes; ++k) {
        const std::size_t bit = std::size_t{1} << k;
        const std::size_t lower = bit - 1;
        std::vector<Triplet<T>> t;
        t.reserve(dim / 2);
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & bit) continue;
            const int sign = (std::popcount(i & lower) % 2 == 0) ? 1 : -1;
            t.push_back({i | bit, i, T(sign)});
        }
        FockOperator<T> create{SparseMatrix<T>(dim, dim, std::move(t)), "b_" + std::to_string(k + 1) + "+"};
        FockOperator<T> annihilate = create.adjoint("b_" + std::to_string(k + 1));
        out.push_back({std::move(annihilate), std::move(create)});
    }
    return out;
}

/// (a_r, a_r+) for r = 1..r_max, with a+|mu> = sqrt(mu+1)|mu+1>.
template <class T = double>
std::vector<LadderPair<T>> boson_ops(const FockSpec& spec) {
    spec.validate();
    if (spec.n_boson_modes > 0 && spec.boson_cutoff < 1) throw DomainError("boson_ops: cutoff M must be >= 1");
    const std::size_t dim = spec.dimension();
    std::vector<LadderPair<T>> out;
    for (int r = 0; r < spec.n_boson_modes; ++r) {
        const std::size_t stride = spec.boson_stride(r);
        std::vector<Triplet<T>> t;
        for (std::size_t i = 0; i < dim; ++i) {
            const int mu = boson_occupation(spec, i, r);
            if (mu < spec.boson_cutoff) t.push_back({i + stride, i, ScalarTraits<T>::sqrt_int(mu + 1)});
        }
        FockOperator<T> create{SparseMatrix<T>(dim, dim, std::move(t)), "a_" + std::to_string(r + 1) + "+"};
        FockOperator<T> annihilate = create.adjoint("a_" + std::to_string(r + 1));
        out.push_back({std::move(annihilate), std::move(create)});
    }
    return out;
}

template <class T>
struct NumberOperators {
    FockOperator<T> n_boson;
    FockOperator<T> n_fermion;
    FockOperator<T> total;
};

template <class T = double>
NumberOperators<T> number_operators(const FockSpec& spec) {
    spec.validate();
    const std::size_t dim = spec.dimension();
    std::vector<Triplet<T>> nb, nf, n;
    for (std::size_t i = 0; i < dim; ++i) {
        const Occupation occ = decode(spec, i);
        const int b = occ.boson_count();
        const int f = occ.fermion_count();
        nb.push_back({i, i, T(b)});
        nf.push_back({i, i, T(f)});
        n.push_back({i, i, T(b + f)});
    }
    return {{SparseMatrix<T>(dim, dim, std::move(nb)), "N_B"},
            {SparseMatrix<T>(dim, dim, std::move(nf)), "N_F"},
            {SparseMatrix<T>(dim, dim, std::move(n)), "N"}};
}

/// Q_rs = a_r b_s+ (r, s zero-based).
template <class T = double>
FockOperator<T> supercharge_component(const FockSpec& spec, int r, int s) {
    if (r < 0 || r >= spec.n_boson_modes || s < 0 || s >= spec.n_fermion_modes) {
        throw DomainError("supercharge_component: mode index out of range");
    }
    const auto a = boson_ops<T>(spec);
    const auto b = fermion_ops<T>(spec);
    return {a[static_cast<std::size_t>(r)].annihilate.matrix * b[static_cast<std::size_t>(s)].create.matrix,
            "Q_" + std::to_string(r + 1) + std::to_string(s + 1)};
}

template <class T>
struct Supercharges {
    FockOperator<T> q;
    FockOperator<T> q_dag;
    FockOperator<T> h;  // sum over (r,s) of {Q_rs+, Q_rs}
};

/// Q = sum_rs a_r b_s+, Q+ its adjoint, H = sum_rs {Q_rs+, Q_rs}.
template <class T = double>
Supercharges<T> supercharges(const FockSpec& spec) {
    spec.validate();
    if (spec.n_boson_modes < 1 || spec.n_fermion_modes < 1) {
        throw DomainError("supercharges: need at least one boson and one fermion mode");
    }
    const std::size_t dim = spec.dimension();
    const auto a = boson_ops<T>(spec);
    const auto b = fermion_ops<T>(spec);
    auto q = SparseMatrix<T>::zero(dim);
    auto h = SparseMatrix<T>::zero(dim);
    for (const auto& ar : a) {
        for (const auto& bs : b) {
            const SparseMatrix<T> qrs = ar.annihilate.matrix * bs.create.matrix;
            const SparseMatrix<T> qrs_dag = qrs.adjoint();
            q = q + qrs;
            h = h + anticommutator(qrs_dag, qrs);
        }
    }
    FockOperator<T> qop{std::move(q), "Q"};
    FockOperator<T> qd = qop.adjoint("Q+");
    return {std::move(qop), std::move(qd), {std::move(h), "H"}};
}

/// True when `op` changes fermion number parity on every stored entry.
template <class T>
bool is_fermion_odd(const FockSpec& spec, const FockOperator<T>& op) {
    bool odd = true;
    op.matrix.for_each([&](std::size_t r, std::size_t c, const T&) {
        if ((fermion_number(r, spec.n_fermion_modes) + fermion_number(c, spec.n_fermion_modes)) % 2 == 0) odd = false;
    });
    return odd;
}

// Relation checks producing AlgebraReport rows. Residuals are max |entry| of
// the difference; with exact scalars "passed" means the difference is zero.

template <class T>
AlgebraReport exact_report(std::string name, const SparseMatrix<T>& diff) {
    return {std::move(name), diff.max_abs(), diff.is_zero()};
}

template <class T>
AlgebraReport exact_report_on(std::string name, const SparseMatrix<T>& diff,
                              const std::function<bool(std::size_t)>& keep) {
    const double res = diff.max_abs_on(keep);
    bool zero = true;
    diff.for_each([&](std::size_t r, std::size_t c, const T& v) {
        if (keep(r) && keep(c) && !(v == T{})) zero = false;
    });
    return {std::move(name), res, zero};
}

/// {b_k, b_k'} = 0, {b_k+, b_k'+} = 0, {b_k+, b_k'} = delta I for every pair.
template <class T = Surd>
std::vector<AlgebraReport> check_fermion_algebra(const FockSpec& spec) {
    const auto b = fermion_ops<T>(spec);
    const std::size_t dim = spec.dimension();
    const auto id = SparseMatrix<T>::identity(dim);
    const auto zero = SparseMatrix<T>::zero(dim);
    std::vector<AlgebraReport> out;
    for (std::size_t k = 0; k < b.size(); ++k) {
        for (std::size_t l = 0; l < b.size(); ++l) {
            const std::string tag = std::to_string(k + 1) + "," + std::to_string(l + 1);
            out.push_back(exact_report("{b_" + tag + "} = 0",
                                       anticommutator(b[k].annihilate.matrix, b[l].annihilate.matrix)));
            out.push_back(exact_report("{b+_" + tag + "+} = 0",
                                       anticommutator(b[k].create.matrix, b[l].create.matrix)));
            out.push_back(exact_report("{b+_" + tag + "} = delta",
                                       anticommutator(b[k].create.matrix, b[l].annihilate.matrix) -
                                           (k == l ? id : zero)));
        }
    }
    return out;
}

/// [a_r, a_r'+] = delta I and [a_r, a_r'] = 0 below the cutoff.
template <class T = Surd>
std::vector<AlgebraReport> check_boson_algebra(const FockSpec& spec) {
    const auto a = boson_ops<T>(spec);
    const std::size_t dim = spec.dimension();
    const auto id = SparseMatrix<T>::identity(dim);
    const auto zero = SparseMatrix<T>::zero(dim);
    const auto keep = [&spec](std::size_t i) { return below_cutoff(spec, i); };
    std::vector<AlgebraReport> out;
    for (std::size_t r = 0; r < a.size(); ++r) {
        for (std::size_t q = 0; q < a.size(); ++q) {
            const std::string tag = std::to_string(r + 1) + "," + std::to_string(q + 1);
            out.push_back(exact_report_on("[a_" + tag + "+] = delta (mu<M)",
                                          commutator(a[r].annihilate.matrix, a[q].create.matrix) -
                                              (r == q ? id : zero),
                                          keep));
            out.push_back(exact_report("[a_" + tag + "] = 0",
                                       commutator(a[r].annihilate.matrix, a[q].annihilate.matrix)));
        }
    }
    return out;
}

/// Nilpotency, {Q+,Q} against N_B + N_F, and [H,Q] = [H,Q+] = 0 with H the
/// sum of component anticommutators. The last three are restricted to the
/// below-cutoff sub-basis.
template <class T = Surd>
std::vector<AlgebraReport> check_supercharge_algebra(const FockSpec& spec) {
    const auto sc = supercharges<T>(spec);
    const auto num = number_operators<T>(spec);
    const auto keep = [&spec](std::size_t i) { return below_cutoff(spec, i); };
    std::vector<AlgebraReport> out;
    out.push_back(exact_report("Q^2 = 0", sc.q.matrix * sc.q.matrix));
    out.push_back(exact_report("Q+^2 = 0", sc.q_dag.matrix * sc.q_dag.matrix));
    out.push_back(exact_report_on("{Q+,Q} = N_B + N_F (mu<M)",
                                  anticommutator(sc.q_dag.matrix, sc.q.matrix) - num.total.matrix, keep));
    out.push_back(exact_report_on("sum {Q_rs+,Q_rs} = N_B + N_F (mu<M)", sc.h.matrix - num.total.matrix, keep));
    out.push_back(exact_report_on("[H,Q] = 0 (mu<M)", commutator(sc.h.matrix, sc.q.matrix), keep));
    out.push_back(exact_report_on("[H,Q+] = 0 (mu<M)", commutator(sc.h.matrix, sc.q_dag.matrix), keep));
    return out;
}

// ---- first-quantized antisymmetrization ----

/// Amplitudes over N-tuples of single-particle labels.
struct ManyBodyWavefunction {
    std::size_t particles = 0;
    std::map<std::vector<int>, std::complex<double>> amplitudes;

    bool is_zero() const { return amplitudes.empty(); }

    double norm() const {
        double s = 0.0;
        for (const auto& [_, a] : amplitudes) s += std::norm(a);
        return std::sqrt(s);
    }

    std::complex<double> amplitude(const std::vector<int>& labels) const {
        const auto it = amplitudes.find(labels);
        return it == amplitudes.end() ? std::complex<double>{} : it->second;
    }

    void add(const std::vector<int>& labels, std::complex<double> value) {
        if (labels.size() != particles) throw DimensionError("ManyBodyWavefunction: tuple length mismatch");
        auto& slot = amplitudes[labels];
        slot += value;
        if (slot == std::complex<double>{}) amplitudes.erase(labels);
    }
};

namespace detail {
inline int permutation_sign(const std::vector<std::size_t>& perm) {
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j] ? 1 : 0;
    }
    return inversions % 2 == 0 ? 1 : -1;
}
}  // namespace detail

/// (1/sqrt(N!)) sum_sigma sgn(sigma) psi_{sigma(1)} x ... x psi_{sigma(N)};
/// repeated labels cancel pairwise to the empty (zero) wavefunction.
inline ManyBodyWavefunction slater(const std::vector<int>& single_particle) {
    if (single_particle.empty()) throw DomainError("slater: need at least one particle");
    if (single_particle.size() > 10) throw DomainError("slater: more than 10 particles is not supported");
    const std::size_t n = single_particle.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double nfact = 1.0;
    for (std::size_t i = 2; i <= n; ++i) nfact *= static_cast<double>(i);
    const double c = 1.0 / std::sqrt(nfact);
    ManyBodyWavefunction psi;
    psi.particles = n;
    do {
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = single_particle[perm[i]];
        psi.add(labels, {detail::permutation_sign(perm) * c, 0.0});
    } while (std::next_permutation(perm.begin(), perm.end()));
    return psi;
}

/// Swaps particle slots i and j (zero-based) in every tuple.
inline ManyBodyWavefunction exchange_apply(const ManyBodyWavefunction& psi, std::size_t i, std::size_t j) {
    if (i >= psi.particles || j >= psi.particles) throw DomainError("exchange_apply: slot out of range");
    if (i == j) throw DomainError("exchange_apply: slots must differ");
    ManyBodyWavefunction out;
    out.particles = psi.particles;
    for (const auto& [from, a] : psi.amplitudes) {
        std::vector<int> labels = from;
        std::swap(labels[i], labels[j]);
        out.add(labels, a);
    }
    return out;
}

}  // namespace susyqm::fock
