#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "susyqm/fock.hpp"

using namespace susyqm;
using namespace susyqm::fock;
using Catch::Approx;

namespace {

template <class T>
SparseMatrix<T> id(const FockSpec& spec) {
    return SparseMatrix<T>::identity(spec.dimension());
}

template <class T>
bool zero_below_cutoff(const FockSpec& spec, const SparseMatrix<T>& m) {
    bool zero = true;
    m.for_each([&](std::size_t r, std::size_t c, const T& v) {
        if (below_cutoff(spec, r) && below_cutoff(spec, c) && !(v == T{})) zero = false;
    });
    return zero;
}

}  // namespace

TEST_CASE("surd arithmetic is exact") {
    CHECK(Surd::sqrt_of(12) == Surd(2) * Surd::sqrt_of(3));
    CHECK(Surd::sqrt_of(3) * Surd::sqrt_of(3) == Surd(3));
    CHECK(Surd::sqrt_of(2) * Surd::sqrt_of(6) == Surd(2) * Surd::sqrt_of(3));
    CHECK((Surd::sqrt_of(2) + Surd(1) - Surd::sqrt_of(2) - Surd(1)).is_zero());
    CHECK(Surd::sqrt_of(0).is_zero());
    CHECK((Surd::sqrt_of(5) + Surd(2)).to_double() == Approx(std::sqrt(5.0) + 2.0));
    CHECK_THROWS_AS(Surd::sqrt_of(-1), DomainError);
}

TEST_CASE("basis encoding round-trips") {
    const FockSpec spec{2, 3, 3};
    REQUIRE(spec.dimension() == 16 * 8);
    for (std::size_t i = 0; i < spec.dimension(); ++i) CHECK(encode(spec, decode(spec, i)) == i);
    CHECK_THROWS_AS(encode(spec, {{4, 0}, {0, 0, 0}}), DomainError);
    CHECK_THROWS_AS(encode(spec, {{0, 0}, {0, 2, 0}}), DomainError);
    CHECK_THROWS_AS(encode(spec, {{0}, {0, 0, 0}}), DimensionError);
}

TEST_CASE("fermion ladder operators") {
    SECTION("single mode") {
        const FockSpec spec{0, 0, 1};
        const auto b = fermion_ops<double>(spec);
        REQUIRE(b.size() == 1);
        CHECK(anticommutator(b[0].create.matrix, b[0].annihilate.matrix) == id<double>(spec));
        CHECK((b[0].create.matrix * b[0].create.matrix).is_zero());
        CHECK((b[0].annihilate.matrix * b[0].annihilate.matrix).is_zero());
    }
    SECTION("creation order flips the sign") {
        const FockSpec spec{0, 0, 2};
        const auto b = fermion_ops<double>(spec);
        const auto vac = basis_vector<double>(spec, {{}, {0, 0}});
        const auto v12 = b[0].create.matrix.apply(b[1].create.matrix.apply(vac));
        const auto v21 = b[1].create.matrix.apply(b[0].create.matrix.apply(vac));
        const std::size_t both = encode(spec, {{}, {1, 1}});
        CHECK(std::abs(v12[both]) == 1.0);
        CHECK(v12[both] == -v21[both]);
    }
    SECTION("full anticommutation table, s up to 4") {
        for (int s = 1; s <= 4; ++s) {
            const auto reports = check_fermion_algebra<Surd>({1, 2, s});
            CHECK(reports.size() == static_cast<std::size_t>(3 * s * s));
            for (const auto& r : reports) {
                INFO(r.relation_name << " s=" << s);
                CHECK(r.passed);
                CHECK(r.max_residual == 0.0);
            }
        }
    }
}

TEST_CASE("boson ladder operators") {
    const FockSpec spec{1, 3, 0};
    const auto a = boson_ops<double>(spec);
    const auto vac = basis_vector<double>(spec, {{0}, {}});
    const std::size_t one = encode(spec, {{1}, {}});
    CHECK(a[0].create.matrix.coeff(one, 0) == 1.0);
    const auto annihilated = a[0].annihilate.matrix.apply(vac);
    CHECK(std::all_of(annihilated.begin(), annihilated.end(), [](double x) { return x == 0.0; }));

    SECTION("commutator is the identity below the cutoff and fails at mu = M") {
        const auto c = commutator(boson_ops<Surd>(spec)[0].annihilate.matrix, boson_ops<Surd>(spec)[0].create.matrix);
        for (int mu = 0; mu < 3; ++mu) {
            const std::size_t i = encode(spec, {{mu}, {}});
            CHECK(c.coeff(i, i) == Surd(1));
        }
        const std::size_t top = encode(spec, {{3}, {}});
        CHECK(c.coeff(top, top) == Surd(-3));
    }
    SECTION("two modes commute and obey the CCR below the cutoff") {
        for (const auto& r : check_boson_algebra<Surd>({2, 3, 1})) {
            INFO(r.relation_name);
            CHECK(r.passed);
        }
    }
    CHECK_THROWS_AS(boson_ops<double>({1, 0, 0}), DomainError);
}

TEST_CASE("number operators") {
    const FockSpec spec{1, 3, 2};
    const auto n = number_operators<double>(spec);
    CHECK(n.total.matrix.coeff(0, 0) == 0.0);
    const std::size_t i = encode(spec, {{2}, {1, 0}});
    CHECK(n.total.matrix.coeff(i, i) == 3.0);
    CHECK((n.n_boson.matrix + n.n_fermion.matrix) == n.total.matrix);
    n.n_fermion.matrix.for_each([&](std::size_t, std::size_t, double v) {
        CHECK(v >= 1.0);
        CHECK(v <= 2.0);
    });

    SECTION("agrees with the ladder operators") {
        const auto a = boson_ops<Surd>(spec);
        const auto b = fermion_ops<Surd>(spec);
        const auto nf = b[0].create.matrix * b[0].annihilate.matrix + b[1].create.matrix * b[1].annihilate.matrix;
        CHECK(nf == number_operators<Surd>(spec).n_fermion.matrix);
        CHECK(a[0].create.matrix * a[0].annihilate.matrix == number_operators<Surd>(spec).n_boson.matrix);
    }
}

TEST_CASE("supercharges for one boson and one fermion mode") {
    const FockSpec spec{1, 4, 1};
    const auto sc = supercharges<Surd>(spec);

    SECTION("Q lowers a boson and raises a fermion") {
        const std::size_t from = encode(spec, {{2}, {0}});
        const std::size_t to = encode(spec, {{1}, {1}});
        CHECK(sc.q.matrix.coeff(to, from) == Surd::sqrt_of(2));
        std::size_t count = 0;
        sc.q.matrix.for_each([&](std::size_t r, std::size_t c, const Surd&) {
            const auto o_in = decode(spec, c);
            const auto o_out = decode(spec, r);
            CHECK(o_out.bosons[0] == o_in.bosons[0] - 1);
            CHECK(o_out.fermions[0] == o_in.fermions[0] + 1);
            ++count;
        });
        CHECK(count == 4);
    }

    CHECK((sc.q.matrix * sc.q.matrix).is_zero());
    CHECK((sc.q_dag.matrix * sc.q_dag.matrix).is_zero());
    const auto qq = anticommutator(sc.q_dag.matrix, sc.q.matrix);
    const std::size_t one_boson = encode(spec, {{1}, {0}});
    CHECK(qq.coeff(one_boson, one_boson) == Surd(1));
    for (const auto& r : check_supercharge_algebra<Surd>(spec)) {
        INFO(r.relation_name);
        CHECK(r.passed);
    }
    CHECK(is_fermion_odd(spec, sc.q));
    CHECK(is_fermion_odd(spec, sc.q_dag));
    CHECK_FALSE(is_fermion_odd(spec, sc.h));
}

// Multi-mode closed forms that follow from the CAR/CCR:
//   {Q_jk+, Q_rs} = delta_ks a_j+ a_r + delta_rj b_s+ b_k
//   sum_rs {Q_rs+, Q_rs} = s_max N_B + r_max N_F,  [H, Q] = (r_max - s_max) Q
TEST_CASE("cross anticommutators of supercharge components") {
    const FockSpec spec{2, 3, 2};
    const auto a = boson_ops<Surd>(spec);
    const auto b = fermion_ops<Surd>(spec);
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            for (int r = 0; r < 2; ++r) {
                for (int s = 0; s < 2; ++s) {
                    const auto qjk_dag = supercharge_component<Surd>(spec, j, k).matrix.adjoint();
                    const auto qrs = supercharge_component<Surd>(spec, r, s).matrix;
                    auto expected = SparseMatrix<Surd>::zero(spec.dimension());
                    if (k == s) expected = expected + a[static_cast<std::size_t>(j)].create.matrix * a[static_cast<std::size_t>(r)].annihilate.matrix;
                    if (r == j) expected = expected + b[static_cast<std::size_t>(s)].create.matrix * b[static_cast<std::size_t>(k)].annihilate.matrix;
                    INFO("j=" << j << " k=" << k << " r=" << r << " s=" << s);
                    CHECK(zero_below_cutoff(spec, anticommutator(qjk_dag, qrs) - expected));
                    if (r != j && s != k) CHECK(zero_below_cutoff(spec, anticommutator(qjk_dag, qrs)));
                }
            }
        }
    }
}

TEST_CASE("summed supercharge Hamiltonian in the multi-mode case") {
    for (const FockSpec spec : {FockSpec{1, 4, 2}, FockSpec{1, 4, 3}, FockSpec{2, 3, 1}, FockSpec{2, 2, 2}}) {
        const auto sc = supercharges<Surd>(spec);
        const auto n = number_operators<Surd>(spec);
        const auto expected = Surd(spec.n_fermion_modes) * n.n_boson.matrix + Surd(spec.n_boson_modes) * n.n_fermion.matrix;
        CHECK(zero_below_cutoff(spec, sc.h.matrix - expected));
        const auto hq = commutator(sc.h.matrix, sc.q.matrix);
        CHECK(zero_below_cutoff(spec, hq - Surd(spec.n_boson_modes - spec.n_fermion_modes) * sc.q.matrix));
        CHECK((sc.q.matrix * sc.q.matrix).is_zero());
        CHECK((sc.q_dag.matrix * sc.q_dag.matrix).is_zero());
        // {Q+,Q} always commutes with Q because Q is nilpotent.
        const auto qq = anticommutator(sc.q_dag.matrix, sc.q.matrix);
        CHECK(commutator(qq, sc.q.matrix).is_zero());
        CHECK(is_fermion_odd(spec, sc.q));
    }
}

TEST_CASE("large spaces construct quickly") {
    const auto t0 = std::chrono::steady_clock::now();
    const auto b = fermion_ops<double>({0, 0, 16});
    const auto a = boson_ops<double>({1, 3, 14});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(b.back().create.matrix.rows() == 65536);
    CHECK(a.front().create.matrix.rows() == 65536);
    CHECK(secs < 1.0);
}

TEST_CASE("slater determinants") {
    SECTION("repeated index vanishes identically") {
        CHECK(slater({1, 1}).is_zero());
        CHECK(slater({2, 5, 2}).is_zero());
    }
    SECTION("two particles") {
        const auto psi = slater({1, 3});
        CHECK(psi.amplitudes.size() == 2);
        CHECK(psi.amplitude({1, 3}).real() == Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
        CHECK(psi.amplitude({3, 1}).real() == Approx(-1.0 / std::sqrt(2.0)).margin(1e-15));
        CHECK(psi.norm() == Approx(1.0).margin(1e-15));
    }
    SECTION("three particles against brute-force permutation signs") {
        const std::vector<int> labels{1, 2, 3};
        const auto psi = slater(labels);
        CHECK(psi.amplitudes.size() == 6);
        std::vector<int> perm{0, 1, 2};
        do {
            // Oracle sign: number of transpositions needed to sort by swapping.
            std::vector<int> work = perm;
            int swaps = 0;
            for (std::size_t i = 0; i < work.size(); ++i) {
                while (work[i] != static_cast<int>(i)) {
                    std::swap(work[i], work[static_cast<std::size_t>(work[i])]);
                    ++swaps;
                }
            }
            const double sign = swaps % 2 == 0 ? 1.0 : -1.0;
            std::vector<int> tuple{labels[static_cast<std::size_t>(perm[0])], labels[static_cast<std::size_t>(perm[1])],
                                   labels[static_cast<std::size_t>(perm[2])]};
            CHECK(psi.amplitude(tuple).real() == Approx(sign / std::sqrt(6.0)).margin(1e-15));
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(psi.norm() == Approx(1.0).margin(1e-14));
    }
    CHECK_THROWS_AS(slater({}), DomainError);
}

TEST_CASE("exchange operator") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    std::uniform_int_distribution<int> label(0, 4);
    ManyBodyWavefunction psi;
    psi.particles = 3;
    for (int i = 0; i < 20; ++i) psi.add({label(rng), label(rng), label(rng)}, {nd(rng), nd(rng)});
    CHECK(exchange_apply(exchange_apply(psi, 0, 2), 0, 2).amplitudes == psi.amplitudes);

    const auto s = slater({1, 3});
    const auto swapped = exchange_apply(s, 0, 1);
    for (const auto& [labels, amp] : s.amplitudes) CHECK(swapped.amplitude(labels) == -amp);

    ManyBodyWavefunction sym;
    sym.particles = 2;
    sym.add({1, 3}, {1.0 / std::sqrt(2.0), 0.0});
    sym.add({3, 1}, {1.0 / std::sqrt(2.0), 0.0});
    CHECK(exchange_apply(sym, 0, 1).amplitudes == sym.amplitudes);

    CHECK_THROWS_AS(exchange_apply(s, 0, 2), DomainError);
    CHECK_THROWS_AS(exchange_apply(s, 1, 1), DomainError);
}
