#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qtherm/instruments.hpp"
#include "qtherm/tensor.hpp"

using namespace qtherm;

namespace {

Superoperator kraus_heisenberg(const std::vector<ComplexMatrix>& ks)
{
    Superoperator s;
    s.dim = ks.front().dim();
    s.picture = Picture::heisenberg;
    s.mat = ComplexMatrix(s.dim * s.dim);
    for (const auto& k : ks) s.mat += left_mult(k.adjoint()) * right_mult(k);
    return s;
}

// Lüders instrument for the σ_z eigenprojections
Instrument lueders_qubit()
{
    ComplexMatrix p0(2), p1(2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    return make_instrument({"+", "-"}, {kraus_heisenberg({p0}), kraus_heisenberg({p1})});
}

// classical coin: J_a = p_a · Id
Instrument coin(double p0)
{
    Superoperator a, b;
    a.dim = b.dim = 2;
    a.picture = b.picture = Picture::heisenberg;
    a.mat = p0 * ComplexMatrix::identity(4);
    b.mat = (1.0 - p0) * ComplexMatrix::identity(4);
    return make_instrument({"h", "t"}, {a, b});
}

// classical Markov chain with row-stochastic transition matrix q: outcome a
// collects one Kraus operator √q(i,a) |a⟩⟨i| per source state i, so the
// outcome is the landing state and coherences are discarded
Instrument markov_chain(const std::vector<std::vector<double>>& q)
{
    const std::size_t d = q.size();
    std::vector<std::string> labels;
    std::vector<Superoperator> ops;
    for (std::size_t a = 0; a < d; ++a) {
        std::vector<ComplexMatrix> ks;
        for (std::size_t i = 0; i < d; ++i) {
            ComplexMatrix v(d);
            v(a, i) = std::sqrt(q[i][a]);
            ks.push_back(v);
        }
        labels.push_back(std::to_string(a));
        ops.push_back(kraus_heisenberg(ks));
    }
    return make_instrument(labels, ops);
}

DensityMatrix diag_state(const std::vector<double>& p)
{
    return DensityMatrix(ComplexMatrix::diag(p));
}

} // namespace

TEST_CASE("instrument validation")
{
    CHECK_NOTHROW(lueders_qubit());

    // a transpose component is positive but not completely positive
    Superoperator tr_map;
    tr_map.dim = 2;
    tr_map.picture = Picture::heisenberg;
    tr_map.mat = ComplexMatrix(4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) tr_map.mat(i * 2 + j, j * 2 + i) = 0.5;
    Superoperator rest = tr_map;
    CHECK_THROWS_AS(make_instrument({"a", "b"}, {tr_map, rest}), DomainError);

    // non-unital total map
    Superoperator half;
    half.dim = 2;
    half.picture = Picture::heisenberg;
    half.mat = 0.25 * ComplexMatrix::identity(4);
    CHECK_THROWS_AS(make_instrument({"a"}, {half}), DomainError);
}

TEST_CASE("path law: trivial and hand-computed cases")
{
    // single outcome: point mass on the only word
    Superoperator id;
    id.dim = 2;
    id.picture = Picture::heisenberg;
    id.mat = ComplexMatrix::identity(4);
    const Instrument one = make_instrument({"only"}, {id});
    const PathLaw single = path_law(one, diag_state({0.5, 0.5}), 4);
    CHECK(single.p.size() == 1);
    CHECK(single.p[0] == doctest::Approx(1.0));

    // classical coin: i.i.d. product law
    const Instrument c = coin(0.7);
    const PathLaw law = path_law(c, diag_state({0.5, 0.5}), 3);
    CHECK(law.prob({0, 0, 0}) == doctest::Approx(0.343).epsilon(1e-12));
    CHECK(law.prob({0, 1, 0}) == doctest::Approx(0.7 * 0.3 * 0.7).epsilon(1e-12));
    double total = 0.0;
    for (double p : law.p) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // Lüders instrument freezes the first outcome
    const DensityMatrix rho = diag_state({0.7, 0.3});
    const PathLaw l2 = path_law(lueders_qubit(), rho, 2);
    CHECK(l2.prob({0, 0}) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(l2.prob({1, 1}) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(l2.prob({0, 1}) == doctest::Approx(0.0));
    CHECK(l2.prob({1, 0}) == doctest::Approx(0.0));

    // non-invariant state is rejected
    const Instrument mc = markov_chain({{0.9, 0.1}, {0.2, 0.8}});
    CHECK_THROWS_AS(path_law(mc, diag_state({0.5, 0.5}), 2), NotInvariant);
    CHECK_THROWS_AS(path_law(coin(0.5), diag_state({0.5, 0.5}), 21), OverflowError);
}

TEST_CASE("consistency and shift invariance of marginals")
{
    const Instrument mc = markov_chain({{0.9, 0.1}, {0.2, 0.8}});
    const DensityMatrix pi = diag_state({2.0 / 3.0, 1.0 / 3.0});
    const PathLaw p3 = path_law(mc, pi, 3);
    const PathLaw p2 = path_law(mc, pi, 2);
    const PathLaw front = p3.marginal_front();
    const PathLaw back = p3.marginal_back();
    for (std::size_t i = 0; i < p2.p.size(); ++i) {
        CHECK(std::abs(front.p[i] - p2.p[i]) <= 1e-10);
        CHECK(std::abs(back.p[i] - p2.p[i]) <= 1e-10); // shift invariance
    }
}

TEST_CASE("reversed law")
{
    const Instrument mc = markov_chain({{0.9, 0.1}, {0.2, 0.8}});
    const DensityMatrix pi = diag_state({2.0 / 3.0, 1.0 / 3.0});
    const PathLaw p3 = path_law(mc, pi, 3);
    const std::vector<std::size_t> id{0, 1};
    const std::vector<std::size_t> swap{1, 0};

    // P̂(ω₁ω₂ω₃) = P(θω₃, θω₂, θω₁)
    const PathLaw rev = reversed_law(p3, swap);
    CHECK(rev.prob({0, 1, 1}) == doctest::Approx(p3.prob({0, 0, 1})).epsilon(1e-14));

    // involutive
    const PathLaw twice = reversed_law(rev, swap);
    for (std::size_t i = 0; i < p3.p.size(); ++i)
        CHECK(twice.p[i] == doctest::Approx(p3.p[i]).epsilon(1e-14));

    // n = 1 reduces to relabeling
    const PathLaw p1 = path_law(mc, pi, 1);
    const PathLaw r1 = reversed_law(p1, swap);
    CHECK(r1.prob({0}) == doctest::Approx(p1.prob({1})).epsilon(1e-14));

    // reversal preserves Kolmogorov consistency
    const PathLaw rev_marg = reversed_law(p3, id).marginal_front();
    const PathLaw rev2 = reversed_law(path_law(mc, pi, 2), id);
    for (std::size_t i = 0; i < rev2.p.size(); ++i)
        CHECK(std::abs(rev_marg.p[i] - rev2.p[i]) <= 1e-10);

    CHECK_THROWS_AS(reversed_law(p3, std::vector<std::size_t>{1, 1}), DomainError);
}

TEST_CASE("entropy production of the outcome process")
{
    const std::vector<std::size_t> id2{0, 1};

    // symmetric situations have zero ep
    const Instrument c = coin(0.7);
    const DensityMatrix half = diag_state({0.5, 0.5});
    ExtReal ep = ep_n(path_law(c, half, 4), id2);
    REQUIRE(ep.is_finite());
    CHECK(std::abs(ep.value()) <= 1e-12);
    ep = ep_n(path_law(lueders_qubit(), diag_state({0.7, 0.3}), 3), id2);
    REQUIRE(ep.is_finite());
    CHECK(std::abs(ep.value()) <= 1e-12);

    // two-state chains are always reversible at stationarity, so a cyclically
    // biased three-state chain provides the irreversible case:
    // ep_n = (n−1)·r with the classical rate r = Σ π_i q_ij log(q_ij/q_ji)
    const std::vector<std::vector<double>> q{
        {0.7, 0.2, 0.1}, {0.1, 0.7, 0.2}, {0.2, 0.1, 0.7}};
    const std::vector<std::size_t> id3{0, 1, 2};
    const std::vector<double> pi{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}; // doubly stochastic
    const Instrument mc = markov_chain(q);
    double rate = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) rate += pi[i] * q[i][j] * std::log(q[i][j] / q[j][i]);
    CHECK(rate == doctest::Approx(0.1 * std::log(2.0)).epsilon(1e-12));
    std::vector<double> per_n;
    for (std::size_t n = 2; n <= 8; ++n) {
        const ExtReal e = ep_n(path_law(mc, diag_state(pi), n), id3);
        REQUIRE(e.is_finite());
        CHECK(e.value() >= -1e-14);
        CHECK(e.value() ==
              doctest::Approx(static_cast<double>(n - 1) * rate).epsilon(1e-10));
        per_n.push_back(e.value() / static_cast<double>(n));
    }
    // Cesàro stabilization of ep_n/n towards the rate
    CHECK(std::abs(per_n.back() - rate) < std::abs(per_n.front() - rate));

    // deterministic 3-cycle is totally irreversible: +∞
    const Instrument cyc = markov_chain({{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0},
                                         {1.0, 0.0, 0.0}});
    const DensityMatrix third = diag_state({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    const ExtReal inf = ep_n(path_law(cyc, third, 3), std::vector<std::size_t>{0, 1, 2});
    CHECK(inf.is_plus_inf());
}

TEST_CASE("upper decoupling")
{
    // i.i.d. law: exact product structure, C = 1
    DecouplingReport r = upper_decoupling_check(coin(0.7), diag_state({0.5, 0.5}), 4, 1.0);
    CHECK(r.best_c == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.violations == 0);

    // Lüders: the repeated word is up-weighted by 1/p_a, so C = 1/min p
    r = upper_decoupling_check(lueders_qubit(), diag_state({0.7, 0.3}), 4, 1.0);
    CHECK(r.best_c == doctest::Approx(1.0 / 0.3).epsilon(1e-10));
    CHECK(r.violations > 0);
    r = upper_decoupling_check(lueders_qubit(), diag_state({0.7, 0.3}), 4, 4.0);
    CHECK(r.violations == 0);

    // faithful invariant state of an ergodic chain: finite C exists
    const Instrument mc = markov_chain({{0.9, 0.1}, {0.2, 0.8}});
    r = upper_decoupling_check(mc, diag_state({2.0 / 3.0, 1.0 / 3.0}), 4, 10.0);
    CHECK(r.best_c < 10.0);
    CHECK(r.violations == 0);
}

TEST_CASE("invariant state finder")
{
    const Instrument mc = markov_chain({{0.9, 0.1}, {0.2, 0.8}});
    const DensityMatrix inv = phi_invariant_state(mc);
    CHECK((inv.mat() - ComplexMatrix::diag(std::vector<double>{2.0 / 3.0, 1.0 / 3.0}))
              .max_abs() <= 1e-10);
    CHECK((mc.phi_schroedinger().apply(inv.mat()) - inv.mat()).frob_norm() <= 1e-10);

    const Instrument lued = lueders_qubit();
    const DensityMatrix dephased = phi_invariant_state(lued);
    CHECK((lued.phi_schroedinger().apply(dephased.mat()) - dephased.mat()).frob_norm() <=
          1e-10);
}

TEST_CASE("trajectory sampler and empirical entropy production")
{
    // biased cyclic chain with uniform stationary law and positive ep rate
    const std::vector<std::vector<double>> q{
        {0.7, 0.2, 0.1}, {0.1, 0.7, 0.2}, {0.2, 0.1, 0.7}};
    const std::vector<double> pi{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    const Instrument mc = markov_chain(q);
    const DensityMatrix rho = diag_state(pi);
    const std::size_t n = 6;

    const auto paths = sample_paths(mc, rho, n, 4000, 20260824);
    REQUIRE(paths.size() == 4000);
    for (const auto& w : paths) REQUIRE(w.size() == n);

    // determinism for a fixed seed
    const auto again = sample_paths(mc, rho, n, 4000, 20260824);
    CHECK(again == paths);

    // single-symbol frequencies match the stationary law
    double freq0 = 0.0;
    for (const auto& w : paths)
        for (std::size_t s : w)
            if (s == 0) freq0 += 1.0;
    freq0 /= static_cast<double>(paths.size() * n);
    CHECK(freq0 == doctest::Approx(1.0 / 3.0).epsilon(0.03));

    // empirical KL agrees with the dense computation within error bars
    const PathLaw law = path_law(mc, rho, n);
    const std::vector<std::size_t> id3{0, 1, 2};
    const ExtReal exact = ep_n(law, id3);
    REQUIRE(exact.is_finite());
    CHECK(exact.value() == doctest::Approx(5.0 * 0.1 * std::log(2.0)).epsilon(1e-10));
    const BootstrapEstimate est = empirical_ep(paths, law, id3, 200, 7);
    CHECK(est.std_error > 0.0);
    CHECK(std::abs(est.mean - exact.value()) <= 4.0 * est.std_error);
}
