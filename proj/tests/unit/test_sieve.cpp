#include "doctest.h"

#include "cnt/sieve.hpp"

#include <cmath>
#include <random>

using namespace cnt;

namespace {

Int tau(Int n) {
    Int c = 0;
    for (Int d = 1; d * d <= n; ++d)
        if (n % d == 0) c += d * d == n ? 1 : 2;
    return c;
}

SieveInstance small_instance(MultFnSpec f) {
    ConicPoly P{QuadForm{2, 1, 3}, -1}; // D = -23, Q = 2x^2 + xy + 3y^2 - 23
    return make_instance(P, Rational(6), std::move(f));
}

} // namespace

TEST_CASE("multiplicative function specs") {
    auto one = mult_one();
    CHECK(one(360) == 1.0);
    CHECK_FALSE(class_violation(one, 1000));
    auto div = mult_divisor(0.25);
    for (Int n = 1; n <= 2000; ++n) CHECK(div(n) == static_cast<double>(tau(n)));
    CHECK_FALSE(class_violation(div, 100000));
    auto ideals = mult_ideal_count(-84, 0.25);
    for (Int n = 1; n <= 500; ++n) CHECK(ideals(n) == static_cast<double>(count_ideals(-84, n)));
    CHECK_FALSE(class_violation(ideals, 20000));
    // f(p) = A + 1 must be rejected
    MultFnSpec bad{"bad", [](Int p, int k) { return p == 7 && k == 1 ? 3.0 : 1.0; }, 2.0, 100.0, 1.0};
    auto msg = class_violation(bad, 100);
    REQUIRE(msg);
    CHECK(msg->find("f(7)") != std::string::npos);
    MultFnSpec grows{"grows", [](Int, int k) { return static_cast<double>(k + 1); }, 2.0, 1.0, 0.01};
    CHECK(class_violation(grows, 100));
}

TEST_CASE("divisor supremum") {
    for (double eps : {0.25, 0.34, 0.5}) {
        double sup = divisor_sup(eps);
        double best = 0;
        for (Int n = 1; n <= 200000; ++n) best = std::max(best, static_cast<double>(tau(n)) / std::pow(static_cast<double>(n), eps));
        CHECK(best <= sup * (1 + 1e-12));
    }
    // eps = 1/2: the supremum sqrt(3) is reached at n = 12
    CHECK(divisor_sup(0.5) == doctest::Approx(6.0 / std::sqrt(12.0)).epsilon(1e-12));
}

TEST_CASE("conic densities match enumeration") {
    for (auto [q, om] : std::vector<std::pair<QuadForm, Int>>{{QuadForm{1, 0, 1}, 1}, {QuadForm{2, 1, 3}, -1}, {QuadForm{1, 1, 6}, 3}, {QuadForm{3, 2, 5}, -2}}) {
        ConicPoly P{q, om};
        ConicDensities dens(P);
        for (Int p : {2, 3, 5, 7, 11}) {
            CHECK(dens.rho_p(p) == rho_brute(P, p).rho);
            for (int k = 1; ipow(p, k) <= 400; ++k) CHECK(dens.rho_tilde_pk(p, k) == rho_brute(P, ipow(p, k)).rho_tilde);
        }
        CHECK(dens.rho_tilde(60) == static_cast<double>(rho_brute(P, 60).rho_tilde));
    }
}

TEST_CASE("sieve instance and bound") {
    auto inst = small_instance(mult_one());
    CHECK(inst.X >= 23);
    // X is the largest |Q| over the lattice points
    QuadPoly Q = inst.P.poly();
    Int brute = 0;
    for (Int x = -40; x <= 40; ++x)
        for (Int y = -40; y <= 40; ++y)
            if (inst.P.q.eval(x, y) <= 6 * 23) brute = std::max(brute, std::abs(Q.a * x * x + Q.b * x * y + Q.c * y * y + Q.k));
    CHECK(inst.X == brute);
    auto b = sieve_rhs(inst);
    CHECK(b.value > 0);
    CHECK(b.sum >= 1);
    CHECK(b.product > 0);
    CHECK(b.product <= 1);
    double lhs = sieve_lhs(inst);
    Int points = 0;
    for (Int x = -40; x <= 40; ++x)
        for (Int y = -40; y <= 40; ++y)
            if (inst.P.q.eval(x, y) <= 6 * 23 && Q.a * x * x + Q.b * x * y + Q.c * y * y + Q.k != 0) ++points;
    CHECK(lhs == static_cast<double>(points));

    // large area with f = 1
    ConicPoly big{QuadForm{1, 1, 6}, 2};
    auto inst3 = make_instance(big, Rational(1000), mult_one());
    CHECK(inst3.E.area == doctest::Approx(2 * 3.141592653589793 * 1000 * std::sqrt(23.0)).epsilon(1e-12));
    auto b3 = sieve_rhs(inst3);
    CHECK(b3.value > 0);
    CHECK(b3.sum >= 1);
}

TEST_CASE("sieve factors are monotone in X") {
    ConicPoly P{QuadForm{2, 1, 3}, -1};
    for (auto f : {mult_one(), mult_divisor(0.25)}) {
        auto inst = make_instance(P, Rational(4), f);
        ConicDensities dens(P);
        auto prev = sieve_rhs(inst, dens);
        for (int step = 0; step < 4; ++step) {
            inst.X *= 2;
            auto next = sieve_rhs(inst, dens);
            CHECK(next.sum >= prev.sum);
            CHECK(next.product <= prev.product);
            prev = next;
        }
    }
}

TEST_CASE("hypothesis report") {
    auto inst = small_instance(mult_divisor(0.25));
    ConicDensities dens(inst.P);
    auto v = hypothesis_violations(inst, dens);
    // eps = 1/4 is far above eta r / (4 delta) for this instance
    bool eps_clause = false;
    for (const auto& s : v) eps_clause |= s.find("eps <") != std::string::npos;
    CHECK(eps_clause);
    inst.X = 1;
    v = hypothesis_violations(inst, dens);
    bool x_clause = false;
    for (const auto& s : v) x_clause |= s.find("max |Q| <= X") != std::string::npos;
    CHECK(x_clause);
}

TEST_CASE("rough numbers") {
    ConicPoly P{QuadForm{1, 1, 6}, -1}; // Q = x^2 + xy + 6y^2 - 23
    auto inst = make_instance(P, Rational(20), mult_one());
    QuadPoly Q = P.poly();
    Int all = 0, odd = 0;
    std::vector<Int> values;
    for_each_lattice_point(inst.E.q, 20 * 23, [&](Int x, Int y) {
        Int v = Q.a * x * x + Q.b * x * y + Q.c * y * y + Q.k;
        values.push_back(std::abs(v));
        ++all;
        odd += v % 2 != 0;
    });
    CHECK(rough_count(inst.E, P, 1) == all);
    CHECK(rough_count(inst.E, P, 2) == odd);
    ConicDensities dens(P);
    for (double z : {3.0, 5.0, 10.0, 30.0}) {
        Int brute = 0;
        for (Int v : values) {
            bool rough = v != 0;
            for (Int p = 2; p <= static_cast<Int>(z) && rough; ++p)
                if (is_prime(p) && v % p == 0) rough = false;
            brute += rough;
        }
        CHECK(rough_count(inst.E, P, z) == brute);
        CHECK(rough_bound(inst.E, dens, z) > 0);
    }
    CHECK(rough_bound(inst.E, dens, 2) == doctest::Approx(inst.E.area).epsilon(1e-15));
}

TEST_CASE("decoupling majorant") {
    auto g = mult_power(1.0, 1.0);
    MultFnSpec zero{"zero", [](Int, int) { return 0.0; }, 1, 1, 1};
    CHECK(decoupling_majorant(g, zero, 1000) == 1.0);
    auto rep0 = decoupling_check(g, zero, 1000);
    CHECK(rep0.lhs == doctest::Approx(rep0.g_sum).epsilon(1e-15));
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> c(0.0, 2.0), s(1.05, 2.0);
    for (int t = 0; t < 30; ++t) {
        auto gg = mult_power(c(rng), s(rng));
        auto ps = mult_power(c(rng), s(rng) - 0.5);
        auto rep = decoupling_check(gg, ps, 20000);
        CHECK(rep.holds);
        CHECK(rep.majorant <= rep.euler * (1 + 1e-12));
    }
    // g(p^j) = 1 never decays
    CHECK_THROWS_AS(decoupling_majorant(mult_one(), g, 100), std::domain_error);
}

TEST_CASE("mertens lower bound") {
    MultFnSpec zero{"zero", [](Int, int) { return 0.0; }, 1, 1, 1};
    CHECK(mertens_lower_check(zero, 1, 1000).ratio == 1.0);
    auto one = mult_one();
    auto r3 = mertens_lower_check(one, 1, 1000);
    // direct: sum of mu^2(n)/n and prod over 1 < p of (1 - 1/p)
    long double sum = 0, prod = 1;
    for (Int n = 1; n <= 1000; ++n) {
        bool sqf = true;
        for (Int p = 2; p * p <= n; ++p)
            if (n % (p * p) == 0) sqf = false;
        if (sqf) sum += 1.0L / n;
    }
    for (Int p : primes_up_to(1000)) prod *= 1.0L - 1.0L / p;
    CHECK(r3.sum == doctest::Approx(static_cast<double>(sum)).epsilon(1e-12));
    CHECK(r3.ratio == doctest::Approx(static_cast<double>(sum * prod)).epsilon(1e-12));
    CHECK_THROWS_AS(mertens_lower_check(mult_divisor(0.5), 1, 100), std::invalid_argument);
}

TEST_CASE("congruence-restricted bound") {
    ConicPoly P{QuadForm{2, 1, 3}, -1};
    auto inst = make_instance(P, Rational(8), mult_divisor(0.25));
    ConicDensities dens(P);
    auto plain = sieve_rhs(inst, dens);
    auto trivial = sieve_rhs_congruence(inst, dens, 1, 1, 1, 0);
    CHECK(trivial.value == doctest::Approx(plain.value).epsilon(1e-12));
    CHECK(sieve_lhs_congruence(inst, 1, 1, 1, 0) == sieve_lhs(inst));
    CHECK_THROWS_AS(sieve_rhs_congruence(inst, dens, 1, 3, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(sieve_rhs_congruence(inst, dens, 3, 1, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(sieve_rhs_congruence(inst, dens, 1, 1, 5, 10), std::invalid_argument);

    // ord_p Q = j exactly splits the points with Q != 0 (mod p^(J+1) rest)
    for (Int p : {3, 5}) {
        double total = 0;
        int J = 3;
        for (int j = 0; j <= J; ++j)
            for (Int l = 1; l < p; ++l) total += sieve_lhs_congruence(inst, 1, ipow(p, j), p, l);
        QuadPoly Q = P.poly();
        double rest = 0;
        Int pj = ipow(p, J + 1);
        for_each_lattice_point(inst.E.q, 8 * 23, [&](Int x, Int y) {
            Int v = Q.a * x * x + Q.b * x * y + Q.c * y * y + Q.k;
            if (v != 0 && v % pj == 0) rest += inst.f(std::abs(v));
        });
        CHECK(total + rest == doctest::Approx(sieve_lhs(inst)).epsilon(1e-12));
    }
    // rho(k1 l; k1 k2) against a direct count
    auto cb = sieve_rhs_congruence(inst, dens, 2, 3, 9, 4);
    Int direct = 0;
    QuadPoly Q = P.poly();
    for (Int x = 0; x < 27; ++x)
        for (Int y = 0; y < 27; ++y)
            if (mod(Q.a * x * x + Q.b * x * y + Q.c * y * y + Q.k - 12, 27) == 0) ++direct;
    CHECK(cb.rho_k1l == direct);
    CHECK(cb.value > 0);
    CHECK(sieve_lhs_congruence(inst, 2, 3, 9, 4) <= 100 * cb.value);
}

TEST_CASE("extremely smooth sums") {
    // The bound carries an implied constant; with constant 1 it fails (the
    // ratio sits between 0.8 and 3.6 up to z = 10^7), so it is pinned at 8.
    constexpr double kImplied = 8.0;
    for (auto [q, om] : std::vector<std::pair<QuadForm, Int>>{{QuadForm{1, 0, 1}, 1}, {QuadForm{2, 1, 3}, -1}, {QuadForm{1, 1, 6}, 3}}) {
        ConicDensities dens(ConicPoly{q, om});
        double r = 0.5, beta = r / 4;
        for (double z : {1e4, 1e5, 1e6})
            for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
                double s = extremely_smooth_sum(dens, z, alpha);
                CHECK(s >= 0);
                CHECK(s <= kImplied * std::pow(z, -r * alpha + beta));
            }
        // alpha = 0 includes a = 1
        CHECK(extremely_smooth_sum(dens, 1e4, 0.0) >= 1.0);
    }
}
