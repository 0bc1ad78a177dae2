#include "doctest.h"

#include "cnt/cm.hpp"
#include "cnt/convolution.hpp"
#include "cnt/genus.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace cnt;

namespace {

std::set<QuadForm> brute_squares(Int D) {
    std::set<QuadForm> out;
    for (const auto& F : reduced_forms(D)) out.insert(oracle::dirichlet_compose(F, F));
    return out;
}

Int brute_r(const SplittingData& s, Int D, Int n) {
    Int out = 1;
    for (Int p = 2; p <= n; ++p) {
        if (n % p != 0) continue;
        int k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        if (D % p != 0) continue;
        int l = 0;
        for (Int d = D; d % p == 0; d /= p) ++l;
        if (s.ramified_at(p)) out *= 2;
        else if (p == 2) out *= Int(1) << mu_wild(D);
        else out *= k >= l ? 2 : 1;
    }
    return out;
}

// The sum straight from its definition with sublattice ideal enumeration.
Int brute_shifted_sum(const ShiftedSumParams& P) {
    auto squares = brute_squares(P.D);
    QuadForm s = reduce(P.s_class), finv = inverse(P.f_class());
    Int M = P.modulus(), total = 0;
    for (Int x = 0; x <= P.x_max(); ++x) {
        Int shifted = x - P.omega * P.D;
        if (mod(shifted, M) != 0) continue;
        Int N = shifted / (P.splitting.upsilon * ipow(P.p1, 2 * P.n));
        if (N <= 0) continue;
        Int g = 0;
        if (x == 0) g = 1;
        else
            for (const auto& L : oracle::hermite_ideals(P.D, x)) g += oracle::hermite_class(P.D, L) == s;
        if (g == 0) continue;
        Int f = 0;
        for (const auto& L : oracle::hermite_ideals(P.D, N))
            f += squares.count(oracle::dirichlet_compose(oracle::hermite_class(P.D, L), finv));
        total += g * f * brute_r(P.splitting, P.D, N);
    }
    return total;
}

std::vector<Int> discriminants(Int lo, Int hi) {
    std::vector<Int> out;
    for (Int D = -lo; D >= -hi; --D)
        if (is_discriminant(D)) out.push_back(D);
    return out;
}

ShiftedSumParams random_params(std::mt19937_64& rng, const std::vector<Int>& Ds) {
    std::uniform_int_distribution<std::size_t> pickD(0, Ds.size() - 1);
    ShiftedSumParams P;
    P.D = Ds[pickD(rng)];
    auto forms = reduced_forms(P.D);
    std::uniform_int_distribution<std::size_t> pickF(0, forms.size() - 1);
    P.s_class = forms[pickF(rng)];
    std::uniform_int_distribution<Int> num(1, 16), om(1, 4), coin(0, 1);
    P.kappa = Rational(num(rng), 2);
    P.omega = coin(rng) ? om(rng) : -om(rng);
    std::vector<Int> split_primes;
    for (Int p : primes_up_to(40))
        if (kronecker(P.D, p) == 1) split_primes.push_back(p);
    std::vector<Int> ramified;
    for (Int p : {Int(2), Int(3), Int(5), Int(7), Int(11)})
        if (coin(rng) && coin(rng)) ramified.push_back(p);
    std::optional<IdealClass> e;
    if (coin(rng)) e = forms[pickF(rng)];
    P.splitting = SplittingData::make(P.D, ramified, coin(rng) ? 1 : -1, e);
    P.p1 = 0;
    for (Int p : split_primes)
        if (gcd(P.splitting.upsilon, p) == 1) {
            P.p1 = p;
            break;
        }
    P.n = P.p1 != 0 && P.p1 <= 3 ? static_cast<int>(coin(rng)) : 0;
    return P;
}

} // namespace

TEST_CASE("r examples") {
    auto s = SplittingData::split();
    CHECK(eval_r(s, -15, 3) == 2);
    CHECK(eval_r(s, -15, 7) == 1);
    CHECK(eval_r(s, -15, 15) == 4);
    CHECK(eval_r(s, -15, 45) == 4);
    CHECK(eval_r(s, -15, 1) == 1);
    CHECK(eval_r(s, -36, 3) == 1); // ord_3 D = 2
    CHECK(eval_r(s, -36, 9) == 2);
    CHECK(eval_r(s, -20, 2) == (Int(1) << mu_wild(-20)));
    CHECK_THROWS_AS(eval_r(s, -15, 0), std::invalid_argument);
    auto ram = SplittingData::make(-36, {3}, 1);
    CHECK(eval_r(ram, -36, 3) == 2);
    CHECK(ram.upsilon == 3); // 3 is inert in Q(i)
    for (Int D : discriminants(3, 300))
        for (Int n = 1; n <= 300; ++n) {
            CHECK(eval_r(s, D, n) == brute_r(s, D, n));
            CHECK(eval_r(ram, D, n) == brute_r(ram, D, n));
        }
}

TEST_CASE("upsilon from the splitting data") {
    CHECK(SplittingData::make(-15, {7}, 1).upsilon == 7); // (-15/7) = -1
    CHECK(SplittingData::make(-15, {2}, 1).upsilon == 1); // 2 splits
    CHECK(SplittingData::make(-15, {7, 11}, -1).upsilon == -77); // (-15/11) = -1
    CHECK(SplittingData::make(-15, {3}, 1).upsilon == 1); // 3 ramifies
    CHECK(SplittingData::split().upsilon == 1);
    CHECK(SplittingData::split().e(-23) == principal_form(-23));
    CHECK_THROWS_AS(SplittingData::make(-15, {4}, 1), std::invalid_argument);
    CHECK_THROWS_AS(SplittingData::make(-15, {7}, 0), std::invalid_argument);
}

TEST_CASE("discriminant split and r0, r1") {
    for (Int D : discriminants(3, 3000)) {
        auto sp = split_discriminant(D, -1, 0.4);
        CHECK(sp.small == 1); // the threshold is below 3 at this size
        CHECK(sp.small * sp.large == D);
    }
    auto sp = split_discriminant(-3 * 5 * 7 * 4 * 13, 5, 0.4, 0.01);
    CHECK(sp.small == 3 * 7 * 13);
    CHECK(sp.large == -20);
    CHECK_THROWS_AS(split_discriminant(-15, 1, 0.6), std::invalid_argument);
    for (Int D : {Int(-15), Int(-84), Int(-3 * 5 * 7 * 4 * 13), Int(-9 * 11 * 8)}) {
        auto parts = split_discriminant(D, 1, 0.45, 0.01);
        for (Int n = 1; n <= 2000; ++n) {
            Int r0 = eval_r0(parts, D, n), r1 = eval_r1(parts, n);
            CHECK(r1 <= r0);
            CHECK(r0 >= 1);
        }
    }
    DSplit whole{1, -84};
    CHECK(eval_r0(whole, -84, 4) == 2);
    CHECK(eval_r0(whole, -84, 2) == 1);
    CHECK(eval_r1(whole, 4) == 1);
    CHECK(eval_r1(whole, 8) == 2);
    CHECK(eval_r0(whole, -84, 11) == 1);
}

TEST_CASE("parameter validation") {
    ShiftedSumParams P{-15, QuadForm{2, 1, 2}, SplittingData::split(), Rational(4), -1, 2, 0};
    CHECK_NOTHROW(P.validate());
    P.p1 = 7; // inert
    CHECK_THROWS_AS(P.validate(), std::invalid_argument);
    P.p1 = 2;
    P.splitting = SplittingData::make(-15, {7}, 1);
    P.p1 = 17; // splits, coprime to 7
    CHECK_NOTHROW(P.validate());
    P.kappa = Rational(0);
    CHECK_THROWS_AS(P.validate(), std::invalid_argument);
}

TEST_CASE("shifted sum against the definition") {
    ShiftedSumParams P{-15, QuadForm{2, 1, 2}, SplittingData::split(), Rational(4), -1, 2, 0};
    Int direct = shifted_sum_direct(P);
    CHECK(direct == brute_shifted_sum(P));
    CHECK(lattice_sum(P) == Rational(direct));
    std::mt19937_64 rng(20240601);
    auto Ds = discriminants(3, 120);
    int tested = 0;
    while (tested < 40) {
        auto Q = random_params(rng, Ds);
        if (Q.p1 == 0) continue;
        INFO("D=" << Q.D << " s=" << Q.s_class.str() << " kappa=" << Q.kappa << " omega=" << Q.omega << " p1=" << Q.p1
                  << " n=" << Q.n << " upsilon=" << Q.splitting.upsilon);
        CHECK(shifted_sum_direct(Q) == brute_shifted_sum(Q));
        ++tested;
    }
}

TEST_CASE("shifted sum equals the lattice sum") {
    std::mt19937_64 rng(7);
    auto Ds = discriminants(3, 500);
    int tested = 0, nonzero = 0;
    while (tested < 150) {
        auto Q = random_params(rng, Ds);
        if (Q.p1 == 0) continue;
        INFO("D=" << Q.D << " s=" << Q.s_class.str() << " kappa=" << Q.kappa << " omega=" << Q.omega << " p1=" << Q.p1
                  << " n=" << Q.n << " upsilon=" << Q.splitting.upsilon);
        Int direct = shifted_sum_direct(Q);
        Rational lat = lattice_sum(Q);
        CHECK(lat.denominator() == 1);
        CHECK(lat == Rational(direct));
        nonzero += direct != 0;
        ++tested;
    }
    CHECK(nonzero >= 50);
}

TEST_CASE("shifted sum edge cases") {
    // omega D = 15 mod 256 has no representative in [0, 1]
    ShiftedSumParams P{-15, QuadForm{1, 1, 4}, SplittingData::split(), Rational(1, 15), -1, 2, 4};
    CHECK(shifted_sum_direct(P) == 0);
    CHECK(lattice_sum(P) == Rational(0));
    // nonnegative terms, monotone in kappa
    ShiftedSumParams Q{-71, QuadForm{2, 1, 9}, SplittingData::split(), Rational(1), -1, 2, 0};
    Int prev = 0;
    for (Int k = 1; k <= 12; ++k) {
        Q.kappa = Rational(k, 2);
        Int v = shifted_sum_direct(Q);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(prev > 0);
    Q.kappa = Rational(1000000);
    CHECK_THROWS_AS(shifted_sum_direct(Q, 1000), BudgetExceeded);
    CHECK_THROWS_AS(lattice_sum(Q, 1000), BudgetExceeded);
}

TEST_CASE("unit group sizes enter the lattice sum") {
    CHECK(unit_count(-4) == 4);
    CHECK(unit_count(-3) == 6);
    CHECK(unit_count(-15) == 2);
    for (Int D : {Int(-3), Int(-4), Int(-12), Int(-16), Int(-27)}) {
        ShiftedSumParams P{D, principal_form(D), SplittingData::split(), Rational(6), -1, 0, 0};
        for (Int p = 2; p < 50; ++p)
            if (is_prime(p) && kronecker(D, p) == 1) {
                P.p1 = p;
                break;
            }
        CHECK(lattice_sum(P) == Rational(shifted_sum_direct(P)));
    }
}

TEST_CASE("near diagonal pairs are counted by the shifted sum") {
    for (Int D : {Int(-71), Int(-231), Int(-399), Int(-1155)}) {
        for (const auto& sigma : reduced_forms(D)) {
            if (sigma == principal_form(D)) continue;
            for (double delta : {0.2, 0.6, 1.0}) {
                // Nr a = |D| + Nr b <= |D| (1 + (cosh 2 delta - 1) / 2)
                double kap = 1.0 + (std::cosh(2 * delta) - 1.0) / 2.0;
                ShiftedSumParams P{D, sigma, SplittingData::split(), Rational(static_cast<Int>(std::ceil(kap * 64)), 64), -1, 0, 0};
                for (Int p = 2;; ++p)
                    if (is_prime(p) && kronecker(D, p) == 1) {
                        P.p1 = p;
                        break;
                    }
                // with r = 1 the sum is bounded by the sum with r
                Int bound = shifted_sum_direct(P);
                Int near = near_diagonal_count(joint_packet(D, sigma), delta);
                CHECK(near <= bound);
            }
        }
    }
}

TEST_CASE("ellipse geometry") {
    auto E = ellipse_geometry(-15, QuadForm{2, 1, 2}, Rational(1));
    CHECK(E.area == doctest::Approx(2 * std::numbers::pi * std::sqrt(15.0)).epsilon(1e-14));
    CHECK(E.bound == Rational(15));
    auto F = ellipse_geometry(-4, QuadForm{1, 0, 1}, Rational(1));
    CHECK(F.rmax_bound == doctest::Approx(std::sqrt(4 * std::numbers::pi) * std::pow(2.0, 1.5)).epsilon(1e-14));
    CHECK(F.rmax == doctest::Approx(2.0).epsilon(1e-14)); // circle of radius 2
    for (Int D : discriminants(3, 2000))
        for (const auto& s : reduced_forms(D))
            for (Int k : {1, 3, 8}) {
                auto G = ellipse_geometry(D, s, Rational(k));
                CHECK(G.rmax <= G.rmax_bound * (1 + 1e-12));
                // semi-axes from the sampled boundary
                QuadForm q = G.q;
                double B = boost::rational_cast<double>(G.bound);
                auto radius = [&](double th) {
                    double x = std::cos(th), y = std::sin(th);
                    return std::sqrt(B / (q.a * x * x + q.b * x * y + q.c * y * y));
                };
                // coarse scan, then golden-section refinement around the extremes
                auto extreme = [&](int sign) {
                    double best = 0, step = std::numbers::pi / 720.0;
                    for (int t = 0; t < 720; ++t)
                        if (sign * radius(t * step) > sign * radius(best)) best = t * step;
                    double lo = best - step, hi = best + step, g = (std::sqrt(5.0) - 1) / 2;
                    for (int it = 0; it < 100; ++it) {
                        double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
                        if (sign * radius(m1) > sign * radius(m2)) hi = m2;
                        else lo = m1;
                    }
                    return radius((lo + hi) / 2);
                };
                double far = extreme(1), near = extreme(-1);
                CHECK(G.rmax == doctest::Approx(far * far / near).epsilon(1e-9));
            }
}

TEST_CASE("lattice point count") {
    auto disk = ellipse_geometry(-4, QuadForm{1, 0, 1}, Rational(25)); // x^2 + y^2 <= 100
    CHECK(disk.area == doctest::Approx(100 * std::numbers::pi).epsilon(1e-14));
    auto c = lattice_point_count(disk, {0, 0}, 1);
    CHECK(c.count == 317);
    CHECK(c.within);
    CHECK_THROWS_AS(lattice_point_count(disk, {0, 0}, 18), std::invalid_argument);
    auto two = lattice_point_count(disk, {0, 0}, 2); // even points of the disk
    CHECK(two.count == 81);
    for (Int D : {Int(-15), Int(-23), Int(-71), Int(-420), Int(-1155)})
        for (const auto& s : reduced_forms(D)) {
            auto E = ellipse_geometry(D, s, Rational(8));
            for (Int a : {1, 2, 3})
                for (Int sx : {-1, 0, 2})
                    for (Int sy : {0, 1}) {
                        if (static_cast<double>(a * a) > E.area) continue;
                        auto base = lattice_point_count(E, {sx, sy}, a);
                        auto moved = lattice_point_count(E, {sx + 5 * a, sy - 3 * a}, a);
                        CHECK(base.count == moved.count);
                        CHECK(base.within);
                        // direct count
                        Int brute = 0;
                        Int lim = 200;
                        for (Int x = -lim; x <= lim; ++x)
                            for (Int y = -lim; y <= lim; ++y)
                                if (E.q.eval(a * x + sx, a * y + sy) <= 8 * -D) ++brute;
                        CHECK(base.count == brute);
                    }
        }
}
