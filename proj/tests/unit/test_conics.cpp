#include "cnt/conics.hpp"

#include <doctest.h>

#include <random>

using namespace cnt;

namespace {

const ConicPoly kGauss{QuadForm{1, 0, 1}, 1}; // x^2 + y^2 + 4

} // namespace

TEST_CASE("rho_brute examples") {
    CHECK(kGauss.poly().k == 4);
    CHECK(rho_brute(kGauss, 3).rho == 4);
    CHECK(rho_brute(kGauss, 5).rho == 4);
    auto two = rho_brute(kGauss, 2);
    CHECK(two.rho == 2);
    CHECK(two.rho_tilde == 1);
    CHECK(rho_brute(kGauss, 4).rho == 4);
    CHECK(rho_brute(kGauss, 7).rho == 7 - kronecker(-4, 7));
    CHECK(rho_brute(ConicPoly{QuadForm{1, 1, 19}, 1}, 5).rho == 5);
    CHECK_THROWS_AS(rho_grid(kGauss.poly(), 1 << 20, 1000), BudgetExceeded);
    CHECK_THROWS_AS(rho_brute(QuadPoly{0, 0, 0, 0}, ipow(3, 8), 1000), BudgetExceeded);
}

TEST_CASE("lift enumeration agrees with the full grid") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        QuadPoly Q{static_cast<Int>(rng() % 21) - 10, static_cast<Int>(rng() % 21) - 10, static_cast<Int>(rng() % 21) - 10,
                   static_cast<Int>(rng() % 201) - 100};
        for (Int m : {2, 3, 4, 8, 9, 12, 16, 25, 27, 36, 49, 60, 81, 125}) {
            INFO("m = " << m);
            CHECK(rho_brute(Q, m).rho == rho_grid(Q, m));
        }
    }
}

TEST_CASE("lift classification matches the level-up identity") {
    // rho~(p^k) = rho(p^k) - rho_sing(p^(k+1)) / p^2
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 150; ++trial) {
        QuadPoly Q{static_cast<Int>(rng() % 11) - 5, static_cast<Int>(rng() % 11) - 5, static_cast<Int>(rng() % 11) - 5,
                   static_cast<Int>(rng() % 2001) - 1000};
        for (Int p : {2, 3, 5, 7}) {
            for (int k = 1; k <= 3; ++k) {
                auto lo = rho_brute(Q, ipow(p, k));
                auto hi = rho_brute(Q, ipow(p, k + 1));
                CHECK(hi.rho_sing % (p * p) == 0);
                CHECK(lo.rho_tilde == lo.rho - hi.rho_sing / (p * p));
                CHECK(lo.rho_tilde <= lo.rho);
            }
        }
    }
}

TEST_CASE("rho and rho~ are multiplicative across coprime moduli") {
    for (Int omega : {-3, 1, 2, 5}) {
        ConicPoly P{QuadForm{2, 1, 3}, omega};
        for (Int a : {3, 4, 8, 9, 23}) {
            for (Int b : {5, 7, 25, 11}) {
                if (gcd(a, b) != 1) continue;
                auto ab = rho_brute(P, a * b);
                auto pa = rho_brute(P, a), pb = rho_brute(P, b);
                CHECK(ab.rho == pa.rho * pb.rho);
                CHECK(ab.rho_tilde == pa.rho_tilde * pb.rho_tilde);
                CHECK(ab.rho == rho_grid(P.poly(), a * b));
            }
        }
    }
}

TEST_CASE("unit_conic_count matches enumeration") {
    for (Int p : {3, 5, 7}) {
        for (Int u1 = 1; u1 < p; ++u1)
            for (Int u2 = 1; u2 < p; ++u2)
                for (Int w : {1, 2}) {
                    if (w % p == 0) continue;
                    int chi = kronecker(mod(-u1 * u2, p), p);
                    for (int j = 0; j <= 4; ++j)
                        for (int e = 0; e <= 5; ++e) {
                            Int pj = ipow(p, j);
                            QuadPoly Q{u1, 0, u2, -w * ipow(p, e)};
                            INFO("p=" << p << " u1=" << u1 << " u2=" << u2 << " j=" << j << " e=" << e);
                            CHECK(unit_conic_count(p, chi, j, e) == rho_brute(Q, pj).rho);
                        }
                }
    }
    // p = 2 with the non-diagonal shapes
    for (int j = 1; j <= 6; ++j)
        for (int e = 0; e <= 7; ++e)
            for (Int w : {1, 3, 5, 7}) {
                Int pj = ipow(2, j);
                CHECK(unit_conic_count(2, 1, j, e) == rho_grid(QuadPoly{0, 1, 0, -w * ipow(2, e)}, pj));
                CHECK(unit_conic_count(2, -1, j, e) == rho_grid(QuadPoly{1, 1, 1, -w * ipow(2, e)}, pj));
            }
}

TEST_CASE("rho_formula examples") {
    CHECK(rho_formula(kGauss, 7, 1) == 8);
    CHECK(rho_formula(ConicPoly{QuadForm{1, 1, 19}, 1}, 5, 1) == 5);
    CHECK_THROWS_AS(rho_formula(kGauss, 2, 1), std::invalid_argument);
    // p = 3, D = -3, omega = 1: rho(9) = 0 by enumeration
    ConicPoly P{QuadForm{1, 1, 1}, 1};
    CHECK(rho_brute(P, 9).rho == 0);
    CHECK(rho_formula(P, 3, 2) == 0);
}

TEST_CASE("rho_formula and rho_tilde_formula agree with enumeration") {
    std::mt19937_64 rng(2024);
    for (Int p : {3, 5, 7}) {
        for (int trial = 0; trial < 60; ++trial) {
            // D = -p^l t with l in 0..3
            int l = static_cast<int>(rng() % 4);
            Int D = 0;
            for (int tries = 0; tries < 1000 && D == 0; ++tries) {
                Int t = 3 + static_cast<Int>(rng() % 200);
                Int cand = -ipow(p, l) * t;
                if (is_discriminant(cand) && valuation(cand, p) == l) D = cand;
            }
            REQUIRE(D != 0);
            auto forms = reduced_forms(D);
            QuadForm q = forms[rng() % forms.size()];
            Int omega = static_cast<Int>(rng() % 41) - 20;
            if (omega == 0) omega = p * p;
            ConicPoly P{q, omega};
            for (int n = 1; n <= 4; ++n) {
                auto prof = rho_brute(P, ipow(p, n));
                INFO("p=" << p << " D=" << D << " q=" << q.str() << " omega=" << omega << " n=" << n);
                CHECK(rho_formula(P, p, n) == prof.rho);
                CHECK(rho_tilde_formula(P, p, n) == prof.rho_tilde);
            }
        }
    }
}

TEST_CASE("rho0 and the odd-valuation sign") {
    // For odd l, rho(p^n) = p^(n + floor(l/2)) rho0(p) / p when n > l and p does not divide omega.
    for (Int p : {3, 5, 7}) {
        for (Int t : {1, 2, 4, 7, 8, 11}) {
            Int D = -p * t;
            if (!is_discriminant(D) || valuation(D, p) != 1) continue;
            for (const auto& q : reduced_forms(D))
                for (Int omega = 1; omega <= 6; ++omega) {
                    if (omega % p == 0) continue;
                    ConicPoly P{q, omega};
                    Int r0 = rho0(P, p);
                    CHECK(rho_brute(P, p * p).rho == p * p * r0 / p);
                    CHECK(r0 == (kronecker(mod(-omega, p), p) == chi_p_of_form(q, p) ? 2 * p : 0));
                }
        }
    }
}

TEST_CASE("local_diagonalize") {
    auto L = local_diagonalize(QuadForm{1, 0, 1}, 5);
    CHECK(L.shape == LocalForm::Shape::diagonal);
    CHECK(L.u == 1);
    CHECK(L.A == 1);
    CHECK(local_diagonalize(QuadForm{1, 1, 4}, 2).shape == LocalForm::Shape::hyperbolic);
    CHECK(local_diagonalize(QuadForm{1, 1, 1}, 2).shape == LocalForm::Shape::anisotropic);
    CHECK(default_precision(2) == 30);
    CHECK(default_precision(3) == 19);

    for (Int D : {-15, -20, -23, -39, -56, -75, -96, -135, -175, -232}) {
        for (const auto& q : reduced_forms(D))
            for (Int p : {2, 3, 5, 7})
                for (Int omega : {-2, 1, 3}) {
                    auto L = local_diagonalize(q, p);
                    QuadPoly diag;
                    if (L.shape == LocalForm::Shape::diagonal)
                        diag = QuadPoly{L.u, 0, L.A, -omega * D};
                    else if (L.shape == LocalForm::Shape::hyperbolic)
                        diag = QuadPoly{0, 1, 0, -omega * D};
                    else
                        diag = QuadPoly{1, 1, 1, -omega * D};
                    for (int n = 1; n <= 4; ++n) {
                        Int m = ipow(p, n);
                        INFO("D=" << D << " q=" << q.str() << " p=" << p << " n=" << n);
                        CHECK(rho_brute(diag, m).rho == rho_brute(ConicPoly{q, omega}, m).rho);
                    }
                }
    }
}

TEST_CASE("singular_conic_count") {
    // m = 0, n = 1: p - (disc/p)
    for (Int p : {3, 5, 7})
        for (Int u1 = 1; u1 < p; ++u1) {
            auto r = singular_conic_count(Q0Shape{LocalForm::Shape::diagonal, u1, 1}, 1, 0, p, 1);
            CHECK(!r.is_bound);
            CHECK(r.value == p - kronecker(mod(-4 * u1, p), p));
        }
    for (Int p : {3, 5, 7})
        for (Int u1 : {1, 2})
            for (Int u2 : {1, 3})
                for (Int u3 : {1, 2})
                    for (int m = 0; m <= 5; ++m)
                        for (int n = 1; n <= 4; ++n) {
                            if (u1 % p == 0 || u2 % p == 0 || u3 % p == 0) continue;
                            auto r = singular_conic_count(Q0Shape{LocalForm::Shape::diagonal, u1, u2}, u3, m, p, n);
                            CHECK(r.value == rho_brute(QuadPoly{u1, 0, u2, -u3 * ipow(p, m)}, ipow(p, n)).rho);
                        }
    for (Int u1 : {1, 3, 5, 7})
        for (Int u2 : {1, 3, 5, 7})
            for (Int u3 : {1, 3, 5, 7})
                for (int m = 0; m <= 6; ++m)
                    for (int n = 1; n <= 7; ++n) {
                        auto r = singular_conic_count(Q0Shape{LocalForm::Shape::diagonal, u1, u2}, u3, m, 2, n);
                        CHECK(r.is_bound);
                        CHECK(r.value >= rho_brute(QuadPoly{u1, 0, u2, -u3 * ipow(2, m)}, ipow(2, n)).rho);
                    }
    CHECK_THROWS_AS(singular_conic_count(Q0Shape{LocalForm::Shape::hyperbolic}, 1, 0, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(singular_conic_count(Q0Shape{LocalForm::Shape::diagonal, 3, 1}, 1, 0, 3, 1), std::invalid_argument);
}

TEST_CASE("singular conic count at a square multiple of p") {
    // x^2 + y^2 = 9 w (mod 27), p = 3: enumeration gives 36
    CHECK(rho_grid(QuadPoly{1, 0, 1, -9}, 27) == 36);
    CHECK(singular_conic_count(Q0Shape{LocalForm::Shape::diagonal, 1, 1}, 1, 2, 3, 3).value == 36);
}

TEST_CASE("genus_weighted_sum") {
    for (Int p : {3, 5, 7}) {
        for (Int t : {1, 4, 7, 8, 11, 19, 20}) {
            Int D = -p * t;
            if (!is_discriminant(D) || valuation(D, p) != 1) continue;
            for (const auto& q : reduced_forms(D))
                for (Int omega : {-4, -1, 1, 2, 5, 13}) {
                    if (omega % p == 0) continue;
                    ConicPoly P{q, omega};
                    for (int k : {0, 1})
                        for (int eps : {1, -1}) {
                            INFO("p=" << p << " D=" << D << " q=" << q.str() << " omega=" << omega << " k=" << k << " eps=" << eps);
                            CHECK(genus_weighted_sum(P, p, k, eps) == genus_weighted_sum_brute(P, p, k, eps));
                        }
                    int chi = chi_p_of_form(q, p);
                    CHECK(genus_weighted_sum(P, p, 0, -chi) == 0);
                    CHECK(genus_weighted_sum(P, p, 0, chi) == p * p * p * (p - 1));
                }
        }
    }
}

TEST_CASE("point count bounds") {
    for (Int D : {-15, -20, -23, -75, -108, -243}) {
        for (const auto& q : reduced_forms(D))
            for (Int omega : {-3, 1, 9}) {
                ConicPoly P{q, omega};
                for (Int p : {2, 3, 5, 7, 11, 13}) {
                    CHECK(rho_brute(P, p).rho <= 2 * p);
                    for (int n = 1; n <= 4 && ipow(p, n) <= 3000; ++n) {
                        double bound = 16.0 * std::pow(static_cast<double>(p), 1.5 * n);
                        CHECK(static_cast<double>(rho_brute(P, ipow(p, n)).rho) <= bound);
                    }
                }
            }
    }
}
