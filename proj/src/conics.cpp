#include "cnt/conics.hpp"

#include <algorithm>
#include <stdexcept>

namespace cnt {

Int QuadPoly::eval_mod(Int x, Int y, Int m) const {
    Wide xx = mod(x, m), yy = mod(y, m);
    Wide v = static_cast<Wide>(mod(a, m)) * (xx * xx % m) + static_cast<Wide>(mod(b, m)) * (xx * yy % m) +
             static_cast<Wide>(mod(c, m)) * (yy * yy % m) + mod(k, m);
    return static_cast<Int>(v % m);
}

QuadPoly ConicPoly::poly() const { return QuadPoly{q.a, q.b, q.c, checked_mul(-omega, D())}; }

namespace {

class Budget {
public:
    explicit Budget(Int limit) : limit_(limit) {}
    void spend(Int n) {
        used_ += n;
        if (used_ > limit_) throw BudgetExceeded("conic enumeration exceeds budget of " + std::to_string(limit_) + " residue pairs");
    }

private:
    Int limit_;
    Int used_ = 0;
};

struct LiftWalk {
    const QuadPoly& Q;
    Int p;
    int n;
    Int pn, pn1;
    Budget& budget;
    CountProfile out;

    void leaf(Int x, Int y) {
        ++out.rho;
        Int gx = mod(2 * Q.a % p * (x % p) + Q.b % p * (y % p), p);
        Int gy = mod(Q.b % p * (x % p) + 2 * Q.c % p * (y % p), p);
        if (gx != 0 || gy != 0) {
            ++out.rho_tilde;
            return;
        }
        ++out.rho_sing;
        if (Q.eval_mod(x, y, pn1) != 0) ++out.rho_tilde; // no lift
    }

    void descend(Int x, Int y, int k, Int pk) {
        if (k == n) {
            leaf(x, y);
            return;
        }
        Int next = pk * p;
        budget.spend(p * p);
        for (Int s = 0; s < p; ++s)
            for (Int t = 0; t < p; ++t) {
                Int X = x + s * pk, Y = y + t * pk;
                if (Q.eval_mod(X, Y, next) == 0) descend(X, Y, k + 1, next);
            }
    }
};

CountProfile prime_power_profile(const QuadPoly& Q, Int p, int n, Budget& budget) {
    CountProfile prof;
    prof.modulus = ipow(p, n);
    if (n == 0) return prof;
    LiftWalk walk{Q, p, n, prof.modulus, checked_mul(prof.modulus, p), budget, CountProfile{prof.modulus, 0, 0, 0}};
    walk.descend(0, 0, 0, 1);
    return walk.out;
}

} // namespace

CountProfile rho_brute(const QuadPoly& Q, Int m, Int budget) {
    if (m < 1) throw std::invalid_argument("rho_brute: modulus must be positive");
    Budget b(budget);
    CountProfile total;
    total.modulus = m;
    if (m == 1) return total;
    Int smooth_product = 1;
    for (auto [p, e] : factorize(m)) {
        CountProfile local = prime_power_profile(Q, p, e, b);
        total.rho = checked_mul(total.rho, local.rho);
        total.rho_tilde = checked_mul(total.rho_tilde, local.rho_tilde);
        smooth_product = checked_mul(smooth_product, local.rho - local.rho_sing);
    }
    total.rho_sing = total.rho - smooth_product;
    return total;
}

CountProfile rho_brute(const ConicPoly& P, Int m, Int budget) { return rho_brute(P.poly(), m, budget); }

Int rho_grid(const QuadPoly& Q, Int m, Int budget) {
    if (m < 1) throw std::invalid_argument("rho_grid: modulus must be positive");
    if (m > budget / m) throw BudgetExceeded("grid enumeration exceeds budget");
    Int count = 0;
    for (Int x = 0; x < m; ++x)
        for (Int y = 0; y < m; ++y)
            if (Q.eval_mod(x, y, m) == 0) ++count;
    return count;
}

Int unit_conic_count(Int p, int chi, int j, int e) {
    if (j < 0 || e < 0) throw std::invalid_argument("unit_conic_count: negative level");
    if (j == 0) return 1;
    Int s = (p - 1) * (1 + chi);
    Int pj1 = ipow(p, j - 1);
    if (e == 0) return pj1 * (p - chi);
    if (e >= j) return checked_add(checked_mul((j + 1) / 2 * pj1, s), j % 2 == 0 ? pj1 * p : pj1);
    if (e % 2 == 0) return checked_mul(pj1, (e / 2) * s + p - chi);
    return checked_mul(pj1, ((e + 1) / 2) * s);
}

namespace {

void require_odd_prime(Int p, const char* who) {
    if (p == 2 || !is_prime(p)) throw std::invalid_argument(std::string(who) + ": p must be an odd prime");
}

int legendre(Int a, Int p) { return kronecker(mod(a, p), p); }

struct LocalData {
    int l;       // ord_p D
    int m;       // ord_p omega
    Int Dp;      // D / p^l
    Int omega_p; // omega / p^m
    int chi_u;   // (u/p)
    int chi_uA;  // (u_A/p)
};

LocalData local_data(const ConicPoly& P, Int p) {
    if (P.omega == 0) throw std::invalid_argument("conic: omega must be nonzero");
    LocalData d;
    Int D = P.D();
    d.l = valuation(D, p);
    d.m = valuation(P.omega, p);
    d.Dp = strip(D, p);
    d.omega_p = strip(P.omega, p);
    LocalForm L = local_diagonalize(P.q, p, 1);
    d.chi_u = legendre(L.u, p);
    d.chi_uA = legendre(L.u_A, p);
    return d;
}

} // namespace

Int rho_formula(const ConicPoly& P, Int p, int n) {
    require_odd_prime(p, "rho_formula");
    if (n < 0) throw std::invalid_argument("rho_formula: n must be nonnegative");
    if (n == 0) return 1;
    LocalData d = local_data(P, p);
    if (d.l == 0) return unit_conic_count(p, legendre(P.D(), p), n, d.m);
    if (n <= d.l) return ipow(p, n + n / 2);
    Int head = ipow(p, d.l + d.l / 2);
    int j = n - d.l;
    if (d.l % 2 == 0) return checked_mul(head, unit_conic_count(p, legendre(d.Dp, p), j, d.m));
    Int pj = ipow(p, j);
    if (d.m >= j) return checked_mul(head, pj);
    int psi = d.m % 2 == 0 ? legendre(-d.omega_p, p) * d.chi_u : legendre(-d.omega_p, p) * d.chi_uA;
    return checked_mul(head, pj * (1 + psi));
}

Int rho_tilde_formula(const ConicPoly& P, Int p, int n) {
    require_odd_prime(p, "rho_tilde_formula");
    if (n < 0) throw std::invalid_argument("rho_tilde_formula: n must be nonnegative");
    if (n == 0) return 1;
    LocalData d = local_data(P, p);
    if (d.l == 0) {
        int chi = legendre(P.D(), p);
        Int v = unit_conic_count(p, chi, n, d.m);
        if (d.m >= 2) v -= unit_conic_count(p, chi, n - 1, d.m - 2);
        return v;
    }
    // every root mod p is singular once p | D
    if (n < d.l) return n % 2 == 0 ? ipow(p, n + n / 2 - 1) * (p - 1) : 0;
    return rho_formula(P, p, n) - rho_formula(P, p, n + 1) / (p * p);
}

Int rho0(const ConicPoly& P, Int p) {
    require_odd_prime(p, "rho0");
    LocalData d = local_data(P, p);
    if (d.l == 0) throw std::invalid_argument("rho0: p must divide D");
    if (d.l % 2 == 0) return p - legendre(d.Dp, p);
    if (d.m > 0) throw std::invalid_argument("rho0: p must not divide omega when ord_p D is odd");
    return legendre(-d.omega_p, p) == d.chi_u ? 2 * p : 0;
}

int default_precision(Int p) {
    int k = 0;
    Int v = 1;
    while (k < 30 && v <= (Int{1} << 31) / p) {
        v *= p;
        ++k;
    }
    return k;
}

LocalForm local_diagonalize(const QuadForm& q, Int p, int precision) {
    if (!is_prime(p)) throw std::invalid_argument("local_diagonalize: p must be prime");
    if (!q.is_primitive()) throw std::invalid_argument("local_diagonalize: form must be primitive");
    LocalForm L;
    L.p = p;
    L.precision = precision > 0 ? precision : default_precision(p);
    Int M = L.modulus();
    Int D = q.discriminant();
    if (p == 2 && (D & 1)) {
        L.shape = mod(D, 8) == 1 ? LocalForm::Shape::hyperbolic : LocalForm::Shape::anisotropic;
        return L;
    }
    Int u = 0;
    if (p == 2) {
        u = (q.a & 1) ? q.a : q.c;
    } else {
        for (auto [x, y] : {std::pair<Int, Int>{1, 0}, {0, 1}, {1, 1}}) {
            u = q.eval(x, y);
            if (u % p != 0) break;
        }
    }
    L.shape = LocalForm::Shape::diagonal;
    L.u = mod(u, M);
    // D = -4 u A, so A = -D / (4u)
    Int D4 = p == 2 ? -D / 4 : -D;
    Int inv = inv_mod(p == 2 ? u : checked_mul(4, u), M);
    L.A_val = valuation(D4, p);
    L.u_A = mulmod(strip(D4, p), inv, M);
    L.A = L.A_val >= L.precision ? 0 : mulmod(L.u_A, ipow(p, L.A_val), M);
    return L;
}

SingularCount singular_conic_count(const Q0Shape& q0, Int u3, int m, Int p, int n) {
    if (!is_prime(p)) throw std::invalid_argument("singular_conic_count: p must be prime");
    if (u3 % p == 0) throw std::invalid_argument("singular_conic_count: u3 must be a unit");
    if (m < 0 || n < 0) throw std::invalid_argument("singular_conic_count: negative exponent");
    switch (q0.shape) {
    case LocalForm::Shape::diagonal: {
        if (q0.u1 % p == 0 || q0.u2 % p == 0) throw std::invalid_argument("singular_conic_count: diagonal entries must be units");
        if (p == 2) {
            Int lead = std::min<Int>((n + 1) / 2, 1 + m / 2);
            return {checked_add(checked_mul(lead, ipow(2, n + 3)), ipow(2, n)), true};
        }
        int chi = legendre(-q0.u1 * (q0.u2 % p), p);
        return {unit_conic_count(p, chi, n, m), false};
    }
    case LocalForm::Shape::hyperbolic:
    case LocalForm::Shape::anisotropic: {
        if (p != 2) throw std::invalid_argument("singular_conic_count: xy and x^2+xy+y^2 shapes are for p = 2");
        int chi = q0.shape == LocalForm::Shape::hyperbolic ? 1 : -1;
        return {unit_conic_count(2, chi, n, m), false};
    }
    }
    throw std::logic_error("unreachable");
}

namespace {

void require_genus_hypotheses(const ConicPoly& P, Int p, int k, int eps) {
    require_odd_prime(p, "genus_weighted_sum");
    if (valuation(P.D(), p) != 1) throw std::invalid_argument("genus_weighted_sum: need p || D");
    if (P.omega % p == 0) throw std::invalid_argument("genus_weighted_sum: need p not dividing omega");
    if (k != 0 && k != 1) throw std::invalid_argument("genus_weighted_sum: k must be 0 or 1");
    if (eps != 1 && eps != -1) throw std::invalid_argument("genus_weighted_sum: eps must be +-1");
}

} // namespace

Int genus_weighted_sum(const ConicPoly& P, Int p, int k, int eps) {
    require_genus_hypotheses(P, p, k, eps);
    LocalData d = local_data(P, p);
    if (k == 0) return d.chi_u == eps ? p * p * p * (p - 1) : 0;
    Int f = 1 + eps * d.chi_uA + legendre(-d.omega_p, p) * d.chi_u;
    return p * p * (p - f) / 2;
}

Int genus_weighted_sum_brute(const ConicPoly& P, Int p, int k, int eps) {
    require_genus_hypotheses(P, p, k, eps);
    Int p2 = p * p;
    QuadPoly Q = P.poly();
    std::vector<Int> hist(static_cast<std::size_t>(p2), 0);
    for (Int x = 0; x < p2; ++x)
        for (Int y = 0; y < p2; ++y) ++hist[Q.eval_mod(x, y, p2)];
    Int range = k == 0 ? p2 : p;
    Int scale = k == 0 ? 1 : p;
    Int total = 0;
    for (Int a = 1; a < range; ++a) {
        if (a % p == 0 || legendre(a, p) != eps) continue;
        total += hist[(a * scale) % p2];
    }
    return total;
}

int chi_p_of_form(const QuadForm& q, Int p) {
    require_odd_prime(p, "chi_p_of_form");
    return legendre(local_diagonalize(q, p, 1).u, p);
}

} // namespace cnt
