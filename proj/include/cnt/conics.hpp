#pragma once
/** @file
 * Points on the affine conics Q(x,y) = q(x,y) - omega*D modulo prime powers:
 * exhaustive counts with smooth/singular lift classification, closed forms
 * for odd primes, local diagonalization and genus-weighted sums.
 */

#include "cnt/orders.hpp"

#include <optional>

namespace cnt {

/// a x^2 + b xy + c y^2 + k.
struct QuadPoly {
    Int a = 0, b = 0, c = 0, k = 0;
    /// Value modulo m, in [0, m).
    Int eval_mod(Int x, Int y, Int m) const;
};

/// Q(x, y) = q(x, y) - omega * disc(q).
struct ConicPoly {
    QuadForm q;
    Int omega = 1;

    Int D() const { return q.discriminant(); }
    QuadPoly poly() const;
};

struct CountProfile {
    Int modulus = 1;
    Int rho = 1;
    Int rho_tilde = 1;
    Int rho_sing = 0;
};

/// Exhaustive count modulo m. Prime powers are enumerated level by level
/// (every root mod p^(k+1) lies over a root mod p^k) and each root mod p^n is
/// classified as smooth, singular with a lift or singular without one.
/// Composite m combines prime-power profiles. Throws BudgetExceeded once more
/// than `budget` residue pairs would be examined.
CountProfile rho_brute(const QuadPoly& Q, Int m, Int budget = kDefaultBudget);
CountProfile rho_brute(const ConicPoly& P, Int m, Int budget = kDefaultBudget);

/// Plain count of Q = 0 over the full grid (Z/m)^2.
Int rho_grid(const QuadPoly& Q, Int m, Int budget = kDefaultBudget);

/// Number of (x, y) mod p^j with u1 x^2 + u2 y^2 = w p^e (mod p^j), w a unit,
/// where chi = (-u1 u2 / p); e >= j means the right side is 0 mod p^j.
/// Valid for odd p, and for p = 2 with the non-diagonal shapes (chi = +1 for
/// xy, -1 for x^2 + xy + y^2).
Int unit_conic_count(Int p, int chi, int j, int e);

/// rho_Q(p^n) in closed form for odd p.
Int rho_formula(const ConicPoly& P, Int p, int n);
/// rho~_Q(p^n) in closed form for odd p.
Int rho_tilde_formula(const ConicPoly& P, Int p, int n);
/// rho_Q^0(p) for odd p | D: p - ((D/p^l)/p) for even l; for odd l, 2p when
/// (-omega/p) = chi_p(q) and 0 otherwise.
Int rho0(const ConicPoly& P, Int p);

struct LocalForm {
    enum class Shape { diagonal, hyperbolic, anisotropic };
    Shape shape = Shape::diagonal;
    Int p = 0;
    int precision = 0; // coefficients are residues mod p^precision
    Int u = 0;         // unit coefficient of x^2
    Int A = 0;         // coefficient of y^2
    int A_val = 0;     // ord_p A
    Int u_A = 0;       // unit part of A

    Int modulus() const { return ipow(p, precision); }
};

/// Largest precision with p^precision <= 2^31, capped at 30.
int default_precision(Int p);

/// Z_p-equivalent shape: u x^2 + A y^2 for p odd or 4 | D, otherwise xy when
/// D = 1 mod 8 and x^2 + xy + y^2 when D = 5 mod 8.
LocalForm local_diagonalize(const QuadForm& q, Int p, int precision = 0);

struct Q0Shape {
    LocalForm::Shape shape = LocalForm::Shape::diagonal;
    Int u1 = 1, u2 = 1; // diagonal coefficients
};

struct SingularCount {
    Int value = 0;
    bool is_bound = false; // true: value is an upper bound (p = 2, diagonal)
};

/// Solutions of q0(x, y) - u3 p^m = 0 mod p^n.
SingularCount singular_conic_count(const Q0Shape& q0, Int u3, int m, Int p, int n);

/// Sum over a in (Z/p^(2-k))^x with (a/p) = eps of #{(x,y) mod p^2 :
/// Q(x,y) = p^k a mod p^2}, for odd p || D with p not dividing omega.
Int genus_weighted_sum(const ConicPoly& P, Int p, int k, int eps);
/// The same sum by direct enumeration.
Int genus_weighted_sum_brute(const ConicPoly& P, Int p, int k, int eps);

/// chi_p(q) = (u/p) for the local unit coefficient u, odd p | D.
int chi_p_of_form(const QuadForm& q, Int p);

} // namespace cnt
