#pragma once
/** @file
 * Split-case Hecke data: distances on the Bruhat-Tits tree read off from
 * elementary divisors, the finite denominator of a projective matrix, Hecke
 * volumes and the comparison with minimal ideal norms.
 */

#include "cnt/orders.hpp"

#include <array>

namespace cnt {

/// 2x2 integer matrix up to nonzero scalars; rows are {{a, b}, {c, d}}.
struct ProjectiveMatrix {
    std::array<std::array<Int, 2>, 2> m{};

    Int content() const;
    Wide det() const;
    /// Divided by the content, sign fixed so the first nonzero entry is positive.
    ProjectiveMatrix normalized() const;
    friend bool operator==(const ProjectiveMatrix&, const ProjectiveMatrix&) = default;
};

ProjectiveMatrix operator*(const ProjectiveMatrix& x, const ProjectiveMatrix& y);

/// Elementary divisors d1 | d2 of an integer matrix (d1 = 0 only for zero).
std::pair<Int, Wide> elementary_divisors(const ProjectiveMatrix& M);

/// ord_p(d2) - ord_p(d1); throws std::invalid_argument for a singular matrix.
int tree_distance(const ProjectiveMatrix& M, Int p);

/// Product of p^tree_distance over all p; equals d2/d1.
Wide denom_f(const ProjectiveMatrix& M);

/// N prod_{p | N} (1 + 1/p).
Rational hecke_volume(Int N);

/// (p + 1) p^(d - 1), the number of vertices at distance d in a (p+1)-regular tree.
Int vertex_count(Int p, int d);
/// The same count by enumerating index-p^d sublattices of Z^2 with cyclic quotient.
Int vertex_count_oracle(Int p, int d);

/// Multiplication by alpha = u + v tau on the basis (1, tau).
ProjectiveMatrix multiplication_matrix(Int D, const Element& alpha);

struct DenomComparison {
    Wide denom = 0;
    Int min_norm = 0; // min |Nr(q alpha)| over rationals q with q alpha integral
    bool agree = false;
};

DenomComparison denom_vs_min_norm(Int D, const Element& alpha);

} // namespace cnt
