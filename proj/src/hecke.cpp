#include "cnt/hecke.hpp"

#include <stdexcept>

namespace cnt {

namespace {

int wide_valuation(Wide n, Int p) {
    if (n == 0) throw std::invalid_argument("valuation of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

} // namespace

Int ProjectiveMatrix::content() const { return gcd(gcd(m[0][0], m[0][1]), gcd(m[1][0], m[1][1])); }

Wide ProjectiveMatrix::det() const {
    return static_cast<Wide>(m[0][0]) * m[1][1] - static_cast<Wide>(m[0][1]) * m[1][0];
}

ProjectiveMatrix ProjectiveMatrix::normalized() const {
    Int g = content();
    if (g == 0) throw std::invalid_argument("ProjectiveMatrix: zero matrix");
    ProjectiveMatrix out = *this;
    Int first = m[0][0] != 0 ? m[0][0] : (m[0][1] != 0 ? m[0][1] : (m[1][0] != 0 ? m[1][0] : m[1][1]));
    if (first < 0) g = -g;
    for (auto& row : out.m)
        for (auto& e : row) e /= g;
    return out;
}

ProjectiveMatrix operator*(const ProjectiveMatrix& x, const ProjectiveMatrix& y) {
    ProjectiveMatrix out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.m[i][j] = checked_add(checked_mul(x.m[i][0], y.m[0][j]), checked_mul(x.m[i][1], y.m[1][j]));
    return out;
}

std::pair<Int, Wide> elementary_divisors(const ProjectiveMatrix& M) {
    Int d1 = M.content();
    if (d1 == 0) return {0, 0};
    Wide det = M.det();
    if (det < 0) det = -det;
    return {d1, det / d1};
}

int tree_distance(const ProjectiveMatrix& M, Int p) {
    if (!is_prime(p)) throw std::invalid_argument("tree_distance: p must be prime");
    auto [d1, d2] = elementary_divisors(M);
    if (d2 == 0) throw std::invalid_argument("tree_distance: singular matrix");
    return wide_valuation(d2, p) - valuation(d1, p);
}

Wide denom_f(const ProjectiveMatrix& M) {
    auto [d1, d2] = elementary_divisors(M);
    if (d2 == 0) throw std::invalid_argument("denom_f: singular matrix");
    return d2 / d1;
}

Rational hecke_volume(Int N) {
    if (N < 1) throw std::invalid_argument("hecke_volume: N must be positive");
    Int v = 1;
    for (auto [p, e] : factorize(N)) v = checked_mul(v, checked_mul(ipow(p, e - 1), p + 1));
    return Rational(v);
}

Int vertex_count(Int p, int d) {
    if (d < 1 || !is_prime(p)) throw std::invalid_argument("vertex_count: need prime p and d >= 1");
    return checked_mul(p + 1, ipow(p, d - 1));
}

Int vertex_count_oracle(Int p, int d) {
    if (d < 1 || !is_prime(p)) throw std::invalid_argument("vertex_count_oracle: need prime p and d >= 1");
    // sublattices of index n = p^d in Hermite form [[a, b], [0, c]], a c = n, 0 <= b < c;
    // the quotient is cyclic iff gcd(a, b, c) = 1
    Int n = ipow(p, d), count = 0;
    for (Int a = 1; a <= n; a *= p) {
        Int c = n / a;
        for (Int b = 0; b < c; ++b)
            if (gcd(gcd(a, b), c) == 1) ++count;
    }
    return count;
}

ProjectiveMatrix multiplication_matrix(Int D, const Element& alpha) {
    Int delta = D & 1;
    // tau^2 = delta tau + (D - delta)/4
    Int t = (D - delta) / 4;
    ProjectiveMatrix M;
    M.m = {{{alpha.x, checked_mul(alpha.y, t)}, {alpha.y, checked_add(alpha.x, checked_mul(delta, alpha.y))}}};
    return M;
}

DenomComparison denom_vs_min_norm(Int D, const Element& alpha) {
    if (alpha.x == 0 && alpha.y == 0) throw std::invalid_argument("denom_vs_min_norm: alpha must be nonzero");
    DenomComparison out;
    out.denom = denom_f(multiplication_matrix(D, alpha));
    // q alpha is integral iff q = m / g with g = gcd(u, v); |m| = 1 minimizes the norm
    Int g = gcd(alpha.x, alpha.y);
    out.min_norm = norm(D, Element{alpha.x / g, alpha.y / g});
    out.agree = out.denom == static_cast<Wide>(out.min_norm);
    return out;
}

} // namespace cnt
