#include "cnt/convolution.hpp"

#include "cnt/genus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cnt {

namespace {

Int floor_rational(const Rational& r) { return floor_div(r.numerator(), r.denominator()); }

// Calls fn(X, Y) for every integer point with q(X, Y) <= B of the form
// X = a x + s1, Y = a y + s2.
template <class Fn>
void for_each_point(const QuadForm& q, Int B, Int a, std::pair<Int, Int> shift, Int budget, Fn&& fn) {
    if (B < 0) return;
    Wide absD = -static_cast<Wide>(q.discriminant());
    Int ymax = isqrt(narrow(4 * static_cast<Wide>(q.a) * B / absD));
    Int ylo = ceil_div(-ymax - shift.second, a), yhi = floor_div(ymax - shift.second, a);
    Int work = 0;
    for (Int y = ylo; y <= yhi; ++y) {
        Int Y = a * y + shift.second;
        Wide disc = 4 * static_cast<Wide>(q.a) * B - absD * Y * Y;
        if (disc < 0) continue;
        Int r = isqrt(narrow(disc));
        Int bY = checked_mul(q.b, Y);
        Int lo = ceil_div(-r - bY, 2 * q.a), hi = floor_div(r - bY, 2 * q.a);
        Int xlo = ceil_div(lo - shift.first, a), xhi = floor_div(hi - shift.first, a);
        work += 1 + std::max<Int>(0, xhi - xlo + 1);
        if (work > budget) throw BudgetExceeded("lattice enumeration exceeds budget");
        fn(xlo, xhi, y, Y);
    }
}

Int modular_count_weight(const ShiftedSumParams& P, const ClassGroup& G, const IdealClass& fcls, Int value) {
    // (f r)((value - omega D) / (upsilon p1^2n)) when the quotient is a positive integer
    Int M = P.modulus();
    Int shifted = checked_sub(value, checked_mul(P.omega, P.D));
    if (mod(shifted, M) != 0) return 0;
    Int N = shifted / M;
    if (P.splitting.upsilon < 0) N = -N;
    if (N <= 0) return 0;
    Int f = count_ideals_in_class(G, N, fcls, ClassMode::coset_of_squares);
    return f == 0 ? 0 : checked_mul(f, eval_r(P.splitting, P.D, N));
}

} // namespace

SplittingData SplittingData::split() { return {}; }

SplittingData SplittingData::make(Int D, std::vector<Int> ramified, int epsilon_sign, std::optional<IdealClass> e_class) {
    if (epsilon_sign != 1 && epsilon_sign != -1) throw std::invalid_argument("SplittingData: epsilon sign must be +-1");
    Discriminant disc(D);
    SplittingData s;
    s.epsilon_sign = epsilon_sign;
    s.e_class = e_class;
    s.upsilon = epsilon_sign;
    std::sort(ramified.begin(), ramified.end());
    ramified.erase(std::unique(ramified.begin(), ramified.end()), ramified.end());
    for (Int p : ramified) {
        if (!is_prime(p)) throw std::invalid_argument("SplittingData: ramified places must be primes");
        if (kronecker(disc.fundamental(), p) == -1) s.upsilon = checked_mul(s.upsilon, p);
    }
    s.ramified_primes_of_B = std::move(ramified);
    return s;
}

bool SplittingData::ramified_at(Int p) const {
    return std::find(ramified_primes_of_B.begin(), ramified_primes_of_B.end(), p) != ramified_primes_of_B.end();
}

IdealClass SplittingData::e(Int D) const { return e_class ? reduce(*e_class) : principal_form(D); }

Int eval_r(const SplittingData& splitting, Int D, Int n) {
    if (n < 1) throw std::invalid_argument("eval_r: n must be positive");
    Int out = 1;
    for (auto [p, k] : factorize(n)) {
        if (D % p != 0) continue;
        if (splitting.ramified_at(p)) out *= 2;
        else if (p == 2) out *= Int(1) << mu_wild(D);
        else if (k >= valuation(D, p)) out *= 2;
    }
    return out;
}

DSplit split_discriminant(Int D, Int omega, double eta, double c_theta) {
    if (!(eta > 0 && eta < 0.5)) throw std::invalid_argument("split_discriminant: eta must lie in (0, 1/2)");
    if (omega == 0) throw std::invalid_argument("split_discriminant: omega must be nonzero");
    double limit = eta / (4.0 * c_theta) * std::log(std::abs(static_cast<double>(D)));
    DSplit s;
    for (auto [p, k] : factorize(-D))
        if (p > 2 && k == 1 && omega % p != 0 && static_cast<double>(p) <= limit) s.small *= p;
    s.large = D / s.small;
    return s;
}

Int eval_r0(const DSplit& split, Int D, Int n) {
    if (n < 1) throw std::invalid_argument("eval_r0: n must be positive");
    Int out = 1;
    for (auto [p, k] : factorize(n))
        if (split.large % p == 0 && k >= valuation(D, p)) out *= 2;
    return out;
}

Int eval_r1(const DSplit& split, Int n) {
    if (n < 1) throw std::invalid_argument("eval_r1: n must be positive");
    Int out = 1;
    for (auto [p, k] : factorize(n))
        if (split.large % p == 0 && k > valuation(split.large, p)) out *= 2;
    return out;
}

Int ShiftedSumParams::modulus() const {
    return checked_mul(splitting.upsilon < 0 ? -splitting.upsilon : splitting.upsilon, ipow(p1, 2 * n));
}

Int ShiftedSumParams::x_max() const { return floor_rational(kappa * Rational(-D)); }

IdealClass ShiftedSumParams::f_class() const { return inverse(compose(s_class, splitting.e(D))); }

void ShiftedSumParams::validate() const {
    if (!is_discriminant(D) || D >= 0) throw std::invalid_argument("ShiftedSumParams: D must be a negative discriminant");
    if (s_class.discriminant() != D) throw std::invalid_argument("ShiftedSumParams: s has the wrong discriminant");
    if (splitting.e_class && splitting.e_class->discriminant() != D)
        throw std::invalid_argument("ShiftedSumParams: e has the wrong discriminant");
    if (kappa <= 0) throw std::invalid_argument("ShiftedSumParams: kappa must be positive");
    if (omega == 0) throw std::invalid_argument("ShiftedSumParams: omega must be nonzero");
    if (splitting.upsilon == 0) throw std::invalid_argument("ShiftedSumParams: upsilon must be nonzero");
    if (n < 0 || !is_prime(p1)) throw std::invalid_argument("ShiftedSumParams: p1 must be prime and n >= 0");
    if (gcd(splitting.upsilon, p1) != 1) throw std::invalid_argument("ShiftedSumParams: gcd(upsilon, p1) must be 1");
    if (kronecker(D, p1) != 1) throw std::invalid_argument("ShiftedSumParams: p1 must split");
}

Int shifted_sum_direct(const ShiftedSumParams& P, Int budget) {
    P.validate();
    ClassGroup G(P.D, true);
    IdealClass s = reduce(P.s_class), fcls = P.f_class();
    Int M = P.modulus(), X = P.x_max();
    Int start = mod(checked_mul(P.omega, P.D), M);
    if (start <= X && (X - start) / M + 1 > budget) throw BudgetExceeded("shifted_sum_direct: range exceeds budget");
    Int total = 0;
    for (Int x = start; x <= X; x += M) {
        Int g = count_ideals_in_class(G, x, s, ClassMode::exact);
        if (g == 0) continue;
        Int w = modular_count_weight(P, G, fcls, x);
        if (w != 0) total = checked_add(total, checked_mul(g, w));
    }
    return total;
}

Rational lattice_sum(const ShiftedSumParams& P, Int budget) {
    P.validate();
    ClassGroup G(P.D, true);
    IdealClass fcls = P.f_class();
    QuadForm q = reduce(inverse(P.s_class));
    Int nonzero = 0;
    for_each_point(q, P.x_max(), 1, {0, 0}, budget, [&](Int xlo, Int xhi, Int, Int Y) {
        for (Int x = xlo; x <= xhi; ++x) {
            if (x == 0 && Y == 0) continue;
            Int w = modular_count_weight(P, G, fcls, q.eval(x, Y));
            if (w != 0) nonzero = checked_add(nonzero, w);
        }
    });
    Int origin = modular_count_weight(P, G, fcls, 0);
    return Rational(nonzero, unit_count(P.D)) + Rational(origin);
}

Ellipse ellipse_geometry(Int D, const IdealClass& s_class, const Rational& kappa) {
    if (s_class.discriminant() != D || D >= 0) throw std::invalid_argument("ellipse_geometry: class of another discriminant");
    if (kappa <= 0) throw std::invalid_argument("ellipse_geometry: kappa must be positive");
    Ellipse E;
    E.q = reduce(inverse(s_class));
    E.bound = kappa * Rational(-D);
    double absD = static_cast<double>(-D), B = boost::rational_cast<double>(E.bound);
    double k = boost::rational_cast<double>(kappa);
    E.area = 2.0 * std::numbers::pi * k * std::sqrt(absD);
    double a = static_cast<double>(E.q.a), b = static_cast<double>(E.q.b), c = static_cast<double>(E.q.c);
    double spread = std::hypot(a - c, b);
    double lmin = (a + c - spread) / 2.0, lmax = (a + c + spread) / 2.0;
    // lmin lmax = |D|/4 is exact, the smaller root loses digits when subtracted
    lmin = absD / 4.0 / lmax;
    double alpha = std::sqrt(B / lmin), beta = std::sqrt(B / lmax);
    E.rmax = alpha * alpha / beta;
    double N = static_cast<double>(minimal_norm_in_class(D, reduce(s_class)));
    E.rmax_bound = std::sqrt(E.area) * std::pow(std::sqrt(absD) / N, 1.5);
    return E;
}

void for_each_lattice_point(const QuadForm& q, Int bound, const std::function<void(Int, Int)>& fn, Int budget) {
    for_each_point(q, bound, 1, {0, 0}, budget, [&](Int xlo, Int xhi, Int, Int Y) {
        for (Int x = xlo; x <= xhi; ++x) fn(x, Y);
    });
}

LatticeCount lattice_point_count(const Ellipse& E, std::pair<Int, Int> shift, Int a, double c_l, double theta_l, Int budget) {
    if (a < 1) throw std::invalid_argument("lattice_point_count: scale must be positive");
    if (static_cast<double>(a) * static_cast<double>(a) > E.area)
        throw std::invalid_argument("lattice_point_count: a^2 exceeds the area");
    LatticeCount out;
    for_each_point(E.q, floor_rational(E.bound), a, shift, budget,
                   [&](Int xlo, Int xhi, Int, Int) { out.count += std::max<Int>(0, xhi - xlo + 1); });
    out.expected = E.area / (static_cast<double>(a) * static_cast<double>(a));
    out.discrepancy = std::abs(static_cast<double>(out.count) - out.expected);
    out.allowed = c_l * std::pow(E.rmax / static_cast<double>(a), theta_l);
    out.within = out.discrepancy <= out.allowed;
    return out;
}

} // namespace cnt
