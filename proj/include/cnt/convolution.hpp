#pragma once
/** @file
 * The arithmetic side of the cross-correlation bound: the multiplicative
 * weights r, r0, r1, the shifted-convolution sum over ideal counts, its
 * rewriting as a lattice sum over a norm form, and the geometry of the
 * ellipse that sum runs over.
 */

#include "cnt/orders.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace cnt {

/// Splitting of the quaternion algebra, supplied as data. The default is the
/// split case: no ramified primes, epsilon = +1, upsilon = 1, e = trivial.
struct SplittingData {
    std::vector<Int> ramified_primes_of_B;
    int epsilon_sign = 1;
    Int upsilon = 1;
    std::optional<IdealClass> e_class; // empty means the trivial class

    static SplittingData split();
    /// upsilon = epsilon * product of ramified p at which E is inert.
    static SplittingData make(Int D, std::vector<Int> ramified, int epsilon_sign,
                              std::optional<IdealClass> e_class = std::nullopt);
    bool ramified_at(Int p) const;
    IdealClass e(Int D) const;
};

/// r(p^k): 1 for p not dividing D; 2 at ramified p | D; 2^mu_wild at p = 2;
/// otherwise 1 below ord_p D and 2 from ord_p D on.
Int eval_r(const SplittingData& splitting, Int D, Int n);

/// D = D_small * D_large with D_small the product of odd p || D, p not
/// dividing omega, p <= eta / (4 c_theta) * log|D|.
struct DSplit {
    Int small = 1;
    Int large = 0;
};
DSplit split_discriminant(Int D, Int omega, double eta, double c_theta = 2.0);

/// r0(p^k) = 2 if p | D_large and k >= ord_p D, else 1.
Int eval_r0(const DSplit& split, Int D, Int n);
/// r1(p^k) = 2 if p | D_large and k > ord_p D_large, else 1.
Int eval_r1(const DSplit& split, Int n);

struct ShiftedSumParams {
    Int D = 0;
    IdealClass s_class;
    SplittingData splitting;
    Rational kappa{1};
    Int omega = 1;
    Int p1 = 2;
    int n = 0;

    /// |upsilon| * p1^(2n)
    Int modulus() const;
    /// floor(kappa |D|)
    Int x_max() const;
    /// [s e]^-1; p1^n is principal and drops out.
    IdealClass f_class() const;
    /// Throws std::invalid_argument unless gcd(upsilon, p1) = 1, (D/p1) = 1
    /// and the classes have discriminant D.
    void validate() const;
};

/// Sum over 0 <= x <= kappa |D| with x = omega D mod upsilon p1^2n of
/// g_[s](x) f_[s e]^-1(N) r(N), N = (x - omega D) / (upsilon p1^2n).
/// g counts ideals in the class [s] plus the zero ideal at x = 0; f counts
/// ideals in the coset [s e]^-1 Pic^2. Terms with N <= 0 vanish.
Int shifted_sum_direct(const ShiftedSumParams& params, Int budget = kDefaultBudget);

/// The same sum over lattice points of the reduced norm form q of [s]^-1:
/// (1/#units) sum over nonzero (x, y) with q(x, y) <= kappa |D|, plus the
/// origin with weight 1 (it stands for the zero ideal).
Rational lattice_sum(const ShiftedSumParams& params, Int budget = kDefaultBudget);

struct Ellipse {
    QuadForm q;
    Rational bound{0}; // the region q(x, y) <= bound
    double area = 0;   // 2 pi bound / sqrt|D|
    double rmax = 0;   // largest radius of curvature, alpha^2 / beta from the semi-axes
    double rmax_bound = 0;
};

/// The region q <= kappa |D| for the reduced norm form q of [s]^-1, with
/// rmax_bound = sqrt(area) (sqrt|D| / N)^(3/2) and N the minimal norm in [s].
Ellipse ellipse_geometry(Int D, const IdealClass& s_class, const Rational& kappa);

/// Calls fn(x, y) for every integer point with q(x, y) <= bound.
void for_each_lattice_point(const QuadForm& q, Int bound, const std::function<void(Int, Int)>& fn,
                            Int budget = kDefaultBudget);

struct LatticeCount {
    Int count = 0;
    double expected = 0;    // area / a^2
    double discrepancy = 0; // |count - expected|
    double allowed = 0;     // c_l (rmax / a)^theta_l
    bool within = false;
};

/// #{z in Z^2 : a z + shift in E}. Throws std::invalid_argument if a^2 > area.
LatticeCount lattice_point_count(const Ellipse& E, std::pair<Int, Int> shift, Int a, double c_l = 10.0,
                                 double theta_l = 2.0 / 3.0, Int budget = kDefaultBudget);

} // namespace cnt
