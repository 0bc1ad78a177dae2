#pragma once
/** @file
 * Sums of multiplicative functions over values of Q(x, y) = q(x, y) - omega D
 * on lattice points of an ellipse: the sieve upper bound and its
 * congruence-restricted forms, the rough-number count, the decoupling
 * majorant and the Mertens-type lower bound.
 */

#include "cnt/conics.hpp"
#include "cnt/convolution.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace cnt {

/// A nonnegative multiplicative function given by its values on prime powers,
/// with the constants of the class f(n) <= min(A^Omega(n), B n^eps).
struct MultFnSpec {
    std::string name;
    std::function<double(Int p, int k)> prime_power;
    double A = 1;
    double B = 1;
    double eps = 1;

    double operator()(Int n) const;
    double operator()(const Factorization& fac) const;
};

MultFnSpec mult_one();
/// Number of divisors; B is the exact supremum of tau(n) / n^eps.
MultFnSpec mult_divisor(double eps);
/// Number of invertible ideals of norm n in the order of discriminant D.
MultFnSpec mult_ideal_count(Int D, double eps);
/// g(p^k) = c^k / p^(s k), for decoupling and Mertens experiments.
MultFnSpec mult_power(double c, double s);

/// sup over n of tau(n) / n^eps.
double divisor_sup(double eps);

/// First n <= limit violating the class bound, with a message; empty if none.
std::optional<std::string> class_violation(const MultFnSpec& f, Int limit);

/// Local densities of one conic, cached: rho(p) and rho~(p^k). Odd primes use
/// the closed forms, p = 2 is enumerated.
class ConicDensities {
public:
    explicit ConicDensities(ConicPoly P, Int budget = kDefaultBudget);
    const ConicPoly& poly() const { return P_; }
    Int rho_p(Int p);
    Int rho_tilde_pk(Int p, int k);
    double rho_tilde(const Factorization& fac);
    double rho_tilde(Int n);

private:
    ConicPoly P_;
    Int budget_;
    std::map<std::pair<Int, int>, Int> tilde_;
    std::map<Int, Int> rho1_;
};

struct SieveInstance {
    ConicPoly P;
    Ellipse E;
    Int X = 1;
    MultFnSpec f;
    double eta = 0.1;
    double delta = 2;
    double C = 16;
    double r = 0.5;
    double theta_l = 2.0 / 3.0 + 1e-3;
};

/// Instance on the ellipse q <= kappa |D| of P.q with X = max |Q| on the
/// lattice points and delta = log X / log area (at least the minimal one).
SieveInstance make_instance(const ConicPoly& P, const Rational& kappa, MultFnSpec f, double eta = 0.1);

/// Hypotheses of the sieve bound that fail for this instance, one line each.
std::vector<std::string> hypothesis_violations(const SieveInstance& inst, ConicDensities& dens);

struct SieveBound {
    double value = 0;
    double area = 0;
    double product = 1; // prod over 2 < p <= X, p not dividing Q, of (1 - rho(p)/p^2)
    double sum = 0;     // sum over a <= X of f(a) rho~(a) / a^2
    std::vector<std::string> violations;
};

SieveBound sieve_rhs(const SieveInstance& inst, ConicDensities& dens);
SieveBound sieve_rhs(const SieveInstance& inst);

/// Sum of f(|Q(x, y)|) over the lattice points of E, with f(0) = 0.
double sieve_lhs(const SieveInstance& inst, Int budget = kDefaultBudget);

/// Points of E whose value Q has least prime factor > z; P^-(1) is infinite
/// and P^-(0) = 2.
Int rough_count(const Ellipse& E, const ConicPoly& P, double z, Int budget = kDefaultBudget);
/// area * prod over 2 < p <= z of (1 - rho(p)/p^2).
double rough_bound(const Ellipse& E, ConicDensities& dens, double z);

/// M_z(g, psi) = prod over p <= z of [1 + sum_{v <= log z / log p} psi(p^v) sum_{j >= v} g(p^j)].
/// Inner tails stop once a geometric bound certifies a remainder below 1e-10
/// of the partial sum; series that do not decay throw std::domain_error.
double decoupling_majorant(const MultFnSpec& g, const MultFnSpec& psi, double z);

struct DecouplingReport {
    double lhs = 0;       // sum_{a <= z} g(a) h(a), h = 1 * psi
    double g_sum = 0;     // sum_{a <= z} g(a)
    double majorant = 0;  // M_z(g, psi)
    double euler = 0;     // prod over p <= z of sum_j g(p^j) h(p^j)
    bool holds = false;   // lhs <= majorant * g_sum
};
DecouplingReport decoupling_check(const MultFnSpec& g, const MultFnSpec& psi, Int z);

struct MertensReport {
    double sum = 0;     // sum over squarefree n <= z of g(n) / n
    double product = 1; // prod over d < p <= z of (1 - g(p)/p)
    double ratio = 0;   // sum * product
};
/// Throws std::invalid_argument unless 0 <= g(p) <= d for p <= z.
MertensReport mertens_lower_check(const MultFnSpec& g, double d, Int z);

struct CongruenceBound {
    double value = 0;
    Int rho_k1l = 0; // #{(x, y) mod k1 k2 : Q = k1 l}
    double product = 1;
    double sum = 0;
    std::vector<std::string> violations;
};

/// Bound for the sum of f(Q/k0) over points with Q = k0 k1 l mod k0 k1 k2.
/// Throws std::invalid_argument unless primes of k1 divide k2, gcd(k0, k2) = 1
/// and l is a unit mod k2.
CongruenceBound sieve_rhs_congruence(const SieveInstance& inst, ConicDensities& dens, Int k0, Int k1, Int k2, Int l);
double sieve_lhs_congruence(const SieveInstance& inst, Int k0, Int k1, Int k2, Int l, Int budget = kDefaultBudget);

/// Sum over z^alpha <= a <= z with P^+(a) <= log z log log z of rho~(a)/a^2.
double extremely_smooth_sum(ConicDensities& dens, double z, double alpha);

} // namespace cnt
