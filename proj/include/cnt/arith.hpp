#pragma once
/** @file
 * Integer helpers shared by every module: overflow-checked 64-bit
 * arithmetic, Kronecker symbols, factorization and prime iteration.
 */

#include <boost/rational.hpp>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cnt {

using Int = std::int64_t;
using Wide = __int128;
using Rational = boost::rational<Int>;

struct OverflowError : std::overflow_error {
    using std::overflow_error::overflow_error;
};

/// Thrown when an enumeration would exceed its configured work budget.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr Int kDefaultBudget = 100'000'000;

Int narrow(Wide v);
Int checked_add(Int a, Int b);
Int checked_sub(Int a, Int b);
Int checked_mul(Int a, Int b);
Int ipow(Int base, int exp);

/// Least nonnegative residue of a modulo m (m > 0).
Int mod(Int a, Int m);
Int mulmod(Int a, Int b, Int m);
Int powmod(Int a, Int e, Int m);
Int floor_div(Int a, Int b);
Int ceil_div(Int a, Int b);
Int gcd(Int a, Int b);
Int lcm(Int a, Int b);
/// Returns g = gcd(a,b) >= 0 with a*x + b*y = g.
Int ext_gcd(Int a, Int b, Int& x, Int& y);
/// Inverse of a modulo m; throws std::domain_error when gcd(a,m) != 1.
Int inv_mod(Int a, Int m);

Int isqrt(Int n);
bool is_square(Int n);

/// Kronecker symbol (a/n) for arbitrary integers.
int kronecker(Int a, Int n);

/// Exponent of p in n (n != 0).
int valuation(Int n, Int p);
/// n with every factor p removed.
Int strip(Int n, Int p);

bool is_prime(Int n);
using Factorization = std::vector<std::pair<Int, int>>;
/// Prime factorization of |n| (n != 0), primes ascending.
Factorization factorize(Int n);
std::vector<Int> divisors(Int n);
/// Product of primes dividing n.
Int radical(Int n);

/// All primes <= n, produced by a segmented sieve of Eratosthenes.
std::vector<Int> primes_up_to(Int n);
/// Calls fn(p) for every prime lo <= p <= hi in increasing order.
void for_each_prime(Int lo, Int hi, const std::function<void(Int)>& fn);

/// Smallest-prime-factor table for fast factorization of all n <= limit.
class SpfTable {
public:
    explicit SpfTable(Int limit);
    Int limit() const { return limit_; }
    Int spf(Int n) const { return spf_[static_cast<std::size_t>(n)]; }
    Factorization factor(Int n) const;

private:
    Int limit_;
    std::vector<std::uint32_t> spf_;
};

/// All x mod p^e with x^2 = d (mod p^e).
std::vector<Int> sqrt_mod_prime_power(Int d, Int p, int e);
/// All x mod m with x^2 = d (mod m), ascending.
std::vector<Int> sqrt_mod(Int d, Int m);

} // namespace cnt
