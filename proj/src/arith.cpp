#include "cnt/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cnt {

Int narrow(Wide v) {
    if (v > std::numeric_limits<Int>::max() || v < std::numeric_limits<Int>::min())
        throw OverflowError("integer overflow");
    return static_cast<Int>(v);
}

Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in add");
    return r;
}

Int checked_sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in sub");
    return r;
}

Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in mul");
    return r;
}

Int ipow(Int base, int exp) {
    Int r = 1;
    for (int i = 0; i < exp; ++i) r = checked_mul(r, base);
    return r;
}

Int mod(Int a, Int m) {
    Int r = a % m;
    return r < 0 ? r + m : r;
}

Int mulmod(Int a, Int b, Int m) {
    Wide r = static_cast<Wide>(mod(a, m)) * mod(b, m) % m;
    return static_cast<Int>(r);
}

Int powmod(Int a, Int e, Int m) {
    Int r = 1 % m;
    a = mod(a, m);
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

Int floor_div(Int a, Int b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

Int ceil_div(Int a, Int b) { return -floor_div(-a, b); }

Int gcd(Int a, Int b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Int lcm(Int a, Int b) {
    if (a == 0 || b == 0) return 0;
    return checked_mul(a / gcd(a, b), b < 0 ? -b : b);
}

Int ext_gcd(Int a, Int b, Int& x, Int& y) {
    Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        Int q = floor_div(a, b);
        Int t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

Int inv_mod(Int a, Int m) {
    Int x, y;
    if (ext_gcd(mod(a, m), m, x, y) != 1) throw std::domain_error("inv_mod: not invertible");
    return mod(x, m);
}

Int isqrt(Int n) {
    if (n < 0) throw std::domain_error("isqrt of negative");
    Int r = static_cast<Int>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<Wide>(r) * r > n) --r;
    while (static_cast<Wide>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_square(Int n) {
    if (n < 0) return false;
    Int r = isqrt(n);
    return r * r == n;
}

int kronecker(Int a, Int n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    int v = 0;
    while ((n & 1) == 0) {
        n >>= 1;
        ++v;
    }
    if (v > 0) {
        if ((a & 1) == 0) return 0;
        Int a8 = mod(a, 8);
        if ((v & 1) && (a8 == 3 || a8 == 5)) result = -result;
    }
    a = mod(a, n);
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            Int n8 = n & 7;
            if (n8 == 3 || n8 == 5) result = -result;
        }
        std::swap(a, n);
        if ((a & 3) == 3 && (n & 3) == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

int valuation(Int n, Int p) {
    if (n == 0) throw std::domain_error("valuation of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

Int strip(Int n, Int p) {
    if (n == 0) return 0;
    while (n % p == 0) n /= p;
    return n;
}

bool is_prime(Int n) {
    if (n < 2) return false;
    for (Int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    Int d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (Int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        Int x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

Factorization factorize(Int n) {
    if (n == 0) throw std::domain_error("factorize(0)");
    if (n < 0) n = -n;
    Factorization out;
    auto take = [&](Int p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e > 0) out.emplace_back(p, e);
    };
    take(2);
    take(3);
    for (Int p = 5; p * p <= n; p += 6) {
        take(p);
        take(p + 2);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<Int> divisors(Int n) {
    std::vector<Int> out{1};
    for (auto [p, e] : factorize(n)) {
        std::size_t sz = out.size();
        Int pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Int radical(Int n) {
    Int r = 1;
    for (auto [p, e] : factorize(n)) r *= p;
    return r;
}

void for_each_prime(Int lo, Int hi, const std::function<void(Int)>& fn) {
    if (hi < 2 || hi < lo) return;
    lo = std::max<Int>(lo, 2);
    Int root = isqrt(hi);
    std::vector<char> small(static_cast<std::size_t>(root + 1), 1);
    std::vector<Int> base;
    for (Int i = 2; i <= root; ++i) {
        if (!small[i]) continue;
        base.push_back(i);
        for (Int j = i * i; j <= root; j += i) small[j] = 0;
    }
    constexpr Int kSegment = 1 << 16;
    std::vector<char> seg(kSegment);
    for (Int start = lo; start <= hi; start += kSegment) {
        Int end = std::min(hi, start + kSegment - 1);
        std::fill(seg.begin(), seg.begin() + (end - start + 1), 1);
        for (Int p : base) {
            if (p * p > end) break;
            Int first = std::max(p * p, ceil_div(start, p) * p);
            for (Int j = first; j <= end; j += p) seg[j - start] = 0;
        }
        for (Int i = start; i <= end; ++i)
            if (seg[i - start]) fn(i);
    }
}

std::vector<Int> primes_up_to(Int n) {
    std::vector<Int> out;
    for_each_prime(2, n, [&](Int p) { out.push_back(p); });
    return out;
}

SpfTable::SpfTable(Int limit) : limit_(limit), spf_(static_cast<std::size_t>(limit + 1), 0) {
    for (Int i = 2; i <= limit; ++i) {
        if (spf_[i] != 0) continue;
        spf_[i] = static_cast<std::uint32_t>(i);
        if (i > limit / i) continue;
        for (Int j = i * i; j <= limit; j += i)
            if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
}

Factorization SpfTable::factor(Int n) const {
    if (n <= 0 || n > limit_) throw std::out_of_range("SpfTable::factor");
    Factorization out;
    while (n > 1) {
        Int p = spf_[n];
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    return out;
}

namespace {

// Tonelli-Shanks; d must be a nonzero square mod the odd prime p.
Int tonelli(Int d, Int p) {
    d = mod(d, p);
    if (p % 4 == 3) return powmod(d, (p + 1) / 4, p);
    Int q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    Int z = 2;
    while (kronecker(z, p) != -1) ++z;
    Int m = s, c = powmod(z, q, p), t = powmod(d, q, p), r = powmod(d, (q + 1) / 2, p);
    while (t != 1) {
        Int i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        Int b = c;
        for (Int j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

} // namespace

std::vector<Int> sqrt_mod_prime_power(Int d, Int p, int e) {
    Int m = ipow(p, e);
    Int dd = mod(d, m);
    std::vector<Int> roots;
    if (m <= 4096) {
        for (Int x = 0; x < m; ++x)
            if (mulmod(x, x, m) == dd) roots.push_back(x);
        return roots;
    }
    if (p != 2 && dd % p != 0) {
        if (kronecker(dd, p) != 1) return roots;
        Int r = tonelli(dd, p);
        Int pk = p;
        for (int k = 1; k < e; ++k) {
            pk *= p;
            // Newton step modulo p^(k+1)
            Int f = mod(mulmod(r, r, pk) - mod(dd, pk), pk);
            r = mod(r - mulmod(f, inv_mod(2 * r, pk), pk), pk);
        }
        roots = {r, m - r};
        std::sort(roots.begin(), roots.end());
        return roots;
    }
    std::vector<Int> cur;
    for (Int x = 0; x < p; ++x)
        if (mulmod(x, x, p) == mod(dd, p)) cur.push_back(x);
    Int pk = p;
    for (int k = 1; k < e; ++k) {
        Int next_mod = pk * p;
        std::vector<Int> nxt;
        Int target = mod(dd, next_mod);
        for (Int r : cur)
            for (Int t = 0; t < p; ++t) {
                Int x = r + t * pk;
                if (mulmod(x, x, next_mod) == target) nxt.push_back(x);
            }
        cur.swap(nxt);
        pk = next_mod;
    }
    std::sort(cur.begin(), cur.end());
    return cur;
}

std::vector<Int> sqrt_mod(Int d, Int m) {
    if (m <= 0) throw std::domain_error("sqrt_mod: modulus must be positive");
    std::vector<Int> acc{0};
    Int acc_mod = 1;
    if (m == 1) return acc;
    for (auto [p, e] : factorize(m)) {
        Int pe = ipow(p, e);
        auto local = sqrt_mod_prime_power(d, p, e);
        if (local.empty()) return {};
        std::vector<Int> nxt;
        nxt.reserve(acc.size() * local.size());
        Int inv = inv_mod(acc_mod, pe);
        for (Int a : acc)
            for (Int b : local) {
                // x = a (mod acc_mod), x = b (mod pe)
                Int t = mulmod(mod(b - a, pe), inv, pe);
                nxt.push_back(a + acc_mod * t);
            }
        acc.swap(nxt);
        acc_mod *= pe;
    }
    std::sort(acc.begin(), acc.end());
    return acc;
}

} // namespace cnt
