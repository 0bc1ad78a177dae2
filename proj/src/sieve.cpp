#include "cnt/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cnt {

namespace {

Int content(const QuadPoly& Q) { return gcd(gcd(Q.a, Q.b), gcd(Q.c, Q.k)); }

Int value_of(const QuadPoly& Q, Int x, Int y) {
    Wide v = static_cast<Wide>(Q.a) * x * x + static_cast<Wide>(Q.b) * x * y + static_cast<Wide>(Q.c) * y * y + Q.k;
    return narrow(v);
}

Int bound_of(const Ellipse& E) { return floor_div(E.bound.numerator(), E.bound.denominator()); }

// Sum of a nonnegative series t(1), t(2), ..., cut once a geometric tail bound
// falls below 1e-10 of the partial sum; the bound is added to the result.
double series_sum(const std::function<double(int)>& t, const char* what) {
    constexpr int kMaxTerms = 400;
    double sum = 0, prev = 0;
    int zeros = 0;
    for (int j = 1; j <= kMaxTerms; ++j) {
        double term = t(j);
        if (term < 0 || !std::isfinite(term)) throw std::domain_error(std::string(what) + ": negative or non-finite term");
        sum += term;
        if (term == 0) {
            if (++zeros >= 8) return sum;
        } else {
            zeros = 0;
        }
        if (prev > 0 && term > 0) {
            double q = term / prev;
            if (q < 1) {
                double rem = term * q / (1 - q);
                if (rem <= 1e-10 * sum) return sum + rem;
            }
        }
        prev = term;
    }
    throw std::domain_error(std::string(what) + ": series does not converge");
}

// Primes p with lo < p <= hi.
std::vector<Int> primes_between(Int lo, Int hi) {
    std::vector<Int> out;
    if (hi <= lo) return out;
    for_each_prime(lo + 1, hi, [&](Int p) { out.push_back(p); });
    return out;
}

} // namespace

double MultFnSpec::operator()(const Factorization& fac) const {
    double v = 1;
    for (auto [p, k] : fac) v *= prime_power(p, k);
    return v;
}

double MultFnSpec::operator()(Int n) const {
    if (n < 1) throw std::invalid_argument("MultFnSpec: argument must be positive");
    return (*this)(factorize(n));
}

double divisor_sup(double eps) {
    if (!(eps > 0)) throw std::invalid_argument("divisor_sup: eps must be positive");
    double limit = std::pow(2.0, 1.0 / eps);
    if (limit > 1e8) throw std::invalid_argument("divisor_sup: eps too small to evaluate");
    // only primes with 2 / p^eps > 1 contribute
    double log_sup = 0;
    for (Int p : primes_up_to(static_cast<Int>(limit))) {
        double best = 0, lp = std::log(static_cast<double>(p));
        for (int k = 1; k < 200; ++k) {
            double v = std::log(k + 1.0) - k * eps * lp;
            if (v > best) best = v;
            else if (v < best - 1) break;
        }
        log_sup += best;
    }
    return std::exp(log_sup);
}

MultFnSpec mult_one() { return {"one", [](Int, int) { return 1.0; }, 1.0, 1.0, 1e-3}; }

MultFnSpec mult_divisor(double eps) {
    return {"divisor", [](Int, int k) { return static_cast<double>(k + 1); }, 2.0, divisor_sup(eps), eps};
}

MultFnSpec mult_ideal_count(Int D, double eps) {
    // count_ideals(p^k) <= k + 1, so the divisor constants apply
    return {"ideal-count", [D](Int p, int k) { return static_cast<double>(count_ideals(D, ipow(p, k))); }, 2.0,
            divisor_sup(eps), eps};
}

MultFnSpec mult_power(double c, double s) {
    if (c < 0) throw std::invalid_argument("mult_power: c must be nonnegative");
    return {"power", [c, s](Int p, int k) { return std::pow(c, k) / std::pow(static_cast<double>(p), s * k); },
            std::max(1.0, c), std::max(1.0, c), 1.0};
}

std::optional<std::string> class_violation(const MultFnSpec& f, Int limit) {
    SpfTable spf(std::max<Int>(limit, 2));
    for (Int n = 1; n <= limit; ++n) {
        auto fac = n == 1 ? Factorization{} : spf.factor(n);
        double v = f(fac);
        int Omega = 0;
        for (auto [p, k] : fac) Omega += k;
        double cap = std::min(std::pow(f.A, Omega), f.B * std::pow(static_cast<double>(n), f.eps));
        if (v < 0 || v > cap * (1 + 1e-12)) {
            std::ostringstream msg;
            msg << f.name << ": f(" << n << ") = " << v << (v < 0 ? " is negative" : " exceeds min(A^Omega, B n^eps) = ")
                << (v < 0 ? "" : std::to_string(cap));
            return msg.str();
        }
    }
    return std::nullopt;
}

ConicDensities::ConicDensities(ConicPoly P, Int budget) : P_(std::move(P)), budget_(budget) {}

Int ConicDensities::rho_p(Int p) {
    auto it = rho1_.find(p);
    if (it != rho1_.end()) return it->second;
    Int v = p == 2 ? rho_brute(P_, 2, budget_).rho : rho_formula(P_, p, 1);
    rho1_.emplace(p, v);
    return v;
}

Int ConicDensities::rho_tilde_pk(Int p, int k) {
    if (k == 0) return 1;
    auto key = std::make_pair(p, k);
    auto it = tilde_.find(key);
    if (it != tilde_.end()) return it->second;
    Int v = p == 2 ? rho_brute(P_, ipow(2, k), budget_).rho_tilde : rho_tilde_formula(P_, p, k);
    tilde_.emplace(key, v);
    return v;
}

double ConicDensities::rho_tilde(const Factorization& fac) {
    double v = 1;
    for (auto [p, k] : fac) v *= static_cast<double>(rho_tilde_pk(p, k));
    return v;
}

double ConicDensities::rho_tilde(Int n) { return n == 1 ? 1.0 : rho_tilde(factorize(n)); }

SieveInstance make_instance(const ConicPoly& P, const Rational& kappa, MultFnSpec f, double eta) {
    if (!P.q.is_reduced()) throw std::invalid_argument("make_instance: the form must be reduced");
    Int D = P.D();
    SieveInstance inst;
    inst.P = P;
    inst.E = ellipse_geometry(D, inverse(P.q), kappa);
    inst.f = std::move(f);
    inst.eta = eta;
    QuadPoly Q = P.poly();
    Int X = 1;
    for_each_lattice_point(inst.E.q, bound_of(inst.E), [&](Int x, Int y) {
        Int v = value_of(Q, x, y);
        X = std::max(X, v < 0 ? -v : v);
    });
    inst.X = X;
    inst.delta = inst.E.area > 1 ? std::max(1e-9, std::log(static_cast<double>(X)) / std::log(inst.E.area)) : 1.0;
    return inst;
}

std::vector<std::string> hypothesis_violations(const SieveInstance& inst, ConicDensities& dens) {
    std::vector<std::string> out;
    double A = inst.E.area;
    if (std::pow(inst.E.rmax, inst.theta_l) > std::pow(A, 1 - 3 * inst.eta))
        out.push_back("R_max^theta_l <= A^(1 - 3 eta) fails");
    QuadPoly Q = inst.P.poly();
    Int maxQ = 0;
    for_each_lattice_point(inst.E.q, bound_of(inst.E), [&](Int x, Int y) {
        Int v = value_of(Q, x, y);
        maxQ = std::max(maxQ, v < 0 ? -v : v);
    });
    if (maxQ > inst.X) out.push_back("max |Q| <= X fails");
    if (static_cast<double>(inst.X) > std::pow(A, inst.delta) * (1 + 1e-12)) out.push_back("X <= A^delta fails");
    for (Int p : {2, 3, 5, 7, 11, 13})
        for (int k = 1; k <= 3; ++k)
            if (static_cast<double>(dens.rho_tilde_pk(p, k)) > inst.C * std::pow(static_cast<double>(p), k * (2 - inst.r)))
                out.push_back("rho~(p^k) <= C p^(k(2-r)) fails at " + std::to_string(p) + "^" + std::to_string(k));
    if (!(inst.f.eps < std::min(inst.r, inst.eta * inst.r / (4 * inst.delta))))
        out.push_back("eps < min(r, eta r / (4 delta)) fails");
    if (auto bad = class_violation(inst.f, 10000)) out.push_back("class M(A, B, eps) fails: " + *bad);
    return out;
}

SieveBound sieve_rhs(const SieveInstance& inst, ConicDensities& dens) {
    SieveBound out;
    out.area = inst.E.area;
    Int cont = content(inst.P.poly());
    long double prod = 1;
    for (Int p : primes_between(2, inst.X))
        if (cont % p != 0) prod *= 1.0L - static_cast<long double>(dens.rho_p(p)) / (static_cast<long double>(p) * p);
    out.product = static_cast<double>(prod);

    // f(a) rho~(a) / a^2 is multiplicative; build it from the smallest prime factor
    Int X = inst.X;
    SpfTable spf(std::max<Int>(X, 2));
    std::vector<double> term(static_cast<std::size_t>(X) + 1, 0.0);
    std::vector<double> local(static_cast<std::size_t>(X) + 1, -1.0);
    long double sum = 0;
    term[1] = 1;
    sum = 1;
    for (Int a = 2; a <= X; ++a) {
        Int p = spf.spf(a), m = a, pk = 1;
        int k = 0;
        while (m % p == 0) {
            m /= p;
            pk *= p;
            ++k;
        }
        double& w = local[static_cast<std::size_t>(pk)];
        if (w < 0) {
            double pk2 = static_cast<double>(pk) * static_cast<double>(pk);
            w = inst.f.prime_power(p, k) * static_cast<double>(dens.rho_tilde_pk(p, k)) / pk2;
        }
        term[static_cast<std::size_t>(a)] = term[static_cast<std::size_t>(m)] * w;
        sum += term[static_cast<std::size_t>(a)];
    }
    out.sum = static_cast<double>(sum);
    out.value = out.area * out.product * out.sum;
    out.violations = hypothesis_violations(inst, dens);
    return out;
}

SieveBound sieve_rhs(const SieveInstance& inst) {
    ConicDensities dens(inst.P);
    return sieve_rhs(inst, dens);
}

double sieve_lhs(const SieveInstance& inst, Int budget) {
    QuadPoly Q = inst.P.poly();
    long double sum = 0;
    for_each_lattice_point(
        inst.E.q, bound_of(inst.E),
        [&](Int x, Int y) {
            Int v = value_of(Q, x, y);
            if (v != 0) sum += inst.f(v < 0 ? -v : v);
        },
        budget);
    return static_cast<double>(sum);
}

Int rough_count(const Ellipse& E, const ConicPoly& P, double z, Int budget) {
    if (!(z >= 1)) throw std::invalid_argument("rough_count: z must be at least 1");
    QuadPoly Q = P.poly();
    Int count = 0;
    for_each_lattice_point(
        E.q, bound_of(E),
        [&](Int x, Int y) {
            Int v = value_of(Q, x, y);
            if (v < 0) v = -v;
            if (v == 1) {
                ++count;
                return;
            }
            Int least = v == 0 ? 2 : factorize(v).front().first;
            if (static_cast<double>(least) > z) ++count;
        },
        budget);
    return count;
}

double rough_bound(const Ellipse& E, ConicDensities& dens, double z) {
    long double prod = 1;
    for (Int p : primes_between(2, static_cast<Int>(std::floor(z))))
        prod *= 1.0L - static_cast<long double>(dens.rho_p(p)) / (static_cast<long double>(p) * p);
    return E.area * static_cast<double>(prod);
}

double decoupling_majorant(const MultFnSpec& g, const MultFnSpec& psi, double z) {
    if (!(z >= 1)) throw std::invalid_argument("decoupling_majorant: z must be at least 1");
    long double out = 1;
    Int zi = static_cast<Int>(std::floor(z));
    for (Int p : primes_up_to(zi)) {
        int V = 0;
        for (Int pv = p; pv <= zi; pv *= p) ++V;
        // tails T_v = sum_{j >= v} g(p^j) from the full series minus prefixes
        double total = series_sum([&](int j) { return g.prime_power(p, j); }, "decoupling_majorant");
        long double inner = 0, prefix = 0;
        for (int v = 1; v <= V; ++v) {
            long double tail = std::max(0.0L, total - prefix);
            inner += psi.prime_power(p, v) * tail;
            prefix += g.prime_power(p, v);
        }
        out *= 1 + inner;
    }
    return static_cast<double>(out);
}

DecouplingReport decoupling_check(const MultFnSpec& g, const MultFnSpec& psi, Int z) {
    if (z < 1) throw std::invalid_argument("decoupling_check: z must be at least 1");
    DecouplingReport rep;
    SpfTable spf(std::max<Int>(z, 2));
    long double lhs = 1, gs = 1;
    for (Int a = 2; a <= z; ++a) {
        double ga = 1, ha = 1;
        for (auto [p, k] : spf.factor(a)) {
            ga *= g.prime_power(p, k);
            double h = 1;
            for (int v = 1; v <= k; ++v) h += psi.prime_power(p, v);
            ha *= h;
        }
        lhs += ga * ha;
        gs += ga;
    }
    rep.lhs = static_cast<double>(lhs);
    rep.g_sum = static_cast<double>(gs);
    rep.majorant = decoupling_majorant(g, psi, static_cast<double>(z));
    long double euler = 1;
    for (Int p : primes_up_to(z)) {
        double local = series_sum(
            [&](int j) {
                double h = 1;
                for (int v = 1; v <= j; ++v) h += psi.prime_power(p, v);
                return g.prime_power(p, j) * h;
            },
            "decoupling_check");
        euler *= 1 + local;
    }
    rep.euler = static_cast<double>(euler);
    rep.holds = rep.lhs <= rep.majorant * rep.g_sum * (1 + 1e-12);
    return rep;
}

MertensReport mertens_lower_check(const MultFnSpec& g, double d, Int z) {
    if (z < 2) throw std::invalid_argument("mertens_lower_check: z must be at least 2");
    auto primes = primes_up_to(z);
    std::vector<double> gp(static_cast<std::size_t>(z) + 1, 0.0);
    for (Int p : primes) {
        double v = g.prime_power(p, 1);
        if (v < 0 || v > d) throw std::invalid_argument("mertens_lower_check: need 0 <= g(p) <= d");
        gp[static_cast<std::size_t>(p)] = v;
    }
    SpfTable spf(z);
    // g(n)/n on squarefree n, zero elsewhere
    std::vector<double> val(static_cast<std::size_t>(z) + 1, 0.0);
    val[1] = 1;
    long double sum = 1;
    for (Int n = 2; n <= z; ++n) {
        Int p = spf.spf(n), m = n / p;
        if (m % p == 0) continue;
        val[static_cast<std::size_t>(n)] = val[static_cast<std::size_t>(m)] * gp[static_cast<std::size_t>(p)] / static_cast<double>(p);
        sum += val[static_cast<std::size_t>(n)];
    }
    long double prod = 1;
    for (Int p : primes)
        if (static_cast<double>(p) > d) prod *= 1.0L - gp[static_cast<std::size_t>(p)] / static_cast<long double>(p);
    MertensReport rep;
    rep.sum = static_cast<double>(sum);
    rep.product = static_cast<double>(prod);
    rep.ratio = static_cast<double>(sum * prod);
    return rep;
}

CongruenceBound sieve_rhs_congruence(const SieveInstance& inst, ConicDensities& dens, Int k0, Int k1, Int k2, Int l) {
    if (k0 < 1 || k1 < 1 || k2 < 1) throw std::invalid_argument("sieve_rhs_congruence: k0, k1, k2 must be positive");
    for (auto [p, e] : factorize(k1))
        if (k2 % p != 0) throw std::invalid_argument("sieve_rhs_congruence: primes of k1 must divide k2");
    if (gcd(k0, k2) != 1) throw std::invalid_argument("sieve_rhs_congruence: gcd(k0, k2) must be 1");
    if (gcd(mod(l, k2), k2) != 1 && k2 > 1) throw std::invalid_argument("sieve_rhs_congruence: l must be a unit mod k2");
    CongruenceBound out;
    double A = inst.E.area;
    Int k = checked_mul(checked_mul(k0, k1), k2);
    if (std::pow(inst.E.rmax, inst.theta_l) > std::pow(A, 1 - 4 * inst.eta))
        out.violations.push_back("R_max^theta_l <= A^(1 - 4 eta) fails");
    if (static_cast<double>(inst.X) > std::pow(A, inst.delta / 2)) out.violations.push_back("X <= A^(delta/2) fails");
    if (static_cast<double>(k) > std::pow(A, inst.eta / 2)) out.violations.push_back("k <= A^(eta/2) fails");

    QuadPoly Q = inst.P.poly();
    Int m12 = checked_mul(k1, k2);
    QuadPoly shifted = Q;
    shifted.k = checked_sub(Q.k, checked_mul(k1, mod(l, k2)));
    out.rho_k1l = rho_grid(shifted, m12);

    Int cont = content(Q);
    Int top = inst.X / checked_mul(k0, k1);
    long double prod = 1;
    for (Int p : primes_between(2, top))
        if (k0 % p != 0 && k2 % p != 0 && cont % p != 0)
            prod *= 1.0L - static_cast<long double>(dens.rho_p(p)) / (static_cast<long double>(p) * p);
    out.product = static_cast<double>(prod);

    auto k0fac = factorize(k0);
    long double sum = 0;
    SpfTable spf(std::max<Int>(top, 2));
    for (Int a = 1; a <= top; ++a) {
        if (gcd(a, k2) != 1) continue;
        Factorization fa = a == 1 ? Factorization{} : spf.factor(a);
        Factorization merged = fa;
        for (auto [p, e] : k0fac) {
            auto it = std::find_if(merged.begin(), merged.end(), [p = p](const auto& pe) { return pe.first == p; });
            if (it == merged.end()) merged.emplace_back(p, e);
            else it->second += e;
        }
        double k0a = static_cast<double>(k0) * static_cast<double>(a);
        sum += inst.f(fa) * dens.rho_tilde(merged) / (k0a * k0a);
    }
    out.sum = static_cast<double>(sum);
    double m12d = static_cast<double>(m12);
    out.value = A * inst.f(k1) * static_cast<double>(out.rho_k1l) / (m12d * m12d) * out.product * out.sum;
    return out;
}

double sieve_lhs_congruence(const SieveInstance& inst, Int k0, Int k1, Int k2, Int l, Int budget) {
    Int k = checked_mul(checked_mul(k0, k1), k2);
    Int target = mod(checked_mul(checked_mul(k0, k1), l), k);
    QuadPoly Q = inst.P.poly();
    long double sum = 0;
    for_each_lattice_point(
        inst.E.q, bound_of(inst.E),
        [&](Int x, Int y) {
            Int v = value_of(Q, x, y);
            if (mod(v, k) != target || v == 0) return;
            Int w = (v < 0 ? -v : v) / k0;
            sum += inst.f(w);
        },
        budget);
    return static_cast<double>(sum);
}

double extremely_smooth_sum(ConicDensities& dens, double z, double alpha) {
    if (!(z > std::exp(1.0)) || alpha < 0 || alpha > 1) throw std::invalid_argument("extremely_smooth_sum: need z > e, 0 <= alpha <= 1");
    double y = std::log(z) * std::log(std::log(z));
    auto primes = primes_up_to(static_cast<Int>(std::floor(y)));
    double lo = std::pow(z, alpha);
    long double sum = 0;
    // depth-first over factorizations a = prod p_i^k_i with increasing primes
    std::function<void(std::size_t, double, double)> walk = [&](std::size_t i, double a, double w) {
        if (a >= lo) sum += w / (a * a);
        for (std::size_t j = i; j < primes.size(); ++j) {
            Int p = primes[j];
            double pa = a;
            for (int k = 1;; ++k) {
                pa *= static_cast<double>(p);
                if (pa > z) break;
                walk(j + 1, pa, w * static_cast<double>(dens.rho_tilde_pk(p, k)));
            }
            if (a * static_cast<double>(p) > z) break;
        }
    };
    walk(0, 1.0, 1.0);
    return static_cast<double>(sum);
}

} // namespace cnt
