#include "cnt/cli.hpp"

#include "cnt/cm.hpp"
#include "cnt/conics.hpp"
#include "cnt/convolution.hpp"
#include "cnt/genus.hpp"
#include "cnt/hecke.hpp"
#include "cnt/sieve.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

namespace cnt::cli {

namespace {

const std::map<std::string, Command> kCommands = {
    {"genus-table", Command::genus_table},   {"packet-stats", Command::packet_stats},
    {"conic-verify", Command::conic_verify}, {"sieve-sweep", Command::sieve_sweep},
    {"convolution-check", Command::convolution_check}, {"hecke-table", Command::hecke_table},
};

constexpr double kSieveRatioCap = 100.0;
constexpr double kSieveGrowthCap = 2.0;
constexpr double kNearDiagonalDelta = 0.5;
constexpr double kHeckeConstant = 3.0;
constexpr double kRelTolerance = 1e-9;

struct Row {
    std::vector<Cell> cells;
    bool ok = true;
};

std::mt19937_64 row_rng(std::uint64_t seed, Command c, std::size_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(index)};
    return std::mt19937_64(seq);
}

Int uniform(std::mt19937_64& rng, Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(rng); }

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(rng, 0, static_cast<Int>(v.size()) - 1))];
}

// Evaluates fn(0..n-1) on a pool of threads and returns the rows in index
// order. The exception of the lowest failing index is rethrown.
std::vector<Row> parallel_rows(std::size_t n, unsigned threads, const std::function<Row(std::size_t)>& fn) {
    std::vector<Row> rows(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < n;) {
            try {
                rows[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned t = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    t = static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(n, 1)));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < t; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

std::vector<Int> discriminants_in(Int lo, Int hi, bool fundamental_only) {
    std::vector<Int> out;
    for (Int m = lo; m <= hi; ++m) {
        Int D = -m;
        if (fundamental_only ? is_fundamental(D) : is_discriminant(D)) out.push_back(D);
    }
    return out;
}

Table make_table(std::vector<std::string> columns, std::vector<Row> rows) {
    Table t;
    t.columns = std::move(columns);
    for (auto& r : rows) {
        t.rows.push_back(std::move(r.cells));
        t.row_ok.push_back(r.ok);
    }
    return t;
}

Table genus_table(const ExperimentConfig& cfg) {
    auto Ds = discriminants_in(cfg.d_min, cfg.d_max, false);
    auto rows = parallel_rows(Ds.size(), cfg.threads, [&](std::size_t i) {
        Int D = Ds[i];
        auto profile = genus_characters(D);
        ClassGroup G(D, true);
        Int two_torsion = 0;
        for (std::size_t k = 0; k < G.size(); ++k) two_torsion += G.mul(k, k) == G.identity();
        Int index = static_cast<Int>(G.size() / G.square_count());
        Int formula = two_torsion_size(D);
        bool genus_agree = true;
        for (std::size_t k = 0; k < G.size(); ++k)
            genus_agree = genus_agree && in_principal_genus(profile, G.rep(k)) == G.is_square(k);
        bool ok = formula == two_torsion && formula == index && genus_agree;
        return Row{{D, static_cast<Int>(G.size()), Int(profile.mu_tame), Int(profile.mu_wild), formula, two_torsion,
                    index, genus_agree, ok},
                   ok};
    });
    return make_table({"D", "h", "mu_tame", "mu_wild", "formula", "pic2_brute", "index", "principal_genus_agree", "ok"},
                      std::move(rows));
}

Table packet_stats(const ExperimentConfig& cfg) {
    auto Ds = discriminants_in(cfg.d_min, cfg.d_max, true);
    auto rows = parallel_rows(Ds.size(), cfg.threads, [&](std::size_t i) {
        Int D = Ds[i];
        auto rng = row_rng(cfg.seed, cfg.command, static_cast<std::size_t>(-D));
        auto forms = reduced_forms(D);
        QuadForm sigma = pick(rng, forms);
        auto jp = joint_packet(D, sigma);
        auto points = packet(D);
        double absD = static_cast<double>(-D);
        bool exact = true;
        double worst = 0;
        for (const auto& F : forms) {
            auto I = Ideal::from_form(F);
            auto pr = invariant_pair(I, sigma);
            Rational nb = pr.b.is_zero() ? Rational(0) : pr.b.norm();
            exact = exact && pr.a.norm() - nb == Rational(-D) && pr.a.ideal_class() == sigma &&
                    pr.b.is_zero() == (sigma == principal_form(D)) &&
                    (pr.b.is_zero() || pr.b.ideal_class() == inverse(compose(power(F, 2), sigma)));
            Complex z1 = heegner_point(F).z, z2 = heegner_point(compose(F, sigma)).z;
            double c = std::norm(z1 - z2) / (2.0 * z1.imag() * z2.imag());
            double nbd = boost::rational_cast<double>(nb);
            worst = std::max(worst, std::abs(nbd - absD / 2.0 * c) / std::max(1.0, nbd));
        }
        bool ok = exact && worst <= kRelTolerance;
        return Row{{D, static_cast<Int>(forms.size()), sigma.str(), packet_discrepancy(points),
                    near_diagonal_count(jp, kNearDiagonalDelta), exact, worst, ok},
                   ok};
    });
    return make_table({"D", "h", "twist", "discrepancy", "near_diagonal", "pair_identities", "max_rel_err", "ok"},
                      std::move(rows));
}

Table conic_verify(const ExperimentConfig& cfg) {
    const std::vector<Int> primes = {3, 5, 7, 11, 13};
    constexpr int kMaxN = 4;
    std::size_t per_seed = primes.size();
    auto rows = parallel_rows(static_cast<std::size_t>(cfg.sample_count()) * per_seed, cfg.threads, [&](std::size_t i) {
        std::size_t seed_index = i / per_seed;
        Int p = primes[i % per_seed];
        auto rng = row_rng(cfg.seed, cfg.command, i);
        int l = static_cast<int>(uniform(rng, 0, 3));
        Int D = 0;
        while (D == 0) {
            Int cand = -ipow(p, l) * uniform(rng, 3, 200);
            if (is_discriminant(cand) && valuation(cand, p) == l) D = cand;
        }
        QuadForm q = pick(rng, reduced_forms(D));
        Int omega = uniform(rng, -20, 20);
        if (omega == 0) omega = p * p;
        ConicPoly P{q, omega};
        Row row;
        std::ostringstream formula, brute;
        for (int n = 1; n <= kMaxN; ++n) {
            auto prof = rho_brute(P, ipow(p, n), cfg.budget);
            Int rf = rho_formula(P, p, n), tf = rho_tilde_formula(P, p, n);
            row.ok = row.ok && rf == prof.rho && tf == prof.rho_tilde;
            formula << (n > 1 ? " " : "") << rf << ':' << tf;
            brute << (n > 1 ? " " : "") << prof.rho << ':' << prof.rho_tilde;
        }
        std::string branch = l == 0 ? "unramified" : (l % 2 ? "odd-valuation" : "even-valuation");
        if (omega % p == 0) branch += "-p-divides-omega";
        row.cells = {static_cast<Int>(seed_index), p, D, q.str(), omega, branch, formula.str(), brute.str(), row.ok};
        return row;
    });
    return make_table({"sample", "p", "D", "q", "omega", "branch", "formula", "brute", "ok"}, std::move(rows));
}

MultFnSpec sweep_function(std::size_t i, Int D) {
    constexpr double kEps = 0.25;
    switch (i % 3) {
    case 0: return mult_one();
    case 1: return mult_divisor(kEps);
    default: return mult_ideal_count(D, kEps);
    }
}

Table sieve_sweep(const ExperimentConfig& cfg) {
    Int count = cfg.sample_count();
    Rational kappa = cfg.kappa.value_or(Rational(1));
    Int omega = cfg.omega.value_or(1);
    double lo = std::log(static_cast<double>(cfg.d_min)), hi = std::log(static_cast<double>(cfg.d_max));
    auto rows = parallel_rows(static_cast<std::size_t>(count), cfg.threads, [&](std::size_t i) {
        auto rng = row_rng(cfg.seed, cfg.command, i);
        // |D| spread log-uniformly over the range, then a random discriminant within 10%
        double frac = count > 1 ? static_cast<double>(i) / static_cast<double>(count - 1) : 1.0;
        Int target = std::clamp<Int>(std::llround(std::exp(lo + frac * (hi - lo))), cfg.d_min, cfg.d_max);
        Int width = std::max<Int>(4, target / 10);
        auto window = discriminants_in(std::max(cfg.d_min, target - width), std::min(cfg.d_max, target + width), false);
        if (window.empty()) throw UsageError("sieve-sweep: no discriminant in the range");
        Int D = pick(rng, window);
        ConicPoly P{pick(rng, reduced_forms(D)), omega};
        auto f = sweep_function(i, D);
        auto inst = make_instance(P, kappa, f, cfg.eta);
        ConicDensities dens(P, cfg.budget);
        auto rhs = sieve_rhs(inst, dens);
        double lhs = sieve_lhs(inst, cfg.budget);
        double ratio = lhs / rhs.value;
        bool ok = ratio <= kSieveRatioCap;
        return Row{{static_cast<Int>(i), D, P.q.str(), omega, f.name, inst.X, lhs, rhs.value, ratio,
                    static_cast<Int>(rhs.violations.size()), ok},
                   ok};
    });
    auto t = make_table({"index", "D", "q", "omega", "f", "X", "lhs", "rhs", "ratio", "hypothesis_violations", "ok"},
                        std::move(rows));
    // no-growth: the larger-|D| half may not exceed twice the smaller half's maximum
    std::vector<std::size_t> order(t.rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto absD = [&](std::size_t i) { return -std::get<Int>(t.rows[i][1]); };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return absD(x) < absD(y); });
    double small = 0, large = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        double r = std::get<double>(t.rows[order[k]][8]);
        (2 * k < order.size() ? small : large) = std::max(2 * k < order.size() ? small : large, r);
    }
    if (order.size() >= 2 && large > kSieveGrowthCap * small) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "ratio growth: max %.17g over the larger half vs %.17g over the smaller half",
                      large, small);
        t.failures.emplace_back(buf);
    }
    return t;
}

// Draws a shifted-sum tuple; values fixed in the config are kept as given.
ShiftedSumParams sample_params(const ExperimentConfig& cfg, std::mt19937_64& rng, const std::vector<Int>& Ds) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        ShiftedSumParams P;
        P.D = pick(rng, Ds);
        auto forms = reduced_forms(P.D);
        P.s_class = pick(rng, forms);
        P.kappa = cfg.kappa.value_or(Rational(uniform(rng, 1, 16), 2));
        P.omega = cfg.omega.value_or(uniform(rng, 0, 1) ? uniform(rng, 1, 4) : -uniform(rng, 1, 4));
        std::vector<Int> ramified;
        for (Int p : {2, 3, 5, 7, 11})
            if (uniform(rng, 0, 3) == 0) ramified.push_back(p);
        std::optional<IdealClass> e;
        if (uniform(rng, 0, 1)) e = pick(rng, forms);
        P.splitting = SplittingData::make(P.D, ramified, uniform(rng, 0, 1) ? 1 : -1, e);
        if (cfg.p1) {
            P.p1 = *cfg.p1;
        } else {
            P.p1 = 0;
            for (Int p : primes_up_to(1000))
                if (kronecker(P.D, p) == 1 && gcd(P.splitting.upsilon, p) == 1) {
                    P.p1 = p;
                    break;
                }
        }
        P.n = cfg.n.value_or(P.p1 != 0 && P.p1 <= 3 ? static_cast<int>(uniform(rng, 0, 1)) : 0);
        try {
            P.validate();
            return P;
        } catch (const std::invalid_argument&) {
        }
    }
    throw UsageError("convolution-check: no admissible parameters in 1000 draws; check --p1 and the range");
}

Table convolution_check(const ExperimentConfig& cfg) {
    auto Ds = discriminants_in(cfg.d_min, cfg.d_max, false);
    auto rows = parallel_rows(static_cast<std::size_t>(cfg.sample_count()), cfg.threads, [&](std::size_t i) {
        auto rng = row_rng(cfg.seed, cfg.command, i);
        auto P = sample_params(cfg, rng, Ds);
        Int direct = shifted_sum_direct(P, cfg.budget);
        Rational lattice = lattice_sum(P, cfg.budget);
        bool ok = lattice == Rational(direct);
        return Row{{static_cast<Int>(i), P.D, reduce(P.s_class).str(), P.kappa, P.omega, P.p1, Int(P.n),
                    P.splitting.upsilon, P.splitting.e(P.D).str(), direct, lattice, ok},
                   ok};
    });
    return make_table({"index", "D", "s", "kappa", "omega", "p1", "n", "upsilon", "e", "direct", "lattice", "ok"},
                      std::move(rows));
}

Table hecke_table(const ExperimentConfig& cfg) {
    Int lo = std::max<Int>(1, cfg.d_min);
    auto rows = parallel_rows(static_cast<std::size_t>(cfg.d_max - lo + 1), cfg.threads, [&](std::size_t i) {
        Int N = lo + static_cast<Int>(i);
        Rational v = hecke_volume(N);
        double factor = boost::rational_cast<double>(v / Rational(N));
        double bound = N > 2 ? kHeckeConstant * std::max(1.0, std::log(std::log(static_cast<double>(N))))
                             : kHeckeConstant;
        bool ok = factor <= bound;
        return Row{{N, v, factor, bound, ok}, ok};
    });
    return make_table({"N", "volume", "factor", "bound", "ok"}, std::move(rows));
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_rational(const Rational& r) {
    std::string s = std::to_string(r.numerator());
    if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
    return s;
}

std::string csv_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Int>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, Rational>) return format_rational(v);
            else if constexpr (std::is_same_v<T, double>) return format_double(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else {
                if (v.find_first_of(",\"\n") == std::string::npos) return v;
                std::string q = "\"";
                for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                return q + "\"";
            }
        },
        c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Rational>) return format_rational(v);
            else if constexpr (std::is_same_v<T, double>) {
                if (std::isfinite(v)) return v;
                return format_double(v);
            } else
                return v;
        },
        c);
}

} // namespace

std::optional<Command> parse_command(std::string_view name) {
    auto it = kCommands.find(std::string(name));
    if (it == kCommands.end()) return std::nullopt;
    return it->second;
}

std::string command_name(Command c) {
    for (const auto& [name, cmd] : kCommands)
        if (cmd == c) return name;
    return "?";
}

void ExperimentConfig::validate() const {
    if (budget <= 0) throw UsageError("--budget must be positive");
    if (command == Command::hecke_table) {
        if (d_min < 1 || d_max < d_min) throw UsageError("hecke-table needs 1 <= --d-min <= --d-max");
    } else if (d_min < 3 || d_max < d_min) {
        throw UsageError("need 3 <= --d-min <= --d-max (absolute values of discriminants)");
    }
    if (count < 0) throw UsageError("--count must be nonnegative");
    if (kappa && *kappa <= Rational(0)) throw UsageError("--kappa must be positive");
    if (omega && *omega == 0) throw UsageError("--omega must be nonzero");
    if (p1 && !is_prime(*p1)) throw UsageError("--p1 must be prime");
    if (n && *n < 0) throw UsageError("--n must be nonnegative");
    if (!(eta > 0 && eta < 1)) throw UsageError("--eta must lie in (0, 1)");
}

Int ExperimentConfig::sample_count() const {
    if (count > 0) return count;
    switch (command) {
    case Command::conic_verify: return 50;
    case Command::sieve_sweep: return 200;
    default: return 100;
    }
}

bool Table::all_ok() const {
    return failures.empty() && std::all_of(row_ok.begin(), row_ok.end(), [](bool b) { return b; });
}

Table run_experiment(const ExperimentConfig& config) {
    config.validate();
    switch (config.command) {
    case Command::genus_table: return genus_table(config);
    case Command::packet_stats: return packet_stats(config);
    case Command::conic_verify: return conic_verify(config);
    case Command::sieve_sweep: return sieve_sweep(config);
    case Command::convolution_check: return convolution_check(config);
    case Command::hecke_table: return hecke_table(config);
    }
    throw UsageError("unknown command");
}

void write_table(const Table& table, Format format, std::ostream& os) {
    if (format == Format::csv) {
        for (std::size_t j = 0; j < table.columns.size(); ++j) os << (j ? "," : "") << table.columns[j];
        os << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << csv_cell(row[j]);
            os << '\n';
        }
        return;
    }
    for (const auto& row : table.rows) {
        nlohmann::ordered_json line;
        for (std::size_t j = 0; j < row.size(); ++j) line[table.columns[j]] = json_cell(row[j]);
        os << line.dump() << '\n';
    }
}

int run(const ExperimentConfig& config, std::ostream& err) {
    Table table;
    try {
        table = run_experiment(config);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << '\n';
        return kBudgetExceeded;
    }
    std::ostringstream buffer;
    write_table(table, config.format, buffer);
    if (config.out.empty()) {
        std::cout << buffer.str() << std::flush;
        if (!std::cout) return kIoError;
    } else {
        std::ofstream file(config.out, std::ios::binary);
        file << buffer.str();
        file.close();
        if (!file) {
            err << "cannot write " << config.out << '\n';
            return kIoError;
        }
    }
    std::size_t failed = static_cast<std::size_t>(std::count(table.row_ok.begin(), table.row_ok.end(), false));
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        if (!table.row_ok[i]) err << "invariant failed in row " << i << '\n';
    for (const auto& f : table.failures) err << "invariant failed: " << f << '\n';
    err << command_name(config.command) << ": " << table.rows.size() << " rows, " << failed << " failed\n";
    return table.all_ok() ? kOk : kInvariantFailed;
}

int main(int argc, char** argv) {
    CLI::App app{"Experiments on imaginary quadratic orders, CM points and conic sieves"};
    app.require_subcommand(1, 1);
    ExperimentConfig cfg;
    std::string kappa, format = "csv";
    Int omega = 0, p1 = 0;
    int n = 0;
    for (const auto& [name, cmd] : kCommands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--d-min", cfg.d_min, "smallest |D| (N for hecke-table)");
        sub->add_option("--d-max", cfg.d_max, "largest |D| (N for hecke-table)");
        sub->add_option("--kappa", kappa, "ellipse scale, an integer or p/q");
        sub->add_option("--omega", omega, "shift omega");
        sub->add_option("--p1", p1, "split prime p1");
        sub->add_option("--n", n, "exponent n of p1^(2n)");
        sub->add_option("--eta", cfg.eta, "sieve parameter eta");
        sub->add_option("--seed", cfg.seed, "seed for every random choice");
        sub->add_option("--budget", cfg.budget, "enumeration budget; CNT_BUDGET overrides");
        sub->add_option("--count", cfg.count, "number of samples for the random commands");
        sub->add_option("--out", cfg.out, "output path, stdout if omitted");
        sub->add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
        sub->add_option("--threads", cfg.threads, "worker threads, 0 for all cores");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    for (auto* sub : app.get_subcommands()) {
        cfg.command = *parse_command(sub->get_name());
        if (sub->count("--omega")) cfg.omega = omega;
        if (sub->count("--p1")) cfg.p1 = p1;
        if (sub->count("--n")) cfg.n = n;
        if (cfg.command == Command::hecke_table && !sub->count("--d-min")) cfg.d_min = 1;
    }
    cfg.format = format == "jsonl" ? Format::jsonl : Format::csv;
    try {
        if (!kappa.empty()) {
            auto slash = kappa.find('/');
            Int num = std::stoll(kappa.substr(0, slash));
            Int den = slash == std::string::npos ? 1 : std::stoll(kappa.substr(slash + 1));
            if (den == 0) throw UsageError("zero denominator");
            cfg.kappa = Rational(num, den);
        }
        if (const char* env = std::getenv("CNT_BUDGET")) cfg.budget = std::stoll(env);
    } catch (const std::exception& e) {
        std::cerr << "usage error: bad --kappa or CNT_BUDGET: " << e.what() << '\n';
        return kUsage;
    }
    return run(cfg, std::cerr);
}

} // namespace cnt::cli
