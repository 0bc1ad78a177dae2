#include "cnt/cm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace cnt {

HeegnerPoint heegner_point(const QuadForm& F) {
    if (!F.is_reduced() || !F.is_primitive()) throw std::invalid_argument("heegner_point: form must be reduced and primitive");
    double root = std::sqrt(static_cast<double>(-F.discriminant()));
    double den = 2.0 * static_cast<double>(F.a);
    return {Complex(-static_cast<double>(F.b) / den, root / den), F};
}

std::vector<HeegnerPoint> packet(Int D) {
    std::vector<HeegnerPoint> out;
    for (const auto& F : reduced_forms(D)) out.push_back(heegner_point(F));
    return out;
}

double hyperbolic_distance(Complex z1, Complex z2) {
    if (z1.imag() <= 0 || z2.imag() <= 0) throw std::invalid_argument("hyperbolic_distance: points must lie in the upper half-plane");
    // d = 2 asinh(|z1 - z2| / (2 sqrt(y1 y2))), stable for nearby points
    return 2.0 * std::asinh(std::abs(z1 - z2) / (2.0 * std::sqrt(z1.imag() * z2.imag())));
}

Complex to_fundamental_domain(Complex z) {
    if (z.imag() <= 0) throw std::invalid_argument("to_fundamental_domain: point must lie in the upper half-plane");
    constexpr double tol = 1e-12;
    for (int iter = 0; iter < 10000; ++iter) {
        double x = z.real() - std::floor(z.real() + 0.5);
        if (x > 0.5 - tol) x -= 1.0;
        z = Complex(x, z.imag());
        if (std::norm(z) < 1.0 - tol) {
            z = -1.0 / z;
            continue;
        }
        if (std::abs(std::norm(z) - 1.0) <= tol && z.real() > 0) z = Complex(-z.real(), z.imag());
        return z;
    }
    throw std::runtime_error("to_fundamental_domain: no convergence");
}

std::pair<Rational, Rational> invariant_pair_norms(Int D, Int N, Int b, Int N2, Int b2) {
    Wide cross = static_cast<Wide>(N) * b2 - static_cast<Wide>(N2) * b;
    Wide absD = -static_cast<Wide>(D);
    Wide den = static_cast<Wide>(4) * N * N2;
    Wide na = cross * cross + absD * (N + N2) * (N + N2);
    Wide nb = cross * cross + absD * (N - N2) * (N - N2);
    Int g1 = gcd(narrow(na % den), narrow(den)), g2 = gcd(narrow(nb % den), narrow(den));
    return {Rational(narrow(na / g1), narrow(den / g1)), Rational(narrow(nb / g2), narrow(den / g2))};
}

InvariantPair invariant_pair(const Ideal& I, const IdealClass& sigma) {
    if (!I.is_primitive()) throw std::invalid_argument("invariant_pair: I must be primitive");
    Int D = I.discriminant();
    if (sigma.discriminant() != D) throw std::invalid_argument("invariant_pair: twist of another discriminant");
    Ideal I2 = Ideal::from_form(compose(I.ideal_class(), sigma));
    Int delta = D & 1;
    Int N = I.a(), b = I.b(), N2 = I2.a(), b2 = I2.b();
    // x = N * ((-b2 + sqrt D)/2) - N2 * ((-b + sqrt D)/2), y uses (-b2 - sqrt D)/2
    Element x{checked_sub(checked_mul(N, (-b2 - delta) / 2), checked_mul(N2, (-b - delta) / 2)), N - N2};
    Element y{checked_sub(checked_mul(N, (-b2 + delta) / 2), checked_mul(N2, (-b - delta) / 2)), -N - N2};
    Ideal a = Ideal::principal(D, y) * (I * I2.conjugate()).inverse();
    Ideal bb = (x.x == 0 && x.y == 0) ? Ideal::zero(D) : Ideal::principal(D, x) * (I * I2).inverse();
    if (!a.is_integral() || !bb.is_integral()) throw std::logic_error("invariant_pair: result not integral");
    return {a, bb};
}

JointPacket joint_packet(Int D, const IdealClass& sigma) {
    JointPacket jp;
    jp.D = D;
    jp.twist = reduce(sigma);
    for (const auto& F : reduced_forms(D)) jp.pairs.emplace_back(heegner_point(F), heegner_point(compose(F, sigma)));
    return jp;
}

double packet_discrepancy(const std::vector<Complex>& points, const CellGrid& cells) {
    if (points.empty()) throw std::invalid_argument("packet_discrepancy: empty packet");
    if (cells.nx < 1 || cells.nt < 1 || cells.t_min < 0 || cells.t_max > 1.0 || cells.t_min >= cells.t_max)
        throw std::invalid_argument("packet_discrepancy: cells must partition a region with 0 <= t_min < t_max <= 1");
    std::vector<Int> counts(static_cast<std::size_t>(cells.nx * cells.nt), 0);
    double dx = 1.0 / cells.nx, dt = (cells.t_max - cells.t_min) / cells.nt;
    for (Complex z : points) {
        double x = z.real(), t = 1.0 / z.imag();
        if (x < -0.5 || x > 0.5 || t < cells.t_min || t > cells.t_max) continue;
        int i = std::min(cells.nx - 1, static_cast<int>((x + 0.5) / dx));
        int j = std::min(cells.nt - 1, static_cast<int>((t - cells.t_min) / dt));
        ++counts[static_cast<std::size_t>(i * cells.nt + j)];
    }
    double mass = dx * dt / (std::numbers::pi / 3.0);
    double total = static_cast<double>(points.size()), worst = 0.0;
    for (Int c : counts) worst = std::max(worst, std::abs(static_cast<double>(c) / total - mass));
    return worst;
}

double packet_discrepancy(const std::vector<HeegnerPoint>& points, const CellGrid& cells) {
    std::vector<Complex> zs;
    zs.reserve(points.size());
    for (const auto& h : points) zs.push_back(h.z);
    return packet_discrepancy(zs, cells);
}

std::vector<Complex> sample_fundamental_domain(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(-0.5, 0.5), ut(0.0, 2.0 / std::sqrt(3.0));
    std::vector<Complex> out;
    out.reserve(n);
    while (out.size() < n) {
        double x = ux(rng), t = ut(rng);
        // y >= sqrt(1 - x^2) means t <= 1 / sqrt(1 - x^2)
        if (t == 0.0 || t * t * (1.0 - x * x) > 1.0) continue;
        out.emplace_back(x, 1.0 / t);
    }
    return out;
}

Int near_diagonal_count(const JointPacket& packet, double delta) {
    if (!(delta > 0)) throw std::invalid_argument("near_diagonal_count: delta must be positive");
    Int count = 0;
    for (const auto& [z, w] : packet.pairs)
        if (hyperbolic_distance(z.z, w.z) <= 2.0 * delta) ++count;
    return count;
}

} // namespace cnt
