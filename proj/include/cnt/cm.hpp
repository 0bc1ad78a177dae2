#pragma once
/** @file
 * CM points on the modular curve: Heegner points of reduced forms, joint
 * packets under a Picard twist, hyperbolic distance, the integral ideal pair
 * attached to two CM points, and packet equidistribution statistics.
 */

#include "cnt/orders.hpp"

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace cnt {

using Complex = std::complex<double>;

struct HeegnerPoint {
    Complex z;
    QuadForm source;
};

/// (-b + i sqrt|D|) / (2a) for a reduced form; throws otherwise.
HeegnerPoint heegner_point(const QuadForm& F);

/// All Heegner points of discriminant D, in the order of reduced_forms(D).
std::vector<HeegnerPoint> packet(Int D);

/// d with cosh d = 1 + |z1 - z2|^2 / (2 Im z1 Im z2).
double hyperbolic_distance(Complex z1, Complex z2);

/// Image in the standard fundamental domain. Boundary points end on the
/// Re z <= 0 side, which is where reduced forms put their Heegner points.
Complex to_fundamental_domain(Complex z);

struct InvariantPair {
    Ideal a;
    Ideal b; // zero ideal when x = 0
};

/// For a primitive ideal I and a twist sigma, with I' the primitive ideal of
/// the reduced form of [I sigma]: a = (y)(I conj(I'))^-1 and b = (x)(I I')^-1
/// with x = N b-element of I' minus N' b-element of I and y the same with the
/// conjugate of I'. Both are integral, [a] = sigma, [b] = [I^2 sigma]^-1.
InvariantPair invariant_pair(const Ideal& I, const IdealClass& sigma);

/// The two norms in closed form from (N, b) and (N', b').
std::pair<Rational, Rational> invariant_pair_norms(Int D, Int N, Int b, Int N2, Int b2);

struct JointPacket {
    Int D = 0;
    IdealClass twist;
    std::vector<std::pair<HeegnerPoint, HeegnerPoint>> pairs;
};

JointPacket joint_packet(Int D, const IdealClass& sigma);

/// Rectangular cells in (x, t) with t = 1/Im z, x in [-1/2, 1/2] and
/// t in [t_min, t_max], t_max <= 1 so that every cell lies in the
/// fundamental domain. The hyperbolic area of a cell is dx * dt.
struct CellGrid {
    int nx = 4;
    int nt = 4;
    double t_min = 0.0;
    double t_max = 1.0;
};

/// Max over cells of |fraction of points in the cell - cell area / (pi/3)|.
/// Throws on an empty point set.
double packet_discrepancy(const std::vector<Complex>& points, const CellGrid& cells = {});
double packet_discrepancy(const std::vector<HeegnerPoint>& points, const CellGrid& cells = {});

/// Points distributed by normalized hyperbolic area on the fundamental domain.
std::vector<Complex> sample_fundamental_domain(std::size_t n, std::uint64_t seed);

/// Pairs with d(z, sigma z) <= 2 delta.
Int near_diagonal_count(const JointPacket& packet, double delta);

} // namespace cnt
