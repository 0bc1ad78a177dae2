#pragma once
/** @file
 * Principal genus theory for imaginary quadratic orders: the real genus
 * characters, the 2-adic norm group of the order, the size of Pic[2] and
 * membership in the subgroup of squares.
 */

#include "cnt/orders.hpp"

#include <string>
#include <vector>

namespace cnt {

enum class CharKind { odd_prime, chi4, chi8, chi4chi8 };

struct GenusCharacter {
    CharKind kind = CharKind::odd_prime;
    Int p = 0; // the prime for odd_prime, unused otherwise

    Int modulus() const;
    std::string name() const;
    bool operator==(const GenusCharacter&) const = default;
};

/// Value in {-1, 0, 1}; 0 exactly when gcd(n, modulus) > 1.
int eval_character(const GenusCharacter& chi, Int n);

/// Odd residues mod 8 taken by norms of units of the 2-adic completion of
/// the order, found by enumerating the principal form modulo 8.
std::vector<Int> norm_group_mod8(Int D);

/// ord_2 of the index of the unit norm group in Z_2^x; in {0, 1, 2}.
int mu_wild(Int D);

/// The same quantity read off the closed case table (2 unramified or
/// ramified, 2-part of the conductor 1, 2, 4 or divisible by 8), with the
/// maximal-order norm group taken from enumeration. Kept as a cross-check;
/// it disagrees with mu_wild when 2 ramifies and the conductor is even.
int mu_wild_from_table(Int D);

struct GenusProfile {
    Int D = 0;
    std::vector<GenusCharacter> characters;
    int mu_tame = 0;
    int mu_wild = 0;
};

GenusProfile genus_characters(Int D);

/// 2^(mu_tame + mu_wild - 1) = #Pic[2] = [Pic : Pic^2].
Int two_torsion_size(Int D);

/// Character values on n, in the order of profile.characters.
std::vector<int> genus_signature(const GenusProfile& profile, Int n);

/// Some value of the class's reduced form coprime to 2D.
Int coprime_norm(const IdealClass& cls, Int modulus);

/// Whether the class lies in Pic^2: every genus character is +1 on a norm
/// coprime to 2D represented by the class.
bool in_principal_genus(const GenusProfile& profile, const IdealClass& cls);
bool in_principal_genus(Int D, const IdealClass& cls);

/// Character values after removing from n every prime dividing the
/// character's modulus. Not a class invariant when n shares primes with D.
std::vector<int> stripped_signature(const GenusProfile& profile, Int n);

} // namespace cnt
