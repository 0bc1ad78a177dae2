#include "cnt/genus.hpp"

#include <algorithm>
#include <stdexcept>

namespace cnt {

Int GenusCharacter::modulus() const {
    switch (kind) {
    case CharKind::odd_prime: return p;
    case CharKind::chi4: return 4;
    default: return 8;
    }
}

std::string GenusCharacter::name() const {
    switch (kind) {
    case CharKind::odd_prime: return "chi_" + std::to_string(p);
    case CharKind::chi4: return "chi_4";
    case CharKind::chi8: return "chi_8";
    default: return "chi_4*chi_8";
    }
}

namespace {

int chi4(Int n) {
    Int r = mod(n, 4);
    return r == 1 ? 1 : (r == 3 ? -1 : 0);
}

int chi8(Int n) {
    Int r = mod(n, 8);
    if (r == 1 || r == 7) return 1;
    if (r == 3 || r == 5) return -1;
    return 0;
}

} // namespace

int eval_character(const GenusCharacter& chi, Int n) {
    switch (chi.kind) {
    case CharKind::odd_prime: return kronecker(mod(n, chi.p), chi.p);
    case CharKind::chi4: return chi4(n);
    case CharKind::chi8: return chi8(n);
    default: return chi4(n) * chi8(n);
    }
}

std::vector<Int> norm_group_mod8(Int D) {
    if (!is_discriminant(D)) throw std::invalid_argument("norm_group_mod8: invalid discriminant");
    QuadForm q = principal_form(D);
    std::vector<bool> seen(8, false);
    for (Int x = 0; x < 8; ++x)
        for (Int y = 0; y < 8; ++y) {
            Int v = mod(q.a * x * x + q.b * x * y + mod(q.c, 8) * y * y, 8);
            if (v & 1) seen[v] = true;
        }
    std::vector<Int> out;
    for (Int r = 1; r < 8; r += 2)
        if (seen[r]) out.push_back(r);
    return out;
}

namespace {

int index_exponent(std::size_t group_size) {
    switch (group_size) {
    case 4: return 0;
    case 2: return 1;
    case 1: return 2;
    default: throw std::logic_error("unit norm group mod 8 of unexpected size");
    }
}

} // namespace

int mu_wild(Int D) { return index_exponent(norm_group_mod8(D).size()); }

int mu_wild_from_table(Int D) {
    auto [DE, f] = decompose_discriminant(D);
    bool ramified = DE % 2 == 0;
    int v = valuation(f, 2);
    std::vector<Int> maximal = norm_group_mod8(DE);
    const std::vector<Int> all{1, 3, 5, 7}, one_mod_four{1, 5}, squares{1};
    std::vector<Int> group;
    if (v == 0 || v == 1)
        group = maximal;
    else if (v == 2)
        group = (!ramified || maximal == one_mod_four) ? one_mod_four : squares;
    else
        group = squares;
    return index_exponent(group.size());
}

GenusProfile genus_characters(Int D) {
    GenusProfile g;
    g.D = D;
    for (auto [p, e] : factorize(D)) {
        if (p == 2) continue;
        g.characters.push_back({CharKind::odd_prime, p});
        ++g.mu_tame;
    }
    auto H = norm_group_mod8(D);
    g.mu_wild = index_exponent(H.size());
    if (g.mu_wild == 1) {
        // the one real character mod 8 that is trivial on H = {1, h}
        Int h = H[1];
        CharKind k = h == 5 ? CharKind::chi4 : (h == 7 ? CharKind::chi8 : CharKind::chi4chi8);
        g.characters.push_back({k, 0});
    } else if (g.mu_wild == 2) {
        g.characters.push_back({CharKind::chi4, 0});
        g.characters.push_back({CharKind::chi8, 0});
    }
    return g;
}

Int two_torsion_size(Int D) {
    GenusProfile g = genus_characters(D);
    return Int{1} << (g.mu_tame + g.mu_wild - 1);
}

std::vector<int> genus_signature(const GenusProfile& profile, Int n) {
    std::vector<int> out;
    out.reserve(profile.characters.size());
    for (const auto& chi : profile.characters) out.push_back(eval_character(chi, n));
    return out;
}

Int coprime_norm(const IdealClass& cls, Int modulus) {
    for (Int r = 1;; ++r)
        for (Int x = 0; x <= r; ++x) {
            Int y = r - x;
            for (Int s : {1, -1}) {
                if (gcd(x, y) != 1) continue;
                Int n = cls.eval(x, s * y);
                if (gcd(n, modulus) == 1) return n;
            }
        }
}

bool in_principal_genus(const GenusProfile& profile, const IdealClass& cls) {
    if (cls.discriminant() != profile.D) throw std::invalid_argument("in_principal_genus: wrong discriminant");
    Int n = coprime_norm(cls, 2 * profile.D);
    for (int v : genus_signature(profile, n))
        if (v != 1) return false;
    return true;
}

bool in_principal_genus(Int D, const IdealClass& cls) { return in_principal_genus(genus_characters(D), cls); }

std::vector<int> stripped_signature(const GenusProfile& profile, Int n) {
    std::vector<int> out;
    for (const auto& chi : profile.characters) {
        Int m = chi.kind == CharKind::odd_prime ? strip(n, chi.p) : strip(n, 2);
        out.push_back(eval_character(chi, m));
    }
    return out;
}

} // namespace cnt
