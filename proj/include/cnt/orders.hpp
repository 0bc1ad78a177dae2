#pragma once
/** @file
 * Imaginary quadratic orders: discriminants, reduced binary quadratic
 * forms, invertible ideals in Hermite form, the class group and the
 * ideal-counting functions.
 *
 * Conventions. The order of discriminant D is Z[tau] with
 * tau = (delta + sqrt(D))/2, delta = D mod 2, so tau^2 = delta*tau + (D-delta)/4.
 * The form (a,b,c) corresponds to the ideal a*Z + ((-b+sqrt(D))/2)*Z and
 * ideal classes are identified with reduced forms through this map.
 */

#include "cnt/arith.hpp"

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cnt {

/// Splits D = f^2 * D_E with D_E fundamental. Throws std::invalid_argument
/// unless D < 0 and D = 0,1 mod 4.
std::pair<Int, Int> decompose_discriminant(Int D);
bool is_discriminant(Int D);
bool is_fundamental(Int D);

class Discriminant {
public:
    explicit Discriminant(Int D);
    Int value() const { return d_; }
    Int fundamental() const { return de_; }
    Int conductor() const { return f_; }
    Int abs() const { return -d_; }
    int delta() const { return static_cast<int>(d_ & 1); }
    /// Number of units of the order: 4 for D = -4, 6 for D = -3, else 2.
    int unit_count() const;

private:
    Int d_;
    Int de_;
    Int f_;
};

int unit_count(Int D);

struct QuadForm {
    Int a = 1;
    Int b = 0;
    Int c = 1;

    Int discriminant() const;
    bool is_primitive() const;
    bool is_reduced() const;
    Int eval(Int x, Int y) const;
    std::string str() const;
    auto operator<=>(const QuadForm&) const = default;
};

/// Ideal classes are represented by their reduced form.
using IdealClass = QuadForm;

/// Builds (a, b, (b^2-D)/(4a)); throws if 4a does not divide b^2 - D.
QuadForm form_from(Int D, Int a, Int b);
QuadForm reduce(QuadForm f);
QuadForm principal_form(Int D);
QuadForm inverse(const QuadForm& f);
/// Complete sorted list of reduced primitive forms; its length is h(D).
std::vector<QuadForm> reduced_forms(Int D);
/// Reduced representative of the product class.
QuadForm compose(const QuadForm& f1, const QuadForm& f2);
QuadForm power(const QuadForm& f, Int e);

/// Element x + y*tau of the order.
struct Element {
    Int x = 0;
    Int y = 0;
    bool operator==(const Element&) const = default;
};
Element multiply(Int D, const Element& u, const Element& v);
Element conjugate(Int D, const Element& u);
Int norm(Int D, const Element& u);

/// scale * (a*Z + ((-b+sqrt(D))/2)*Z) with a > 0, -a < b <= a and
/// gcd(a, b, (b^2-D)/(4a)) = 1, or the zero ideal.
class Ideal {
public:
    static Ideal zero(Int D);
    static Ideal unit(Int D);
    /// Primitive ideal attached to a primitive form.
    static Ideal from_form(const QuadForm& f);
    static Ideal principal(Int D, const Element& alpha);
    /// Lattice spanned by generators (x + y*tau); must be a nonzero invertible ideal.
    static Ideal from_generators(Int D, const std::vector<Element>& gens);

    Int discriminant() const { return d_; }
    bool is_zero() const { return zero_; }
    const Rational& scale() const { return scale_; }
    Int a() const { return a_; }
    Int b() const { return b_; }
    Rational norm() const;
    bool is_integral() const;
    bool is_primitive() const;
    /// Reduced form of the class; throws for the zero ideal.
    IdealClass ideal_class() const;
    /// Form (a, b, c) of the primitive part.
    QuadForm primitive_form() const;
    Ideal conjugate() const;
    Ideal inverse() const;
    Ideal scaled(const Rational& s) const;
    /// Z-basis in (1, tau) coordinates; entries are rational when scale is.
    std::array<std::array<Rational, 2>, 2> basis() const;
    bool contains(const Element& u) const;
    bool same_homothety_class(const Ideal& other) const;
    std::string str() const;

    friend Ideal operator*(const Ideal& x, const Ideal& y);
    friend bool operator==(const Ideal& x, const Ideal& y);

private:
    Ideal(Int D, bool zero, Rational scale, Int a, Int b);
    Int d_;
    bool zero_;
    Rational scale_;
    Int a_;
    Int b_;
};

/// Invertible integral ideals of norm n (n >= 1), ordered by (scale, a, b).
std::vector<Ideal> ideals_of_norm(Int D, Int n);
/// Number of invertible integral ideals of norm n; multiplicative in n.
Int count_ideals(Int D, Int n);

enum class ClassMode { exact, coset_of_squares };

/// Reduced forms of D with the group law; optionally with the full table.
class ClassGroup {
public:
    explicit ClassGroup(Int D, bool with_table = false);
    Int discriminant() const { return d_; }
    std::size_t size() const { return reps_.size(); }
    const std::vector<QuadForm>& reps() const { return reps_; }
    const QuadForm& rep(std::size_t i) const { return reps_[i]; }
    std::size_t index_of(const QuadForm& f) const;
    std::size_t identity() const { return identity_; }
    std::size_t mul(std::size_t i, std::size_t j) const;
    std::size_t inv(std::size_t i) const;
    bool has_table() const { return !table_.empty(); }
    bool is_square(std::size_t i) const { return square_[i]; }
    bool is_square(const QuadForm& f) const { return square_[index_of(f)]; }
    std::size_t square_count() const;

private:
    Int d_;
    std::vector<QuadForm> reps_;
    std::map<QuadForm, std::size_t> index_;
    std::size_t identity_ = 0;
    std::vector<std::size_t> table_;
    std::vector<std::size_t> inverse_;
    std::vector<bool> square_;
};

/// g (exact class) or f (coset of squares) counts; n = 0 gives 1 in exact
/// mode for the zero ideal and 0 in coset mode; n < 0 gives 0.
Int count_ideals_in_class(const ClassGroup& G, Int n, const IdealClass& target, ClassMode mode);
Int count_ideals_in_class(Int D, Int n, const IdealClass& target, ClassMode mode);
/// Smallest norm of an integral ideal in the class.
Int minimal_norm_in_class(Int D, const IdealClass& target);

} // namespace cnt
