#include "cnt/orders.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cnt {

bool is_discriminant(Int D) {
    Int r = mod(D, 4);
    return D < 0 && (r == 0 || r == 1);
}

std::pair<Int, Int> decompose_discriminant(Int D) {
    if (!is_discriminant(D))
        throw std::invalid_argument("not a negative discriminant: " + std::to_string(D));
    Int s = 1, t = 1;
    for (auto [p, e] : factorize(D)) {
        if (e & 1) s *= p;
        t *= ipow(p, e / 2);
    }
    Int m = -s;
    if (mod(m, 4) == 1) return {m, t};
    return {4 * m, t / 2};
}

bool is_fundamental(Int D) {
    if (!is_discriminant(D)) return false;
    return decompose_discriminant(D).second == 1;
}

Discriminant::Discriminant(Int D) : d_(D) {
    auto [de, f] = decompose_discriminant(D);
    de_ = de;
    f_ = f;
}

int unit_count(Int D) {
    if (D == -4) return 4;
    if (D == -3) return 6;
    return 2;
}

int Discriminant::unit_count() const { return cnt::unit_count(d_); }

Int QuadForm::discriminant() const {
    return narrow(static_cast<Wide>(b) * b - static_cast<Wide>(4) * a * c);
}

bool QuadForm::is_primitive() const { return gcd(gcd(a, b), c) == 1; }

bool QuadForm::is_reduced() const {
    Int ab = b < 0 ? -b : b;
    if (!(ab <= a && a <= c)) return false;
    if ((ab == a || a == c) && b < 0) return false;
    return true;
}

Int QuadForm::eval(Int x, Int y) const {
    Wide v = static_cast<Wide>(a) * x * x + static_cast<Wide>(b) * x * y + static_cast<Wide>(c) * y * y;
    return narrow(v);
}

std::string QuadForm::str() const {
    std::ostringstream os;
    os << '(' << a << ',' << b << ',' << c << ')';
    return os.str();
}

QuadForm form_from(Int D, Int a, Int b) {
    Wide num = static_cast<Wide>(b) * b - D;
    Wide den = static_cast<Wide>(4) * a;
    if (a <= 0 || num % den != 0) throw std::invalid_argument("form_from: 4a does not divide b^2 - D");
    return QuadForm{a, b, narrow(num / den)};
}

QuadForm reduce(QuadForm f) {
    Int D = f.discriminant();
    if (D >= 0 || f.a <= 0) throw std::invalid_argument("reduce: form is not positive definite");
    for (;;) {
        Int k = floor_div(f.a - f.b, 2 * f.a);
        if (k != 0) f = form_from(D, f.a, checked_add(f.b, checked_mul(2 * f.a, k)));
        if (f.a > f.c) {
            f = QuadForm{f.c, -f.b, f.a};
            continue;
        }
        if (f.a == f.c && f.b < 0) f.b = -f.b;
        return f;
    }
}

QuadForm principal_form(Int D) {
    Int delta = D & 1;
    return QuadForm{1, delta, (delta - D) / 4};
}

QuadForm inverse(const QuadForm& f) { return reduce(QuadForm{f.a, -f.b, f.c}); }

std::vector<QuadForm> reduced_forms(Int D) {
    if (!is_discriminant(D)) throw std::invalid_argument("reduced_forms: invalid discriminant");
    std::vector<QuadForm> out;
    Int amax = isqrt(-D / 3);
    for (Int a = 1; a <= amax; ++a) {
        for (Int b = -a + 1; b <= a; ++b) {
            if (((b - D) & 1) != 0) continue;
            Wide num = static_cast<Wide>(b) * b - D;
            if (num % (4 * a) != 0) continue;
            Int c = narrow(num / (4 * a));
            if (c < a) continue;
            if (a == c && b < 0) continue;
            if (gcd(gcd(a, b), c) != 1) continue;
            out.push_back(QuadForm{a, b, c});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

QuadForm compose(const QuadForm& f1, const QuadForm& f2) {
    Int D = f1.discriminant();
    if (f2.discriminant() != D) throw std::invalid_argument("compose: discriminants differ");
    if (!f1.is_primitive() || !f2.is_primitive()) throw std::invalid_argument("compose: forms must be primitive");
    return (Ideal::from_form(f1) * Ideal::from_form(f2)).ideal_class();
}

QuadForm power(const QuadForm& f, Int e) {
    Int D = f.discriminant();
    QuadForm base = e < 0 ? inverse(f) : reduce(f);
    if (e < 0) e = -e;
    QuadForm acc = principal_form(D);
    while (e > 0) {
        if (e & 1) acc = compose(acc, base);
        base = compose(base, base);
        e >>= 1;
    }
    return acc;
}

Element multiply(Int D, const Element& u, const Element& v) {
    Int delta = D & 1;
    Int t = (D - delta) / 4;
    Wide x = static_cast<Wide>(u.x) * v.x + static_cast<Wide>(u.y) * v.y * t;
    Wide y = static_cast<Wide>(u.x) * v.y + static_cast<Wide>(v.x) * u.y + static_cast<Wide>(delta) * u.y * v.y;
    return Element{narrow(x), narrow(y)};
}

Element conjugate(Int D, const Element& u) {
    Int delta = D & 1;
    return Element{checked_add(u.x, checked_mul(u.y, delta)), checked_mul(-1, u.y)};
}

Int norm(Int D, const Element& u) {
    Int delta = D & 1;
    Wide v = static_cast<Wide>(u.x) * u.x + static_cast<Wide>(delta) * u.x * u.y +
             static_cast<Wide>((delta - D) / 4) * u.y * u.y;
    return narrow(v);
}

namespace {

Int normalize_b(Int b, Int a) {
    Int r = mod(b, 2 * a);
    return r > a ? r - 2 * a : r;
}

} // namespace

Ideal::Ideal(Int D, bool zero, Rational scale, Int a, Int b) : d_(D), zero_(zero), scale_(scale), a_(a), b_(b) {}

Ideal Ideal::zero(Int D) { return Ideal(D, true, Rational(0), 0, 0); }

Ideal Ideal::unit(Int D) { return Ideal(D, false, Rational(1), 1, D & 1); }

Ideal Ideal::from_form(const QuadForm& f) {
    if (f.a <= 0 || !f.is_primitive()) throw std::invalid_argument("Ideal::from_form: need a primitive positive form");
    Int D = f.discriminant();
    return Ideal(D, false, Rational(1), f.a, normalize_b(f.b, f.a));
}

Ideal Ideal::from_generators(Int D, const std::vector<Element>& gens) {
    std::vector<Element> v;
    for (const auto& g : gens)
        if (g.x != 0 || g.y != 0) v.push_back(g);
    // Euclid on the tau-coordinate until a single vector carries it.
    for (;;) {
        std::size_t piv = v.size();
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i].y != 0 && (piv == v.size() || std::llabs(v[i].y) < std::llabs(v[piv].y))) piv = i;
        if (piv == v.size()) throw std::invalid_argument("Ideal::from_generators: lattice not of full rank");
        bool done = true;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i == piv || v[i].y == 0) continue;
            Int q = v[i].y / v[piv].y;
            v[i].x = checked_sub(v[i].x, checked_mul(q, v[piv].x));
            v[i].y = checked_sub(v[i].y, checked_mul(q, v[piv].y));
            if (v[i].y != 0) done = false;
        }
        if (done) {
            Element p = v[piv];
            if (p.y < 0) p = Element{-p.x, -p.y};
            Int A = 0;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (i != piv) A = gcd(A, v[i].x);
            if (A == 0) throw std::invalid_argument("Ideal::from_generators: lattice not of full rank");
            Int C = p.y;
            Int B = mod(p.x, A);
            if (A % C != 0 || B % C != 0) throw std::invalid_argument("Ideal::from_generators: not an ideal");
            Int a = A / C;
            Int delta = D & 1;
            Int b = normalize_b(checked_sub(checked_mul(-2, B / C), delta), a);
            Wide num = static_cast<Wide>(b) * b - D;
            if (num % (4 * a) != 0) throw std::invalid_argument("Ideal::from_generators: not an ideal");
            Int c = narrow(num / (4 * a));
            if (gcd(gcd(a, b), c) != 1) throw std::invalid_argument("Ideal::from_generators: not invertible");
            return Ideal(D, false, Rational(C), a, b);
        }
    }
}

Ideal Ideal::principal(Int D, const Element& alpha) {
    if (alpha.x == 0 && alpha.y == 0) return zero(D);
    Element tau{0, 1};
    return from_generators(D, {alpha, multiply(D, alpha, tau)});
}

Rational Ideal::norm() const {
    if (zero_) return Rational(0);
    return scale_ * scale_ * Rational(a_);
}

bool Ideal::is_integral() const { return zero_ || scale_.denominator() == 1; }

bool Ideal::is_primitive() const { return !zero_ && scale_ == Rational(1); }

QuadForm Ideal::primitive_form() const {
    if (zero_) throw std::logic_error("zero ideal has no form");
    return form_from(d_, a_, b_);
}

IdealClass Ideal::ideal_class() const { return reduce(primitive_form()); }

Ideal Ideal::conjugate() const {
    if (zero_) return *this;
    return Ideal(d_, false, scale_, a_, normalize_b(-b_, a_));
}

Ideal Ideal::inverse() const {
    if (zero_) throw std::domain_error("zero ideal is not invertible");
    Ideal c = conjugate();
    c.scale_ = Rational(1) / (scale_ * Rational(a_));
    return c;
}

Ideal Ideal::scaled(const Rational& s) const {
    if (zero_ || s == Rational(0)) return zero(d_);
    Rational t = s < Rational(0) ? -s : s;
    return Ideal(d_, false, scale_ * t, a_, b_);
}

std::array<std::array<Rational, 2>, 2> Ideal::basis() const {
    Int delta = d_ & 1;
    return {{{scale_ * Rational(a_), Rational(0)}, {scale_ * Rational((-b_ - delta) / 2), scale_}}};
}

bool Ideal::contains(const Element& u) const {
    if (zero_) return u.x == 0 && u.y == 0;
    Rational t = Rational(u.y) / scale_;
    if (t.denominator() != 1) return false;
    Int delta = d_ & 1;
    Rational rest = Rational(u.x) / scale_ - t * Rational((-b_ - delta) / 2);
    if (rest.denominator() != 1) return false;
    return rest.numerator() % a_ == 0;
}

bool Ideal::same_homothety_class(const Ideal& other) const {
    if (zero_ || other.zero_) return zero_ == other.zero_;
    return d_ == other.d_ && a_ == other.a_ && b_ == other.b_;
}

std::string Ideal::str() const {
    if (zero_) return "0";
    std::ostringstream os;
    os << scale_.numerator();
    if (scale_.denominator() != 1) os << '/' << scale_.denominator();
    os << "*[" << a_ << ',' << b_ << ']';
    return os.str();
}

Ideal operator*(const Ideal& x, const Ideal& y) {
    if (x.d_ != y.d_) throw std::invalid_argument("ideal product: discriminants differ");
    Int D = x.d_;
    if (x.zero_ || y.zero_) return Ideal::zero(D);
    Int delta = D & 1;
    Element x1{x.a_, 0}, x2{(-x.b_ - delta) / 2, 1};
    Element y1{y.a_, 0}, y2{(-y.b_ - delta) / 2, 1};
    Ideal p = Ideal::from_generators(D, {multiply(D, x1, y1), multiply(D, x1, y2), multiply(D, x2, y1), multiply(D, x2, y2)});
    p.scale_ = p.scale_ * x.scale_ * y.scale_;
    return p;
}

bool operator==(const Ideal& x, const Ideal& y) {
    if (x.zero_ || y.zero_) return x.zero_ == y.zero_ && x.d_ == y.d_;
    return x.d_ == y.d_ && x.scale_ == y.scale_ && x.a_ == y.a_ && x.b_ == y.b_;
}

namespace {

// Primitive invertible ideals of norm a, as normalized b values.
std::vector<Int> primitive_bs(Int D, Int a) {
    std::vector<Int> out;
    for (Int b : sqrt_mod(D, checked_mul(4, a))) {
        if (b >= 2 * a) break;
        Int c = narrow((static_cast<Wide>(b) * b - D) / (4 * a));
        if (gcd(gcd(a, b), c) != 1) continue;
        out.push_back(normalize_b(b, a));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

std::vector<Ideal> ideals_of_norm(Int D, Int n) {
    if (n < 1) throw std::invalid_argument("ideals_of_norm: n must be positive");
    std::vector<Ideal> out;
    for (Int m = 1; m * m <= n; ++m) {
        if (n % (m * m) != 0) continue;
        Int a = n / (m * m);
        for (Int b : primitive_bs(D, a)) out.push_back(Ideal::from_form(form_from(D, a, b)).scaled(Rational(m)));
    }
    std::sort(out.begin(), out.end(), [](const Ideal& x, const Ideal& y) {
        if (x.scale() != y.scale()) return x.scale() < y.scale();
        if (x.a() != y.a()) return x.a() < y.a();
        return x.b() < y.b();
    });
    return out;
}

Int count_ideals(Int D, Int n) {
    if (n < 1) throw std::invalid_argument("count_ideals: n must be positive");
    Int total = 1;
    for (auto [p, e] : factorize(n)) {
        Int local = 0;
        for (int k = e; k >= 0; k -= 2) local += static_cast<Int>(primitive_bs(D, ipow(p, k)).size());
        total = checked_mul(total, local);
        if (total == 0) return 0;
    }
    return total;
}

ClassGroup::ClassGroup(Int D, bool with_table) : d_(D), reps_(reduced_forms(D)) {
    for (std::size_t i = 0; i < reps_.size(); ++i) index_[reps_[i]] = i;
    identity_ = index_of(principal_form(D));
    std::size_t h = reps_.size();
    inverse_.resize(h);
    square_.assign(h, false);
    for (std::size_t i = 0; i < h; ++i) {
        inverse_[i] = index_of(inverse(reps_[i]));
        square_[index_of(compose(reps_[i], reps_[i]))] = true;
    }
    if (with_table) {
        table_.resize(h * h);
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = i; j < h; ++j) {
                std::size_t k = index_of(compose(reps_[i], reps_[j]));
                table_[i * h + j] = k;
                table_[j * h + i] = k;
            }
    }
}

std::size_t ClassGroup::index_of(const QuadForm& f) const {
    auto it = index_.find(f.is_reduced() ? f : reduce(f));
    if (it == index_.end()) throw std::invalid_argument("ClassGroup::index_of: form of another discriminant");
    return it->second;
}

std::size_t ClassGroup::mul(std::size_t i, std::size_t j) const {
    if (!table_.empty()) return table_[i * reps_.size() + j];
    return index_of(compose(reps_[i], reps_[j]));
}

std::size_t ClassGroup::inv(std::size_t i) const { return inverse_[i]; }

std::size_t ClassGroup::square_count() const {
    return static_cast<std::size_t>(std::count(square_.begin(), square_.end(), true));
}

Int count_ideals_in_class(const ClassGroup& G, Int n, const IdealClass& target, ClassMode mode) {
    if (n < 0) return 0;
    if (n == 0) return mode == ClassMode::exact ? 1 : 0;
    std::size_t t = G.index_of(target);
    Int count = 0;
    for (const Ideal& I : ideals_of_norm(G.discriminant(), n)) {
        std::size_t c = G.index_of(I.ideal_class());
        if (mode == ClassMode::exact ? c == t : G.is_square(G.mul(c, G.inv(t)))) ++count;
    }
    return count;
}

Int count_ideals_in_class(Int D, Int n, const IdealClass& target, ClassMode mode) {
    return count_ideals_in_class(ClassGroup(D), n, target, mode);
}

Int minimal_norm_in_class(Int D, const IdealClass& target) {
    if (target.discriminant() != D) throw std::invalid_argument("minimal_norm_in_class: wrong discriminant");
    return inverse(target).a;
}

} // namespace cnt
