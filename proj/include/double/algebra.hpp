#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dbl {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Raised for every domain-level failure (bad input, violated precondition).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HalfInt {
    std::int64_t twice_value = 0;

    constexpr HalfInt() = default;
    constexpr HalfInt(std::int64_t v) : twice_value(2 * v) {}
    static constexpr HalfInt from_twice(std::int64_t t) {
        HalfInt h;
        h.twice_value = t;
        return h;
    }
    static HalfInt from_rational(const Rational& r);

    constexpr bool integral() const { return twice_value % 2 == 0; }
    constexpr bool is_zero() const { return twice_value == 0; }
    std::int64_t to_int() const;
    Rational to_rational() const { return Rational(twice_value, 2); }
    std::string str() const;

    constexpr HalfInt operator-() const { return from_twice(-twice_value); }
    constexpr HalfInt operator+(HalfInt o) const { return from_twice(twice_value + o.twice_value); }
    constexpr HalfInt operator-(HalfInt o) const { return from_twice(twice_value - o.twice_value); }
    constexpr HalfInt operator*(std::int64_t k) const { return from_twice(twice_value * k); }
    HalfInt& operator+=(HalfInt o) { twice_value += o.twice_value; return *this; }
    HalfInt& operator-=(HalfInt o) { twice_value -= o.twice_value; return *this; }
    // Halving is only exact when the value is an integer.
    HalfInt half() const;

    constexpr auto operator<=>(const HalfInt&) const = default;
};

using Exponent = std::vector<HalfInt>;
using VarSet = std::shared_ptr<const std::vector<std::string>>;

VarSet make_vars(std::vector<std::string> names);
// Names like X1..Xn or prefix-indexed names from a label list.
VarSet indexed_vars(const std::string& prefix, std::size_t n, std::size_t first = 1);
VarSet concat_vars(const VarSet& a, const VarSet& b);
bool same_vars(const VarSet& a, const VarSet& b);
std::optional<std::size_t> var_index(const VarSet& vs, const std::string& name);

// Sparse Laurent polynomial with half-integer exponents and big integer coefficients.
class LaurentExpr {
public:
    using TermMap = std::map<Exponent, Integer, std::greater<Exponent>>;

    LaurentExpr();
    explicit LaurentExpr(VarSet vs);

    static LaurentExpr constant(VarSet vs, const Integer& c);
    static LaurentExpr variable(VarSet vs, std::size_t i, HalfInt power = HalfInt(1));
    static LaurentExpr monomial(VarSet vs, Exponent e, const Integer& c = 1);

    const VarSet& vars() const { return vars_; }
    std::size_t num_vars() const { return vars_->size(); }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_monomial() const { return terms_.size() == 1; }
    bool is_constant() const;
    bool is_one() const;
    bool all_positive() const;
    bool integral_exponents() const;

    const Exponent& lead_exponent() const;
    const Integer& lead_coeff() const;
    Exponent min_exponents() const;
    Exponent max_exponents() const;
    Integer content() const;
    Integer coefficient_sum() const;

    LaurentExpr operator-() const;
    LaurentExpr operator+(const LaurentExpr& o) const;
    LaurentExpr operator-(const LaurentExpr& o) const;
    LaurentExpr operator*(const LaurentExpr& o) const;
    LaurentExpr& operator+=(const LaurentExpr& o);
    LaurentExpr& operator-=(const LaurentExpr& o);
    LaurentExpr scaled(const Integer& c) const;
    // Divides every coefficient by c; c must divide the content.
    LaurentExpr div_integer(const Integer& c) const;
    LaurentExpr shift(const Exponent& e) const;
    LaurentExpr pow(long k) const;
    // Exact quotient in the Laurent ring, or nullopt when q does not divide.
    std::optional<LaurentExpr> divide_exact(const LaurentExpr& q) const;
    // Same polynomial written over a larger variable set containing these names.
    LaurentExpr rebase(const VarSet& target) const;

    Rational eval(const std::vector<Rational>& point) const;

    std::string str() const;
    static LaurentExpr parse(const std::string& text, const VarSet& vs);

    bool operator==(const LaurentExpr& o) const;
    bool operator!=(const LaurentExpr& o) const { return !(*this == o); }

    void add_term(const Exponent& e, const Integer& c);

private:
    VarSet vars_;
    TermMap terms_;
};

// Gcd up to a monomial factor, with positive leading coefficient. Empty when the
// heuristic gives up or an argument is zero.
std::optional<LaurentExpr> laurent_gcd(const LaurentExpr& a, const LaurentExpr& b);

// Quotient of Laurent polynomials, normalized so that the denominator carries no
// monomial factor, shares no integer content with the numerator and has a
// positive leading coefficient.
class RationalExpr {
public:
    RationalExpr();
    RationalExpr(const LaurentExpr& num);
    RationalExpr(const LaurentExpr& num, const LaurentExpr& den);

    static RationalExpr constant(VarSet vs, const Integer& c);
    static RationalExpr variable(VarSet vs, std::size_t i, HalfInt power = HalfInt(1));

    const LaurentExpr& num() const { return num_; }
    const LaurentExpr& den() const { return den_; }
    const VarSet& vars() const { return num_.vars(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_laurent() const { return den_.is_one(); }
    bool is_monomial() const { return is_laurent() && num_.is_monomial(); }
    bool subtraction_free() const;

    RationalExpr operator-() const;
    RationalExpr operator+(const RationalExpr& o) const;
    RationalExpr operator-(const RationalExpr& o) const;
    RationalExpr operator*(const RationalExpr& o) const;
    RationalExpr operator/(const RationalExpr& o) const;
    RationalExpr inverse() const;
    RationalExpr pow(long k) const;
    RationalExpr rebase(const VarSet& target) const;

    Rational eval(const std::vector<Rational>& point) const;

    // Cross-multiplied equality.
    bool equals(const RationalExpr& o) const;
    bool operator==(const RationalExpr& o) const { return equals(o); }
    bool operator!=(const RationalExpr& o) const { return !equals(o); }

    std::string str() const;
    static RationalExpr parse(const std::string& text, const VarSet& vs);

private:
    void normalize();
    LaurentExpr num_, den_;
};

enum class ArithOp { add, mul, pow_int };
LaurentExpr poly_arith(const LaurentExpr& a, const LaurentExpr& b, ArithOp op, long power = 0);

enum class CombineOp { add, mul, div };
RationalExpr ratexpr_combine(const RationalExpr& a, const RationalExpr& b, CombineOp op);

// Replaces variable i of f by images[i]; all images live over `target`.
RationalExpr substitute_monomial(const RationalExpr& f, const std::vector<RationalExpr>& images,
                                 const VarSet& target);
// Whether substituting into f gives g, decided by cross-multiplication without
// reducing the intermediate quotients. Images live over g's variables.
bool substitution_equals(const RationalExpr& f, const std::vector<RationalExpr>& images, const RationalExpr& g);
LaurentExpr substitute_laurent(const LaurentExpr& f, const std::vector<LaurentExpr>& images,
                               const VarSet& target);

Rational eval_rational(const RationalExpr& f, const std::vector<Rational>& point);
Rational trop_eval(const RationalExpr& f, const std::vector<Rational>& point);
Rational dot(const Exponent& e, const std::vector<Rational>& u);

// Closed rational interval.
struct RatInterval {
    Rational lo, hi;
    RatInterval operator+(const RatInterval& o) const { return {lo + o.lo, hi + o.hi}; }
    bool contains(const Rational& r) const { return lo <= r && r <= hi; }
};

// Enclosure of e^{-a} for rational a >= 0, endpoints rounded outward to 2^-bits.
RatInterval exp_neg_interval(const Rational& a, unsigned bits = 128);

// Certified data for the finite-C comparison of log f(e^{Cu})/C against f^t(u).
// With N, D the numerator and denominator, write f(e^{Cu}) = e^{C f^t(u)} * E; then
// the error is log(E)/C. `ratio` encloses E.
struct FiniteCBound {
    RatInterval ratio;
    Integer term_bound;  // coefficient sum of the larger side
    bool within_bound;   // 1/K <= E <= K certified
};
FiniteCBound finite_c_bound(const RationalExpr& f, const std::vector<Rational>& u, const Rational& C);

std::string rational_str(const Rational& r);
Rational parse_rational(const std::string& s);

}  // namespace dbl
