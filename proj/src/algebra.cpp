#include "double/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace dbl {

namespace mp = boost::multiprecision;

// ---------------------------------------------------------------- HalfInt

HalfInt HalfInt::from_rational(const Rational& r) {
    Rational t = r * 2;
    if (mp::denominator(t) != 1) throw DomainError("value " + rational_str(r) + " is not a half integer");
    return from_twice(static_cast<std::int64_t>(mp::numerator(t)));
}

std::int64_t HalfInt::to_int() const {
    if (!integral()) throw DomainError("half integer " + str() + " is not integral");
    return twice_value / 2;
}

HalfInt HalfInt::half() const {
    if (!integral()) throw DomainError("cannot halve half integer " + str());
    return from_twice(twice_value / 2);
}

std::string HalfInt::str() const {
    if (integral()) return std::to_string(twice_value / 2);
    return std::to_string(twice_value) + "/2";
}

// ---------------------------------------------------------------- VarSet

VarSet make_vars(std::vector<std::string> names) {
    return std::make_shared<const std::vector<std::string>>(std::move(names));
}

VarSet indexed_vars(const std::string& prefix, std::size_t n, std::size_t first) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(first + i));
    return make_vars(std::move(names));
}

VarSet concat_vars(const VarSet& a, const VarSet& b) {
    std::vector<std::string> names = *a;
    names.insert(names.end(), b->begin(), b->end());
    return make_vars(std::move(names));
}

bool same_vars(const VarSet& a, const VarSet& b) {
    return a == b || (a && b && *a == *b);
}

std::optional<std::size_t> var_index(const VarSet& vs, const std::string& name) {
    for (std::size_t i = 0; i < vs->size(); ++i)
        if ((*vs)[i] == name) return i;
    return std::nullopt;
}

static void require_same(const VarSet& a, const VarSet& b) {
    if (!same_vars(a, b)) throw DomainError("variable-count mismatch between expressions");
}

// ---------------------------------------------------------------- LaurentExpr

static const VarSet& empty_vars() {
    static VarSet e = make_vars({});
    return e;
}

LaurentExpr::LaurentExpr() : vars_(empty_vars()) {}
LaurentExpr::LaurentExpr(VarSet vs) : vars_(std::move(vs)) {}

LaurentExpr LaurentExpr::constant(VarSet vs, const Integer& c) {
    LaurentExpr r(vs);
    r.add_term(Exponent(vs->size()), c);
    return r;
}

LaurentExpr LaurentExpr::variable(VarSet vs, std::size_t i, HalfInt power) {
    Exponent e(vs->size());
    e.at(i) = power;
    return monomial(vs, std::move(e));
}

LaurentExpr LaurentExpr::monomial(VarSet vs, Exponent e, const Integer& c) {
    if (e.size() != vs->size()) throw DomainError("exponent length does not match variable count");
    LaurentExpr r(vs);
    r.add_term(e, c);
    return r;
}

void LaurentExpr::add_term(const Exponent& e, const Integer& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

bool LaurentExpr::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() != 1) return false;
    for (auto h : terms_.begin()->first)
        if (!h.is_zero()) return false;
    return true;
}

bool LaurentExpr::is_one() const { return is_constant() && !terms_.empty() && terms_.begin()->second == 1; }

bool LaurentExpr::all_positive() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second > 0; });
}

bool LaurentExpr::integral_exponents() const {
    for (const auto& [e, c] : terms_)
        for (auto h : e)
            if (!h.integral()) return false;
    return true;
}

const Exponent& LaurentExpr::lead_exponent() const {
    if (terms_.empty()) throw DomainError("zero expression has no leading term");
    return terms_.begin()->first;
}

const Integer& LaurentExpr::lead_coeff() const {
    if (terms_.empty()) throw DomainError("zero expression has no leading term");
    return terms_.begin()->second;
}

Exponent LaurentExpr::min_exponents() const {
    Exponent m = lead_exponent();
    for (const auto& [e, c] : terms_)
        for (std::size_t i = 0; i < e.size(); ++i) m[i] = std::min(m[i], e[i]);
    return m;
}

Exponent LaurentExpr::max_exponents() const {
    Exponent m = lead_exponent();
    for (const auto& [e, c] : terms_)
        for (std::size_t i = 0; i < e.size(); ++i) m[i] = std::max(m[i], e[i]);
    return m;
}

Integer LaurentExpr::content() const {
    Integer g = 0;
    for (const auto& [e, c] : terms_) g = mp::gcd(g, Integer(mp::abs(c)));
    return g;
}

Integer LaurentExpr::coefficient_sum() const {
    Integer s = 0;
    for (const auto& [e, c] : terms_) s += c;
    return s;
}

LaurentExpr LaurentExpr::operator-() const {
    LaurentExpr r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

LaurentExpr& LaurentExpr::operator+=(const LaurentExpr& o) {
    require_same(vars_, o.vars_);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

LaurentExpr& LaurentExpr::operator-=(const LaurentExpr& o) {
    require_same(vars_, o.vars_);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

LaurentExpr LaurentExpr::operator+(const LaurentExpr& o) const {
    LaurentExpr r = *this;
    r += o;
    return r;
}

LaurentExpr LaurentExpr::operator-(const LaurentExpr& o) const {
    LaurentExpr r = *this;
    r -= o;
    return r;
}

LaurentExpr LaurentExpr::operator*(const LaurentExpr& o) const {
    require_same(vars_, o.vars_);
    LaurentExpr r(vars_);
    Exponent e(vars_->size());
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) {
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

LaurentExpr LaurentExpr::scaled(const Integer& c) const {
    if (c == 0) return LaurentExpr(vars_);
    LaurentExpr r = *this;
    for (auto& [e, v] : r.terms_) v *= c;
    return r;
}

LaurentExpr LaurentExpr::div_integer(const Integer& c) const {
    LaurentExpr r = *this;
    for (auto& [e, v] : r.terms_) {
        if (v % c != 0) throw DomainError("integer does not divide coefficients");
        v /= c;
    }
    return r;
}

LaurentExpr LaurentExpr::shift(const Exponent& s) const {
    if (s.size() != vars_->size()) throw DomainError("shift length does not match variable count");
    LaurentExpr r(vars_);
    for (const auto& [e, c] : terms_) {
        Exponent f = e;
        for (std::size_t i = 0; i < f.size(); ++i) f[i] += s[i];
        r.terms_.emplace_hint(r.terms_.end(), std::move(f), c);
    }
    return r;
}

LaurentExpr LaurentExpr::pow(long k) const {
    if (k < 0) {
        if (!is_monomial()) throw DomainError("negative power of a non-monomial");
        const auto& [e, c] = *terms_.begin();
        if (c != 1 && c != -1) throw DomainError("negative power of a monomial with non-unit coefficient");
        Exponent f = e;
        for (auto& h : f) h = h * k;
        Integer cc = (c == -1 && (k % 2 != 0)) ? Integer(-1) : Integer(1);
        return monomial(vars_, std::move(f), cc);
    }
    LaurentExpr result = constant(vars_, 1);
    LaurentExpr base = *this;
    while (k > 0) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

std::optional<LaurentExpr> LaurentExpr::divide_exact(const LaurentExpr& q) const {
    require_same(vars_, q.vars_);
    if (q.is_zero()) throw DomainError("division by zero expression");
    LaurentExpr quot(vars_);
    if (is_zero()) return quot;
    const std::size_t n = vars_->size();
    Exponent minp = min_exponents(), maxp = max_exponents();
    Exponent minq = q.min_exponents(), maxq = q.max_exponents();
    Exponent lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        lo[i] = minp[i] - minq[i];
        hi[i] = maxp[i] - maxq[i];
        if (lo[i] > hi[i]) return std::nullopt;
    }
    if (q.is_monomial()) {
        const Integer& c = q.lead_coeff();
        Exponent neg = q.lead_exponent();
        for (auto& h : neg) h = -h;
        LaurentExpr r = shift(neg);
        for (auto& [e, v] : r.terms_) {
            if (v % c != 0) return std::nullopt;
            v /= c;
        }
        return r;
    }
    LaurentExpr rem = *this;
    const Exponent& qe = q.lead_exponent();
    const Integer& qc = q.lead_coeff();
    while (!rem.is_zero()) {
        const Exponent& re = rem.lead_exponent();
        const Integer& rc = rem.lead_coeff();
        if (rc % qc != 0) return std::nullopt;
        Exponent e(n);
        for (std::size_t i = 0; i < n; ++i) {
            e[i] = re[i] - qe[i];
            if (e[i] < lo[i] || e[i] > hi[i]) return std::nullopt;
        }
        Integer c = rc / qc;
        for (const auto& [te, tc] : q.terms_) {
            Exponent f(n);
            for (std::size_t i = 0; i < n; ++i) f[i] = te[i] + e[i];
            rem.add_term(f, -c * tc);
        }
        quot.add_term(e, c);
    }
    return quot;
}

LaurentExpr LaurentExpr::rebase(const VarSet& target) const {
    if (same_vars(vars_, target)) {
        LaurentExpr r = *this;
        r.vars_ = target;
        return r;
    }
    std::vector<std::size_t> where(vars_->size());
    for (std::size_t i = 0; i < vars_->size(); ++i) {
        auto idx = var_index(target, (*vars_)[i]);
        if (!idx) throw DomainError("variable " + (*vars_)[i] + " missing from target variable set");
        where[i] = *idx;
    }
    LaurentExpr r(target);
    for (const auto& [e, c] : terms_) {
        Exponent f(target->size());
        for (std::size_t i = 0; i < e.size(); ++i) f[where[i]] = e[i];
        r.add_term(f, c);
    }
    return r;
}

static Rational rational_sqrt(const Rational& x) {
    if (x < 0) throw DomainError("half-integer power of a negative value");
    Integer n = mp::numerator(x), d = mp::denominator(x);
    Integer sn = mp::sqrt(n), sd = mp::sqrt(d);
    if (sn * sn != n || sd * sd != d)
        throw DomainError("value " + rational_str(x) + " is not a perfect square under a half-integer exponent");
    return Rational(sn, sd);
}

static Rational rational_pow(const Rational& x, long k) {
    if (k < 0) {
        if (x == 0) throw DomainError("pole at evaluation point");
        return rational_pow(1 / x, -k);
    }
    Rational r = 1, b = x;
    while (k > 0) {
        if (k & 1) r *= b;
        k >>= 1;
        if (k) b *= b;
    }
    return r;
}

Rational LaurentExpr::eval(const std::vector<Rational>& point) const {
    if (point.size() != vars_->size()) throw DomainError("evaluation point has wrong dimension");
    std::vector<std::optional<Rational>> roots(point.size());
    Rational total = 0;
    for (const auto& [e, c] : terms_) {
        Rational v = Rational(c);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i].is_zero()) continue;
            if (e[i].integral()) {
                v *= rational_pow(point[i], e[i].to_int());
            } else {
                if (!roots[i]) roots[i] = rational_sqrt(point[i]);
                v *= rational_pow(*roots[i], e[i].twice_value);
            }
        }
        total += v;
    }
    return total;
}

static std::string exponent_suffix(HalfInt h) {
    if (h == HalfInt(1)) return "";
    if (h.integral()) return "^" + std::to_string(h.twice_value / 2);
    return "^(" + std::to_string(h.twice_value) + "/2)";
}

std::string LaurentExpr::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        Integer a = mp::abs(c);
        if (first) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        first = false;
        std::vector<std::string> factors;
        bool constant_term = std::all_of(e.begin(), e.end(), [](HalfInt h) { return h.is_zero(); });
        if (a != 1 || constant_term) factors.push_back(a.str());
        for (std::size_t i = 0; i < e.size(); ++i)
            if (!e[i].is_zero()) factors.push_back((*vars_)[i] + exponent_suffix(e[i]));
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) out += "*";
            out += factors[i];
        }
    }
    return out;
}

namespace {

struct Lexer {
    const std::string& s;
    std::size_t pos = 0;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool at_end() {
        skip();
        return pos >= s.size();
    }
    char peek() {
        skip();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    [[noreturn]] void fail(const std::string& what) {
        throw DomainError("parse error at offset " + std::to_string(pos) + ": " + what + " in \"" + s + "\"");
    }
    Integer integer() {
        skip();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) fail("expected integer");
        return Integer(s.substr(start, pos - start));
    }
    std::string name() {
        skip();
        std::size_t start = pos;
        if (pos < s.size() && (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
        else fail("expected variable name");
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
        return s.substr(start, pos - start);
    }
    HalfInt exponent() {
        if (accept('(')) {
            bool neg = accept('-');
            Integer p = integer();
            Integer q = 1;
            if (accept('/')) q = integer();
            expect(')');
            Rational r(p, q);
            if (neg) r = -r;
            return HalfInt::from_rational(r);
        }
        bool neg = accept('-');
        Integer p = integer();
        HalfInt h(static_cast<std::int64_t>(p));
        return neg ? -h : h;
    }
};

}  // namespace

LaurentExpr LaurentExpr::parse(const std::string& text, const VarSet& vs) {
    Lexer lx{text};
    LaurentExpr r(vs);
    if (lx.at_end()) lx.fail("empty expression");
    bool first = true;
    while (!lx.at_end()) {
        int sign = 1;
        if (lx.accept('+')) {
            if (first) lx.fail("leading '+'");
        } else if (lx.accept('-')) {
            sign = -1;
        } else if (!first) {
            lx.fail("expected '+' or '-'");
        }
        first = false;
        Integer coeff = sign;
        Exponent e(vs->size());
        do {
            char c = lx.peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                coeff *= lx.integer();
            } else {
                std::string nm = lx.name();
                auto idx = var_index(vs, nm);
                if (!idx) lx.fail("unknown variable " + nm);
                HalfInt h(1);
                if (lx.accept('^')) h = lx.exponent();
                e[*idx] += h;
            }
        } while (lx.accept('*'));
        r.add_term(e, coeff);
    }
    return r;
}

bool LaurentExpr::operator==(const LaurentExpr& o) const {
    return same_vars(vars_, o.vars_) && terms_ == o.terms_;
}

// ---------------------------------------------------------------- RationalExpr

RationalExpr::RationalExpr() : num_(), den_(LaurentExpr::constant(num_.vars(), 1)) {}

RationalExpr::RationalExpr(const LaurentExpr& num) : num_(num), den_(LaurentExpr::constant(num.vars(), 1)) {}

RationalExpr::RationalExpr(const LaurentExpr& num, const LaurentExpr& den) : num_(num), den_(den) {
    require_same(num.vars(), den.vars());
    normalize();
}

RationalExpr RationalExpr::constant(VarSet vs, const Integer& c) { return RationalExpr(LaurentExpr::constant(vs, c)); }

RationalExpr RationalExpr::variable(VarSet vs, std::size_t i, HalfInt power) {
    return RationalExpr(LaurentExpr::variable(vs, i, power));
}

void RationalExpr::normalize() {
    if (den_.is_zero()) throw DomainError("division by zero expression");
    if (num_.is_zero()) {
        den_ = LaurentExpr::constant(num_.vars(), 1);
        return;
    }
    // Move the monomial part of the denominator into the numerator.
    Exponent m = den_.min_exponents();
    bool nontrivial = std::any_of(m.begin(), m.end(), [](HalfInt h) { return !h.is_zero(); });
    if (nontrivial) {
        Exponent neg = m;
        for (auto& h : neg) h = -h;
        den_ = den_.shift(neg);
        num_ = num_.shift(neg);
    }
    if (den_.is_constant()) {
        Integer c = den_.lead_coeff();
        Integer g = mp::gcd(num_.content(), Integer(mp::abs(c)));
        if (c < 0) g = -g;
        num_ = num_.div_integer(g);
        den_ = den_.div_integer(g);
        return;
    }
    if (auto g = laurent_gcd(num_, den_)) {
        if (!g->is_one()) {
            num_ = *num_.divide_exact(*g);
            den_ = *den_.divide_exact(*g);
            normalize();
            return;
        }
        Integer c = mp::gcd(num_.content(), den_.content());
        if (den_.lead_coeff() < 0) c = -c;
        num_ = num_.div_integer(c);
        den_ = den_.div_integer(c);
        return;
    }
    if (auto q = num_.divide_exact(den_)) {
        num_ = *q;
        den_ = LaurentExpr::constant(num_.vars(), 1);
        return;
    }
    if (auto q = num_.is_monomial() ? std::nullopt : den_.divide_exact(num_)) {
        // num/den = 1/q
        LaurentExpr one = LaurentExpr::constant(num_.vars(), 1);
        num_ = one;
        den_ = *q;
        normalize();
        return;
    }
    Integer g = mp::gcd(num_.content(), den_.content());
    if (den_.lead_coeff() < 0) g = -g;
    if (g != 1) {
        num_ = num_.div_integer(g);
        den_ = den_.div_integer(g);
    }
}

bool RationalExpr::subtraction_free() const { return num_.all_positive() && den_.all_positive(); }

RationalExpr RationalExpr::operator-() const {
    RationalExpr r = *this;
    r.num_ = -r.num_;
    return r;
}

RationalExpr RationalExpr::operator+(const RationalExpr& o) const {
    if (den_ == o.den_) return RationalExpr(num_ + o.num_, den_);
    if (is_laurent()) return RationalExpr(num_ * o.den_ + o.num_, o.den_);
    if (o.is_laurent()) return RationalExpr(num_ + o.num_ * den_, den_);
    if (auto q = o.den_.divide_exact(den_)) return RationalExpr(num_ * *q + o.num_, o.den_);
    if (auto q = den_.divide_exact(o.den_)) return RationalExpr(num_ + o.num_ * *q, den_);
    // Add over the lcm so the final reduction only sees what the numerators share.
    if (auto g = laurent_gcd(den_, o.den_); g && !g->is_one()) {
        LaurentExpr a = *den_.divide_exact(*g), b = *o.den_.divide_exact(*g);
        return RationalExpr(num_ * b + o.num_ * a, a * o.den_);
    }
    return RationalExpr(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalExpr RationalExpr::operator-(const RationalExpr& o) const { return *this + (-o); }

namespace {

// (a/b)*(c/d) with a cancelled against d and c against b first.
void cancel_common(LaurentExpr& p, LaurentExpr& q) {
    if (p.is_zero() || p.is_monomial() || q.is_monomial()) return;
    if (auto g = laurent_gcd(p, q)) {
        if (!g->is_one()) {
            p = *p.divide_exact(*g);
            q = *q.divide_exact(*g);
        }
        return;
    }
    LaurentExpr one = LaurentExpr::constant(p.vars(), 1);
    if (auto r = p.divide_exact(q)) {
        p = *r;
        q = one;
    } else if (auto r = q.divide_exact(p)) {
        q = *r;
        p = one;
    }
}

RationalExpr cross_product(LaurentExpr a, LaurentExpr b, LaurentExpr c, LaurentExpr d) {
    cancel_common(a, d);
    cancel_common(c, b);
    return RationalExpr(a * c, b * d);
}

}  // namespace

RationalExpr RationalExpr::operator*(const RationalExpr& o) const {
    if (is_laurent() && o.is_laurent()) return RationalExpr(num_ * o.num_);
    return cross_product(num_, den_, o.num_, o.den_);
}

RationalExpr RationalExpr::inverse() const {
    if (num_.is_zero()) throw DomainError("division by zero expression");
    return RationalExpr(den_, num_);
}

RationalExpr RationalExpr::operator/(const RationalExpr& o) const {
    if (o.is_zero()) throw DomainError("division by zero expression");
    return cross_product(num_, den_, o.den_, o.num_);
}

RationalExpr RationalExpr::pow(long k) const {
    if (k >= 0) {
        if (is_laurent()) return RationalExpr(num_.pow(k));
        return RationalExpr(num_.pow(k), den_.pow(k));
    }
    return inverse().pow(-k);
}

RationalExpr RationalExpr::rebase(const VarSet& target) const {
    return RationalExpr(num_.rebase(target), den_.rebase(target));
}

Rational RationalExpr::eval(const std::vector<Rational>& point) const {
    Rational d = den_.eval(point);
    if (d == 0) throw DomainError("pole at evaluation point");
    return num_.eval(point) / d;
}

bool RationalExpr::equals(const RationalExpr& o) const {
    if (!same_vars(vars(), o.vars())) return false;
    if (den_ == o.den_) return num_ == o.num_;
    return num_ * o.den_ == o.num_ * den_;
}

std::string RationalExpr::str() const {
    if (is_laurent()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

RationalExpr RationalExpr::parse(const std::string& text, const VarSet& vs) {
    std::size_t i = text.find_first_not_of(" \t\n");
    if (i != std::string::npos && text[i] == '(') {
        int depth = 0;
        std::size_t j = i;
        for (; j < text.size(); ++j) {
            if (text[j] == '(') ++depth;
            if (text[j] == ')' && --depth == 0) break;
        }
        if (j >= text.size()) throw DomainError("parse error: unbalanced parentheses in \"" + text + "\"");
        LaurentExpr num = LaurentExpr::parse(text.substr(i + 1, j - i - 1), vs);
        std::string rest = text.substr(j + 1);
        std::size_t k = rest.find_first_not_of(" \t\n");
        if (k == std::string::npos) return RationalExpr(num);
        if (rest[k] != '/') throw DomainError("parse error: expected '/' in \"" + text + "\"");
        std::string d = rest.substr(k + 1);
        std::size_t a = d.find_first_not_of(" \t\n");
        std::size_t b = d.find_last_not_of(" \t\n");
        if (a == std::string::npos || d[a] != '(' || d[b] != ')')
            throw DomainError("parse error: denominator must be parenthesized in \"" + text + "\"");
        LaurentExpr den = LaurentExpr::parse(d.substr(a + 1, b - a - 1), vs);
        return RationalExpr(num, den);
    }
    return RationalExpr(LaurentExpr::parse(text, vs));
}

// ---------------------------------------------------------------- operations

LaurentExpr poly_arith(const LaurentExpr& a, const LaurentExpr& b, ArithOp op, long power) {
    switch (op) {
        case ArithOp::add: return a + b;
        case ArithOp::mul: return a * b;
        case ArithOp::pow_int: return a.pow(power);
    }
    throw DomainError("unknown arithmetic operation");
}

RationalExpr ratexpr_combine(const RationalExpr& a, const RationalExpr& b, CombineOp op) {
    switch (op) {
        case CombineOp::add: return a + b;
        case CombineOp::mul: return a * b;
        case CombineOp::div: return a / b;
    }
    throw DomainError("unknown combine operation");
}

namespace {

// Powers of one substitution image, cached by exponent.
struct ImagePowers {
    const RationalExpr* image;
    bool monomial = false;
    Exponent mono_exp;
    Integer mono_coeff;
    std::map<long, LaurentExpr> num_pows, den_pows;

    const LaurentExpr& num_pow(long k) {
        auto it = num_pows.find(k);
        if (it != num_pows.end()) return it->second;
        return num_pows.emplace(k, image->num().pow(k)).first->second;
    }
    const LaurentExpr& den_pow(long k) {
        auto it = den_pows.find(k);
        if (it != den_pows.end()) return it->second;
        return den_pows.emplace(k, image->den().pow(k)).first->second;
    }
};

}  // namespace

// Unreduced numerator and denominator of f after substitution.
static std::pair<LaurentExpr, LaurentExpr> substitute_poly_raw(const LaurentExpr& f, std::vector<ImagePowers>& imgs,
                                                              const VarSet& target) {
    const std::size_t n = imgs.size();
    // Highest positive and negative exponents per non-monomial image.
    std::vector<long> P(n, 0), Q(n, 0);
    for (const auto& [e, c] : f.terms()) {
        for (std::size_t i = 0; i < n; ++i) {
            if (imgs[i].monomial || e[i].is_zero()) continue;
            if (!e[i].integral())
                throw DomainError("half-integer power of a non-monomial image for variable " + (*f.vars())[i]);
            long k = static_cast<long>(e[i].to_int());
            if (k > 0) P[i] = std::max(P[i], k);
            else Q[i] = std::max(Q[i], -k);
        }
    }
    // Common denominator D = prod den_i^P_i * num_i^Q_i.
    LaurentExpr den = LaurentExpr::constant(target, 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (imgs[i].monomial) continue;
        if (P[i] > 0 && !imgs[i].image->is_laurent()) den = den * imgs[i].den_pow(P[i]);
        if (Q[i] > 0) den = den * imgs[i].num_pow(Q[i]);
    }
    LaurentExpr num(target);
    for (const auto& [e, c] : f.terms()) {
        Exponent shift(target->size());
        Integer coeff = c;
        LaurentExpr term = LaurentExpr::constant(target, 1);
        for (std::size_t i = 0; i < n; ++i) {
            ImagePowers& im = imgs[i];
            if (im.monomial) {
                if (e[i].is_zero()) continue;
                for (std::size_t j = 0; j < shift.size(); ++j) {
                    HalfInt base = im.mono_exp[j];
                    if (base.is_zero()) continue;
                    // base * e[i] must land in the half-integer lattice
                    std::int64_t t = base.twice_value * e[i].twice_value;
                    if (t % 2 != 0) throw DomainError("substitution leaves the half-integer exponent lattice");
                    shift[j] += HalfInt::from_twice(t / 2);
                }
                if (im.mono_coeff != 1) {
                    if (!e[i].integral()) throw DomainError("half-integer power of a non-unit coefficient");
                    long k = static_cast<long>(e[i].to_int());
                    if (k < 0) throw DomainError("negative power of a non-unit coefficient");
                    coeff *= mp::pow(im.mono_coeff, static_cast<unsigned>(k));
                }
                continue;
            }
            long k = e[i].is_zero() ? 0 : static_cast<long>(e[i].to_int());
            long nexp = k + Q[i], dexp = P[i] - k;
            if (nexp > 0) term = term * im.num_pow(nexp);
            if (dexp > 0 && !im.image->is_laurent()) term = term * im.den_pow(dexp);
        }
        num += term.shift(shift).scaled(coeff);
    }
    return {num, den};
}

static RationalExpr substitute_poly(const LaurentExpr& f, std::vector<ImagePowers>& imgs, const VarSet& target) {
    auto [num, den] = substitute_poly_raw(f, imgs, target);
    return RationalExpr(num, den);
}

static std::vector<ImagePowers> image_powers(const std::vector<RationalExpr>& images, const VarSet& target) {
    std::vector<ImagePowers> imgs(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (!same_vars(images[i].vars(), target)) throw DomainError("substitution image over the wrong variables");
        imgs[i].image = &images[i];
        if (images[i].is_monomial()) {
            imgs[i].monomial = true;
            imgs[i].mono_exp = images[i].num().lead_exponent();
            imgs[i].mono_coeff = images[i].num().lead_coeff();
        }
    }
    return imgs;
}

RationalExpr substitute_monomial(const RationalExpr& f, const std::vector<RationalExpr>& images, const VarSet& target) {
    if (images.size() != f.vars()->size()) throw DomainError("substitution needs one image per variable");
    std::vector<ImagePowers> imgs = image_powers(images, target);
    RationalExpr n = substitute_poly(f.num(), imgs, target);
    if (f.is_laurent()) return n;
    RationalExpr d = substitute_poly(f.den(), imgs, target);
    if (d.is_zero()) throw DomainError("image denominator identically zero after composition");
    return n / d;
}

bool substitution_equals(const RationalExpr& f, const std::vector<RationalExpr>& images, const RationalExpr& g) {
    if (images.size() != f.vars()->size()) throw DomainError("substitution needs one image per variable");
    const VarSet& target = g.vars();
    std::vector<ImagePowers> imgs = image_powers(images, target);
    auto [nn, nd] = substitute_poly_raw(f.num(), imgs, target);
    auto [dn, dd] = substitute_poly_raw(f.den(), imgs, target);
    if (dn.is_zero()) throw DomainError("image denominator identically zero after composition");
    // f = (nn/nd) / (dn/dd)
    return nn * dd * g.den() == nd * dn * g.num();
}

LaurentExpr substitute_laurent(const LaurentExpr& f, const std::vector<LaurentExpr>& images, const VarSet& target) {
    std::vector<RationalExpr> r(images.begin(), images.end());
    RationalExpr out = substitute_monomial(RationalExpr(f), r, target);
    if (!out.is_laurent()) throw DomainError("substitution result is not a Laurent polynomial");
    return out.num();
}

Rational eval_rational(const RationalExpr& f, const std::vector<Rational>& point) { return f.eval(point); }

Rational dot(const Exponent& e, const std::vector<Rational>& u) {
    if (e.size() != u.size()) throw DomainError("tropical point has wrong dimension");
    Rational s = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
        if (!e[i].is_zero()) s += e[i].to_rational() * u[i];
    return s;
}

static Rational max_dot(const LaurentExpr& p, const std::vector<Rational>& u) {
    std::optional<Rational> best;
    for (const auto& [e, c] : p.terms()) {
        Rational v = dot(e, u);
        if (!best || v > *best) best = v;
    }
    if (!best) throw DomainError("tropicalization of the zero expression");
    return *best;
}

Rational trop_eval(const RationalExpr& f, const std::vector<Rational>& point) {
    if (!f.subtraction_free()) throw DomainError("expression is not subtraction-free: " + f.str());
    return max_dot(f.num(), point) - max_dot(f.den(), point);
}

// ---------------------------------------------------------------- intervals

static Rational round_down(const Rational& x, unsigned bits) {
    Integer scale = Integer(1) << bits;
    Integer n = mp::numerator(x) * scale;
    Integer d = mp::denominator(x);
    Integer q = n / d;
    if (n < 0 && q * d != n) q -= 1;
    return Rational(q, scale);
}

static Rational round_up(const Rational& x, unsigned bits) { return -round_down(-x, bits); }

static RatInterval exp_neg_small(const Rational& r, unsigned bits) {
    // Alternating Taylor series; terms are non-increasing for 0 <= r <= 1.
    Rational term = 1, sum = 1, prev = 1;
    for (int k = 1; k <= 60; ++k) {
        term = term * r / k;
        prev = sum;
        sum += (k % 2 ? -term : term);
    }
    Rational lo = std::min(sum, prev), hi = std::max(sum, prev);
    return {round_down(lo, bits), round_up(hi, bits)};
}

RatInterval exp_neg_interval(const Rational& a, unsigned bits) {
    if (a < 0) throw DomainError("exp_neg_interval needs a nonnegative argument");
    Integer n = mp::numerator(a) / mp::denominator(a);
    Rational frac = a - Rational(n);
    RatInterval result = exp_neg_small(frac, bits);
    RatInterval base = exp_neg_small(Rational(1), bits);
    while (n > 0) {
        if (n & 1) result = {round_down(result.lo * base.lo, bits), round_up(result.hi * base.hi, bits)};
        n >>= 1;
        if (n > 0) base = {round_down(base.lo * base.lo, bits), round_up(base.hi * base.hi, bits)};
    }
    return result;
}

static RatInterval scaled_sum(const LaurentExpr& p, const std::vector<Rational>& u, const Rational& C) {
    Rational top = max_dot(p, u);
    RatInterval s{0, 0};
    for (const auto& [e, c] : p.terms()) {
        RatInterval t = exp_neg_interval(C * (top - dot(e, u)));
        s.lo += t.lo * Rational(c);
        s.hi += t.hi * Rational(c);
    }
    return s;
}

FiniteCBound finite_c_bound(const RationalExpr& f, const std::vector<Rational>& u, const Rational& C) {
    if (!f.subtraction_free()) throw DomainError("expression is not subtraction-free: " + f.str());
    if (C <= 0) throw DomainError("scale C must be positive");
    RatInterval n = scaled_sum(f.num(), u, C);
    RatInterval d = scaled_sum(f.den(), u, C);
    FiniteCBound out;
    out.ratio = {n.lo / d.hi, n.hi / d.lo};
    out.term_bound = std::max(f.num().coefficient_sum(), f.den().coefficient_sum());
    Rational K(out.term_bound);
    out.within_bound = out.ratio.hi <= K && out.ratio.lo * K >= 1;
    return out;
}

std::string rational_str(const Rational& r) {
    if (mp::denominator(r) == 1) return mp::numerator(r).str();
    return mp::numerator(r).str() + "/" + mp::denominator(r).str();
}

Rational parse_rational(const std::string& s) {
    try {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(Integer(s));
        Integer d(s.substr(slash + 1));
        if (d == 0) throw DomainError("zero denominator in rational " + s);
        return Rational(Integer(s.substr(0, slash)), d);
    } catch (const DomainError&) {
        throw;
    } catch (const std::exception&) {
        throw DomainError("malformed rational \"" + s + "\"");
    }
}

}  // namespace dbl
