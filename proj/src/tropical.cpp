#include "double/tropical.hpp"

#include <map>

namespace dbl {

namespace {

Rational max_over(const std::vector<Exponent>& es, const std::vector<Rational>& u) {
    if (es.empty()) throw DomainError("tropicalization of the zero expression");
    Rational best = dot(es.front(), u);
    for (const auto& e : es) best = std::max(best, dot(e, u));
    return best;
}

std::vector<Exponent> support(const LaurentExpr& p) {
    std::vector<Exponent> out;
    for (const auto& [e, c] : p.terms()) out.push_back(e);
    return out;
}

// Minkowski sum of two supports.
std::vector<Exponent> sum_support(const std::vector<Exponent>& a, const std::vector<Exponent>& b) {
    std::vector<Exponent> out;
    for (const auto& x : a)
        for (const auto& y : b) {
            Exponent z = x;
            for (std::size_t i = 0; i < z.size(); ++i) z[i] += y[i];
            out.push_back(z);
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

Rational TropicalFunction::eval(const std::vector<Rational>& u) const { return max_over(num, u) - max_over(den, u); }

TropicalFunction TropicalFunction::operator+(const TropicalFunction& o) const {
    return {sum_support(num, o.num), sum_support(den, o.den)};
}

TropicalFunction tropicalize(const RationalExpr& f) {
    if (f.is_zero() || !f.subtraction_free()) throw DomainError("expression is not subtraction-free: " + f.str());
    return {support(f.num()), support(f.den())};
}

TropicalFunction tropicalize(const PairingValue& p) {
    if (p.num.is_zero() || !p.num.all_positive() || !p.den.all_positive())
        throw DomainError("pairing value is not subtraction-free");
    TropicalFunction out{support(p.num), support(p.den)};
    // The monomial factor B^b X^h shifts the numerator.
    Exponent shift = p.b_exponents;
    shift.insert(shift.end(), p.x_exponents.begin(), p.x_exponents.end());
    for (auto& e : out.num)
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += shift[i];
    return out;
}

Rational intersection_pairing(const Triangulation& t, const DLamination& l, const DLamCoords& m) {
    validate_lamination(t, l);
    const std::size_t J = t.internal_edges().size();
    if (m.b.size() != J || m.x.size() != J) throw DomainError("coordinate point has wrong dimension");
    std::vector<Rational> u = m.point();
    Rational total = 0;
    for (const auto& c : l.loops) total += tropicalize(loop_pairing(t, c, l.reversed)).eval(u);
    DVariables d;
    std::map<int, Rational> kappas;
    for (const auto& c : l.intersecting) {
        total += tropicalize(intersecting_pairing(t, c)).eval(u);
        for (int v : punctures_met(t, c)) {
            if (!l.reversed.count(v)) continue;
            if (!kappas.count(v)) {
                if (!d.vars) d = d_variables(t);
                kappas.emplace(v, tropicalize(kappa(t, fan_at_puncture(t, v), d)).eval(u));
            }
            total += c.weight * kappas.at(v);
        }
    }
    return total;
}

std::vector<Rational> sphere_normalize(const std::vector<Rational>& v) {
    Rational top = 0;
    for (const auto& r : v) top = std::max(top, Rational(abs(r)));
    if (top == 0) throw DomainError("the zero vector has no spherical representative");
    std::vector<Rational> out;
    for (const auto& r : v) out.push_back(r / top);
    return out;
}

}  // namespace dbl
