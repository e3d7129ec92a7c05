// Heuristic multivariate gcd over Z: evaluate one variable at a large integer,
// recurse, and rebuild the candidate from its symmetric xi-adic digits.

#include "double/algebra.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace dbl {

namespace {

namespace mp = boost::multiprecision;

using Mono = std::vector<long>;
using Poly = std::map<Mono, Integer, std::greater<Mono>>;

constexpr unsigned kMaxBits = 40000;

Integer content(const Poly& p) {
    Integer g = 0;
    for (const auto& [e, c] : p) g = mp::gcd(g, c);
    return g;
}

Integer max_norm(const Poly& p) {
    Integer m = 0;
    for (const auto& [e, c] : p) m = std::max(m, Integer(mp::abs(c)));
    return m;
}

long degree(const Poly& p, std::size_t v) {
    long d = 0;
    for (const auto& [e, c] : p) d = std::max(d, e[v]);
    return d;
}

Poly eval_last(const Poly& p, const Integer& xi) {
    Poly r;
    for (const auto& [e, c] : p) {
        Mono m(e.begin(), e.end() - 1);
        r[m] += c * mp::pow(xi, static_cast<unsigned>(e.back()));
    }
    std::erase_if(r, [](const auto& t) { return t.second == 0; });
    return r;
}

Integer smod(const Integer& a, const Integer& m) {
    Integer r = a % m;
    if (r < 0) r += m;
    if (2 * r > m) r -= m;
    return r;
}

Poly genpoly(Poly gamma, const Integer& xi) {
    Poly g;
    long i = 0;
    while (!gamma.empty()) {
        Poly next;
        for (const auto& [e, c] : gamma) {
            Integer d = smod(c, xi);
            if (d != 0) {
                Mono m = e;
                m.push_back(i);
                g[m] = d;
            }
            Integer q = (c - d) / xi;
            if (q != 0) next[e] = q;
        }
        gamma = std::move(next);
        ++i;
    }
    return g;
}

bool divides(const Poly& b, Poly a) {
    if (b.empty()) return false;
    const auto& [lb, cb] = *b.begin();
    Mono cap(lb.size(), 0);
    for (const auto& [e, c] : a)
        for (std::size_t i = 0; i < e.size(); ++i) cap[i] = std::max(cap[i], e[i]);
    while (!a.empty()) {
        const auto [la, ca] = *a.begin();
        Mono q(la.size());
        for (std::size_t i = 0; i < la.size(); ++i) {
            q[i] = la[i] - lb[i];
            if (q[i] < 0 || q[i] > cap[i]) return false;
        }
        if (ca % cb != 0) return false;
        Integer qc = ca / cb;
        for (const auto& [e, c] : b) {
            Mono m = e;
            for (std::size_t i = 0; i < m.size(); ++i) m[i] += q[i];
            Integer& slot = a[m];
            slot -= qc * c;
            if (slot == 0) a.erase(m);
        }
    }
    return true;
}

Poly primitive(Poly p) {
    Integer c = content(p);
    if (p.empty() || c == 1) return p;
    if (p.begin()->second < 0) c = -c;
    for (auto& [e, v] : p) v /= c;
    return p;
}

Poly scale(Poly p, const Integer& c) {
    for (auto& [e, v] : p) v *= c;
    return p;
}

// Only the outermost level retries with a new evaluation point; retrying at every
// level multiplies the work by the attempt count per variable.
std::optional<Poly> gcdheu(const Poly& a0, const Poly& b0, std::size_t nv, int attempts) {
    Integer c = mp::gcd(content(a0), content(b0));
    if (nv == 0) return Poly{{Mono{}, c}};
    Poly a = primitive(a0), b = primitive(b0);
    Integer xi = 2 * std::min(max_norm(a), max_norm(b)) + 2;
    long deg = std::max(degree(a, nv - 1), degree(b, nv - 1));
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (mp::msb(xi) * static_cast<unsigned>(deg + 1) > kMaxBits) return std::nullopt;
        Poly ea = eval_last(a, xi), eb = eval_last(b, xi);
        if (!ea.empty() && !eb.empty()) {
            if (auto gamma = gcdheu(ea, eb, nv - 1, 1)) {
                Poly g = primitive(genpoly(*gamma, xi));
                if (!g.empty() && divides(g, a) && divides(g, b)) return scale(g, c);
            }
        }
        xi = xi * 73794 / 27011;
    }
    return std::nullopt;
}

}  // namespace

std::optional<LaurentExpr> laurent_gcd(const LaurentExpr& a, const LaurentExpr& b) {
    if (!same_vars(a.vars(), b.vars())) throw DomainError("gcd of expressions over different variables");
    const VarSet& vs = a.vars();
    if (a.is_zero() || b.is_zero()) return std::nullopt;
    LaurentExpr one = LaurentExpr::constant(vs, 1);
    if (a.is_monomial() || b.is_monomial()) return one;
    Exponent ma = a.min_exponents(), mb = b.min_exponents();
    const std::size_t n = vs->size();
    std::vector<bool> in_a(n, false), in_b(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [e, c] : a.terms()) in_a[i] = in_a[i] || e[i] != ma[i];
        for (const auto& [e, c] : b.terms()) in_b[i] = in_b[i] || e[i] != mb[i];
    }
    // A variable occurring on one side only cannot divide the gcd, so that side is
    // replaced by its coefficients with respect to such variables.
    std::vector<std::size_t> common;
    for (std::size_t i = 0; i < n; ++i)
        if (in_a[i] && in_b[i]) common.push_back(i);
    auto split = [&](const LaurentExpr& p, const Exponent& m, std::vector<Poly>& out) {
        std::map<Mono, Poly> groups;
        for (const auto& [e, c] : p.terms()) {
            Mono key, k;
            std::size_t j = 0;
            for (std::size_t i = 0; i < n; ++i) {
                long d = e[i].twice_value - m[i].twice_value;
                if (j < common.size() && common[j] == i) {
                    k.push_back(d);
                    ++j;
                } else {
                    key.push_back(d);
                }
            }
            groups[key][k] = c;
        }
        // Monomials are units, so each part is shifted to its own minimum.
        for (auto& [key, poly] : groups) {
            Mono lo = poly.begin()->first;
            for (const auto& [k, c] : poly)
                for (std::size_t j = 0; j < k.size(); ++j) lo[j] = std::min(lo[j], k[j]);
            Poly shifted;
            for (const auto& [k, c] : poly) {
                Mono m = k;
                for (std::size_t j = 0; j < m.size(); ++j) m[j] -= lo[j];
                shifted[m] = c;
            }
            out.push_back(std::move(shifted));
        }
    };
    std::vector<Poly> parts;
    split(a, ma, parts);
    split(b, mb, parts);
    // Rescale each common variable by the gcd of its exponents.
    Mono step(common.size(), 0);
    for (const auto& p : parts)
        for (const auto& [k, c] : p)
            for (std::size_t j = 0; j < k.size(); ++j) step[j] = std::gcd(step[j], k[j]);
    for (auto& v : step) v = std::max(v, 1L);
    for (auto& p : parts) {
        Poly r;
        for (auto& [k, c] : p) {
            Mono m = k;
            for (std::size_t j = 0; j < m.size(); ++j) m[j] /= step[j];
            r[m] = c;
        }
        p = std::move(r);
    }
    // Small parts first keeps the running gcd small.
    std::sort(parts.begin(), parts.end(), [](const Poly& x, const Poly& y) { return x.size() < y.size(); });
    Poly g = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) {
        auto next = gcdheu(g, parts[i], common.size(), 6);
        if (!next) return std::nullopt;
        g = std::move(*next);
    }
    LaurentExpr r(vs);
    for (const auto& [k, v] : g) {
        Exponent e(n);
        for (std::size_t j = 0; j < common.size(); ++j) e[common[j]] = HalfInt::from_twice(k[j] * step[j]);
        r.add_term(e, v);
    }
    if (r.lead_coeff() < 0) r = -r;
    return r;
}

}  // namespace dbl
