#include "double/pairing.hpp"

#include <array>
#include <map>

namespace dbl {

namespace {

int next3(int p) { return (p + 1) % 3; }
int prev3(int p) { return (p + 2) % 3; }

using Mat2 = std::array<LaurentExpr, 4>;  // row-major

Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

// Turn matrix with the X^{-1/2} factor removed: [[X,0],[1,1]] after a left turn,
// [[X,X],[0,1]] after a right turn.
Mat2 turn_matrix(const LaurentExpr& x, Turn turn) {
    LaurentExpr one = LaurentExpr::constant(x.vars(), 1), zero(x.vars());
    if (turn == Turn::L) return {x, zero, one, one};
    return {x, x, zero, one};
}

// tr(M^k) for the polynomial monodromy along the word, with `edge_value(e)` the
// variable attached to edge e.
template <class F>
LaurentExpr polynomial_trace(const TurnWord& w, long k, const VarSet& vs, F edge_value) {
    if (w.empty()) throw DomainError("loop word is empty");
    if (k < 1) throw DomainError("loop weight must be positive");
    LaurentExpr one = LaurentExpr::constant(vs, 1), zero(vs);
    Mat2 m{one, zero, zero, one};
    for (const auto& [e, turn] : w) m = mul(turn_matrix(edge_value(e), turn), m);
    Mat2 p{one, zero, zero, one};
    for (long i = 0; i < k; ++i) p = mul(p, m);
    return p[0] + p[3];
}

LaurentExpr normalize_sign(LaurentExpr f) {
    if (!f.is_zero() && f.lead_coeff() < 0) return -f;
    return f;
}

std::vector<long> crossing_counts(const Triangulation& t, const TurnWord& w) {
    std::vector<long> n(t.num_edges(), 0);
    for (const auto& [e, turn] : w) ++n.at(e);
    return n;
}

LaurentExpr to_laurent(const RationalExpr& r) {
    if (!r.is_laurent()) throw std::logic_error("expected a Laurent expression");
    return r.num();
}

// Exponents of X-hat^c written in B and X: B gets c.eps, X gets c.
void add_xhat_monomial(const Seed& s, const std::vector<HalfInt>& c, Exponent& b, Exponent& x) {
    auto J = s.unfrozen();
    for (std::size_t q = 0; q < J.size(); ++q) {
        x[q] += c[q];
        for (std::size_t r = 0; r < J.size(); ++r) {
            long e = s.entry(J[q], J[r]);
            if (e != 0) b[r] += c[q] * e;
        }
    }
}

// Solves h . eps = s over the internal edges; free unknowns are set to zero.
std::vector<Rational> solve_h(const Seed& seed, const std::vector<long>& s) {
    auto J = seed.unfrozen();
    const std::size_t m = J.size();
    // Row j: sum_i h_i eps_{ij} = s_j.
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m + 1));
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) a[j][i] = seed.eps[J[i]][J[j]];
        a[j][m] = s[j];
    }
    std::vector<int> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m && row < m; ++col) {
        std::size_t p = row;
        while (p < m && a[p][col] == 0) ++p;
        if (p == m) continue;
        std::swap(a[p], a[row]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == row || a[r][col] == 0) continue;
            Rational f = a[r][col] / a[row][col];
            for (std::size_t c = col; c <= m; ++c) a[r][c] -= f * a[row][c];
        }
        pivot_col.push_back(static_cast<int>(col));
        ++row;
    }
    for (std::size_t r = row; r < m; ++r)
        if (a[r][m] != 0) throw DomainError("g-vectors of the segments admit no X-monomial factorization");
    std::vector<Rational> h(m, 0);
    for (std::size_t r = 0; r < row; ++r) h[pivot_col[r]] = a[r][m] / a[r][pivot_col[r]];
    return h;
}

}  // namespace

DVariables d_variables(const Triangulation& t) {
    Seed s = epsilon_from_triangulation(t);
    ClusterState st = initial_state(s, StateKind::D);
    DVariables d;
    d.vars = st.values.empty() ? make_vars({}) : st.values[0].vars();
    d.b = st.bvalues;
    d.x = st.values;
    d.xhat = pi_map(s, {d.b, d.x}).second;
    return d;
}

LaurentExpr monodromy_trace(const Triangulation& t, const TurnWord& w, const VarSet& vars, long power) {
    Seed s = epsilon_from_triangulation(t);
    if (vars->size() != s.unfrozen().size()) throw DomainError("one variable per internal edge expected");
    LaurentExpr f = polynomial_trace(w, power, vars, [&](int e) {
        if (!t.is_internal(e)) throw DomainError("loop word crosses an external edge");
        return LaurentExpr::variable(vars, s.position_in_unfrozen(e));
    });
    auto n = crossing_counts(t, w);
    Exponent shift(vars->size(), HalfInt(0));
    for (int e : t.internal_edges()) shift[s.position_in_unfrozen(e)] = HalfInt::from_twice(-power * n[e]);
    return normalize_sign(f.shift(shift));
}

RationalExpr PairingValue::value() const {
    Exponent e = b_exponents;
    e.insert(e.end(), x_exponents.begin(), x_exponents.end());
    return RationalExpr(num, den) * RationalExpr(LaurentExpr::monomial(num.vars(), e));
}

PairingValue loop_pairing(const Triangulation& t, const LoopCurve& c, const std::set<int>& reversed) {
    Seed s = epsilon_from_triangulation(t);
    DVariables d = d_variables(t);
    const std::size_t m = d.b.size();
    NormalCurve loop = loop_from_turn_word(t, c.word);
    auto n = crossing_counts(t, c.word);
    PairingValue v{LaurentExpr::constant(d.vars, 1), LaurentExpr::constant(d.vars, 1), Exponent(m, HalfInt(0)),
                   Exponent(m, HalfInt(0))};
    // Half the weighted crossing numbers, with the sign applied below.
    std::vector<HalfInt> half(m, HalfInt(0));
    for (int e : t.internal_edges()) half[s.position_in_unfrozen(e)] = HalfInt::from_twice(c.weight * n[e]);
    auto neg = [](std::vector<HalfInt> h) {
        for (auto& x : h) x = -x;
        return h;
    };

    auto vertex = peripheral_vertex(t, loop);
    bool puncture = false;
    if (vertex) {
        puncture = true;
        for (int e : t.external_edges()) {
            auto [a, b] = t.endpoints(t.slots(e)[0]);
            if (a == *vertex || b == *vertex) puncture = false;
        }
    }
    if (puncture) {
        bool agrees = !reversed.count(*vertex);
        if (agrees) {
            add_xhat_monomial(s, c.side == Side::Scirc ? neg(half) : half, v.b_exponents, v.x_exponents);
        } else {
            auto h = c.side == Side::S ? neg(half) : half;
            for (std::size_t q = 0; q < m; ++q) v.x_exponents[q] += h[q];
        }
        return v;
    }
    if (c.side == Side::Scirc) {
        v.num = polynomial_trace(c.word, c.weight, d.vars, [&](int e) { return to_laurent(d.xhat.at(s.position_in_unfrozen(e))); });
        add_xhat_monomial(s, neg(half), v.b_exponents, v.x_exponents);
    } else {
        v.den = polynomial_trace(c.word, c.weight, d.vars, [&](int e) { return to_laurent(d.x.at(s.position_in_unfrozen(e))); });
        for (std::size_t q = 0; q < m; ++q) v.x_exponents[q] += half[q];
    }
    return v;
}

PairingValue intersecting_pairing(const Triangulation& t, const IntersectingCurve& c) {
    DLamination single{{}, {c}, {}};
    validate_lamination(t, single);
    Seed s = epsilon_from_triangulation(t);
    DVariables d = d_variables(t);
    const std::size_t m = d.b.size();
    std::vector<LaurentExpr> x_images, xhat_images;
    for (std::size_t q = 0; q < m; ++q) {
        x_images.push_back(to_laurent(d.x[q]));
        xhat_images.push_back(to_laurent(d.xhat[q]));
    }
    LaurentExpr num = LaurentExpr::constant(d.vars, 1), den = num;
    std::vector<long> g_even(m, 0), g_odd(m, 0);
    for (std::size_t i = 0; i < c.segments.size(); ++i) {
        ArcExpansion ex = expand_arc(t, c.segments[i].arc);
        bool even = i % 2 == 1;  // segments are numbered from 1
        if (even) num = num * substitute_laurent(ex.fpoly, xhat_images, d.vars);
        else den = den * substitute_laurent(ex.fpoly, x_images, d.vars);
        for (std::size_t q = 0; q < m; ++q) (even ? g_even : g_odd)[q] += ex.g[q];
    }
    std::vector<long> diff(m);
    for (std::size_t q = 0; q < m; ++q) diff[q] = g_even[q] - g_odd[q];
    auto h = solve_h(s, diff);
    PairingValue v{num.pow(c.weight), den.pow(c.weight), Exponent(m, HalfInt(0)), Exponent(m, HalfInt(0))};
    for (std::size_t q = 0; q < m; ++q) {
        if (boost::multiprecision::denominator(Rational(2 * h[q])) != 1)
            throw DomainError("X-exponent of the pairing is not half-integral");
        v.b_exponents[q] = HalfInt(g_even[q] * c.weight);
        v.x_exponents[q] = HalfInt::from_rational(h[q]) * c.weight;
    }
    return v;
}

Fan fan_at_puncture(const Triangulation& t, int vertex, int first) {
    Slot start{-1, -1};
    for (int f = 0; f < t.num_triangles() && start.tri < 0; ++f)
        for (int p = 0; p < 3; ++p)
            if (t.corner_vertex(f, p) == vertex) {
                start = {f, p};
                break;
            }
    if (start.tri < 0) throw DomainError("vertex " + std::to_string(vertex) + " has no corners");
    // Walk the corners at the vertex; corner p is followed across edge p.
    std::vector<Slot> corners;
    Slot cur = start;
    do {
        corners.push_back(cur);
        auto nb = t.across({cur.tri, cur.pos});
        if (!nb) throw DomainError("vertex " + std::to_string(vertex) + " is not a puncture");
        cur = {nb->tri, prev3(nb->pos)};
    } while (!(cur == start));
    const int n = static_cast<int>(corners.size());
    if (n < 2) throw DomainError("puncture fan needs at least two triangles");
    Fan fan;
    for (int j = 0; j < n; ++j) {
        Slot c = corners[(first + j) % n];
        if (j == 0) fan.eta.push_back(t.edge_at({c.tri, next3(c.pos)}));
        fan.zeta.push_back(t.edge_at({c.tri, prev3(c.pos)}));
        fan.eta.push_back(t.edge_at({c.tri, c.pos}));
    }
    return fan;
}

RationalExpr kappa(const Triangulation& t, const Fan& fan, const DVariables& d) {
    const int N = static_cast<int>(fan.zeta.size());
    if (N < 2 || static_cast<int>(fan.eta.size()) != N + 1) throw DomainError("degenerate puncture fan");
    Seed s = epsilon_from_triangulation(t);
    auto B = [&](int e) {
        return t.is_internal(e) ? d.b.at(s.position_in_unfrozen(e)) : RationalExpr::constant(d.vars, 1);
    };
    // Lift to a fan-triangulated (N+2)-gon: diagonal j joins vertex 0 to vertex j+1
    // and carries eta_{j+1}.
    Triangulation poly = polygon(N + 2);
    Seed ps = epsilon_from_triangulation(poly);
    const int diag = N - 1;
    std::vector<RationalExpr> x(diag), xhat(diag);
    for (int j = 1; j <= diag; ++j) {
        int e = fan.eta[j];
        if (!t.is_internal(e)) throw DomainError("puncture fan has an external edge");
        int q = poly.edge_index(j);
        x[ps.position_in_unfrozen(q)] = d.x.at(s.position_in_unfrozen(e));
        xhat[ps.position_in_unfrozen(q)] = d.xhat.at(s.position_in_unfrozen(e));
    }
    std::vector<int> word;
    for (int j = 2; j <= diag; ++j) word.push_back(poly.edge_index(j));
    auto mutate_x = [&](std::vector<RationalExpr> v) {
        ClusterState st{ps, StateKind::X, std::move(v), {}, {}, {}};
        return mutate_state_word(st, word).values[ps.position_in_unfrozen(poly.edge_index(1))];
    };
    RationalExpr one = RationalExpr::constant(d.vars, 1);
    RationalExpr ratio = (one + mutate_x(xhat)) / (one + mutate_x(x));
    return ratio * B(fan.zeta[0]) / (B(fan.eta[0]) * B(fan.eta[1]));
}

RationalExpr kappa(const Triangulation& t, int puncture) {
    return kappa(t, fan_at_puncture(t, puncture), d_variables(t));
}

std::set<int> punctures_met(const Triangulation& t, const IntersectingCurve& c) {
    std::set<int> out;
    std::set<int> boundary;
    for (int e : t.external_edges()) {
        auto [a, b] = t.endpoints(t.slots(e)[0]);
        boundary.insert(a);
        boundary.insert(b);
    }
    for (const auto& s : c.segments) {
        const auto& v = s.arc.visits;
        for (int x : {t.corner_vertex(v.front().tri, v.front().in.pos), t.corner_vertex(v.back().tri, v.back().out.pos)})
            if (!boundary.count(x)) out.insert(x);
    }
    return out;
}

RationalExpr pair_lamination(const Triangulation& t, const DLamination& l) {
    validate_lamination(t, l);
    DVariables d = d_variables(t);
    RationalExpr out = RationalExpr::constant(d.vars, 1);
    for (const auto& c : l.loops) out = out * loop_pairing(t, c, l.reversed).value();
    std::map<int, RationalExpr> kappas;
    for (const auto& c : l.intersecting) {
        out = out * intersecting_pairing(t, c).value();
        for (int v : punctures_met(t, c)) {
            if (!l.reversed.count(v)) continue;
            if (!kappas.count(v)) kappas.emplace(v, kappa(t, fan_at_puncture(t, v), d));
            out = out * kappas.at(v).pow(c.weight);
        }
    }
    return out;
}

std::vector<HalfInt> pairing_h(const Triangulation& t, const DLamination& l) {
    validate_lamination(t, l);
    std::vector<HalfInt> h(t.internal_edges().size(), HalfInt(0));
    auto add = [&](const PairingValue& v) {
        for (std::size_t q = 0; q < h.size(); ++q) h[q] += v.x_exponents[q];
    };
    for (const auto& c : l.loops) add(loop_pairing(t, c, l.reversed));
    for (const auto& c : l.intersecting) add(intersecting_pairing(t, c));
    return h;
}

IntegralityReport integrality(const Triangulation& t, const DLamination& l) {
    return classify_integrality(t, d_coordinates(t, l), lamination_parities(t, l), pairing_h(t, l));
}

}  // namespace dbl
