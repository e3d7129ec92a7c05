#include "doctest.h"
#include "double/pairing.hpp"
#include "gen.hpp"

#include <numeric>

using namespace dbl;

namespace {

std::vector<NormalCurve> torus_loops() {
    std::vector<NormalCurve> out;
    for (long p = 0; p <= 3; ++p)
        for (long q = 1; q <= 3; ++q)
            if (std::gcd(p, q) == 1) out.push_back(curves_from_normal(punctured_torus(), {p, q, p + q})[0]);
    return out;
}

NormalCurve annulus_core(const Triangulation& t) {
    std::vector<long> n(t.num_edges(), 0);
    for (int e : t.internal_edges()) n[e] = 1;
    return curves_from_normal(t, n)[0];
}

bool half_exponents(const RationalExpr& f) { return !f.num().integral_exponents() || !f.den().integral_exponents(); }

// The pairing computed in flip(t, k), pulled back to t by the D-mutation at k.
bool equal_after_flip(const Triangulation& t, int k, const RationalExpr& here, const RationalExpr& there) {
    ClusterState st = mutate_state(initial_state(epsilon_from_triangulation(t), StateKind::D), k);
    std::vector<RationalExpr> images = st.bvalues;
    images.insert(images.end(), st.values.begin(), st.values.end());
    RationalExpr a = here, b = there;
    // Half powers of non-monomial images are not representable; compare squares of
    // the two positive functions instead.
    if (half_exponents(a) || half_exponents(b)) {
        a = a * a;
        b = b * b;
    }
    return substitution_equals(b, images, a);
}

LoopCurve flipped_loop(const Triangulation& t, const LoopCurve& c, int k) {
    NormalCurve f = flip_curve(t, loop_from_turn_word(t, c.word), k);
    return {c.side, turn_word(flip(t, k), f), c.weight};
}

RationalExpr d_mutated_b(const Triangulation& t, const std::vector<int>& word, int edge) {
    Seed s = epsilon_from_triangulation(t);
    ClusterState st = mutate_state_word(initial_state(s, StateKind::D), word);
    return st.bvalues[s.position_in_unfrozen(edge)];
}

// Random lambda lengths A and A° that agree on external edges.
std::pair<std::vector<Rational>, std::vector<Rational>> lambda_pair(const Triangulation& t) {
    std::vector<Rational> a, ac;
    for (int e = 0; e < t.num_edges(); ++e) {
        a.push_back(Rational(gen::uniform(1, 9), gen::uniform(1, 4)));
        ac.push_back(t.is_internal(e) ? Rational(gen::uniform(1, 9), gen::uniform(1, 4)) : a.back());
    }
    return {a, ac};
}

// The D-point B = A°/A, X = A^epsilon.
std::vector<Rational> d_point(const Triangulation& t, const std::vector<Rational>& a, const std::vector<Rational>& ac) {
    Seed s = epsilon_from_triangulation(t);
    std::vector<Rational> point;
    for (int j : s.unfrozen()) point.push_back(ac[j] / a[j]);
    for (int j : s.unfrozen()) {
        Rational x = 1;
        for (int i = 0; i < s.n; ++i) {
            long e = s.entry(j, i);
            for (long r = 0; r < std::abs(e); ++r) x = e > 0 ? Rational(x * a[i]) : Rational(x / a[i]);
        }
        point.push_back(x);
    }
    return point;
}

// A vertex whose fan has N triangles, or -1.
int puncture_with_fan(const Triangulation& t, std::size_t N) {
    for (int v = 0; v < t.num_vertices(); ++v) {
        try {
            if (fan_at_puncture(t, v).zeta.size() == N) return v;
        } catch (const DomainError&) {
        }
    }
    return -1;
}

}  // namespace

TEST_CASE("monodromy traces") {
    Triangulation ann = annulus(1, 1);
    VarSet xs = indexed_vars("X", 2);
    LaurentExpr want = LaurentExpr::parse("X1^(1/2)*X2^(1/2) + X1^(-1/2)*X2^(-1/2)", xs);
    CHECK(monodromy_trace(ann, {{0, Turn::L}, {1, Turn::L}}, xs) == want);

    // Rotating the word does not change the trace.
    for (const auto& c : torus_loops()) {
        TurnWord w = turn_word(punctured_torus(), c);
        VarSet v = indexed_vars("X", 3);
        LaurentExpr tr = monodromy_trace(punctured_torus(), w, v);
        CHECK(tr.all_positive());
        for (std::size_t r = 1; r < w.size(); ++r) {
            std::rotate(w.begin(), w.begin() + 1, w.end());
            CHECK(monodromy_trace(punctured_torus(), w, v) == tr);
        }
    }

    // Around a puncture the eigenvalues are the square roots of the product of the
    // spiralling X's.
    Triangulation pp = punctured_polygon(4);
    std::vector<long> n(pp.num_edges(), 0);
    for (int e : pp.internal_edges()) n[e] = 1;
    TurnWord w = turn_word(pp, curves_from_normal(pp, n)[0]);
    VarSet v = indexed_vars("X", 4);
    LaurentExpr prod = LaurentExpr::parse("X1^(1/2)*X2^(1/2)*X3^(1/2)*X4^(1/2)", v);
    LaurentExpr inv = LaurentExpr::parse("X1^(-1/2)*X2^(-1/2)*X3^(-1/2)*X4^(-1/2)", v);
    CHECK(monodromy_trace(pp, w, v) == prod + inv);
}

TEST_CASE("annulus core loops") {
    Triangulation ann = annulus(1, 1);
    TurnWord w = turn_word(ann, annulus_core(ann));
    PairingValue one = loop_pairing(ann, {Side::Scirc, w, 1});
    CHECK(one.x_exponents == Exponent{HalfInt::from_twice(-1), HalfInt::from_twice(-1)});
    PairingValue two = loop_pairing(ann, {Side::Scirc, w, 2});
    CHECK(two.x_exponents == Exponent{HalfInt(-1), HalfInt(-1)});
    PairingValue s = loop_pairing(ann, {Side::S, w, 1});
    CHECK(s.x_exponents == Exponent{HalfInt::from_twice(1), HalfInt::from_twice(1)});
    CHECK(s.value().subtraction_free());
    CHECK(one.value().subtraction_free());
}

TEST_CASE("S°-loops are the X-trace evaluated at X-hat") {
    std::vector<std::pair<Triangulation, std::vector<NormalCurve>>> cases{
        {punctured_torus(), torus_loops()}, {annulus(1, 1), {annulus_core(annulus(1, 1))}},
        {annulus(2, 1), {annulus_core(annulus(2, 1))}}};
    for (auto& [t, loops] : cases) {
        DVariables d = d_variables(t);
        VarSet xs = indexed_vars("X", d.x.size());
        for (const auto& c : loops)
            for (long k = 1; k <= 2; ++k) {
                TurnWord w = turn_word(t, c);
                RationalExpr direct = loop_pairing(t, {Side::Scirc, w, k}).value();
                RationalExpr via = substitute_monomial(RationalExpr(monodromy_trace(t, w, xs, k)), d.xhat, d.vars);
                CHECK(direct == via);
                RationalExpr s = loop_pairing(t, {Side::S, w, k}).value();
                CHECK(s == substitute_monomial(RationalExpr(monodromy_trace(t, w, xs, k)), d.x, d.vars).inverse());
            }
    }
}

TEST_CASE("loop pairings are flip-equivariant") {
    std::vector<std::pair<Triangulation, std::vector<NormalCurve>>> cases{
        {punctured_torus(), torus_loops()}, {annulus(1, 1), {annulus_core(annulus(1, 1))}},
        {annulus(2, 1), {annulus_core(annulus(2, 1))}}, {annulus(2, 2), {annulus_core(annulus(2, 2))}}};
    int checked = 0;
    for (auto& [t, loops] : cases)
        for (const auto& c : loops)
            for (Side side : {Side::S, Side::Scirc})
                for (long k = 1; k <= 2; ++k) {
                    LoopCurve l{side, turn_word(t, c), k};
                    RationalExpr here = loop_pairing(t, l).value();
                    for (int e : t.internal_edges()) {
                        if (!flip_regular(t, e)) continue;
                        RationalExpr there = loop_pairing(flip(t, e), flipped_loop(t, l, e)).value();
                        CHECK(equal_after_flip(t, e, here, there));
                        ++checked;
                    }
                }
    CHECK(checked >= 20);
}

TEST_CASE("puncture loops") {
    Triangulation t = punctured_torus();
    auto around = curves_from_normal(t, {2, 2, 2})[0];
    TurnWord w = turn_word(t, around);
    for (Side side : {Side::S, Side::Scirc})
        for (bool rev : {false, true}) {
            std::set<int> reversed;
            if (rev) reversed.insert(*peripheral_vertex(t, around));
            PairingValue v = loop_pairing(t, {side, w, 1}, reversed);
            CHECK(v.num.is_one());
            CHECK(v.den.is_one());
            for (int e : t.internal_edges()) {
                if (!flip_regular(t, e)) continue;
                Triangulation f = flip(t, e);
                LoopCurve fl = flipped_loop(t, {side, w, 1}, e);
                std::set<int> frev;
                if (rev) frev.insert(*peripheral_vertex(f, loop_from_turn_word(f, fl.word)));
                CHECK(equal_after_flip(t, e, v.value(), loop_pairing(f, fl, frev).value()));
            }
        }
}

TEST_CASE("doubled arcs give the D-mutated B") {
    // The quadrilateral has no other internal edge, so X-hat = X and the pairing is B^-1.
    Triangulation q = polygon(4);
    NormalCurve cross = enumerate_arc_paths(q, 1)[0];
    DVariables dq = d_variables(q);
    CHECK(intersecting_pairing(q, doubled_arc(cross)).value() == dq.b[0].inverse());

    std::vector<Triangulation> ts{polygon(5), polygon(6), polygon(7), annulus(1, 1), annulus(2, 1)};
    for (const auto& t : ts)
        for (const auto& a : enumerate_arc_paths(t, 6)) {
            auto d = descend_to_edge(t, a);
            if (!d || d->word.size() > 6) continue;
            PairingValue v = intersecting_pairing(t, doubled_arc(a));
            for (const auto& h : v.x_exponents) CHECK(h.is_zero());
            RationalExpr want = d_mutated_b(t, d->word, d->edge);
            CHECK(v.value() == want);
            // Separation formula over the universal semifield with y = X and x = B.
            Seed s = epsilon_from_triangulation(t);
            PrincipalRun run = principal_run(s, d->word);
            DVariables dv = d_variables(t);
            CHECK(separation_reconstruct(run, s.position_in_unfrozen(d->edge), Semifield::qsf, dv.b, dv.x) == want);
        }
}

TEST_CASE("h solves the factorization system") {
    Triangulation t = polygon(5);
    auto arcs = enumerate_arc_paths(t, 2);
    REQUIRE(arcs.size() >= 2);
    // s = 0 gives h = 0.
    IntersectingCurve c = doubled_arc(arcs[0], 2);
    PairingValue v = intersecting_pairing(t, c);
    for (const auto& h : v.x_exponents) CHECK(h.is_zero());
    CHECK(v.value() == intersecting_pairing(t, doubled_arc(arcs[0])).value().pow(2));
    IntersectingCurve bad{{{Side::S, arcs[0]}}, 1};
    CHECK_THROWS_AS(intersecting_pairing(t, bad), DomainError);
}

TEST_CASE("kappa against lambda lengths") {
    // With A and A° = B A on every edge (B = 1 on external edges), kappa is the
    // ratio of the horocycle sums around the puncture.
    for (const auto& t : {punctured_polygon(2), punctured_polygon(3), punctured_polygon(5), punctured_torus()}) {
        int v = -1;
        for (int f = 0; f < t.num_triangles() && v < 0; ++f)
            for (int p = 0; p < 3; ++p) {
                int x = t.corner_vertex(f, p);
                bool boundary = false;
                for (int e : t.external_edges()) {
                    auto [a, b] = t.endpoints(t.slots(e)[0]);
                    boundary = boundary || a == x || b == x;
                }
                if (!boundary) v = x;
            }
        REQUIRE(v >= 0);
        RationalExpr kap = kappa(t, v);
        for (int trial = 0; trial < 5; ++trial) {
            auto [a, ac] = lambda_pair(t);
            Fan fan = fan_at_puncture(t, v);
            auto alpha = [&](const std::vector<Rational>& l) {
                Rational sum = 0;
                for (std::size_t j = 0; j < fan.zeta.size(); ++j)
                    sum += l[fan.zeta[j]] / (l[fan.eta[j]] * l[fan.eta[j + 1]]);
                return sum;
            };
            std::vector<Rational> point = d_point(t, a, ac);
            CHECK(kap.eval(point) == alpha(ac) / alpha(a));
            // Where the fan starts only matters off the image of the A-space.
            const int N = static_cast<int>(fan.zeta.size());
            for (int first = 1; first < N; ++first)
                CHECK(kappa(t, fan_at_puncture(t, v, first), d_variables(t)).eval(point) == alpha(ac) / alpha(a));
        }
        // All B = 1 makes kappa trivial.
        DVariables d = d_variables(t);
        std::vector<RationalExpr> images;
        for (std::size_t q = 0; q < d.b.size(); ++q) images.push_back(RationalExpr::constant(d.vars, 1));
        images.insert(images.end(), d.x.begin(), d.x.end());
        CHECK(substitute_monomial(kap, images, d.vars) == RationalExpr::constant(d.vars, 1));
        CHECK(kap.subtraction_free());
    }
}

TEST_CASE("kappa is independent of the triangulation") {
    // Compared at D-points coming from pairs of lambda lengths, flipped by Ptolemy.
    Triangulation t = punctured_polygon(4);
    int v = puncture_with_fan(t, 4);
    REQUIRE(v >= 0);
    RationalExpr here = kappa(t, v);
    Seed s = epsilon_from_triangulation(t);
    int checked = 0;
    for (int e : t.internal_edges()) {
        if (!flip_regular(t, e)) continue;
        Triangulation f = flip(t, e);
        int w = puncture_with_fan(f, 3);
        if (w < 0) continue;
        RationalExpr there = kappa(f, w);
        ClusterState flipped = mutate_state(initial_state(s, StateKind::A), e);
        for (int trial = 0; trial < 5; ++trial) {
            auto [a, ac] = lambda_pair(t);
            std::vector<Rational> fa, fac;
            for (const auto& x : flipped.values) {
                fa.push_back(x.eval(a));
                fac.push_back(x.eval(ac));
            }
            CHECK(here.eval(d_point(t, a, ac)) == there.eval(d_point(f, fa, fac)));
        }
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("pair_lamination") {
    Triangulation t = punctured_torus();
    DVariables d = d_variables(t);
    CHECK(pair_lamination(t, {}) == RationalExpr::constant(d.vars, 1));
    auto loops = torus_loops();
    LoopCurve a{Side::Scirc, turn_word(t, loops[0]), 1}, b{Side::Scirc, turn_word(t, loops[0]), 2};
    CHECK(pair_lamination(t, {{a, b}, {}, {}}) == loop_pairing(t, a).value() * loop_pairing(t, b).value());

    // Reversing the puncture multiplies each weight-one doubled arc meeting it by kappa.
    auto arcs = enumerate_arc_paths(t, 2);
    REQUIRE(!arcs.empty());
    int v = t.corner_vertex(0, 0);
    DLamination l{{}, {doubled_arc(arcs[0])}, {}};
    DLamination r = l;
    r.reversed.insert(v);
    CHECK(pair_lamination(t, r) == pair_lamination(t, l) * kappa(t, v));
    CHECK_THROWS_AS(pair_lamination(annulus(1, 1), {{}, {}, {0}}), DomainError);
}

TEST_CASE("integrality legs agree") {
    std::vector<std::pair<Triangulation, DLamination>> family;
    Triangulation tor = punctured_torus(), ann = annulus(1, 1);
    for (long k = 1; k <= 3; ++k) {
        for (Side side : {Side::S, Side::Scirc}) {
            for (const auto& c : torus_loops()) family.push_back({tor, {{{side, turn_word(tor, c), k}}, {}, {}}});
            family.push_back({ann, {{{side, turn_word(ann, annulus_core(ann)), k}}, {}, {}}});
        }
        for (const auto& a : enumerate_arc_paths(ann, 3))
            if (descend_to_edge(ann, a)) family.push_back({ann, {{}, {doubled_arc(a, k)}, {}}});
        family.push_back({tor, {{{Side::S, turn_word(tor, curves_from_normal(tor, {2, 2, 2})[0]), k}}, {}, {}}});
    }
    // Mixed laminations on the two sides.
    family.push_back({ann, {{{Side::S, turn_word(ann, annulus_core(ann)), 1}, {Side::Scirc, turn_word(ann, annulus_core(ann)), 1}}, {}, {}}});
    CHECK(family.size() >= 50);
    int integral = 0, fractional = 0;
    for (const auto& [t, l] : family) {
        IntegralityReport r = integrality(t, l);
        CHECK(r.consistent());
        (r.coords_integral ? integral : fractional)++;
    }
    CHECK(integral > 0);
    CHECK(fractional > 0);

    IntegralityReport core = integrality(ann, {{{Side::Scirc, turn_word(ann, annulus_core(ann)), 1}}, {}, {}});
    CHECK(!core.coords_integral);
    CHECK(!core.homology_null);
    CHECK(!core.pairing_rational);
    CHECK(integrality(ann, {{{Side::Scirc, turn_word(ann, annulus_core(ann)), 2}}, {}, {}}).coords_integral);
}
