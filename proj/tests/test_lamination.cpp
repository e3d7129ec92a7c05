#include "doctest.h"
#include "double/pairing.hpp"
#include "gen.hpp"

#include <numeric>

using namespace dbl;

namespace {

// Sides of the quadrilateral around internal edge k: {s1, s2, s3, s4} in
// counterclockwise order starting after k in its first triangle. s1, s3 and s2, s4
// are the opposite pairs.
std::array<int, 4> quad_sides(const Triangulation& t, int k) {
    Slot a = t.slots(k)[0], b = t.slots(k)[1];
    return {t.edge_at({a.tri, (a.pos + 1) % 3}), t.edge_at({a.tri, (a.pos + 2) % 3}),
            t.edge_at({b.tri, (b.pos + 1) % 3}), t.edge_at({b.tri, (b.pos + 2) % 3})};
}

std::vector<Rational> random_vec(std::size_t n) { return gen::point(n, 4, 2); }

Rational max2(const Rational& a, const Rational& b) { return a < b ? b : a; }

NormalCurve annulus_core(const Triangulation& t) {
    std::vector<long> n(t.num_edges(), 0);
    for (int e : t.internal_edges()) n[e] = 1;
    return curves_from_normal(t, n)[0];
}

std::vector<Triangulation> small_triangulations() {
    return {polygon(5), polygon(6), annulus(1, 1), annulus(2, 1), punctured_torus(), punctured_polygon(3)};
}

}  // namespace

TEST_CASE("zero coordinates stay zero under flips") {
    for (const auto& t : small_triangulations()) {
        const std::size_t J = t.internal_edges().size();
        for (int k : t.internal_edges()) {
            if (!flip_regular(t, k)) continue;
            DLamCoords d{std::vector<Rational>(J, 0), std::vector<Rational>(J, 0), {}};
            DLamCoords f = transform_coords_under_flip(t, d, k);
            CHECK(std::all_of(f.b.begin(), f.b.end(), [](const Rational& r) { return r == 0; }));
            CHECK(std::all_of(f.x.begin(), f.x.end(), [](const Rational& r) { return r == 0; }));
        }
    }
}

TEST_CASE("a-coordinates follow the quadrilateral max rule") {
    for (const auto& t : small_triangulations())
        for (int k : t.internal_edges()) {
            if (!flip_regular(t, k)) continue;
            auto s = quad_sides(t, k);
            for (int trial = 0; trial < 10; ++trial) {
                ALamCoords c{random_vec(t.num_edges())};
                ALamCoords f = transform_coords_under_flip(t, c, k);
                Rational want = max2(c.a[s[0]] + c.a[s[2]], c.a[s[1]] + c.a[s[3]]) - c.a[k];
                CHECK(f.a[k] == want);
                for (int e = 0; e < t.num_edges(); ++e)
                    if (e != k) CHECK(f.a[e] == c.a[e]);
            }
        }
}

TEST_CASE("b-coordinates follow the quadrilateral max rule") {
    // b vanishes on external edges. The opposite pair on which epsilon_{k,i} > 0
    // carries x_k.
    for (const auto& t : small_triangulations()) {
        Seed seed = epsilon_from_triangulation(t);
        for (int k : t.internal_edges()) {
            if (!flip_regular(t, k)) continue;
            auto s = quad_sides(t, k);
            const int pk = seed.position_in_unfrozen(k);
            for (int trial = 0; trial < 10; ++trial) {
                const std::size_t J = t.internal_edges().size();
                DLamCoords c{random_vec(J), random_vec(J), {}};
                auto b = [&](int e) { return t.is_internal(e) ? c.b[seed.position_in_unfrozen(e)] : Rational(0); };
                long sign = seed.entry(k, s[0]);
                Rational xk = c.x[pk];
                Rational pos = b(s[0]) + b(s[2]), neg = b(s[1]) + b(s[3]);
                if (sign < 0) std::swap(pos, neg);
                Rational want = max2(xk + pos, neg) - max2(Rational(0), xk) - c.b[pk];
                DLamCoords f = transform_coords_under_flip(t, c, k);
                CHECK(f.b[pk] == want);
                CHECK(f.x[pk] == -xk);
            }
        }
    }
}

TEST_CASE("coordinate flips are involutions and match trop_eval of the flip rules") {
    for (const auto& t : small_triangulations()) {
        const std::size_t J = t.internal_edges().size();
        Seed seed = epsilon_from_triangulation(t);
        for (int k : t.internal_edges()) {
            if (!flip_regular(t, k)) continue;
            Triangulation f = flip(t, k);
            ClusterState dstate = mutate_state(initial_state(seed, StateKind::D), k);
            ClusterState xstate = mutate_state(initial_state(seed, StateKind::X), k);
            ClusterState astate = mutate_state(initial_state(seed, StateKind::A), k);
            for (int trial = 0; trial < 5; ++trial) {
                DLamCoords d{random_vec(J), random_vec(J), {}};
                DLamCoords d1 = transform_coords_under_flip(t, d, k);
                DLamCoords d2 = transform_coords_under_flip(f, d1, k);
                CHECK(d2.b == d.b);
                CHECK(d2.x == d.x);
                std::vector<Rational> p = d.point();
                for (std::size_t q = 0; q < J; ++q) {
                    CHECK(trop_eval(dstate.bvalues[q], p) == d1.b[q]);
                    CHECK(trop_eval(dstate.values[q], p) == d1.x[q]);
                }

                XLamCoords x{random_vec(J)};
                XLamCoords x1 = transform_coords_under_flip(t, x, k);
                CHECK(transform_coords_under_flip(f, x1, k).x == x.x);
                for (std::size_t q = 0; q < J; ++q) CHECK(trop_eval(xstate.values[q], x.x) == x1.x[q]);

                ALamCoords a{random_vec(t.num_edges())};
                ALamCoords a1 = transform_coords_under_flip(t, a, k);
                CHECK(transform_coords_under_flip(f, a1, k).a == a.a);
                for (int e = 0; e < t.num_edges(); ++e) CHECK(trop_eval(astate.values[e], a.a) == a1.a[e]);
            }
        }
    }
}

TEST_CASE("integral a-points stay integral under flips") {
    for (const auto& t : small_triangulations()) {
        int integral = 0;
        for (int trial = 0; trial < 40; ++trial) {
            ALamCoords c;
            for (int e = 0; e < t.num_edges(); ++e) c.a.push_back(Rational(gen::uniform(0, 6), 2));
            bool before = c.integral(t);
            integral += before;
            for (int k : t.internal_edges()) {
                if (!flip_regular(t, k)) continue;
                CHECK(transform_coords_under_flip(t, c, k).integral(flip(t, k)) == before);
            }
        }
        CHECK(integral > 0);
    }
    // Multicurves always give integral points.
    Triangulation tor = punctured_torus();
    CHECK(a_coordinates(tor, {1, 2, 3}).integral(tor));
    CHECK(!ALamCoords{{Rational(1, 2), 0, 0}}.integral(tor));
    CHECK_THROWS_AS(a_coordinates(tor, {1, 2}), DomainError);
}

TEST_CASE("d-coordinates of simple laminations") {
    Triangulation ann = annulus(1, 1);
    TurnWord core = turn_word(ann, annulus_core(ann));
    DLamCoords s = d_coordinates(ann, {{{Side::S, core, 1}}, {}, {}});
    DLamCoords so = d_coordinates(ann, {{{Side::Scirc, core, 1}}, {}, {}});
    for (std::size_t q = 0; q < 2; ++q) {
        CHECK(s.b[q] == Rational(-1, 2));
        CHECK(so.b[q] == Rational(1, 2));
        CHECK(so.x[q] == 0);
    }
    CHECK(s.x == shear_coordinates(ann, {annulus_core(ann)}));
    CHECK(!s.integral());
    CHECK(d_coordinates(ann, {{{Side::S, core, 2}}, {}, {}}).integral());

    // A doubled edge sits at x = -k on that edge.
    Triangulation p = polygon(5);
    Seed seed = epsilon_from_triangulation(p);
    int e = p.internal_edges()[0];
    DLamCoords de = d_coordinates(p, {{}, {doubled_arc(edge_curve(p, e), 3)}, {}});
    for (std::size_t q = 0; q < de.x.size(); ++q) {
        CHECK(de.b[q] == 0);
        CHECK(de.x[q] == (static_cast<int>(q) == seed.position_in_unfrozen(e) ? -3 : 0));
    }
    CHECK(d_coordinates(p, {}).integral());
}

TEST_CASE("d-coordinates of doubled arcs agree with the tropical pairing") {
    // Carrying the arc back through flips gives the same point as reading it off
    // after the flips.
    for (const auto& t : {polygon(6), annulus(1, 1), annulus(2, 1)})
        for (const auto& a : enumerate_arc_paths(t, 3)) {
            if (!descend_to_edge(t, a)) continue;
            DLamCoords here = d_coordinates(t, {{}, {doubled_arc(a)}, {}});
            for (int k : t.internal_edges()) {
                if (!flip_regular(t, k)) continue;
                Triangulation f = flip(t, k);
                NormalCurve fa = reduce(f, flip_curve(t, a, k));
                DLamCoords there = d_coordinates(f, {{}, {doubled_arc(fa)}, {}});
                DLamCoords moved = transform_coords_under_flip(t, here, k);
                CHECK(moved.b == there.b);
                CHECK(moved.x == there.x);
            }
        }
}

TEST_CASE("arc_from_word") {
    Triangulation p = polygon(6);
    for (const auto& a : enumerate_arc_paths(p, 3)) {
        NormalCurve back = arc_from_word(p, crossing_word(p, a));
        CHECK(crossing_word(p, back) == crossing_word(p, a));
    }
    CHECK_THROWS_AS(arc_from_word(p, {}), DomainError);
    CHECK_THROWS_AS(arc_from_word(p, {p.external_edges()[0]}), DomainError);
    auto J = p.internal_edges();
    // The first and last diagonals of the fan share no triangle.
    CHECK_THROWS_AS(arc_from_word(p, {J.front(), J.back()}), DomainError);
}

TEST_CASE("lamination validation") {
    Triangulation ann = annulus(1, 1);
    auto arcs = enumerate_arc_paths(ann, 2);
    REQUIRE(!arcs.empty());
    TurnWord core = turn_word(ann, annulus_core(ann));
    CHECK_THROWS_AS(validate_lamination(ann, {{{Side::S, core, 0}}, {}, {}}), DomainError);
    CHECK_THROWS_AS(validate_lamination(ann, {{}, {{{{Side::S, arcs[0]}}, 1}}, {}}), DomainError);
    CHECK_THROWS_AS(validate_lamination(ann, {{}, {{{{Side::Scirc, reverse(arcs[0])}, {Side::S, arcs[0]}}, 1}}, {}}),
                    DomainError);
    CHECK_THROWS_AS(validate_lamination(ann, {{}, {}, {0}}), DomainError);
    validate_lamination(ann, {{{Side::S, core, 2}}, {doubled_arc(arcs[0])}, {}});
    CHECK(parse_side("S°") == Side::Scirc);
    CHECK(side_name(Side::Scirc) == "S°");
    CHECK_THROWS_AS(parse_side("T"), DomainError);
}

TEST_CASE("integrality examples") {
    Triangulation ann = annulus(1, 1);
    TurnWord core = turn_word(ann, annulus_core(ann));
    IntegralityReport empty = integrality(ann, {});
    CHECK(empty.coords_integral);
    CHECK(empty.homology_null);
    CHECK(empty.pairing_rational);

    DLamination one{{{Side::Scirc, core, 1}}, {}, {}};
    CHECK(lamination_parities(ann, one) == std::vector<int>{1, 1, 0, 0});
    IntegralityReport r1 = integrality(ann, one);
    CHECK(!r1.coords_integral);
    CHECK(!r1.homology_null);
    CHECK(!r1.pairing_rational);

    DLamination two{{{Side::Scirc, core, 2}}, {}, {}};
    CHECK(lamination_parities(ann, two) == std::vector<int>{0, 0, 0, 0});
    IntegralityReport r2 = integrality(ann, two);
    CHECK(r2.coords_integral);
    CHECK(r2.homology_null);
    CHECK(r2.pairing_rational);
}
