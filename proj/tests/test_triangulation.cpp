#include "doctest.h"
#include "double/triangulation.hpp"

using namespace dbl;

namespace {

// Independent count of <i,t,j>: walk each triangle's corners, and at each corner
// the earlier edge in counterclockwise listing is clockwise from the later one.
long oracle_eps(const Triangulation& t, int i, int j) {
    long s = 0;
    for (const auto& tri : t.triangles())
        for (int p = 0; p < 3; ++p) {
            int here = tri[p], there = tri[(p + 1) % 3];
            if (here == i && there == j) ++s;
            if (here == j && there == i) --s;
        }
    return s;
}

long internal_entry(const Triangulation& t, int a, int b) {
    return epsilon_from_triangulation(t).entry(t.internal_edges()[a], t.internal_edges()[b]);
}

std::vector<Triangulation> test_surfaces() {
    std::vector<Triangulation> out;
    for (int n = 4; n <= 9; ++n)
        for (const auto& t : flip_class(polygon(n))) out.push_back(t);
    for (const auto& t : flip_class(annulus(1, 1), 50)) out.push_back(t);
    for (const auto& t : flip_class(annulus(2, 1), 50)) out.push_back(t);
    out.push_back(punctured_torus());
    out.push_back(punctured_polygon(3));
    return out;
}

}  // namespace

TEST_CASE("builders produce the intended surfaces") {
    CHECK(polygon(4).surface() == DecoratedSurface{0, 0, {4}});
    CHECK(polygon(7).internal_edges().size() == 4);
    CHECK(annulus(1, 1).surface() == DecoratedSurface{0, 0, {1, 1}});
    CHECK(annulus(3, 2).surface() == DecoratedSurface{0, 0, {2, 3}});
    CHECK(annulus(3, 2).internal_edges().size() == 5);
    CHECK(punctured_torus().surface() == DecoratedSurface{1, 1, {}});
    CHECK(punctured_polygon(4).surface() == DecoratedSurface{0, 1, {4}});
    CHECK_THROWS_AS(polygon(3), DomainError);
    CHECK_THROWS_AS(punctured_polygon(1), DomainError);
}

TEST_CASE("construction rejects malformed triangulations") {
    std::vector<Edge> e = {{1, true}, {2, false}, {3, false}};
    CHECK_THROWS_AS(Triangulation::make(e, {{1, 1, 2}}), DomainError);
    CHECK_THROWS_AS(Triangulation::make({{1, true}, {2, false}, {3, false}, {4, false}}, {{1, 2, 3}, {1, 4, 9}}),
                    DomainError);
    CHECK_THROWS_AS(Triangulation::make({{1, false}, {2, false}, {3, false}}, {{1, 2, 3}}), DomainError);
}

TEST_CASE("epsilon examples") {
    Triangulation q = polygon(4);
    CHECK(internal_entry(q, 0, 0) == 0);
    Triangulation torus = punctured_torus();
    Seed s = epsilon_from_triangulation(torus);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(s.entry(i, j) == oracle_eps(torus, i, j));
            if (i != j) CHECK(std::abs(s.entry(i, j)) == 2);
        }
    Triangulation ann = annulus(1, 1);
    CHECK(std::abs(internal_entry(ann, 0, 1)) == 2);
    CHECK(internal_entry(ann, 0, 1) == -internal_entry(ann, 1, 0));
    CHECK(internal_entry(ann, 0, 1) == oracle_eps(ann, 0, 1));
}

TEST_CASE("polygon flip classes have Catalan size") {
    std::vector<std::size_t> catalan = {2, 5, 14, 42, 132, 429};
    for (int n = 4; n <= 9; ++n) CHECK(flip_class(polygon(n)).size() == catalan[n - 4]);
}

TEST_CASE("flips are involutions and commute with matrix mutation") {
    for (const auto& t : test_surfaces()) {
        Seed s = epsilon_from_triangulation(t);
        for (int k : t.internal_edges()) {
            if (!flip_regular(t, k)) continue;
            Triangulation f = flip(t, k);
            CHECK(epsilon_from_triangulation(f) == mutate_matrix(s, k));
            CHECK(find_isomorphism(flip(f, k), t));
            CHECK(f.surface() == t.surface());
        }
    }
}

TEST_CASE("pentagon: five flips restore the triangulation with swapped labels") {
    Triangulation p = polygon(5);
    Triangulation r = flip_word(p, {0, 1, 0, 1, 0});
    auto iso = find_isomorphism(r, p);
    REQUIRE(iso);
    CHECK((*iso)[0] == 1);
    CHECK((*iso)[1] == 0);
    CHECK(!(r == p));
}

TEST_CASE("irregular flips are rejected") {
    Triangulation pp = punctured_polygon(2);
    for (int k : pp.internal_edges()) CHECK_THROWS_AS(flip(pp, k), DomainError);
    CHECK_THROWS_AS(flip(polygon(4), 1), DomainError);
}

TEST_CASE("reversed triangulation negates epsilon") {
    for (const auto& t : {polygon(6), annulus(2, 2), punctured_torus()}) {
        Seed a = epsilon_from_triangulation(t), b = epsilon_from_triangulation(t.reversed());
        for (int i = 0; i < a.n; ++i)
            for (int j = 0; j < a.n; ++j) CHECK(a.eps[i][j] == -b.eps[i][j]);
    }
}

TEST_CASE("z2_cycle_class examples") {
    Triangulation ann = annulus(1, 1);
    std::vector<int> zero(ann.num_edges(), 0);
    CHECK(z2_cycle_class(ann, zero).null_homologous);
    std::vector<int> core(ann.num_edges(), 0);
    for (int e : ann.internal_edges()) core[e] = 1;
    Z2Result r = z2_cycle_class(ann, core);
    CHECK(!r.null_homologous);
    CHECK(r.h1_rank == 1);
    std::vector<int> tri(ann.num_edges(), 0);
    for (int e : ann.triangles()[0]) tri[e] = 1;
    CHECK(z2_cycle_class(ann, tri).null_homologous);
    CHECK_THROWS_AS(z2_cycle_class(ann, {1}), DomainError);
}

TEST_CASE("H1 rank from the dual graph matches the surface formula") {
    for (const auto& t : test_surfaces()) CHECK(h1_rank(t) == t.surface().h1_rank());
    for (const auto& t : {annulus(3, 2), punctured_polygon(5), punctured_torus()})
        CHECK(h1_rank(t) == t.surface().h1_rank());
}

TEST_CASE("surface validation") {
    CHECK_THROWS_AS((DecoratedSurface{0, 3, {}}.validate()), DomainError);
    CHECK_THROWS_AS((DecoratedSurface{0, 1, {1}}.validate()), DomainError);
    CHECK_THROWS_AS((DecoratedSurface{0, 0, {3}}.validate()), DomainError);
    CHECK_NOTHROW((DecoratedSurface{0, 4, {}}.validate()));
    CHECK_NOTHROW((DecoratedSurface{1, 1, {}}.validate()));
}
