#include "doctest.h"
#include "gen.hpp"

using namespace dbl;

namespace {

Matrix M(std::vector<std::vector<long>> rows) {
    Matrix m;
    for (auto& r : rows) {
        std::vector<Rational> row;
        for (long v : r) row.push_back(v);
        m.push_back(row);
    }
    return m;
}

// Independent evaluation of the matrix mutation formula, entry by entry.
Matrix oracle_mutation(const Matrix& e, int k) {
    int n = static_cast<int>(e.size());
    Matrix r = e;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == k || j == k) {
                r[i][j] = -e[i][j];
                continue;
            }
            Rational a = e[i][k], b = e[k][j];
            Rational corr = 0;
            if (a > 0 && b > 0) corr = a * b;
            if (a < 0 && b < 0) corr = -a * b;
            r[i][j] = e[i][j] + corr;
        }
    return r;
}

std::vector<Rational> tpoint(std::size_t n) { return gen::point(n, 6, 4); }

}  // namespace

TEST_CASE("mutate_matrix examples") {
    Seed s = Seed::make(M({{0, 1}, {-1, 0}}));
    CHECK(mutate_matrix(s, 0).eps == M({{0, -1}, {1, 0}}));
    Seed t = Seed::make(M({{0, 1, 0}, {-1, 0, 1}, {0, -1, 0}}));
    CHECK(mutate_matrix(t, 1).eps == M({{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}}));
    Seed f = Seed::make(M({{0, 1}, {-1, 0}}), {false, true});
    CHECK_THROWS_AS(mutate_matrix(f, 1), DomainError);
}

TEST_CASE("matrix mutation matches the sign-case oracle and is an involution") {
    for (int it = 0; it < 200; ++it) {
        Seed s = gen::seed(static_cast<int>(gen::uniform(1, 6)));
        int k = static_cast<int>(gen::uniform(0, s.n - 1));
        Seed m = mutate_matrix(s, k);
        CHECK(m.eps == oracle_mutation(s.eps, k));
        CHECK(mutate_matrix(m, k) == s);
        CHECK_NOTHROW(m.validate());
    }
}

TEST_CASE("seed validation") {
    CHECK_THROWS_AS(Seed::make(M({{0, 1}, {1, 0}})), DomainError);
    Matrix half = {{0, Rational(1, 2)}, {Rational(-1, 2), 0}};
    CHECK_THROWS_AS(Seed::make(half), DomainError);
    CHECK_NOTHROW(Seed::make(half, {true, true}));
}

TEST_CASE("mutate_state examples") {
    Seed s = Seed::make(M({{0, 1}, {-1, 0}}));
    ClusterState x = initial_state(s, StateKind::X);
    VarSet vs = x.values[0].vars();
    ClusterState y = mutate_state(x, 0);
    CHECK(y.values[0] == RationalExpr::parse("X1^-1", vs));
    CHECK(y.values[1] == RationalExpr::parse("X2 + X1*X2", vs));

    // Quadrilateral: one unfrozen index, zero row.
    Seed q = Seed::make(M({{0, 0, 0}, {0, 0, 1}, {0, -1, 0}}), {false, true, true});
    ClusterState d = initial_state(q, StateKind::D);
    ClusterState d1 = mutate_state(d, 0);
    VarSet dv = d.values[0].vars();
    CHECK(d1.bvalues[0] == RationalExpr::parse("B1^-1", dv));
    CHECK(d1.values[0] == RationalExpr::parse("X1^-1", dv));

    ClusterState z = tropical_state(q, StateKind::TropD, {Rational(0)}, {Rational(0)});
    CHECK(mutate_state(z, 0).tbvalues[0] == 0);
    CHECK_THROWS_AS(mutate_state(d, 1), DomainError);
}

TEST_CASE("every mutation kind is an involution") {
    for (int it = 0; it < 60; ++it) {
        int n = static_cast<int>(gen::uniform(1, 4));
        Seed s = gen::seed(n, 3, false, static_cast<int>(gen::uniform(0, 1)));
        auto J = s.unfrozen();
        if (J.empty()) continue;
        int k = J[gen::uniform(0, static_cast<long>(J.size()) - 1)];
        for (StateKind kind : {StateKind::A, StateKind::X, StateKind::D}) {
            ClusterState st = initial_state(s, kind);
            CHECK(mutate_state(mutate_state(st, k), k) == st);
        }
        ClusterState ta = tropical_state(s, StateKind::TropA, tpoint(n));
        CHECK(mutate_state(mutate_state(ta, k), k) == ta);
        ClusterState tx = tropical_state(s, StateKind::TropX, tpoint(J.size()));
        CHECK(mutate_state(mutate_state(tx, k), k) == tx);
        ClusterState td = tropical_state(s, StateKind::TropD, tpoint(J.size()), tpoint(J.size()));
        CHECK(mutate_state(mutate_state(td, k), k) == td);
    }
}

TEST_CASE("tropical rules are the tropicalization of the multiplicative rules") {
    for (int it = 0; it < 60; ++it) {
        int n = static_cast<int>(gen::uniform(1, 4));
        Seed s = gen::seed(n);
        auto J = s.unfrozen();
        int k = static_cast<int>(gen::uniform(0, n - 1));
        std::size_t m = J.size();
        auto a = tpoint(n), x = tpoint(m), b = tpoint(m);

        ClusterState A1 = mutate_state(initial_state(s, StateKind::A), k);
        ClusterState a1 = mutate_state(tropical_state(s, StateKind::TropA, a), k);
        for (int i = 0; i < n; ++i) CHECK(trop_eval(A1.values[i], a) == a1.tvalues[i]);

        ClusterState X1 = mutate_state(initial_state(s, StateKind::X), k);
        ClusterState x1 = mutate_state(tropical_state(s, StateKind::TropX, x), k);
        for (std::size_t p = 0; p < m; ++p) CHECK(trop_eval(X1.values[p], x) == x1.tvalues[p]);

        ClusterState D1 = mutate_state(initial_state(s, StateKind::D), k);
        ClusterState d1 = mutate_state(tropical_state(s, StateKind::TropD, x, b), k);
        std::vector<Rational> bx = b;
        bx.insert(bx.end(), x.begin(), x.end());
        for (std::size_t p = 0; p < m; ++p) {
            CHECK(trop_eval(D1.values[p], bx) == d1.tvalues[p]);
            CHECK(trop_eval(D1.bvalues[p], bx) == d1.tbvalues[p]);
        }
    }
}

TEST_CASE("Y-pattern over Trop: rank one principal coefficients") {
    VarSet vs = make_vars({"x1", "y1"});
    YSeed ys;
    ys.semifield = Semifield::trop;
    ys.b = {{0}};
    ys.ambient = vs;
    ys.x = {RationalExpr::variable(vs, 0)};
    ys.y = {RationalExpr::variable(vs, 1)};
    YSeed r = mutate_with_coefficients(ys, 0);
    CHECK(r.x[0] == RationalExpr::parse("(y1 + 1)/(x1)", vs));
    CHECK(r.y[0] == RationalExpr::parse("y1^-1", vs));
    CHECK(mutate_with_coefficients(r, 0) == ys);
}

TEST_CASE("Y-pattern over Q_sf reproduces the D-rule") {
    for (int it = 0; it < 40; ++it) {
        Seed s = gen::seed(static_cast<int>(gen::uniform(1, 3)), 2);
        ClusterState d = initial_state(s, StateKind::D);
        YSeed ys = yseed_from_d_state(d);
        auto J = s.unfrozen();
        std::vector<int> word;
        for (int r = 0; r < 4; ++r) word.push_back(static_cast<int>(gen::uniform(0, J.size() - 1)));
        for (int p : word) {
            d = mutate_state(d, J[p]);
            ys = mutate_with_coefficients(ys, p);
            for (std::size_t q = 0; q < J.size(); ++q) {
                CHECK(ys.x[q] == d.bvalues[q]);
                CHECK(ys.y[q] == d.values[q]);
            }
            CHECK(ys.b == b_from_seed(d.seed));
        }
        YSeed back = mutate_with_coefficients(mutate_with_coefficients(ys, 0), 0);
        CHECK(back == ys);
    }
}

TEST_CASE("semifield membership is enforced") {
    VarSet vs = make_vars({"x1", "y1"});
    YSeed ys;
    ys.semifield = Semifield::trop;
    ys.b = {{0}};
    ys.x = {RationalExpr::variable(vs, 0)};
    ys.y = {RationalExpr::parse("1 + y1", vs)};
    CHECK_THROWS_AS(mutate_with_coefficients(ys, 0), DomainError);
    ys.semifield = Semifield::qsf;
    ys.y = {RationalExpr::parse("1 - y1", vs)};
    CHECK_THROWS_AS(mutate_with_coefficients(ys, 0), DomainError);
}

TEST_CASE("principal_run examples") {
    Seed one = Seed::make(M({{0}}));
    PrincipalRun r = principal_run(one, {0});
    CHECK(r.cluster[0].fpoly == LaurentExpr::parse("1 + y1", r.yvars));
    CHECK(r.cluster[0].g == std::vector<long>{-1});

    Seed a2 = Seed::make(M({{0, 1}, {-1, 0}}));
    PrincipalRun e = principal_run(a2, {});
    for (int p = 0; p < 2; ++p) {
        CHECK(e.cluster[p].fpoly.is_one());
        std::vector<long> ep(2, 0);
        ep[p] = 1;
        CHECK(e.cluster[p].g == ep);
    }

    PrincipalRun pent = principal_run(a2, {0, 1, 0, 1, 0});
    CHECK(pent.cluster[0].xpoly == LaurentExpr::parse("x2", pent.xy));
    CHECK(pent.cluster[1].xpoly == LaurentExpr::parse("x1", pent.xy));
    CHECK(pent.final_b[0][1] == pent.b0[1][0]);
    CHECK(pent.final_b[1][0] == pent.b0[0][1]);
    CHECK(pent.c_vectors[0] == std::vector<long>{0, 1});
    CHECK(pent.c_vectors[1] == std::vector<long>{1, 0});
    Seed back = apply_word(a2, {0, 1, 0, 1, 0});
    CHECK(back.eps[0][1] == a2.eps[1][0]);
}

TEST_CASE("principal runs satisfy the Laurent property and homogeneity") {
    for (int it = 0; it < 30; ++it) {
        Seed s = gen::seed(static_cast<int>(gen::uniform(1, 3)), 2);
        std::vector<int> word;
        for (int r = 0; r < 5; ++r) word.push_back(static_cast<int>(gen::uniform(0, s.n - 1)));
        PrincipalRun run = principal_run(s, word);
        for (const auto& rec : run.history) {
            CHECK(rec.xpoly.all_positive());
            CHECK(rec.xpoly.integral_exponents());
            const std::size_t m = run.b0.size();
            for (const auto& [e, c] : rec.xpoly.terms())
                for (std::size_t j = 0; j < m; ++j) CHECK(e[m + j] >= HalfInt(0));
            CHECK(rec.fpoly.all_positive());
        }
    }
}

TEST_CASE("separation_reconstruct examples") {
    Seed one = Seed::make(M({{0}}));
    PrincipalRun r = principal_run(one, {0});
    VarSet xv = make_vars({"x1"});
    RationalExpr x1 = RationalExpr::variable(xv, 0);
    RationalExpr out = separation_reconstruct(r, 0, Semifield::trivial, {x1}, {RationalExpr::constant(xv, 1)});
    CHECK(out == RationalExpr::parse("(2)/(x1)", xv));

    Seed q = Seed::make(M({{0, 0, 0}, {0, 0, 1}, {0, -1, 0}}), {false, true, true});
    PrincipalRun rq = principal_run(q, {0});
    ClusterState d = initial_state(q, StateKind::D);
    RationalExpr b = separation_reconstruct(rq, 0, Semifield::qsf, d.bvalues, d.values);
    CHECK(b == RationalExpr::parse("B1^-1", d.values[0].vars()));

    PrincipalRun id = principal_run(q, {});
    CHECK(separation_reconstruct(id, 0, Semifield::qsf, d.bvalues, d.values) == d.bvalues[0]);
}

TEST_CASE("separation formula matches direct mutation on random words") {
    for (int it = 0; it < 25; ++it) {
        Seed s = gen::seed(static_cast<int>(gen::uniform(1, 3)), 2);
        std::vector<int> word;
        for (int r = 0; r < 4; ++r) word.push_back(static_cast<int>(gen::uniform(0, s.n - 1)));
        PrincipalRun run = principal_run(s, word);
        ClusterState d = mutate_state_word(initial_state(s, StateKind::D), word);
        ClusterState d0 = initial_state(s, StateKind::D);
        for (int l = 0; l < s.n; ++l)
            CHECK(separation_reconstruct(run, l, Semifield::qsf, d0.bvalues, d0.values) == d.bvalues[l]);
    }
}

TEST_CASE("canonical maps") {
    Seed z = Seed::make(M({{0, 0}, {0, 0}}));
    ClusterState a = initial_state(z, StateKind::A);
    for (const auto& v : p_map(z, a.values)) CHECK(v.str() == "1");
    DPoint diag = phi_map(z, a.values, a.values);
    for (const auto& v : diag.b) CHECK(v.str() == "1");

    Seed q = Seed::make(M({{0, 0, 0}, {0, 0, 1}, {0, -1, 0}}), {false, true, true});
    ClusterState d = initial_state(q, StateKind::D);
    auto [xs, hat] = pi_map(q, DPoint{d.bvalues, d.values});
    CHECK(hat[0] == d.values[0]);
    CHECK_THROWS_AS(p_map(q, {a.values[0]}), DomainError);
}

TEST_CASE("pi of phi returns p of both factors") {
    for (int it = 0; it < 30; ++it) {
        Seed s = gen::seed(static_cast<int>(gen::uniform(2, 4)), 2, true, static_cast<int>(gen::uniform(0, 1)));
        std::vector<std::string> names;
        for (int i = 0; i < s.n; ++i) names.push_back("A" + std::to_string(i + 1));
        for (int i = 0; i < s.n; ++i) names.push_back("C" + std::to_string(i + 1));
        VarSet vs = make_vars(names);
        std::vector<RationalExpr> a, ac;
        for (int i = 0; i < s.n; ++i) {
            a.push_back(RationalExpr::variable(vs, i));
            // Frozen (boundary) coordinates are shared by the two copies.
            ac.push_back(s.is_frozen(i) ? a.back() : RationalExpr::variable(vs, s.n + i));
        }
        auto [x, hat] = pi_map(s, phi_map(s, a, ac));
        auto pa = p_map(s, a), pc = p_map(s, ac);
        for (std::size_t q = 0; q < x.size(); ++q) {
            CHECK(x[q] == pa[q]);
            CHECK(hat[q] == pc[q]);
        }
    }
}
