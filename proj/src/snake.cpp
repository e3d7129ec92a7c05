#include "double/snake.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>

namespace dbl {

namespace {

int next3(int p) { return (p + 1) % 3; }
int prev3(int p) { return (p + 2) % 3; }

}  // namespace

bool SnakeGraph::is_boundary(int e) const { return std::find(glued.begin(), glued.end(), e) == glued.end(); }

SnakeGraph build_snake(const Triangulation& t, const NormalCurve& arc) {
    if (arc.closed) throw DomainError("snake graphs are built for arcs");
    validate_curve(t, arc);
    const auto& v = arc.visits;
    const int d = static_cast<int>(v.size()) - 1;
    SnakeGraph g;
    if (d < 1) return g;

    // Vertices of the triangles along the arc, numbered in the lifted polygon.
    std::vector<std::array<int, 3>> pv(v.size());
    int next_pv = 3;
    pv[0] = {0, 1, 2};
    for (int j = 1; j <= d; ++j) {
        int q = v[j].in.pos, s = v[j - 1].out.pos;
        pv[j][prev3(q)] = pv[j - 1][s];
        pv[j][q] = pv[j - 1][prev3(s)];
        pv[j][next3(q)] = next_pv++;
    }

    // Snake vertex of each lifted polygon vertex in the current tile.
    std::map<int, int> sv;
    // Snake edge of the lifted side (as an endpoint pair) in the current tile.
    std::map<std::pair<int, int>, int> se;
    auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };

    for (int j = 1; j <= d; ++j) {
        std::map<int, int> nsv;
        std::map<std::pair<int, int>, int> nse;
        int kept_a = -1, kept_b = -1, kept_edge = -1;
        if (j > 1) {
            int gpos = 3 - v[j - 1].in.pos - v[j - 1].out.pos;
            kept_a = pv[j - 1][prev3(gpos)];
            kept_b = pv[j - 1][gpos];
            nsv[kept_a] = sv.at(kept_a);
            nsv[kept_b] = sv.at(kept_b);
            kept_edge = se.at(key(kept_a, kept_b));
            g.glued.push_back(kept_edge);
        }
        auto vertex = [&](int p) {
            auto it = nsv.find(p);
            if (it != nsv.end()) return it->second;
            nsv[p] = g.num_vertices;
            return g.num_vertices++;
        };
        Tile tile;
        tile.diagonal = t.edge_at({v[j - 1].tri, v[j - 1].out.pos});
        tile.reversed = (j % 2) == 0;
        auto add_side = [&](int tri_step, int pos) {
            int a = pv[tri_step][prev3(pos)], b = pv[tri_step][pos];
            int label = t.edge_at({v[tri_step].tri, pos});
            int idx;
            if (key(a, b) == key(kept_a, kept_b)) {
                idx = kept_edge;
            } else {
                idx = static_cast<int>(g.edges.size());
                g.edges.push_back({vertex(a), vertex(b), label});
            }
            nse[key(a, b)] = idx;
            tile.sides.push_back(idx);
            return idx;
        };
        for (int r = 1; r <= 2; ++r) {
            int e = add_side(j - 1, (v[j - 1].out.pos + r) % 3);
            if (j == 1 && r == 2) g.minus_side = e;
        }
        for (int r = 1; r <= 2; ++r) add_side(j, (v[j].in.pos + r) % 3);
        g.tiles.push_back(tile);
        sv = std::move(nsv);
        se = std::move(nse);
    }
    return g;
}

std::vector<Matching> perfect_matchings(const SnakeGraph& g) {
    struct Partial {
        Matching m;
        std::vector<char> covered;
    };
    std::vector<Partial> states{{{}, std::vector<char>(g.num_vertices, 0)}};
    if (g.tiles.empty()) return {{}};
    for (std::size_t j = 0; j < g.tiles.size(); ++j) {
        std::vector<int> own;
        for (int e : g.tiles[j].sides)
            if (j == 0 || e != g.glued[j - 1]) own.push_back(e);
        std::vector<int> open;  // vertices that later tiles can still cover
        if (j + 1 < g.tiles.size()) open = {g.edges[g.glued[j]].u, g.edges[g.glued[j]].v};
        std::vector<int> verts;
        for (int e : g.tiles[j].sides) verts.insert(verts.end(), {g.edges[e].u, g.edges[e].v});
        std::vector<Partial> next;
        for (const auto& st : states)
            for (unsigned mask = 0; mask < (1u << own.size()); ++mask) {
                Partial p = st;
                bool ok = true;
                for (std::size_t i = 0; i < own.size() && ok; ++i) {
                    if (!(mask >> i & 1)) continue;
                    const auto& e = g.edges[own[i]];
                    if (p.covered[e.u] || p.covered[e.v]) ok = false;
                    p.covered[e.u] = p.covered[e.v] = 1;
                    p.m.push_back(own[i]);
                }
                for (int x : verts)
                    if (ok && !p.covered[x] && std::find(open.begin(), open.end(), x) == open.end()) ok = false;
                if (ok) next.push_back(std::move(p));
            }
        states = std::move(next);
    }
    std::vector<Matching> out;
    for (auto& st : states) {
        std::sort(st.m.begin(), st.m.end());
        out.push_back(std::move(st.m));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Matching> perfect_matchings_brute_force(const SnakeGraph& g) {
    const int n = static_cast<int>(g.edges.size());
    const int k = g.num_vertices / 2;
    std::vector<Matching> out;
    std::vector<char> pick(n, 0);
    std::fill(pick.begin(), pick.begin() + k, 1);
    do {
        std::vector<char> seen(g.num_vertices, 0);
        bool ok = true;
        Matching m;
        for (int e = 0; e < n && ok; ++e) {
            if (!pick[e]) continue;
            if (seen[g.edges[e].u] || seen[g.edges[e].v]) ok = false;
            seen[g.edges[e].u] = seen[g.edges[e].v] = 1;
            m.push_back(e);
        }
        if (ok) out.push_back(m);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Alternate edges of the boundary cycle starting from `first`.
Matching boundary_matching(const SnakeGraph& g, int first) {
    std::vector<std::vector<int>> at(g.num_vertices);
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
        if (g.is_boundary(e)) {
            at[g.edges[e].u].push_back(e);
            at[g.edges[e].v].push_back(e);
        }
    Matching m;
    int e = first, x = g.edges[first].v;
    bool take = true;
    do {
        if (take) m.push_back(e);
        take = !take;
        int nxt = at[x][0] == e ? at[x][1] : at[x][0];
        x = g.edges[nxt].u == x ? g.edges[nxt].v : g.edges[nxt].u;
        e = nxt;
    } while (e != first);
    std::sort(m.begin(), m.end());
    return m;
}

}  // namespace

Matching minimal_matching(const SnakeGraph& g) {
    if (g.tiles.empty()) return {};
    return boundary_matching(g, g.minus_side);
}

Matching maximal_matching(const SnakeGraph& g) {
    if (g.tiles.empty()) return {};
    Matching lo = minimal_matching(g);
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
        if (g.is_boundary(e) && !std::binary_search(lo.begin(), lo.end(), e)) return boundary_matching(g, e);
    throw std::logic_error("snake has no second boundary matching");
}

std::vector<bool> height(const SnakeGraph& g, const Matching& p) {
    Matching lo = minimal_matching(g);
    std::vector<char> diff(g.edges.size(), 0);
    for (int e : lo) diff[e] ^= 1;
    for (int e : p) diff[e] ^= 1;
    std::vector<bool> in(g.tiles.size());
    std::vector<char> count(g.edges.size(), 0);
    for (std::size_t j = 0; j < g.tiles.size(); ++j) {
        for (int e : g.tiles[j].sides)
            if (g.is_boundary(e)) {
                in[j] = diff[e];
                break;
            }
        if (in[j])
            for (int e : g.tiles[j].sides) count[e] ^= 1;
    }
    if (count != diff) throw DomainError("matching does not differ from the minimal one by a union of tiles");
    return in;
}

ArcExpansion expand_arc(const Triangulation& t, const NormalCurve& arc) {
    Seed s = epsilon_from_triangulation(t);
    auto J = s.unfrozen();
    const std::size_t m = J.size();
    auto labels = default_labels(s.n);
    std::vector<std::string> names;
    for (int j : J) names.push_back("x" + labels[j]);
    std::vector<std::string> ynames;
    for (int j : J) ynames.push_back("y" + labels[j]);
    VarSet yvars = make_vars(ynames);
    names.insert(names.end(), ynames.begin(), ynames.end());

    ArcExpansion out;
    out.xy = make_vars(names);
    out.g.assign(m, 0);
    NormalCurve a = reduce(t, arc);
    if (auto e = curve_as_edge(t, a)) {
        out.num_matchings = 1;
        out.fpoly = LaurentExpr::constant(yvars, 1);
        if (t.is_internal(*e)) {
            int p = s.position_in_unfrozen(*e);
            out.laurent = RationalExpr::variable(out.xy, p);
            out.g[p] = 1;
        } else {
            out.laurent = RationalExpr::constant(out.xy, 1);
        }
        return out;
    }

    SnakeGraph g = build_snake(t, a);
    auto ms = perfect_matchings(g);
    out.num_matchings = ms.size();
    LaurentExpr num(out.xy), f(yvars);
    Exponent cross(2 * m, HalfInt(0));
    for (const auto& tile : g.tiles) cross[s.position_in_unfrozen(tile.diagonal)] += HalfInt(1);
    for (const auto& p : ms) {
        Exponent e(2 * m, HalfInt(0)), ye(m, HalfInt(0));
        for (int k : p) {
            int label = g.edges[k].label;
            if (t.is_internal(label)) e[s.position_in_unfrozen(label)] += HalfInt(1);
        }
        auto h = height(g, p);
        for (std::size_t j = 0; j < h.size(); ++j)
            if (h[j]) {
                int q = s.position_in_unfrozen(g.tiles[j].diagonal);
                e[m + q] += HalfInt(1);
                ye[q] += HalfInt(1);
            }
        num.add_term(e, 1);
        f.add_term(ye, 1);
    }
    Exponent inv(2 * m, HalfInt(0));
    for (std::size_t i = 0; i < 2 * m; ++i) inv[i] = -cross[i];
    out.laurent = RationalExpr(num.shift(inv));
    out.fpoly = f;
    Matching lo = minimal_matching(g);
    for (int k : lo) {
        int label = g.edges[k].label;
        if (t.is_internal(label)) out.g[s.position_in_unfrozen(label)] += 1;
    }
    for (std::size_t i = 0; i < m; ++i) out.g[i] -= cross[i].to_int();
    return out;
}

}  // namespace dbl
