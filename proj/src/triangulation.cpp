#include "double/triangulation.hpp"

#include <algorithm>
#include <boost/dynamic_bitset.hpp>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

namespace dbl {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

int prev3(int p) { return (p + 2) % 3; }
int next3(int p) { return (p + 1) % 3; }

}  // namespace

// ---------------------------------------------------------------- surfaces

void DecoratedSurface::validate() const {
    if (genus < 0 || punctures < 0) throw DomainError("surface has negative genus or puncture count");
    for (int m : boundary)
        if (m < 1) throw DomainError("boundary component without marked points");
    if (genus == 0 && boundary.empty() && punctures <= 3)
        throw DomainError("sphere with at most three punctures admits no ideal triangulation");
    if (genus == 0 && boundary.size() == 1) {
        int m = boundary[0];
        if (m == 1 && punctures <= 1) throw DomainError("monogon with at most one puncture is excluded");
        if ((m == 2 || m == 3) && punctures == 0) throw DomainError("unpunctured bigon or triangle is excluded");
    }
}

int DecoratedSurface::h1_rank() const {
    return 2 * genus + std::max(0, punctures + static_cast<int>(boundary.size()) - 1);
}

std::string DecoratedSurface::str() const {
    std::ostringstream os;
    os << "genus " << genus << ", punctures " << punctures << ", boundary [";
    for (std::size_t i = 0; i < boundary.size(); ++i) os << (i ? "," : "") << boundary[i];
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------- triangulations

Triangulation Triangulation::make(std::vector<Edge> edges, const std::vector<std::array<int, 3>>& triangles) {
    Triangulation t;
    t.edges_ = std::move(edges);
    std::map<int, int> index;
    for (std::size_t e = 0; e < t.edges_.size(); ++e)
        if (!index.emplace(t.edges_[e].id, static_cast<int>(e)).second)
            throw DomainError("duplicate edge id " + std::to_string(t.edges_[e].id));
    for (const auto& tri : triangles) {
        std::array<int, 3> r;
        for (int p = 0; p < 3; ++p) {
            auto it = index.find(tri[p]);
            if (it == index.end()) throw DomainError("triangle references unknown edge id " + std::to_string(tri[p]));
            r[p] = it->second;
        }
        t.tris_.push_back(r);
    }
    t.build();
    return t;
}

void Triangulation::build() {
    const int E = num_edges(), F = num_triangles();
    if (F == 0) throw DomainError("triangulation has no triangles");
    slots_.assign(E, {});
    for (int f = 0; f < F; ++f) {
        const auto& tri = tris_[f];
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw DomainError("triangle " + std::to_string(f) + " is self-folded");
        for (int p = 0; p < 3; ++p) slots_[tri[p]].push_back({f, p});
    }
    for (int e = 0; e < E; ++e) {
        std::size_t want = edges_[e].internal ? 2 : 1;
        if (slots_[e].size() != want)
            throw DomainError("edge " + std::to_string(edges_[e].id) + " fills " + std::to_string(slots_[e].size()) +
                              " triangle slots, expected " + std::to_string(want));
    }

    UnionFind uf(3 * F);
    for (int e = 0; e < E; ++e) {
        if (!edges_[e].internal) continue;
        Slot a = slots_[e][0], b = slots_[e][1];
        uf.unite(3 * a.tri + prev3(a.pos), 3 * b.tri + b.pos);
        uf.unite(3 * a.tri + a.pos, 3 * b.tri + prev3(b.pos));
    }
    corner_vertex_.assign(3 * F, -1);
    std::map<int, int> rename;
    for (int c = 0; c < 3 * F; ++c) {
        auto [it, fresh] = rename.emplace(uf.find(c), static_cast<int>(rename.size()));
        corner_vertex_[c] = it->second;
    }
    nverts_ = static_cast<int>(rename.size());

    // Surface: boundary cycles from external edges, punctures from the other vertices.
    UnionFind bc(nverts_);
    std::vector<int> on_boundary(nverts_, 0);
    std::vector<int> ext;
    for (int e = 0; e < E; ++e) {
        if (edges_[e].internal) continue;
        ext.push_back(e);
        auto [u, v] = endpoints(slots_[e][0]);
        bc.unite(u, v);
        on_boundary[u]++;
        on_boundary[v]++;
    }
    for (int v = 0; v < nverts_; ++v)
        if (on_boundary[v] != 0 && on_boundary[v] != 2)
            throw DomainError("boundary is not a union of cycles at vertex " + std::to_string(v));
    std::map<int, int> comp;
    for (int e : ext) comp[bc.find(endpoints(slots_[e][0]).first)]++;
    surface_.boundary.clear();
    for (auto [root, count] : comp) surface_.boundary.push_back(count);
    std::sort(surface_.boundary.begin(), surface_.boundary.end());
    surface_.punctures = static_cast<int>(std::count(on_boundary.begin(), on_boundary.end(), 0));
    int chi = nverts_ - E + F;
    int twice_genus = 2 - static_cast<int>(surface_.boundary.size()) - chi;
    if (twice_genus < 0 || twice_genus % 2 != 0)
        throw DomainError("Euler characteristic " + std::to_string(chi) + " is inconsistent with an orientable surface");
    surface_.genus = twice_genus / 2;

    // Connectedness of the dual graph.
    UnionFind conn(F);
    for (int e = 0; e < E; ++e)
        if (edges_[e].internal) conn.unite(slots_[e][0].tri, slots_[e][1].tri);
    for (int f = 1; f < F; ++f)
        if (conn.find(f) != conn.find(0)) throw DomainError("triangulation is not connected");
    surface_.validate();
}

int Triangulation::edge_index(int id) const {
    for (int e = 0; e < num_edges(); ++e)
        if (edges_[e].id == id) return e;
    throw DomainError("unknown edge id " + std::to_string(id));
}

std::vector<int> Triangulation::internal_edges() const {
    std::vector<int> r;
    for (int e = 0; e < num_edges(); ++e)
        if (edges_[e].internal) r.push_back(e);
    return r;
}

std::vector<int> Triangulation::external_edges() const {
    std::vector<int> r;
    for (int e = 0; e < num_edges(); ++e)
        if (!edges_[e].internal) r.push_back(e);
    return r;
}

std::optional<Slot> Triangulation::across(Slot s) const {
    const auto& sl = slots_.at(edge_at(s));
    if (sl.size() < 2) return std::nullopt;
    return sl[0] == s ? sl[1] : sl[0];
}

std::pair<int, int> Triangulation::endpoints(Slot s) const {
    return {corner_vertex(s.tri, prev3(s.pos)), corner_vertex(s.tri, s.pos)};
}

Triangulation Triangulation::reversed() const {
    std::vector<std::array<int, 3>> tri;
    for (const auto& t : tris_) tri.push_back({edges_[t[2]].id, edges_[t[1]].id, edges_[t[0]].id});
    return make(edges_, tri);
}

std::string Triangulation::str() const {
    std::ostringstream os;
    for (std::size_t f = 0; f < tris_.size(); ++f) {
        os << (f ? " " : "") << "[";
        for (int p = 0; p < 3; ++p) os << (p ? "," : "") << edges_[tris_[f][p]].id;
        os << "]";
    }
    return os.str();
}

Seed epsilon_from_triangulation(const Triangulation& t) {
    const int n = t.num_edges();
    Matrix eps(n, std::vector<Rational>(n, Rational(0)));
    for (const auto& tri : t.triangles())
        for (int p = 0; p < 3; ++p) {
            eps[tri[p]][tri[next3(p)]] += 1;
            eps[tri[next3(p)]][tri[p]] -= 1;
        }
    std::vector<bool> frozen(n);
    for (int e = 0; e < n; ++e) frozen[e] = !t.is_internal(e);
    return Seed::make(eps, frozen);
}

// ---------------------------------------------------------------- flips

namespace {

std::array<int, 3> rotate_to(const std::array<int, 3>& t, int pos) {
    return {t[pos], t[next3(pos)], t[prev3(pos)]};
}

}  // namespace

bool flip_regular(const Triangulation& t, int k) {
    if (k < 0 || k >= t.num_edges() || !t.is_internal(k)) return false;
    const auto& sl = t.slots(k);
    if (sl[0].tri == sl[1].tri) return false;
    auto t1 = rotate_to(t.triangles()[sl[0].tri], sl[0].pos);
    auto t2 = rotate_to(t.triangles()[sl[1].tri], sl[1].pos);
    // New triangles [k,b,c] and [k,d,a].
    return t1[2] != t2[1] && t2[2] != t1[1];
}

Triangulation flip(const Triangulation& t, int k) {
    if (k < 0 || k >= t.num_edges()) throw DomainError("flip index out of range");
    if (!t.is_internal(k)) throw DomainError("cannot flip external edge " + std::to_string(t.edge_id(k)));
    if (!flip_regular(t, k)) throw DomainError("flip at edge " + std::to_string(t.edge_id(k)) + " is not regular");
    const auto& sl = t.slots(k);
    auto t1 = rotate_to(t.triangles()[sl[0].tri], sl[0].pos);
    auto t2 = rotate_to(t.triangles()[sl[1].tri], sl[1].pos);
    const int a = t1[1], b = t1[2], c = t2[1], d = t2[2];
    std::vector<std::array<int, 3>> tris;
    for (int f = 0; f < t.num_triangles(); ++f) {
        std::array<int, 3> ids;
        if (f == sl[0].tri) ids = {k, b, c};
        else if (f == sl[1].tri) ids = {k, d, a};
        else ids = t.triangles()[f];
        for (auto& e : ids) e = t.edge_id(e);
        tris.push_back(ids);
    }
    return Triangulation::make(t.edges(), tris);
}

Triangulation flip_word(Triangulation t, const std::vector<int>& word) {
    for (int k : word) t = flip(t, k);
    return t;
}

std::optional<std::vector<int>> find_isomorphism(const Triangulation& a, const Triangulation& b, bool fix_external) {
    if (a.num_edges() != b.num_edges() || a.num_triangles() != b.num_triangles()) return std::nullopt;
    const int F = a.num_triangles();
    for (int f0 = 0; f0 < F; ++f0)
        for (int r0 = 0; r0 < 3; ++r0) {
            // Triangle 0 of a goes to triangle f0 of b, rotated by r0; propagate across edges.
            std::vector<int> tri_map(F, -1), rot(F, 0), edge_map(a.num_edges(), -1), used(b.num_edges(), 0);
            std::vector<char> tri_used(F, 0);
            std::deque<int> queue{0};
            tri_map[0] = f0;
            rot[0] = r0;
            tri_used[f0] = 1;
            bool ok = true;
            while (ok && !queue.empty()) {
                int f = queue.front();
                queue.pop_front();
                for (int p = 0; p < 3 && ok; ++p) {
                    int ea = a.triangles()[f][p];
                    int q = (p + rot[f]) % 3;
                    int eb = b.triangles()[tri_map[f]][q];
                    if (a.is_internal(ea) != b.is_internal(eb)) ok = false;
                    else if (fix_external && !a.is_internal(ea) && a.edge_id(ea) != b.edge_id(eb)) ok = false;
                    else if (edge_map[ea] == -1) {
                        if (used[eb]) ok = false;
                        edge_map[ea] = eb;
                        used[eb] = 1;
                    } else if (edge_map[ea] != eb) ok = false;
                    if (!ok || !a.is_internal(ea)) continue;
                    Slot na = *a.across({f, p});
                    Slot nb = *b.across({tri_map[f], q});
                    int want_rot = ((nb.pos - na.pos) % 3 + 3) % 3;
                    if (tri_map[na.tri] == -1) {
                        if (tri_used[nb.tri]) {
                            ok = false;
                            continue;
                        }
                        tri_map[na.tri] = nb.tri;
                        rot[na.tri] = want_rot;
                        tri_used[nb.tri] = 1;
                        queue.push_back(na.tri);
                    } else if (tri_map[na.tri] != nb.tri || rot[na.tri] != want_rot) {
                        ok = false;
                    }
                }
            }
            if (ok) return edge_map;
        }
    return std::nullopt;
}

// ---------------------------------------------------------------- builders

namespace {

std::vector<Edge> make_edges(int internal, int external) {
    std::vector<Edge> e;
    for (int i = 1; i <= internal; ++i) e.push_back({i, true});
    for (int i = 1; i <= external; ++i) e.push_back({internal + i, false});
    return e;
}

}  // namespace

Triangulation polygon(int n) {
    if (n < 4) throw DomainError("polygon needs at least four vertices");
    // Fan from vertex 0; diagonal j (1-based) joins vertex 0 and vertex j+1.
    // Boundary edge n-3+m+1 joins vertex m and m+1.
    const int J = n - 3;
    auto side = [&](int m) { return J + 1 + m; };
    auto diag = [&](int j) { return j; };
    std::vector<std::array<int, 3>> tris;
    for (int v = 1; v + 1 < n; ++v) {
        // Triangle (0, v, v+1), counterclockwise.
        int left = v == 1 ? side(0) : diag(v - 1);
        int right = v + 1 == n - 1 ? side(n - 1) : diag(v);
        tris.push_back({left, side(v), right});
    }
    return Triangulation::make(make_edges(J, n), tris);
}

Triangulation annulus(int p, int q) {
    if (p < 1 || q < 1) throw DomainError("annulus needs marked points on both boundaries");
    // Bridges B_i = O_i--I_0 (ids 1..p), C_j = O_0--I_j (ids p+1..p+q); outer sides then inner sides.
    auto B = [&](int i) { return i == p ? p + 1 : i + 1; };
    auto C = [&](int j) { return j == q ? 1 : p + 1 + j; };
    auto outer = [&](int i) { return p + q + 1 + i; };
    auto inner = [&](int j) { return 2 * p + q + 1 + j; };
    std::vector<std::array<int, 3>> tris;
    for (int i = 0; i < p; ++i) tris.push_back({outer(i), B(i + 1), B(i)});
    for (int j = 0; j < q; ++j) tris.push_back({inner(j), C(j), C(j + 1)});
    return Triangulation::make(make_edges(p + q, p + q), tris);
}

Triangulation punctured_torus() { return Triangulation::make(make_edges(3, 0), {{1, 2, 3}, {1, 2, 3}}); }

Triangulation punctured_polygon(int n) {
    if (n < 2) throw DomainError("punctured polygon needs at least two marked points");
    // Spokes s_i (ids 1..n) from the puncture to M_i; sides m_i (ids n+1..2n) from M_i to M_{i+1}.
    std::vector<std::array<int, 3>> tris;
    for (int i = 0; i < n; ++i) tris.push_back({n + 1 + i, (i + 1) % n + 1, i + 1});
    return Triangulation::make(make_edges(n, n), tris);
}

std::vector<Triangulation> flip_class(const Triangulation& t, std::size_t limit) {
    std::vector<Triangulation> found{t};
    for (std::size_t i = 0; i < found.size() && found.size() < limit; ++i) {
        Triangulation cur = found[i];
        for (int k : cur.internal_edges()) {
            if (!flip_regular(cur, k)) continue;
            Triangulation nt = flip(cur, k);
            bool seen = false;
            for (const auto& f : found)
                if (find_isomorphism(nt, f)) {
                    seen = true;
                    break;
                }
            if (!seen) found.push_back(nt);
            if (found.size() >= limit) break;
        }
    }
    return found;
}

// ---------------------------------------------------------------- mod 2 homology

namespace {

using Bits = boost::dynamic_bitset<>;

// Reduces v against an echelon basis; returns the residue.
Bits reduce(Bits v, const std::vector<Bits>& basis, const std::vector<std::size_t>& pivots) {
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (v.test(pivots[i])) v ^= basis[i];
    return v;
}

}  // namespace

Z2Result z2_cycle_class(const Triangulation& t, const std::vector<int>& parities) {
    if (static_cast<int>(parities.size()) != t.num_edges())
        throw DomainError("parity vector has " + std::to_string(parities.size()) + " entries for " +
                          std::to_string(t.num_edges()) + " edges");
    const std::size_t E = t.num_edges();
    std::vector<Bits> basis;
    std::vector<std::size_t> pivots;
    for (const auto& tri : t.triangles()) {
        Bits v(E);
        for (int e : tri) v.flip(e);
        v = reduce(v, basis, pivots);
        if (v.none()) continue;
        std::size_t piv = v.find_first();
        for (auto& b : basis)
            if (b.test(piv)) b ^= v;
        basis.push_back(v);
        pivots.push_back(piv);
    }
    Bits target(E);
    for (std::size_t e = 0; e < E; ++e)
        if (parities[e] % 2 != 0) target.set(e);
    return {reduce(target, basis, pivots).none(), h1_rank(t)};
}

int h1_rank(const Triangulation& t) {
    return static_cast<int>(t.internal_edges().size()) - t.num_triangles() + 1;
}

}  // namespace dbl
