#include "double/curves.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace dbl {

namespace {

int prev3(int p) { return (p + 2) % 3; }
int next3(int p) { return (p + 1) % 3; }

Port side(int p) { return {false, p}; }
Port corner(int p) { return {true, p}; }

bool corner_on_side(int c, int s) { return c == s || c == prev3(s); }

// Corner of the neighbouring triangle that matches corner c of the edge at slot s.
int glued_corner(int c, int s, int across_pos) { return c == s ? prev3(across_pos) : across_pos; }

// Quadrilateral around an internal edge, in the labelling used by flip(): the old
// triangles rotate to [k,a,b] and [k,c,d]; the new ones are [k,b,c] and [k,d,a]
// stored unrotated. Vertices: X, Y on the old diagonal, Z between a and b, W
// between c and d.
enum Label { LA, LB, LC, LD, LK, VX, VY, VZ, VW };

struct Quad {
    Slot s1, s2;

    Label label(int tri, Port p) const {
        bool first = tri == s1.tri;
        int r = ((p.pos - (first ? s1.pos : s2.pos)) % 3 + 3) % 3;
        if (!p.corner) {
            static const Label sides1[3] = {LK, LA, LB}, sides2[3] = {LK, LC, LD};
            return first ? sides1[r] : sides2[r];
        }
        static const Label corners1[3] = {VY, VZ, VX}, corners2[3] = {VX, VW, VY};
        return first ? corners1[r] : corners2[r];
    }

    // Ports of a label in the new triangles (tri index, port).
    std::vector<std::pair<int, Port>> placements(Label l) const {
        const int n1 = s1.tri, n2 = s2.tri;
        switch (l) {
            case LA: return {{n2, side(2)}};
            case LB: return {{n1, side(1)}};
            case LC: return {{n1, side(2)}};
            case LD: return {{n2, side(1)}};
            case VX: return {{n1, corner(1)}};
            case VY: return {{n2, corner(1)}};
            case VZ: return {{n1, corner(0)}, {n2, corner(2)}};
            case VW: return {{n1, corner(2)}, {n2, corner(0)}};
            default: break;
        }
        throw DomainError("curve passage ends on the flipped edge");
    }
};

std::vector<Visit> replace_passage(const Quad& q, Label from, Label to) {
    auto pf = q.placements(from), pt = q.placements(to);
    for (const auto& [tf, portf] : pf)
        for (const auto& [tt, portt] : pt)
            if (tf == tt && portf != portt) return {{tf, portf, portt}};
    const auto& [tf, portf] = pf.front();
    for (const auto& [tt, portt] : pt)
        if (tt != tf) return {{tf, portf, side(0)}, {tt, side(0), portt}};
    throw DomainError("degenerate passage through the flipped quadrilateral");
}

// Closed curves are rotated so that the last visit leaves through an edge other
// than k or lies outside the quadrilateral.
bool passage_break(const Quad& q, const Visit& v, int k, const Triangulation& t) {
    bool in_quad = v.tri == q.s1.tri || v.tri == q.s2.tri;
    return !in_quad || v.out.corner || t.edge_at({v.tri, v.out.pos}) != k;
}

}  // namespace

char turn_char(Turn t) { return t == Turn::L ? 'L' : 'R'; }

Turn parse_turn(const std::string& s) {
    if (s == "L") return Turn::L;
    if (s == "R") return Turn::R;
    throw DomainError("turn must be L or R, got '" + s + "'");
}

NormalCurve edge_curve(const Triangulation& t, int e) {
    if (e < 0 || e >= t.num_edges()) throw DomainError("edge index out of range");
    Slot s = t.slots(e)[0];
    return {false, {{s.tri, corner(prev3(s.pos)), corner(s.pos)}}};
}

std::optional<int> curve_as_edge(const Triangulation& t, const NormalCurve& c) {
    if (c.closed || c.visits.size() != 1) return std::nullopt;
    const Visit& v = c.visits[0];
    if (!v.in.corner || !v.out.corner) return std::nullopt;
    if (v.out.pos == next3(v.in.pos)) return t.edge_at({v.tri, v.out.pos});
    if (v.in.pos == next3(v.out.pos)) return t.edge_at({v.tri, v.in.pos});
    return std::nullopt;
}

std::vector<Slot> crossing_slots(const Triangulation&, const NormalCurve& c) {
    std::vector<Slot> r;
    for (std::size_t i = 0; i < c.visits.size(); ++i) {
        const Visit& v = c.visits[i];
        if (!v.out.corner) r.push_back({v.tri, v.out.pos});
    }
    return r;
}

std::vector<int> crossing_word(const Triangulation& t, const NormalCurve& c) {
    std::vector<int> w;
    for (Slot s : crossing_slots(t, c)) w.push_back(t.edge_at(s));
    return w;
}

std::vector<int> normal_coordinates(const Triangulation& t, const NormalCurve& c) {
    std::vector<int> n(t.num_edges(), 0);
    for (int e : crossing_word(t, c)) ++n[e];
    return n;
}

NormalCurve reverse(const NormalCurve& c) {
    NormalCurve r{c.closed, {}};
    for (auto it = c.visits.rbegin(); it != c.visits.rend(); ++it) r.visits.push_back({it->tri, it->out, it->in});
    return r;
}

void validate_curve(const Triangulation& t, const NormalCurve& c) {
    const std::size_t n = c.visits.size();
    if (n == 0) throw DomainError("curve has no visits");
    for (std::size_t i = 0; i < n; ++i) {
        const Visit& v = c.visits[i];
        if (v.tri < 0 || v.tri >= t.num_triangles() || v.in.pos < 0 || v.in.pos > 2 || v.out.pos < 0 || v.out.pos > 2)
            throw DomainError("curve visit out of range");
        bool first = i == 0, last = i + 1 == n;
        if (v.in.corner != (!c.closed && first) || v.out.corner != (!c.closed && last))
            throw DomainError("curve ports do not match its type");
        if (last && !c.closed) break;
        const Visit& w = c.visits[(i + 1) % n];
        auto a = t.across({v.tri, v.out.pos});
        if (!a || a->tri != w.tri || a->pos != w.in.pos || w.in.corner)
            throw DomainError("consecutive visits are not glued across an edge");
    }
}

NormalCurve reduce(const Triangulation& t, NormalCurve c) {
    auto& vs = c.visits;
    bool changed = true;
    while (changed) {
        changed = false;
        // Backtracks: entering and leaving through the same side.
        for (std::size_t i = 0; i < vs.size() && !changed; ++i) {
            const Visit& v = vs[i];
            if (v.in.corner || v.out.corner || v.in.pos != v.out.pos) continue;
            const std::size_t n = vs.size();
            if (c.closed) {
                if (n <= 2) throw DomainError("loop is contractible");
                std::rotate(vs.begin(), vs.begin() + static_cast<long>((i + n - 1) % n), vs.end());
                Visit merged{vs[0].tri, vs[0].in, vs[2].out};
                vs.erase(vs.begin(), vs.begin() + 3);
                vs.insert(vs.begin(), merged);
            } else {
                Visit merged{vs[i - 1].tri, vs[i - 1].in, vs[i + 1].out};
                vs.erase(vs.begin() + static_cast<long>(i) - 1, vs.begin() + static_cast<long>(i) + 2);
                vs.insert(vs.begin() + static_cast<long>(i) - 1, merged);
            }
            changed = true;
        }
        if (c.closed || changed || vs.size() < 2) continue;
        // An end at a corner of the side it just crossed slides into the neighbour.
        Visit& last = vs.back();
        if (!last.in.corner && corner_on_side(last.out.pos, last.in.pos)) {
            Visit& prev = vs[vs.size() - 2];
            auto a = t.across({last.tri, last.in.pos});
            prev.out = corner(glued_corner(last.out.pos, last.in.pos, a->pos));
            vs.pop_back();
            changed = true;
            continue;
        }
        Visit& first = vs.front();
        if (!first.out.corner && corner_on_side(first.in.pos, first.out.pos)) {
            Visit& next = vs[1];
            auto a = t.across({first.tri, first.out.pos});
            next.in = corner(glued_corner(first.in.pos, first.out.pos, a->pos));
            vs.erase(vs.begin());
            changed = true;
        }
    }
    if (!c.closed && vs.size() == 1 && vs[0].in == vs[0].out) throw DomainError("arc is contractible to a point");
    return c;
}

NormalCurve flip_curve(const Triangulation& t, const NormalCurve& c0, int k) {
    if (!flip_regular(t, k)) throw DomainError("flip at edge " + std::to_string(t.edge_id(k)) + " is not regular");
    Quad q{t.slots(k)[0], t.slots(k)[1]};
    NormalCurve c = c0;
    std::vector<Visit>& vs = c.visits;
    if (c.closed) {
        auto it = std::find_if(vs.begin(), vs.end(), [&](const Visit& v) { return passage_break(q, v, k, t); });
        if (it == vs.end()) throw DomainError("loop crosses only the flipped edge");
        std::rotate(vs.begin(), it + 1, vs.end());
    }
    NormalCurve out{c.closed, {}};
    std::size_t i = 0;
    while (i < vs.size()) {
        std::size_t j = i;
        while (j + 1 < vs.size() && !passage_break(q, vs[j], k, t)) ++j;
        const Visit& a = vs[i];
        bool in_quad = a.tri == q.s1.tri || a.tri == q.s2.tri;
        if (!in_quad) {
            out.visits.push_back(a);
        } else {
            Label from = q.label(a.tri, a.in), to = q.label(vs[j].tri, vs[j].out);
            for (const Visit& v : replace_passage(q, from, to)) out.visits.push_back(v);
        }
        i = j + 1;
    }
    Triangulation f = flip(t, k);
    out = reduce(f, out);
    validate_curve(f, out);
    return out;
}

TurnWord turn_word(const Triangulation& t, const NormalCurve& loop) {
    if (!loop.closed) throw DomainError("turn words describe closed curves");
    TurnWord w;
    for (const Visit& v : loop.visits)
        w.push_back({t.edge_at({v.tri, v.out.pos}), v.out.pos == next3(v.in.pos) ? Turn::R : Turn::L});
    return w;
}

NormalCurve loop_from_turn_word(const Triangulation& t, const TurnWord& w) {
    if (w.empty()) throw DomainError("loop word is empty");
    for (const auto& [e, turn] : w)
        if (e < 0 || e >= t.num_edges() || !t.is_internal(e))
            throw DomainError("loop word crosses an external or unknown edge");
    for (Slot start : t.slots(w.back().first)) {
        NormalCurve c{true, {}};
        Slot at = start;
        bool ok = true;
        for (const auto& [e, turn] : w) {
            int out = turn == Turn::R ? next3(at.pos) : prev3(at.pos);
            if (t.edge_at({at.tri, out}) != e) {
                ok = false;
                break;
            }
            c.visits.push_back({at.tri, side(at.pos), side(out)});
            at = *t.across({at.tri, out});
        }
        if (ok && at == start) return reduce(t, c);
    }
    throw DomainError("loop word is not realized by a path in the triangulation");
}

std::vector<NormalCurve> curves_from_normal(const Triangulation& t, const std::vector<long>& n) {
    if (static_cast<int>(n.size()) != t.num_edges()) throw DomainError("normal coordinates need one entry per edge");
    for (int e = 0; e < t.num_edges(); ++e) {
        if (n[e] < 0) throw DomainError("negative normal coordinate");
        if (!t.is_internal(e) && n[e] != 0) throw DomainError("closed curves cannot meet external edges");
    }
    const int F = t.num_triangles();
    // partner[(tri,pos,i)] = (pos2, j): the strand through point i of side pos leaves through point j of pos2.
    std::map<std::tuple<int, int, long>, std::pair<int, long>> partner;
    for (int f = 0; f < F; ++f) {
        const auto& tri = t.triangles()[f];
        long m[3] = {n[tri[0]], n[tri[1]], n[tri[2]]};
        for (int p = 0; p < 3; ++p) {
            long twice = m[p] + m[next3(p)] - m[prev3(p)];
            if (twice < 0 || twice % 2 != 0) throw DomainError("normal coordinates violate a triangle condition");
            long cp = twice / 2;
            // Corner p joins the points of side p nearest corner p with those of side p+1.
            for (long i = 0; i < cp; ++i) {
                partner[{f, p, m[p] - 1 - i}] = {next3(p), i};
                partner[{f, next3(p), i}] = {p, m[p] - 1 - i};
            }
        }
    }
    std::set<std::tuple<int, int, long>> used;
    std::vector<NormalCurve> out;
    for (const auto& [key, val] : partner) {
        if (used.count(key)) continue;
        NormalCurve c{true, {}};
        auto cur = key;
        while (!used.count(cur)) {
            used.insert(cur);
            auto [f, p, i] = cur;
            auto [p2, j] = partner.at(cur);
            used.insert({f, p2, j});
            c.visits.push_back({f, side(p), side(p2)});
            Slot a = *t.across({f, p2});
            cur = {a.tri, a.pos, n[t.edge_at(a)] - 1 - j};
        }
        out.push_back(c);
    }
    return out;
}

std::optional<int> peripheral_vertex(const Triangulation& t, const NormalCurve& loop) {
    if (!loop.closed) return std::nullopt;
    std::optional<int> v;
    bool right = loop.visits[0].out.pos == next3(loop.visits[0].in.pos);
    for (const Visit& vis : loop.visits) {
        bool r = vis.out.pos == next3(vis.in.pos);
        if (r != right) return std::nullopt;
        // A right turn passes the corner between the two sides.
        int c = r ? vis.in.pos : vis.out.pos;
        int here = t.corner_vertex(vis.tri, c);
        if (v && *v != here) return std::nullopt;
        v = here;
    }
    // Going around once visits each corner at the vertex exactly once.
    std::set<std::pair<int, int>> corners;
    for (const Visit& vis : loop.visits) {
        bool r = vis.out.pos == next3(vis.in.pos);
        if (!corners.insert({vis.tri, r ? vis.in.pos : vis.out.pos}).second) return std::nullopt;
    }
    return v;
}

std::vector<NormalCurve> enumerate_arc_paths(const Triangulation& t, int max_crossings) {
    std::set<std::vector<Visit>> seen;
    std::vector<NormalCurve> out;
    std::vector<Visit> path;
    auto record = [&](const std::vector<Visit>& vs) {
        NormalCurve c{false, vs};
        NormalCurve r = reverse(c);
        const auto& key = std::min(c.visits, r.visits);
        if (seen.insert(key).second) out.push_back(NormalCurve{false, key});
    };
    auto extend = [&](auto&& self, Slot entered, int crossings) -> void {
        // Finish at the opposite corner, or continue through one of the other sides.
        path.push_back({entered.tri, side(entered.pos), corner(next3(entered.pos))});
        record(path);
        path.pop_back();
        if (crossings == max_crossings) return;
        for (int out : {next3(entered.pos), prev3(entered.pos)}) {
            auto a = t.across({entered.tri, out});
            if (!a) continue;
            path.push_back({entered.tri, side(entered.pos), side(out)});
            self(self, *a, crossings + 1);
            path.pop_back();
        }
    };
    for (int f = 0; f < t.num_triangles(); ++f)
        for (int p = 0; p < 3; ++p) {
            int opposite = prev3(p);
            auto a = t.across({f, opposite});
            if (!a || max_crossings < 1) continue;
            path.push_back({f, corner(p), side(opposite)});
            extend(extend, *a, 1);
            path.pop_back();
        }
    std::sort(out.begin(), out.end(), [](const NormalCurve& a, const NormalCurve& b) {
        return a.visits.size() != b.visits.size() ? a.visits.size() < b.visits.size() : a.visits < b.visits;
    });
    return out;
}

std::optional<Descent> descend_to_edge(const Triangulation& t0, const NormalCurve& arc) {
    if (arc.closed) throw DomainError("only arcs descend to edges");
    Triangulation t = t0;
    NormalCurve c = reduce(t0, arc);
    Descent d;
    while (true) {
        if (auto e = curve_as_edge(t, c)) {
            d.edge = *e;
            return d;
        }
        std::size_t now = crossing_slots(t, c).size();
        bool moved = false;
        std::set<int> tried;
        for (int k : crossing_word(t, c)) {
            if (!tried.insert(k).second || !flip_regular(t, k)) continue;
            NormalCurve next = flip_curve(t, c, k);
            if (crossing_slots(t, next).size() < now) {
                t = flip(t, k);
                c = std::move(next);
                d.word.push_back(k);
                moved = true;
                break;
            }
        }
        if (!moved) return std::nullopt;
    }
}

Rational shear_from_corners(const Rational& a12, const Rational& a23, const Rational& a34, const Rational& a14) {
    return a12 + a34 - a14 - a23;
}

std::vector<Rational> shear_coordinates(const Triangulation& t, const std::vector<NormalCurve>& loops) {
    std::vector<Rational> full(t.num_edges(), Rational(0));
    for (const auto& c : loops) {
        if (!c.closed) throw DomainError("shear coordinates are computed for closed curves");
        const std::size_t n = c.visits.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Visit& a = c.visits[i];
            const Visit& b = c.visits[(i + 1) % n];
            bool before = a.out.pos == next3(a.in.pos), after = b.out.pos == next3(b.in.pos);
            if (before == after) continue;
            // Passages between opposite sides of the quadrilateral around the crossed
            // edge; a right turn followed by a left turn counts positively.
            full[t.edge_at({a.tri, a.out.pos})] += before ? -1 : 1;
        }
    }
    std::vector<Rational> x;
    for (int e : t.internal_edges()) x.push_back(full[e]);
    return x;
}

std::string curve_str(const Triangulation& t, const NormalCurve& c) {
    std::ostringstream os;
    os << (c.closed ? "loop" : "arc") << "(";
    auto w = crossing_word(t, c);
    for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << t.edge_id(w[i]);
    os << ")";
    return os.str();
}

}  // namespace dbl
