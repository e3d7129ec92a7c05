#include "double/lamination.hpp"

#include <algorithm>

namespace dbl {

namespace {

int next3(int p) { return (p + 1) % 3; }

bool is_half_integer(const Rational& r) { return boost::multiprecision::denominator(Rational(2 * r)) == 1; }
bool is_integer(const Rational& r) { return boost::multiprecision::denominator(r) == 1; }

int start_vertex(const Triangulation& t, const NormalCurve& c) {
    return t.corner_vertex(c.visits.front().tri, c.visits.front().in.pos);
}
int end_vertex(const Triangulation& t, const NormalCurve& c) {
    return t.corner_vertex(c.visits.back().tri, c.visits.back().out.pos);
}

bool is_puncture(const Triangulation& t, int v) {
    for (int e : t.external_edges()) {
        auto [a, b] = t.endpoints(t.slots(e)[0]);
        if (a == v || b == v) return false;
    }
    return v >= 0 && v < t.num_vertices();
}

}  // namespace

std::string side_name(Side s) { return s == Side::S ? "S" : "S°"; }

Side parse_side(const std::string& s) {
    if (s == "S") return Side::S;
    if (s == "S°" || s == "Scirc" || s == "S0") return Side::Scirc;
    throw DomainError("unknown side '" + s + "'");
}

IntersectingCurve doubled_arc(const NormalCurve& arc, long weight) {
    return {{{Side::S, arc}, {Side::Scirc, reverse(arc)}}, weight};
}

std::vector<NormalCurve> arcs_from_word(const Triangulation& t, const std::vector<int>& edges) {
    if (edges.empty()) throw DomainError("an arc word needs at least one crossed edge");
    for (int e : edges)
        if (e < 0 || e >= t.num_edges() || !t.is_internal(e))
            throw DomainError("arc word crosses an edge that is not internal");
    std::vector<NormalCurve> found;
    std::vector<Visit> path;
    // Depth-first over the sides through which each crossing can happen.
    auto extend = [&](auto&& self, Slot at, std::size_t j) -> void {
        if (j + 1 == edges.size()) {
            auto nb = t.across(at);
            NormalCurve c{false, path};
            c.visits.push_back({nb->tri, {false, nb->pos}, {true, next3(nb->pos)}});
            found.push_back(c);
            return;
        }
        auto nb = t.across(at);
        for (int r = 1; r <= 2; ++r) {
            int q = (nb->pos + r) % 3;
            if (t.edge_at({nb->tri, q}) != edges[j + 1]) continue;
            path.push_back({nb->tri, {false, nb->pos}, {false, q}});
            self(self, Slot{nb->tri, q}, j + 1);
            path.pop_back();
        }
    };
    for (Slot s : t.slots(edges[0])) {
        path = {{s.tri, {true, next3(s.pos)}, {false, s.pos}}};
        extend(extend, s, 0);
    }
    std::vector<NormalCurve> out;
    for (const auto& c : found) {
        validate_curve(t, c);
        if (reduce(t, c) == c && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    return out;
}

NormalCurve arc_from_word(const Triangulation& t, const std::vector<int>& edges) {
    auto all = arcs_from_word(t, edges);
    if (all.empty()) throw DomainError("no arc crosses the given edges in this order");
    return all.front();
}

void validate_lamination(const Triangulation& t, const DLamination& l) {
    for (const auto& c : l.loops) {
        if (c.weight < 1) throw DomainError("curve weights must be positive");
        loop_from_turn_word(t, c.word);
    }
    for (const auto& c : l.intersecting) {
        if (c.weight < 1) throw DomainError("curve weights must be positive");
        const auto& seg = c.segments;
        if (seg.empty() || seg.size() % 2 != 0) throw DomainError("intersecting curves need an even number of segments");
        for (std::size_t i = 0; i < seg.size(); ++i) {
            if (seg[i].side != (i % 2 == 0 ? Side::S : Side::Scirc))
                throw DomainError("segments must alternate between S and S°, starting on S");
            if (seg[i].arc.closed) throw DomainError("segments must be arcs");
            validate_curve(t, seg[i].arc);
            const auto& nxt = seg[(i + 1) % seg.size()].arc;
            if (end_vertex(t, seg[i].arc) != start_vertex(t, nxt))
                throw DomainError("consecutive segments do not meet at a common marked point");
        }
    }
    for (int v : l.reversed)
        if (!is_puncture(t, v)) throw DomainError("orientation given for vertex " + std::to_string(v) + ", which is not a puncture");
}

bool XLamCoords::integral() const { return std::all_of(x.begin(), x.end(), is_integer); }

bool ALamCoords::integral(const Triangulation& t) const {
    if (!std::all_of(a.begin(), a.end(), is_half_integer)) return false;
    for (const auto& tri : t.triangles())
        if (!is_integer(a[tri[0]] + a[tri[1]] + a[tri[2]])) return false;
    return true;
}

bool DLamCoords::integral() const {
    return std::all_of(b.begin(), b.end(), is_integer) && std::all_of(x.begin(), x.end(), is_integer);
}

std::vector<Rational> DLamCoords::point() const {
    std::vector<Rational> p = b;
    p.insert(p.end(), x.begin(), x.end());
    return p;
}

XLamCoords x_coordinates(const Triangulation& t, const std::vector<NormalCurve>& loops) {
    return {shear_coordinates(t, loops)};
}

ALamCoords a_coordinates(const Triangulation& t, const std::vector<long>& normal) {
    if (static_cast<int>(normal.size()) != t.num_edges()) throw DomainError("one intersection number per edge expected");
    ALamCoords c;
    for (long n : normal) {
        if (n < 0) throw DomainError("intersection numbers must be nonnegative");
        c.a.push_back(Rational(n, 2));
    }
    return c;
}

DLamCoords d_coordinates(const Triangulation& t, const DLamination& l) {
    validate_lamination(t, l);
    const auto J = t.internal_edges();
    Seed seed = epsilon_from_triangulation(t);
    DLamCoords out;
    out.b.assign(J.size(), 0);
    out.x.assign(J.size(), 0);
    out.reversed = l.reversed;
    for (const auto& c : l.loops) {
        NormalCurve loop = loop_from_turn_word(t, c.word);
        auto n = normal_coordinates(t, loop);
        // S-loops: b = -kn/2 and x = k times the shear; S°-loops: b = +kn/2, x = 0.
        std::vector<Rational> shear = c.side == Side::S ? shear_coordinates(t, {loop}) : std::vector<Rational>(J.size(), 0);
        for (std::size_t p = 0; p < J.size(); ++p) {
            Rational half(c.weight * n[J[p]], 2);
            out.b[p] += c.side == Side::S ? -half : half;
            out.x[p] += c.weight * shear[p];
        }
    }
    for (const auto& c : l.intersecting) {
        if (c.segments.size() != 2 || reverse(c.segments[1].arc) != c.segments[0].arc)
            throw DomainError("coordinates are only extracted for doubled arcs");
        const NormalCurve& arc = c.segments[0].arc;
        DLamCoords part;
        part.b.assign(J.size(), 0);
        part.x.assign(J.size(), 0);
        // A doubled edge has coordinates (0, -k e); other arcs are carried back
        // from the triangulation in which they become an edge.
        Triangulation cur = t;
        std::vector<int> back;
        int e;
        if (auto edge = curve_as_edge(t, reduce(t, arc))) {
            e = *edge;
        } else {
            auto d = descend_to_edge(t, arc);
            if (!d) throw DomainError("doubled arc is not simple");
            cur = flip_word(t, d->word);
            back.assign(d->word.rbegin(), d->word.rend());
            e = d->edge;
        }
        if (cur.is_internal(e)) part.x[seed.position_in_unfrozen(e)] = -c.weight;
        for (int k : back) {
            part = transform_coords_under_flip(cur, part, k);
            cur = flip(cur, k);
        }
        for (std::size_t p = 0; p < J.size(); ++p) {
            out.b[p] += part.b[p];
            out.x[p] += part.x[p];
        }
    }
    return out;
}

XLamCoords transform_coords_under_flip(const Triangulation& t, const XLamCoords& c, int k) {
    if (!flip_regular(t, k)) throw DomainError("flip at edge " + std::to_string(t.edge_id(k)) + " is not regular");
    auto st = tropical_state(epsilon_from_triangulation(t), StateKind::TropX, c.x);
    return {mutate_state(st, k).tvalues};
}

ALamCoords transform_coords_under_flip(const Triangulation& t, const ALamCoords& c, int k) {
    if (!flip_regular(t, k)) throw DomainError("flip at edge " + std::to_string(t.edge_id(k)) + " is not regular");
    auto st = tropical_state(epsilon_from_triangulation(t), StateKind::TropA, c.a);
    return {mutate_state(st, k).tvalues};
}

DLamCoords transform_coords_under_flip(const Triangulation& t, const DLamCoords& c, int k) {
    if (!flip_regular(t, k)) throw DomainError("flip at edge " + std::to_string(t.edge_id(k)) + " is not regular");
    auto st = mutate_state(tropical_state(epsilon_from_triangulation(t), StateKind::TropD, c.x, c.b), k);
    return {st.tbvalues, st.tvalues, c.reversed};
}

std::vector<int> lamination_parities(const Triangulation& t, const DLamination& l) {
    std::vector<int> p(t.num_edges(), 0);
    auto add = [&](const NormalCurve& c, long k) {
        auto n = normal_coordinates(t, c);
        for (int e = 0; e < t.num_edges(); ++e) p[e] = static_cast<int>((p[e] + k * n[e]) % 2);
    };
    for (const auto& c : l.loops) add(loop_from_turn_word(t, c.word), c.weight);
    for (const auto& c : l.intersecting)
        for (const auto& s : c.segments) add(s.arc, c.weight);
    return p;
}

IntegralityReport classify_integrality(const Triangulation& t, const DLamCoords& coords,
                                       const std::vector<int>& parities, const std::vector<HalfInt>& h) {
    IntegralityReport r;
    r.coords_integral = coords.integral();
    r.homology_null = z2_cycle_class(t, parities).null_homologous;
    r.pairing_rational = std::all_of(h.begin(), h.end(), [](HalfInt v) { return v.integral(); });
    return r;
}

}  // namespace dbl
