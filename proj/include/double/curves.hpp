#pragma once

#include "double/triangulation.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dbl {

// A curve meets a triangle either through one of its sides or at one of its corners.
struct Port {
    bool corner = false;
    int pos = 0;
    bool operator==(const Port&) const = default;
    auto operator<=>(const Port&) const = default;
};

struct Visit {
    int tri = 0;
    Port in, out;
    bool operator==(const Visit&) const = default;
    auto operator<=>(const Visit&) const = default;
};

// Normal curve in dual-path form: the triangles it passes through with entry and
// exit ports. Closed curves use side ports only and are read cyclically; arcs start
// and end at corners.
struct NormalCurve {
    bool closed = false;
    std::vector<Visit> visits;
    bool operator==(const NormalCurve&) const = default;
};

enum class Turn { L, R };
char turn_char(Turn t);
Turn parse_turn(const std::string& s);

// Cyclic loop word: the edge crossed and the turn made just before crossing it.
using TurnWord = std::vector<std::pair<int, Turn>>;

NormalCurve edge_curve(const Triangulation& t, int e);
// Edge index when the arc runs along an edge.
std::optional<int> curve_as_edge(const Triangulation& t, const NormalCurve& c);
std::vector<Slot> crossing_slots(const Triangulation& t, const NormalCurve& c);
std::vector<int> crossing_word(const Triangulation& t, const NormalCurve& c);
std::vector<int> normal_coordinates(const Triangulation& t, const NormalCurve& c);
NormalCurve reverse(const NormalCurve& c);
// Checks that ports are legal and consecutive visits are glued across edges.
void validate_curve(const Triangulation& t, const NormalCurve& c);

// Removes backtracks and crossings next to an endpoint; throws on contractible loops.
NormalCurve reduce(const Triangulation& t, NormalCurve c);
// The same curve drawn in flip(t, k).
NormalCurve flip_curve(const Triangulation& t, const NormalCurve& c, int k);

TurnWord turn_word(const Triangulation& t, const NormalCurve& loop);
NormalCurve loop_from_turn_word(const Triangulation& t, const TurnWord& w);

// Closed multicurve with the given edge intersection numbers (zero on external
// edges), one entry per component.
std::vector<NormalCurve> curves_from_normal(const Triangulation& t, const std::vector<long>& n);

// True when the loop goes once around a single vertex.
std::optional<int> peripheral_vertex(const Triangulation& t, const NormalCurve& loop);

// Arcs with between one and `max_crossings` crossings, one per unoriented class.
std::vector<NormalCurve> enumerate_arc_paths(const Triangulation& t, int max_crossings);

// Flips that shrink the arc to an edge, each flip lowering its crossing count,
// together with the resulting edge index. Fails for arcs that are not simple.
struct Descent {
    std::vector<int> word;
    int edge = -1;
};
std::optional<Descent> descend_to_edge(const Triangulation& t, const NormalCurve& arc);

// x_k = a12 + a34 - a14 - a23 for the four side coordinates of a quadrilateral.
Rational shear_from_corners(const Rational& a12, const Rational& a23, const Rational& a34, const Rational& a14);
// Shear coordinates of a closed multicurve over the internal edges.
std::vector<Rational> shear_coordinates(const Triangulation& t, const std::vector<NormalCurve>& loops);

std::string curve_str(const Triangulation& t, const NormalCurve& c);

}  // namespace dbl
