#pragma once

#include "double/curves.hpp"

#include <set>
#include <string>
#include <vector>

namespace dbl {

// The two halves of the doubled surface; S° carries the opposite orientation.
enum class Side { S, Scirc };
std::string side_name(Side s);
Side parse_side(const std::string& s);

// Closed loop on one side, drawn on S by its turn word.
struct LoopCurve {
    Side side = Side::S;
    TurnWord word;
    long weight = 1;
};

// One piece of an intersecting curve; odd pieces lie on S and even ones on S°.
struct Segment {
    Side side = Side::S;
    NormalCurve arc;
};

struct IntersectingCurve {
    std::vector<Segment> segments;
    long weight = 1;
};

// Curves are pairwise disjoint. `reversed` lists the punctures whose boundary
// component of the double is oriented against S.
struct DLamination {
    std::vector<LoopCurve> loops;
    std::vector<IntersectingCurve> intersecting;
    std::set<int> reversed;
};

// The arc together with its mirror image on S°.
IntersectingCurve doubled_arc(const NormalCurve& arc, long weight = 1);

// Reduced arcs crossing exactly the given edges in order.
std::vector<NormalCurve> arcs_from_word(const Triangulation& t, const std::vector<int>& edges);
// The first of them; throws if there is none.
NormalCurve arc_from_word(const Triangulation& t, const std::vector<int>& edges);
void validate_lamination(const Triangulation& t, const DLamination& l);

struct XLamCoords {
    std::vector<Rational> x;  // over J
    bool integral() const;
};

struct ALamCoords {
    std::vector<Rational> a;  // over I
    bool integral(const Triangulation& t) const;
};

struct DLamCoords {
    std::vector<Rational> b, x;  // over J
    std::set<int> reversed;
    bool integral() const;
    // (b, x) as one point, in the order of the D variables.
    std::vector<Rational> point() const;
};

// Shear coordinates of a closed multicurve on S.
XLamCoords x_coordinates(const Triangulation& t, const std::vector<NormalCurve>& loops);
// Half the intersection numbers with each edge of a multicurve with the given normal coordinates.
ALamCoords a_coordinates(const Triangulation& t, const std::vector<long>& normal);
DLamCoords d_coordinates(const Triangulation& t, const DLamination& l);

XLamCoords transform_coords_under_flip(const Triangulation& t, const XLamCoords& c, int k);
ALamCoords transform_coords_under_flip(const Triangulation& t, const ALamCoords& c, int k);
DLamCoords transform_coords_under_flip(const Triangulation& t, const DLamCoords& c, int k);

// Edge parities (weight times intersection number, mod 2) of the curves projected to S.
std::vector<int> lamination_parities(const Triangulation& t, const DLamination& l);

struct IntegralityReport {
    bool coords_integral = true;
    bool homology_null = true;
    bool pairing_rational = true;
    bool consistent() const { return coords_integral == homology_null && homology_null == pairing_rational; }
};

// Combines the three legs; `h` is the X-exponent vector of the pairing.
IntegralityReport classify_integrality(const Triangulation& t, const DLamCoords& coords,
                                       const std::vector<int>& parities, const std::vector<HalfInt>& h);

}  // namespace dbl
