#pragma once

#include "double/curves.hpp"

#include <vector>

namespace dbl {

struct SnakeEdge {
    int u = 0, v = 0;
    int label = 0;  // edge index in the triangulation
};

struct Tile {
    int diagonal = 0;           // crossed edge
    std::vector<int> sides;     // four snake edge indices
    bool reversed = false;      // relative orientation, alternating along the snake
};

// Snake graph of an arc: one tile per crossing, consecutive tiles glued along a side.
struct SnakeGraph {
    int num_vertices = 0;
    std::vector<SnakeEdge> edges;
    std::vector<Tile> tiles;
    std::vector<int> glued;  // glued[j] is the edge shared by tiles j and j+1
    int minus_side = -1;     // first-tile side that pins the minimal matching

    bool is_boundary(int e) const;
};

SnakeGraph build_snake(const Triangulation& t, const NormalCurve& arc);

// Perfect matchings as sorted edge index lists.
using Matching = std::vector<int>;

// All perfect matchings, computed tile by tile.
std::vector<Matching> perfect_matchings(const SnakeGraph& g);
// Exhaustive search over edge subsets; only for small snakes.
std::vector<Matching> perfect_matchings_brute_force(const SnakeGraph& g);

// The two matchings made of boundary edges only; the minimal one contains `minus_side`.
Matching minimal_matching(const SnakeGraph& g);
Matching maximal_matching(const SnakeGraph& g);

// Tiles enclosed by the symmetric difference of p with the minimal matching.
std::vector<bool> height(const SnakeGraph& g, const Matching& p);

// Expansion of an arc over the principal-coefficient variables x_j, y_j (j internal)
// used by principal_run on the triangulation's seed.
struct ArcExpansion {
    VarSet xy;
    RationalExpr laurent;
    LaurentExpr fpoly;      // over the y variables
    std::vector<long> g;    // over the internal edges
    std::size_t num_matchings = 0;
};

ArcExpansion expand_arc(const Triangulation& t, const NormalCurve& arc);

}  // namespace dbl
