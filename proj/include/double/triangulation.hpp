#pragma once

#include "double/seed.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace dbl {

struct DecoratedSurface {
    int genus = 0;
    int punctures = 0;
    std::vector<int> boundary;  // marked points per boundary component, sorted

    // Throws for the surfaces that admit no ideal triangulation.
    void validate() const;
    int h1_rank() const;
    std::string str() const;
    bool operator==(const DecoratedSurface&) const = default;
};

struct Edge {
    int id = 0;
    bool internal = true;
    bool operator==(const Edge&) const = default;
};

// Position of an edge inside a triangle.
struct Slot {
    int tri = -1;
    int pos = -1;
    bool operator==(const Slot&) const = default;
};

// Triangles are counterclockwise edge triples. Corner p of a triangle sits between
// its edges p and p+1; edge p runs from corner p-1 to corner p.
class Triangulation {
public:
    // Triangles are given by edge ids.
    static Triangulation make(std::vector<Edge> edges, const std::vector<std::array<int, 3>>& triangles);

    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::array<int, 3>>& triangles() const { return tris_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int num_triangles() const { return static_cast<int>(tris_.size()); }
    int num_vertices() const { return nverts_; }
    int edge_index(int id) const;
    int edge_id(int e) const { return edges_.at(e).id; }
    bool is_internal(int e) const { return edges_.at(e).internal; }
    std::vector<int> internal_edges() const;
    std::vector<int> external_edges() const;

    int edge_at(Slot s) const { return tris_.at(s.tri)[s.pos]; }
    const std::vector<Slot>& slots(int e) const { return slots_.at(e); }
    // The slot across the edge at s; nullopt on external edges.
    std::optional<Slot> across(Slot s) const;
    // Vertex at corner p of triangle t.
    int corner_vertex(int t, int p) const { return corner_vertex_[3 * t + p]; }
    // Start and end vertex of the edge as seen from the given slot.
    std::pair<int, int> endpoints(Slot s) const;

    DecoratedSurface surface() const { return surface_; }
    // Same triangles with reversed chirality (the surface with opposite orientation).
    Triangulation reversed() const;
    std::string str() const;

    bool operator==(const Triangulation& o) const { return edges_ == o.edges_ && tris_ == o.tris_; }

private:
    std::vector<Edge> edges_;
    std::vector<std::array<int, 3>> tris_;  // edge indices
    std::vector<std::vector<Slot>> slots_;
    std::vector<int> corner_vertex_;
    int nverts_ = 0;
    DecoratedSurface surface_;

    void build();
};

Seed epsilon_from_triangulation(const Triangulation& t);

bool flip_regular(const Triangulation& t, int k);
// Flip at edge index k; the new diagonal keeps the id of k.
Triangulation flip(const Triangulation& t, int k);
Triangulation flip_word(Triangulation t, const std::vector<int>& word);

// Edge-index map a -> b carrying triangles to triangles with chirality.
std::optional<std::vector<int>> find_isomorphism(const Triangulation& a, const Triangulation& b,
                                                 bool fix_external = true);

// Builders. Internal edges get ids 1..|J| and external edges follow.
Triangulation polygon(int n);
Triangulation annulus(int p, int q);
Triangulation punctured_torus();
Triangulation punctured_polygon(int n);

// All triangulations reachable by regular flips, up to edge relabeling with
// external edges fixed. Stops after `limit` classes.
std::vector<Triangulation> flip_class(const Triangulation& t, std::size_t limit = 100000);

struct Z2Result {
    bool null_homologous = true;
    int h1_rank = 0;
};

// Decides whether the edge-parity vector is a sum of triangle boundaries mod 2.
Z2Result z2_cycle_class(const Triangulation& t, const std::vector<int>& parities);
// Rank of H1 of the surface with punctures and holes removed, from the dual graph.
int h1_rank(const Triangulation& t);

}  // namespace dbl
