#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "permlattice/core.hpp"
#include "permlattice/lattice.hpp"

namespace permlattice {

enum class Side : std::uint8_t { None, Out, In };
enum class VKind : std::uint8_t { Cell, Gadget, Aux };

// Structured vertex label: coordinates plus I/O or gadget tags, so the
// correspondences stay auditable. Integer indices are the linear-algebra handle.
struct VertexLabel {
    VKind kind = VKind::Cell;
    Side side = Side::None;
    Vec2 pos{0, 0};
    int sub = -1;  // gadget sub-vertex 0..3

    friend bool operator==(const VertexLabel& a, const VertexLabel& b) {
        return a.kind == b.kind && a.side == b.side && a.pos == b.pos && a.sub == b.sub;
    }
    friend bool operator<(const VertexLabel& a, const VertexLabel& b);
    std::string str() const;
};

struct DirectedEdgeRec {
    int from = -1;
    int to = -1;
    Vec2 disp{0, 0};  // generating displacement (before torus reduction)
};

struct FiniteGraph {
    std::vector<VertexLabel> vertices;
    std::vector<DirectedEdgeRec> edges;
    std::optional<std::vector<int>> bipartition;  // 0/1 per vertex when meaningful

    int add_vertex(const VertexLabel& l);
    int index_of(const VertexLabel& l) const;  // -1 if absent
    bool is_symmetric() const;  // (v,u) in E implies (u,v) in E

private:
    std::unordered_map<std::string, int> index_;
};

// Parallel edges are kept as separate records (distinguished by disp) with a
// multiplicity tag on top; matching counts weight both.
struct EdgeRec {
    int u = -1;
    int v = -1;
    Vec2 disp_from_u{0, 0};
    long mult = 1;
};

struct UndirectedGraph {
    std::vector<VertexLabel> vertices;
    std::vector<EdgeRec> edges;
    std::optional<std::vector<int>> bipartition;

    int add_vertex(const VertexLabel& l);
    int index_of(const VertexLabel& l) const;
    std::vector<std::vector<int>> adjacency() const;  // vertex -> incident edge ids
    std::vector<long> degrees() const;                // counting multiplicity
    bool has_parallel_or_loops() const;
    std::optional<std::vector<int>> two_coloring() const;  // proper 2-coloring or nullopt

    // Sorted (label,label,mult) triples; equal signatures = identical up to record order.
    std::vector<std::string> canonical_signature() const;

private:
    std::unordered_map<std::string, int> index_;
};

// G' on {I,O} x V with edges {(O,v),(I,u)} per directed (v,u). Always bipartite.
UndirectedGraph io_double_cover(const FiniteGraph& g);

// Vertices [n], directed edges m -> (m+a) mod n per a in A; parallel records kept.
FiniteGraph torus_quotient(const RestrictingSet& A, const BoxShape& shape);

// Undirected version: orbits {(v,u,a),(u,v,-a)} collapse to one record.
UndirectedGraph undirected_version(const FiniteGraph& g);

// Honeycomb torus L_{H,n}: bipartite 3-regular on 2n^2 vertices, built from the
// native black/white cell adjacency.
UndirectedGraph honeycomb_torus(int n);

UndirectedGraph square_grid(const BoxShape& shape);
UndirectedGraph square_torus(int n);

}  // namespace permlattice
