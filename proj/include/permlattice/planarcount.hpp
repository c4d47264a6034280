#pragma once

#include <optional>
#include <vector>

#include "permlattice/core.hpp"
#include "permlattice/correspond.hpp"
#include "permlattice/graphkit.hpp"

namespace permlattice {

struct QPoint {
    BigRat x, y;
};

struct Dart {
    int edge = -1;
    int end = 0;  // 0: leaves edges[edge].u, 1: leaves edges[edge].v
};

// Rotation system + exact vertex positions over an owned copy of the host.
// Construction verifies genus zero via the Euler formula, which is all
// Kasteleyn's method needs.
struct PlanarEmbedding {
    UndirectedGraph host;
    std::vector<QPoint> pos;
    std::vector<std::vector<Dart>> rotation;  // CCW by angle at each vertex

    int dart_from(const Dart& d) const {
        const auto& e = host.edges[d.edge];
        return d.end == 0 ? e.u : e.v;
    }
    int dart_to(const Dart& d) const {
        const auto& e = host.edges[d.edge];
        return d.end == 0 ? e.v : e.u;
    }
};

PlanarEmbedding embed_from_positions(const UndirectedGraph& g, std::vector<QPoint> pos);
// Positions derived from structured labels: I cells at q, O cells at q+(3/20,3/20),
// plain cells at their coordinates.
PlanarEmbedding embed_from_labels(const UndirectedGraph& g);

struct Face {
    std::vector<Dart> walk;
    BigRat area2;  // twice the signed area of the boundary walk
    bool outer = false;
};

// Face walks by next-dart-after-reverse traversal; checks V - E + F = 1 + C.
std::vector<Face> compute_faces(const PlanarEmbedding& emb);

// Orientation bit per edge: 0 keeps the stored (u -> v) direction.
struct PfaffianOrientation {
    std::vector<int> dir;
};

PfaffianOrientation pfaffian_orientation(const PlanarEmbedding& emb);
// Every bounded face has an odd number of clockwise edges.
bool pfaffian_valid(const PlanarEmbedding& emb, const PfaffianOrientation& orient);

using EdgeWeights = std::vector<BigRat>;  // parallel to host edges

// |Pf| of the signed weighted adjacency via fraction-free elimination; the
// bipartite bi-adjacency determinant cross-checks it when a bipartition exists.
BigRat count_matchings_planar(const PlanarEmbedding& emb, const EdgeWeights* weights = nullptr);
BigInt count_matchings_planar_int(const PlanarEmbedding& emb);

BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m);

// A finite planar host with a cover target; positions drive the embedding.
struct CoverInstance {
    UndirectedGraph graph;
    std::vector<QPoint> pos;
    std::vector<int> target;
};

CoverInstance cover_instance_from_al_window(const ALWindow& w);
// Square-lattice window around [n]^2 with the full box as target.
CoverInstance square_window(int n);
// Same window, target restricted to one checkerboard color class.
CoverInstance square_window_color(int n, int parity);

struct GadgetGraph {
    UndirectedGraph graph;
    std::vector<QPoint> pos;
    EdgeWeights weights;
};

// T-gadget construction: boundary vertices replaced by K4 gadgets chained in
// clockwise order; weighted matchings of the result count even-crossing covers,
// with a parity pin added when |V-hat| is odd.
GadgetGraph build_cover_gadget(const CoverInstance& inst);

BigInt count_perfect_covers(const CoverInstance& inst);

// Exact toral matching count via a column transfer over interface states.
BigInt count_toral_matchings(const UndirectedGraph& g, const Budget& budget = Budget::from_env());

}  // namespace permlattice
