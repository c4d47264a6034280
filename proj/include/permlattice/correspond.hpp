#pragma once

#include <utility>
#include <vector>

#include "permlattice/graphkit.hpp"
#include "permlattice/lattice.hpp"

namespace permlattice {

struct PerfectMatching {
    const UndirectedGraph* host = nullptr;
    std::vector<int> edge_ids;  // sorted

    friend bool operator==(const PerfectMatching& a, const PerfectMatching& b) {
        return a.edge_ids == b.edge_ids;
    }
    friend bool operator<(const PerfectMatching& a, const PerfectMatching& b) {
        return a.edge_ids < b.edge_ids;
    }
};

bool validate_matching(const UndirectedGraph& g, const std::vector<int>& edge_ids);

struct PerfectCover {
    const UndirectedGraph* host = nullptr;
    std::vector<int> target;    // vertex ids of V-hat
    std::vector<int> edge_ids;  // sorted
};

bool validate_cover(const UndirectedGraph& g, const std::vector<int>& target,
                    const std::vector<int>& edge_ids);

// Psi(pi) = {{(O,v),(I,pi(v))}}; host must be io_double_cover(torus_quotient(A, n)).
PerfectMatching psi(const UndirectedGraph& host, const ToralPermutation& perm);
ToralPermutation psi_inverse(const PerfectMatching& m, const RestrictingSet& A,
                             const BoxShape& shape);

// Torus translation action on double-cover matchings.
PerfectMatching translate_matching(const PerfectMatching& m, Vec2 t, const BoxShape& shape);

// Phi(pi) = (M1, M2) over the undirected version of a symmetric bipartite host;
// black side = even coordinate sum.
std::pair<PerfectMatching, PerfectMatching> phi(const UndirectedGraph& host,
                                                const ToralPermutation& perm);
ToralPermutation phi_inverse(const PerfectMatching& m1, const PerfectMatching& m2,
                             const RestrictingSet& A, const BoxShape& shape);

// Side-preserving translations act componentwise; side-swapping ones also swap
// the pair.
std::pair<PerfectMatching, PerfectMatching> translate_phi_pair(
    const std::pair<PerfectMatching, PerfectMatching>& pair, Vec2 t, const BoxShape& shape);

// A_L window instance shared by the pattern <-> perfect cover identification
// and the gadget counting path: O side = [n]x[m], I side = box + A_L, target
// V-hat = O side plus interior I cells.
struct ALWindow {
    UndirectedGraph graph;
    std::vector<int> target;
    int n = 0, m = 0;
};

ALWindow al_window(int n, int m);

PerfectCover pattern_to_cover(const ALWindow& window, const Pattern& pat);
Pattern cover_to_pattern(const ALWindow& window, const PerfectCover& cover);

}  // namespace permlattice
