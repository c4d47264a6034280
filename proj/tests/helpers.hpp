#pragma once

#include <map>
#include <vector>

#include "permlattice/lattice.hpp"

namespace permlattice::testhelpers {

// Field on [n1]x[n2] given row-major displacement values (y=0 row first).
inline Pattern box_pattern(const RestrictingSet& A, std::int64_t n1, std::int64_t n2,
                           const std::vector<Vec2>& vals) {
    std::map<Coords, Coords> m;
    std::size_t i = 0;
    for (std::int64_t y = 0; y < n2; ++y)
        for (std::int64_t x = 0; x < n1; ++x) {
            m[{x, y}] = Coords{vals[i].x, vals[i].y};
            ++i;
        }
    return Pattern::from_map(A, m);
}

inline Pattern constant_pattern(const RestrictingSet& A, std::int64_t n1, std::int64_t n2,
                                Vec2 v) {
    return box_pattern(A, n1, n2, std::vector<Vec2>(static_cast<std::size_t>(n1 * n2), v));
}

}  // namespace permlattice::testhelpers
