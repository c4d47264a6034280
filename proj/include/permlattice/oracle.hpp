#pragma once

#include <optional>
#include <string>
#include <vector>

#include "permlattice/core.hpp"
#include "permlattice/graphkit.hpp"
#include "permlattice/lattice.hpp"

namespace permlattice {

// Result of an exhaustive or criterion-based enumeration. `count` is the
// number reported to callers; the truth always lies in [lower, upper], and
// exact means lower == upper == count.
struct EnumerationResult {
    BigInt count = 0;
    BigInt lower = 0;
    BigInt upper = 0;
    bool exact = true;
    std::string method;
};

EnumerationResult brute_toral_permutations(const RestrictingSet& A, const BoxShape& shape,
                                           const Budget& budget = Budget::from_env());

std::vector<ToralPermutation> enumerate_toral(const RestrictingSet& A, const BoxShape& shape,
                                              const Budget& budget = Budget::from_env());

BigInt brute_matchings(const UndirectedGraph& g, const Budget& budget = Budget::from_env());

// Matchings as lists of edge ids, deterministic order.
std::vector<std::vector<int>> enumerate_matchings(const UndirectedGraph& g,
                                                  const Budget& budget = Budget::from_env());

BigInt brute_covers(const UndirectedGraph& g, const std::vector<int>& target,
                    const Budget& budget = Budget::from_env());

std::vector<std::vector<int>> enumerate_covers(const UndirectedGraph& g,
                                               const std::vector<int>& target,
                                               const Budget& budget = Budget::from_env());

// Exact |B_shape(Omega(A))| for A in {A_L, A_oplus, A_+} (decidable criteria);
// certified bounds otherwise.
EnumerationResult brute_patterns(const RestrictingSet& A, const BoxShape& shape,
                                 const Budget& budget = Budget::from_env());

EnumerationResult brute_injective_patterns(const RestrictingSet& A, const BoxShape& shape,
                                           const Budget& budget = Budget::from_env());

EnumerationResult brute_surjective_patterns(const RestrictingSet& A, const BoxShape& shape,
                                            const Budget& budget = Budget::from_env());

}  // namespace permlattice
