#pragma once

#include <optional>
#include <string>
#include <vector>

#include "permlattice/core.hpp"
#include "permlattice/lattice.hpp"

namespace permlattice {

// Boundary of U with respect to A: cells u with u - A not contained in U.
std::vector<Coords> boundary(const std::vector<Coords>& U, const RestrictingSet& A);
std::vector<Coords> interior(const std::vector<Coords>& U, const RestrictingSet& A);

struct NecessaryCheck {
    bool ok = false;
    // diagnostics when failing
    std::optional<std::pair<Coords, Coords>> colliding_cells;
    std::optional<Coords> uncovered_interior_cell;
};

// f_v injective and Int(U,A) contained in its image.
NecessaryCheck necessary_condition(const Pattern& pat);

struct ForbiddenSet {
    std::string name;
    RestrictingSet alphabet;  // values of the forbidden patterns live here
    std::vector<Pattern> patterns;
};

// F_A: patterns on -A where the number of cells pointing at the origin is not 1.
ForbiddenSet forbidden_preimage_count(const RestrictingSet& A);
// Collision patterns: two cells whose images coincide; pairs drawn from `pairsFrom`.
ForbiddenSet forbidden_collisions(const RestrictingSet& pairsFrom);
// F_{A_+} and F'_{A_+} presets. The collision half of F' is generated over
// A_oplus pairs so that zero-displacement collisions are expressible; on
// A_+-valued configurations this defines the same SFT.
ForbiddenSet preset_F_Aplus();
ForbiddenSet preset_Fprime_Aplus();

// True iff no translate of a forbidden pattern embeds (fully) in pat.
bool local_admissibility(const Pattern& pat, const ForbiddenSet& F);

// Verified periodic extension: a toral permutation whose restriction to the
// pattern box equals the pattern.
struct ExtensionCertificate {
    ToralPermutation torus;
};

// Constructive extension for rectangular patterns over A_L or A_oplus.
// Precondition: necessary_condition(pat).ok.
ExtensionCertificate extend_rectangular(const Pattern& pat);

struct Obstruction {
    std::vector<Coords> demand_cells;  // cells needing preimages
    std::vector<Coords> candidates;    // union of their candidate preimages; smaller set
};

enum class ObstructionVerdict { No, Unknown };

struct ObstructionOutcome {
    ObstructionVerdict verdict = ObstructionVerdict::Unknown;
    std::optional<Obstruction> obstruction;  // set when verdict == No
    std::string reason;
};

// Constraint propagation on a window of the given radius: Hall violations on
// the preimage-candidate bipartite graph are sound non-admissibility proofs.
ObstructionOutcome obstruction_search(const Pattern& pat, int radius);

enum class GlobalVerdict { Yes, No, Unknown };

struct AdmissibilityVerdict {
    bool necessary_ok = false;
    std::optional<bool> locally_admissible;  // only when a forbidden set was supplied
    GlobalVerdict global = GlobalVerdict::Unknown;
    std::optional<ExtensionCertificate> certificate;
    std::optional<Obstruction> obstruction;
};

struct AdmissibilityOptions {
    const ForbiddenSet* forbidden = nullptr;
    int obstruction_radius = 2;
};

AdmissibilityVerdict evaluate_admissibility(const Pattern& pat,
                                            const AdmissibilityOptions& opt = {});

}  // namespace permlattice
