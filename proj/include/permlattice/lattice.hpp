#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "permlattice/core.hpp"

namespace permlattice {

// Finite set A of allowed displacements in Z^d.
struct RestrictingSet {
    int dim = 2;
    std::vector<Coords> vectors;  // nonempty, duplicate-free, stored order preserved

    static RestrictingSet from_vectors(int dim, std::vector<Coords> vectors);
    static RestrictingSet from_vec2(std::vector<Vec2> vs);

    // Preset tokens: AL, A+, Aplus, Aoplus.
    static std::optional<RestrictingSet> preset(const std::string& token);
    static RestrictingSet AL();
    static RestrictingSet Aplus();
    static RestrictingSet Aoplus();

    std::size_t size() const { return vectors.size(); }
    int index_of(const Coords& v) const;  // -1 if absent
    bool contains(const Coords& v) const { return index_of(v) >= 0; }
    bool symmetric() const;  // A == -A
    Vec2 vec2(int i) const { return {vectors[i][0], vectors[i][1]}; }

    friend bool operator==(const RestrictingSet& a, const RestrictingSet& b) {
        return a.dim == b.dim && a.vectors == b.vectors;
    }
};

struct BoxShape {
    Coords n;  // all entries >= 1

    static BoxShape of(Coords n);
    static BoxShape of2(std::int64_t n1, std::int64_t n2) { return of({n1, n2}); }

    int dim() const { return static_cast<int>(n.size()); }
    std::int64_t cells() const;
    std::vector<Coords> points() const;  // row-major (last coordinate outermost)
    bool contains(const Coords& p) const;

    friend bool operator==(const BoxShape& a, const BoxShape& b) { return a.n == b.n; }
};

Coords mod_coords(const Coords& p, const Coords& n);

// |A mod n| == |A|: displacements stay distinguishable on the torus.
bool alphabet_faithful(const RestrictingSet& A, const BoxShape& shape);

// Displacement field on an explicit finite domain; every value lies in the
// attached restricting set.
struct Pattern {
    RestrictingSet set;
    std::vector<Coords> domain;  // sorted row-major
    std::vector<int> values;     // indices into set.vectors, parallel to domain

    static Pattern from_map(RestrictingSet set, const std::map<Coords, Coords>& assignment);
    static Pattern on_box(RestrictingSet set, const BoxShape& shape, std::vector<int> values);

    int dim() const { return set.dim; }
    std::size_t size() const { return domain.size(); }
    int position_of(const Coords& p) const;  // -1 if absent
    const Coords& value_at(const Coords& p) const;
    Coords image_of(const Coords& p) const;  // p + v(p)
    bool domain_is_box(const BoxShape& shape) const;
    std::optional<BoxShape> box_domain() const;  // shape if domain is a full box at origin
};

struct ToralCheck {
    bool bijective = false;
    bool alphabet_faithful = false;
};

ToralCheck is_toral_permutation(const Pattern& pattern, const BoxShape& shape);

// Displacement field on [n] whose induced map m -> (m+v(m)) mod n is a bijection.
struct ToralPermutation {
    BoxShape shape;
    Pattern pattern;

    static ToralPermutation checked(BoxShape shape, Pattern pattern);

    Coords apply(const Coords& p) const;        // (p + v(p)) mod n
    ToralPermutation inverse() const;           // displacement field of the inverse bijection
    ToralPermutation translated(const Coords& m) const;  // conjugation by the torus shift

    friend bool operator==(const ToralPermutation& a, const ToralPermutation& b) {
        return a.shape == b.shape && a.pattern.domain == b.pattern.domain &&
               a.pattern.values == b.pattern.values && a.pattern.set == b.pattern.set;
    }
};

BigInt count_box_permutations(const RestrictingSet& A, const BoxShape& shape,
                              const Budget& budget = Budget::from_env());

struct AffineImage {
    RestrictingSet set;
    bool injective_on_A = true;
};

struct IntMatrix {
    int d = 2;
    std::vector<std::int64_t> a;  // row-major d*d

    static IntMatrix identity(int d);
    static IntMatrix of2(std::int64_t a11, std::int64_t a12, std::int64_t a21, std::int64_t a22);
    std::int64_t at(int r, int c) const { return a[r * d + c]; }
    Coords apply(const Coords& v) const;
    std::int64_t det() const;
    IntMatrix adjugate() const;  // adj(M) with M * adj(M) = det(M) * I
};

AffineImage affine_image(const RestrictingSet& A, const IntMatrix& M, const Coords& b);

int affine_dimension(const RestrictingSet& A);
bool full_affine_dimension(const RestrictingSet& A);

// Lexicographically least nonnegative representatives of Z^d / M Z^d.
std::vector<Coords> coset_representatives(const IntMatrix& M);

// omega over M*A on [n] -> k = |det M| patterns over A, omega_i(m) = M^-1 omega(M m + v_i).
std::vector<ToralPermutation> matent_decompose(const ToralPermutation& omega,
                                               const IntMatrix& M,
                                               const RestrictingSet& A);
ToralPermutation matent_compose(const std::vector<ToralPermutation>& parts,
                                const IntMatrix& M,
                                const RestrictingSet& MA,
                                const BoxShape& shape);

}  // namespace permlattice
