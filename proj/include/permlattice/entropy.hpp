#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "permlattice/core.hpp"
#include "permlattice/lattice.hpp"

namespace permlattice {

// Finitely supported Laurent polynomial in z, w with exact rational
// coefficients.
class LaurentPolynomial2 {
public:
    using Exponent = std::pair<int, int>;

    LaurentPolynomial2() = default;
    void set(int j, int k, BigRat c);
    const std::map<Exponent, BigRat>& terms() const { return terms_; }
    bool zero() const { return terms_.empty(); }

    LaurentPolynomial2 operator*(const LaurentPolynomial2& o) const;
    LaurentPolynomial2 swap_vars() const;    // z <-> w
    LaurentPolynomial2 invert_z() const;     // z -> 1/z

    static LaurentPolynomial2 honeycomb_characteristic();   // 1 + z + w
    static LaurentPolynomial2 square_characteristic();      // 4 - z - 1/z - w - 1/w
    // "c:j,k;c:j,k;..." with rational c
    static LaurentPolynomial2 parse(const std::string& spec);
    std::string str() const;

private:
    std::map<Exponent, BigRat> terms_;
};

struct MahlerResult {
    double value = 0;
    double error_estimate = 0;  // grid-doubling difference |I_N - I_{N/2}|
    long excluded_zeros = 0;    // exact grid zeros excluded from the mean
    int grid = 0;
};

// Mean of log|p| over the N x N roots-of-unity grid (sorted pairwise-tree
// summation; exact zeros excluded and reported).
MahlerResult mahler_measure(const LaurentPolynomial2& p, int grid);

struct EntropyRow {
    int n = 0;
    BigInt fix_count = 0;
    BigInt box_count = 0;
    BigInt pattern_count = 0;
    bool pattern_exact = true;
    double log_fix_per_site = 0;      // -inf rendered by the writer for zero counts
    double log_box_per_site = 0;
    double log_pattern_per_site = 0;
    bool fekete_ok = true;            // pattern per-site log >= quadrature - error
};

struct EntropyReport {
    std::string set_name;
    std::vector<EntropyRow> rows;
    MahlerResult quadrature;
    double fekete_floor = 0;  // quadrature value minus its error estimate
    std::string note;
};

// Finite-size table for A_L or A_+ against the corresponding integral.
EntropyReport entropy_report(const RestrictingSet& A, int n_max, int grid = 512,
                             const Budget& budget = Budget::from_env());

struct UniversalBound {
    double value = 0;
    double error = 0;
};

// The A_L Mahler value: a lower bound for topological entropy of any
// restricting set not contained in a line.
UniversalBound universal_lower_bound(int grid = 2048);
bool lower_bound_applies(const RestrictingSet& A);  // affine dimension >= 2

}  // namespace permlattice
