#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace permlattice {

using BigInt = mpz_class;
using BigRat = mpq_class;

// Generic lattice point, one entry per dimension.
using Coords = std::vector<std::int64_t>;

struct Vec2 {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(Vec2 a, Vec2 b) { return !(a == b); }
    friend bool operator<(Vec2 a, Vec2 b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;  // row-major: y outer, x inner
    }
};

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline Vec2 mod_vec(Vec2 a, Vec2 n) { return {mod_floor(a.x, n.x), mod_floor(a.y, n.y)}; }

inline std::string to_string(Vec2 v) {
    return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + ")";
}

inline std::string to_string(const Coords& c) {
    std::string s = "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(c[i]);
    }
    return s + ")";
}

enum class Err {
    Domain,         // malformed or mismatched inputs
    Compatibility,  // torus lattice incompatible with the requested sublattice
    Singular,       // singular matrix where an injective one is required
    Structure,      // host graph lacks required structure (bipartite/symmetric)
    NotAdmissible,  // pattern fails an admissibility precondition
    Geometry,       // target set not separable in the embedding
    Embedding,      // rotation system inconsistent / not genus zero
    Capacity,       // configured search budget exceeded
    Internal,       // invariant violated; indicates a bug
};

class Error : public std::runtime_error {
public:
    Error(Err kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    Err kind() const { return kind_; }

private:
    Err kind_;
};

[[noreturn]] inline void fail(Err kind, const std::string& msg) { throw Error(kind, msg); }

inline const char* err_name(Err e) {
    switch (e) {
        case Err::Domain: return "DomainError";
        case Err::Compatibility: return "CompatibilityError";
        case Err::Singular: return "SingularError";
        case Err::Structure: return "StructureError";
        case Err::NotAdmissible: return "NotAdmissibleError";
        case Err::Geometry: return "GeometryError";
        case Err::Embedding: return "EmbeddingError";
        case Err::Capacity: return "CapacityError";
        case Err::Internal: return "InternalError";
    }
    return "Error";
}

// Search budgets. Oracles refuse (CapacityError) instead of truncating.
struct Budget {
    long long search_nodes = 800'000'000;
    int max_brute_edges = 64;
    int transfer_width_cap = 12;
    int transfer_height_cap = 26;

    static Budget from_env() {
        Budget b;
        if (const char* s = std::getenv("PERMLATTICE_BUDGET")) {
            char* end = nullptr;
            long long v = std::strtoll(s, &end, 10);
            if (end != s && v > 0) b.search_nodes = v;
        }
        return b;
    }
};

struct NodeCounter {
    long long used = 0;
    long long cap;
    explicit NodeCounter(const Budget& b) : cap(b.search_nodes) {}
    void tick() {
        if (++used > cap) fail(Err::Capacity, "search budget exceeded (" + std::to_string(cap) + " nodes)");
    }
};

// log of a big integer; -inf for zero.
double log_bigint(const BigInt& n);

}  // namespace permlattice

template <>
struct std::hash<permlattice::Vec2> {
    std::size_t operator()(permlattice::Vec2 v) const noexcept {
        return std::hash<std::int64_t>()(v.x * 1000003 + v.y);
    }
};
