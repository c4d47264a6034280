#include "permlattice/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

namespace permlattice {

double log_bigint(const BigInt& n) {
    if (n == 0) return -std::numeric_limits<double>::infinity();
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

RestrictingSet RestrictingSet::from_vectors(int dim, std::vector<Coords> vectors) {
    if (dim < 1) fail(Err::Domain, "restricting set: dimension must be positive");
    if (vectors.empty()) fail(Err::Domain, "restricting set: must be nonempty");
    std::set<Coords> seen;
    for (const auto& v : vectors) {
        if (static_cast<int>(v.size()) != dim)
            fail(Err::Domain, "restricting set: vector of wrong length " + to_string(v));
        if (!seen.insert(v).second)
            fail(Err::Domain, "restricting set: duplicate vector " + to_string(v));
    }
    return RestrictingSet{dim, std::move(vectors)};
}

RestrictingSet RestrictingSet::from_vec2(std::vector<Vec2> vs) {
    std::vector<Coords> raw;
    raw.reserve(vs.size());
    for (Vec2 v : vs) raw.push_back({v.x, v.y});
    return from_vectors(2, std::move(raw));
}

RestrictingSet RestrictingSet::AL() { return from_vec2({{0, 0}, {1, 0}, {0, 1}}); }
RestrictingSet RestrictingSet::Aplus() { return from_vec2({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}); }
RestrictingSet RestrictingSet::Aoplus() {
    return from_vec2({{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}});
}

std::optional<RestrictingSet> RestrictingSet::preset(const std::string& token) {
    if (token == "AL") return AL();
    if (token == "A+" || token == "Aplus") return Aplus();
    if (token == "Aoplus") return Aoplus();
    return std::nullopt;
}

int RestrictingSet::index_of(const Coords& v) const {
    for (std::size_t i = 0; i < vectors.size(); ++i)
        if (vectors[i] == v) return static_cast<int>(i);
    return -1;
}

bool RestrictingSet::symmetric() const {
    for (const auto& v : vectors) {
        Coords neg(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
        if (!contains(neg)) return false;
    }
    return true;
}

BoxShape BoxShape::of(Coords n) {
    if (n.empty()) fail(Err::Domain, "box shape: empty");
    for (auto c : n)
        if (c < 1) fail(Err::Domain, "box shape: coordinates must be >= 1");
    return BoxShape{std::move(n)};
}

std::int64_t BoxShape::cells() const {
    std::int64_t p = 1;
    for (auto c : n) p *= c;
    return p;
}

std::vector<Coords> BoxShape::points() const {
    std::vector<Coords> out;
    out.reserve(static_cast<std::size_t>(cells()));
    Coords p(n.size(), 0);
    while (true) {
        out.push_back(p);
        int i = 0;
        for (; i < dim(); ++i) {
            if (++p[i] < n[i]) break;
            p[i] = 0;
        }
        if (i == dim()) break;
    }
    return out;
}

bool BoxShape::contains(const Coords& p) const {
    if (p.size() != n.size()) return false;
    for (std::size_t i = 0; i < n.size(); ++i)
        if (p[i] < 0 || p[i] >= n[i]) return false;
    return true;
}

Coords mod_coords(const Coords& p, const Coords& n) {
    Coords r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = mod_floor(p[i], n[i]);
    return r;
}

bool alphabet_faithful(const RestrictingSet& A, const BoxShape& shape) {
    std::set<Coords> residues;
    for (const auto& v : A.vectors) residues.insert(mod_coords(v, shape.n));
    return residues.size() == A.size();
}

namespace {
bool row_major_less(const Coords& a, const Coords& b) {
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}
}  // namespace

Pattern Pattern::from_map(RestrictingSet set, const std::map<Coords, Coords>& assignment) {
    if (assignment.empty()) fail(Err::Domain, "pattern: domain must be nonempty");
    Pattern p;
    p.set = std::move(set);
    for (const auto& [cell, disp] : assignment) {
        if (static_cast<int>(cell.size()) != p.set.dim)
            fail(Err::Domain, "pattern: cell of wrong dimension " + to_string(cell));
        p.domain.push_back(cell);
    }
    std::sort(p.domain.begin(), p.domain.end(), row_major_less);
    p.values.reserve(p.domain.size());
    for (const auto& cell : p.domain) {
        int idx = p.set.index_of(assignment.at(cell));
        if (idx < 0)
            fail(Err::Domain, "pattern: value " + to_string(assignment.at(cell)) +
                                  " at " + to_string(cell) + " not in restricting set");
        p.values.push_back(idx);
    }
    return p;
}

Pattern Pattern::on_box(RestrictingSet set, const BoxShape& shape, std::vector<int> values) {
    if (shape.dim() != set.dim) fail(Err::Domain, "pattern: shape/set dimension mismatch");
    Pattern p;
    p.set = std::move(set);
    p.domain = shape.points();
    std::sort(p.domain.begin(), p.domain.end(), row_major_less);
    if (values.size() != p.domain.size())
        fail(Err::Domain, "pattern: expected " + std::to_string(p.domain.size()) + " values");
    for (int v : values)
        if (v < 0 || v >= static_cast<int>(p.set.size()))
            fail(Err::Domain, "pattern: value index out of range");
    p.values = std::move(values);
    return p;
}

int Pattern::position_of(const Coords& p) const {
    auto it = std::lower_bound(domain.begin(), domain.end(), p, row_major_less);
    if (it == domain.end() || *it != p) return -1;
    return static_cast<int>(it - domain.begin());
}

const Coords& Pattern::value_at(const Coords& p) const {
    int i = position_of(p);
    if (i < 0) fail(Err::Domain, "pattern: cell " + to_string(p) + " not in domain");
    return set.vectors[values[i]];
}

Coords Pattern::image_of(const Coords& p) const {
    const Coords& v = value_at(p);
    Coords out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] + v[i];
    return out;
}

bool Pattern::domain_is_box(const BoxShape& shape) const {
    if (shape.dim() != dim()) return false;
    if (static_cast<std::int64_t>(domain.size()) != shape.cells()) return false;
    for (const auto& p : domain)
        if (!shape.contains(p)) return false;
    return true;
}

std::optional<BoxShape> Pattern::box_domain() const {
    Coords maxc(dim(), 0);
    for (const auto& p : domain) {
        for (int i = 0; i < dim(); ++i) {
            if (p[i] < 0) return std::nullopt;
            maxc[i] = std::max(maxc[i], p[i]);
        }
    }
    for (auto& c : maxc) ++c;
    BoxShape s = BoxShape::of(maxc);
    if (!domain_is_box(s)) return std::nullopt;
    return s;
}

ToralCheck is_toral_permutation(const Pattern& pattern, const BoxShape& shape) {
    if (!pattern.domain_is_box(shape))
        fail(Err::Domain, "is_toral_permutation: pattern domain is not the box [n]");
    ToralCheck out;
    out.alphabet_faithful = alphabet_faithful(pattern.set, shape);
    std::set<Coords> hit;
    for (std::size_t i = 0; i < pattern.domain.size(); ++i) {
        Coords img(pattern.domain[i].size());
        const Coords& v = pattern.set.vectors[pattern.values[i]];
        for (std::size_t j = 0; j < img.size(); ++j)
            img[j] = mod_floor(pattern.domain[i][j] + v[j], shape.n[j]);
        if (!hit.insert(img).second) return out;  // collision: not bijective
    }
    out.bijective = true;
    return out;
}

ToralPermutation ToralPermutation::checked(BoxShape shape, Pattern pattern) {
    if (!is_toral_permutation(pattern, shape).bijective)
        fail(Err::Domain, "toral permutation: induced map is not a bijection");
    return ToralPermutation{std::move(shape), std::move(pattern)};
}

Coords ToralPermutation::apply(const Coords& p) const {
    const Coords& v = pattern.value_at(mod_coords(p, shape.n));
    Coords out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = mod_floor(p[i] + v[i], shape.n[i]);
    return out;
}

ToralPermutation ToralPermutation::inverse() const {
    // pi^-1(t) - t = -(v at pi^-1(t)); requires -A displacements, so the inverse
    // pattern lives over the negated restricting set.
    std::vector<Coords> neg;
    for (const auto& v : pattern.set.vectors) {
        Coords w(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) w[i] = -v[i];
        neg.push_back(w);
    }
    RestrictingSet negSet = RestrictingSet::from_vectors(pattern.set.dim, neg);
    std::map<Coords, Coords> inv;
    for (std::size_t i = 0; i < pattern.domain.size(); ++i) {
        const Coords& src = pattern.domain[i];
        Coords img = apply(src);
        inv[img] = negSet.vectors[pattern.values[i]];
    }
    return ToralPermutation::checked(shape, Pattern::from_map(negSet, inv));
}

ToralPermutation ToralPermutation::translated(const Coords& m) const {
    // sigma_m . pi . sigma_m^-1: displacement v'(x) = v(x - m).
    std::map<Coords, Coords> shifted;
    for (std::size_t i = 0; i < pattern.domain.size(); ++i) {
        Coords cell(pattern.domain[i].size());
        for (std::size_t j = 0; j < cell.size(); ++j)
            cell[j] = mod_floor(pattern.domain[i][j] + m[j], shape.n[j]);
        shifted[cell] = pattern.set.vectors[pattern.values[i]];
    }
    return ToralPermutation::checked(shape, Pattern::from_map(pattern.set, shifted));
}

BigInt count_box_permutations(const RestrictingSet& A, const BoxShape& shape,
                              const Budget& budget) {
    if (A.dim != shape.dim()) fail(Err::Domain, "count_box_permutations: dimension mismatch");
    std::vector<Coords> cells = shape.points();
    std::sort(cells.begin(), cells.end(), row_major_less);
    std::set<Coords> used;
    BigInt count = 0;
    NodeCounter nodes(budget);

    // Row-major cell order, targets tried in stored A order.
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == cells.size()) {
            ++count;
            return;
        }
        nodes.tick();
        for (const auto& a : A.vectors) {
            Coords t(cells[i].size());
            bool inside = true;
            for (std::size_t j = 0; j < t.size(); ++j) {
                t[j] = cells[i][j] + a[j];
                if (t[j] < 0 || t[j] >= shape.n[j]) {
                    inside = false;
                    break;
                }
            }
            if (!inside || used.count(t)) continue;
            used.insert(t);
            rec(i + 1);
            used.erase(t);
        }
    };
    rec(0);
    return count;
}

IntMatrix IntMatrix::identity(int d) {
    IntMatrix m;
    m.d = d;
    m.a.assign(static_cast<std::size_t>(d) * d, 0);
    for (int i = 0; i < d; ++i) m.a[i * d + i] = 1;
    return m;
}

IntMatrix IntMatrix::of2(std::int64_t a11, std::int64_t a12, std::int64_t a21, std::int64_t a22) {
    IntMatrix m;
    m.d = 2;
    m.a = {a11, a12, a21, a22};
    return m;
}

Coords IntMatrix::apply(const Coords& v) const {
    Coords out(d, 0);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) out[r] += at(r, c) * v[c];
    return out;
}

namespace {
std::int64_t det_rec(const std::vector<std::int64_t>& m, int d) {
    if (d == 1) return m[0];
    std::int64_t s = 0, sign = 1;
    for (int c = 0; c < d; ++c) {
        std::vector<std::int64_t> minor;
        minor.reserve(static_cast<std::size_t>(d - 1) * (d - 1));
        for (int r = 1; r < d; ++r)
            for (int cc = 0; cc < d; ++cc)
                if (cc != c) minor.push_back(m[r * d + cc]);
        s += sign * m[c] * det_rec(minor, d - 1);
        sign = -sign;
    }
    return s;
}
}  // namespace

std::int64_t IntMatrix::det() const { return det_rec(a, d); }

IntMatrix IntMatrix::adjugate() const {
    IntMatrix adj;
    adj.d = d;
    adj.a.assign(a.size(), 0);
    if (d == 1) {
        adj.a[0] = 1;
        return adj;
    }
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            std::vector<std::int64_t> minor;
            for (int rr = 0; rr < d; ++rr) {
                if (rr == r) continue;
                for (int cc = 0; cc < d; ++cc)
                    if (cc != c) minor.push_back(a[rr * d + cc]);
            }
            std::int64_t cof = det_rec(minor, d - 1);
            if ((r + c) & 1) cof = -cof;
            adj.a[c * d + r] = cof;  // transpose of cofactors
        }
    }
    return adj;
}

AffineImage affine_image(const RestrictingSet& A, const IntMatrix& M, const Coords& b) {
    if (M.d != A.dim || static_cast<int>(b.size()) != A.dim)
        fail(Err::Domain, "affine_image: dimension mismatch");
    AffineImage out;
    std::vector<Coords> imgs;
    std::set<Coords> seen;
    for (const auto& v : A.vectors) {
        Coords t = M.apply(v);
        for (int i = 0; i < A.dim; ++i) t[i] += b[i];
        if (!seen.insert(t).second) {
            out.injective_on_A = false;
            continue;
        }
        imgs.push_back(t);
    }
    out.set = RestrictingSet::from_vectors(A.dim, imgs);
    return out;
}

int affine_dimension(const RestrictingSet& A) {
    // Rank of {a - a0} over Q via fraction-free elimination.
    const Coords& a0 = A.vectors[0];
    std::vector<std::vector<BigInt>> rows;
    for (std::size_t i = 1; i < A.vectors.size(); ++i) {
        std::vector<BigInt> r(A.dim);
        for (int j = 0; j < A.dim; ++j) r[j] = A.vectors[i][j] - a0[j];
        rows.push_back(std::move(r));
    }
    int rank = 0;
    for (int col = 0; col < A.dim && rank < static_cast<int>(rows.size()); ++col) {
        int pivot = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (rows[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int r = rank + 1; r < static_cast<int>(rows.size()); ++r) {
            if (rows[r][col] == 0) continue;
            BigInt f = rows[r][col], p = rows[rank][col];
            for (int c = col; c < A.dim; ++c) rows[r][c] = rows[r][c] * p - rows[rank][c] * f;
        }
        ++rank;
    }
    return rank;
}

bool full_affine_dimension(const RestrictingSet& A) {
    return affine_dimension(A) + 1 == static_cast<int>(A.size());
}

namespace {
// Coset signature of x in Z^d / M Z^d: componentwise residue of adj(M)*x mod |det|.
Coords coset_signature(const IntMatrix& adj, std::int64_t absdet, const Coords& x) {
    Coords s = adj.apply(x);
    for (auto& c : s) c = mod_floor(c, absdet);
    return s;
}
}  // namespace

std::vector<Coords> coset_representatives(const IntMatrix& M) {
    std::int64_t det = M.det();
    if (det == 0) fail(Err::Singular, "coset_representatives: det M = 0");
    std::int64_t k = std::llabs(det);
    IntMatrix adj = M.adjugate();
    std::map<Coords, Coords> firstSeen;  // signature -> representative
    // Lexicographic scan over nonnegative points; the box [0,k)^d meets every coset,
    // but grow the bound defensively until all k are found.
    for (std::int64_t bound = k; static_cast<std::int64_t>(firstSeen.size()) < k; bound *= 2) {
        firstSeen.clear();
        Coords p(M.d, 0);
        std::function<void(int)> scan = [&](int depth) {
            if (static_cast<std::int64_t>(firstSeen.size()) == k) return;
            if (depth == M.d) {
                Coords sig = coset_signature(adj, k, p);
                firstSeen.emplace(sig, p);
                return;
            }
            for (p[depth] = 0; p[depth] <= bound; ++p[depth]) {
                scan(depth + 1);
                if (static_cast<std::int64_t>(firstSeen.size()) == k) break;
            }
            p[depth] = 0;
        };
        // Scan in lexicographic order with the FIRST coordinate most significant,
        // so the first point hitting a coset is its lexicographically least
        // nonnegative representative.
        scan(0);
        if (bound > k * 16) fail(Err::Internal, "coset_representatives: scan failed to close");
    }
    std::vector<Coords> reps;
    reps.reserve(static_cast<std::size_t>(k));
    for (auto& [sig, rep] : firstSeen) reps.push_back(rep);
    // Deterministic output order: sort representatives lexicographically.
    std::sort(reps.begin(), reps.end());
    return reps;
}

namespace {
// Minimal n' with M * Gamma_{n'} = Gamma_n; CompatibilityError when equality fails.
BoxShape derived_subtorus(const IntMatrix& M, const BoxShape& shape) {
    std::int64_t det = M.det();
    if (det == 0) fail(Err::Singular, "matent: det M = 0");
    IntMatrix adj = M.adjugate();
    std::int64_t k = std::llabs(det);
    Coords nprime(M.d, 0);
    for (int j = 0; j < M.d; ++j) {
        // least t > 0 with M(t e_j) in Gamma_n
        for (std::int64_t t = 1; t <= shape.n[j] * k; ++t) {
            bool ok = true;
            for (int r = 0; r < M.d; ++r)
                if (mod_floor(t * M.at(r, j), shape.n[r]) != 0) {
                    ok = false;
                    break;
                }
            if (ok) {
                nprime[j] = t;
                break;
            }
        }
        if (nprime[j] == 0) fail(Err::Compatibility, "matent: no finite subtorus period");
    }
    BoxShape sub = BoxShape::of(nprime);
    // Require Gamma_n subset of M Gamma_{n'}: M^-1 (n_j e_j) in Gamma_{n'}.
    for (int j = 0; j < M.d; ++j) {
        Coords e(M.d, 0);
        e[j] = shape.n[j];
        Coords y = adj.apply(e);  // M^-1 e * det
        for (int r = 0; r < M.d; ++r) {
            if (y[r] % det != 0 || mod_floor(y[r] / det, sub.n[r]) != 0)
                fail(Err::Compatibility,
                     "matent: torus " + to_string(shape.n) + " incompatible with M");
        }
    }
    return sub;
}
}  // namespace

std::vector<ToralPermutation> matent_decompose(const ToralPermutation& omega,
                                               const IntMatrix& M,
                                               const RestrictingSet& A) {
    std::int64_t det = M.det();
    if (det == 0) fail(Err::Singular, "matent_decompose: det M = 0");
    if (M.d != omega.shape.dim()) fail(Err::Domain, "matent_decompose: dimension mismatch");
    BoxShape sub = derived_subtorus(M, omega.shape);
    std::vector<Coords> reps = coset_representatives(M);
    IntMatrix adj = M.adjugate();

    std::vector<ToralPermutation> parts;
    parts.reserve(reps.size());
    for (const auto& v : reps) {
        std::map<Coords, Coords> field;
        for (const auto& m : sub.points()) {
            Coords x = M.apply(m);
            for (int i = 0; i < M.d; ++i) x[i] += v[i];
            Coords w = omega.pattern.value_at(mod_coords(x, omega.shape.n));  // in M*A
            Coords back = adj.apply(w);
            Coords a(M.d);
            for (int i = 0; i < M.d; ++i) {
                if (back[i] % det != 0)
                    fail(Err::Domain, "matent_decompose: displacement not in M*A");
                a[i] = back[i] / det;
            }
            if (!A.contains(a))
                fail(Err::Domain, "matent_decompose: M^-1 displacement not in A");
            field[m] = a;
        }
        parts.push_back(ToralPermutation::checked(sub, Pattern::from_map(A, field)));
    }
    return parts;
}

ToralPermutation matent_compose(const std::vector<ToralPermutation>& parts,
                                const IntMatrix& M,
                                const RestrictingSet& MA,
                                const BoxShape& shape) {
    std::int64_t det = M.det();
    if (det == 0) fail(Err::Singular, "matent_compose: det M = 0");
    BoxShape sub = derived_subtorus(M, shape);
    std::vector<Coords> reps = coset_representatives(M);
    if (parts.size() != reps.size())
        fail(Err::Domain, "matent_compose: expected " + std::to_string(reps.size()) + " parts");
    IntMatrix adj = M.adjugate();
    std::int64_t k = std::llabs(det);

    std::map<Coords, std::size_t> bySig;
    for (std::size_t i = 0; i < reps.size(); ++i)
        bySig[coset_signature(adj, k, reps[i])] = i;

    std::map<Coords, Coords> field;
    for (const auto& x : shape.points()) {
        Coords sig = coset_signature(adj, k, x);
        std::size_t j = bySig.at(sig);
        Coords diff(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - reps[j][i];
        Coords y = adj.apply(diff);
        Coords m(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (y[i] % det != 0) fail(Err::Internal, "matent_compose: coset arithmetic broke");
            m[i] = y[i] / det;
        }
        Coords a = parts[j].pattern.value_at(mod_coords(m, sub.n));
        Coords w = M.apply(a);
        if (!MA.contains(w)) fail(Err::Domain, "matent_compose: M*value not in target set");
        field[x] = w;
    }
    return ToralPermutation::checked(shape, Pattern::from_map(MA, field));
}

}  // namespace permlattice
