#include "permlattice/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "permlattice/correspond.hpp"
#include "permlattice/graphkit.hpp"
#include "permlattice/planarcount.hpp"

namespace permlattice {

void LaurentPolynomial2::set(int j, int k, BigRat c) {
    c.canonicalize();
    if (c == 0)
        terms_.erase({j, k});
    else
        terms_[{j, k}] = c;
}

LaurentPolynomial2 LaurentPolynomial2::operator*(const LaurentPolynomial2& o) const {
    LaurentPolynomial2 out;
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) {
            Exponent e{ea.first + eb.first, ea.second + eb.second};
            auto it = out.terms_.find(e);
            BigRat c = (it == out.terms_.end() ? BigRat(0) : it->second) + ca * cb;
            out.set(e.first, e.second, c);
        }
    return out;
}

LaurentPolynomial2 LaurentPolynomial2::swap_vars() const {
    LaurentPolynomial2 out;
    for (const auto& [e, c] : terms_) out.set(e.second, e.first, c);
    return out;
}

LaurentPolynomial2 LaurentPolynomial2::invert_z() const {
    LaurentPolynomial2 out;
    for (const auto& [e, c] : terms_) out.set(-e.first, e.second, c);
    return out;
}

LaurentPolynomial2 LaurentPolynomial2::honeycomb_characteristic() {
    LaurentPolynomial2 p;
    p.set(0, 0, 1);
    p.set(1, 0, 1);
    p.set(0, 1, 1);
    return p;
}

LaurentPolynomial2 LaurentPolynomial2::square_characteristic() {
    LaurentPolynomial2 p;
    p.set(0, 0, 4);
    p.set(1, 0, -1);
    p.set(-1, 0, -1);
    p.set(0, 1, -1);
    p.set(0, -1, -1);
    return p;
}

LaurentPolynomial2 LaurentPolynomial2::parse(const std::string& spec) {
    LaurentPolynomial2 p;
    std::stringstream ss(spec);
    std::string term;
    while (std::getline(ss, term, ';')) {
        if (term.empty()) continue;
        auto colon = term.find(':');
        auto comma = term.find(',', colon);
        if (colon == std::string::npos || comma == std::string::npos)
            fail(Err::Domain, "laurent parse: expected c:j,k terms, got '" + term + "'");
        BigRat c(term.substr(0, colon));
        c.canonicalize();
        int j = std::stoi(term.substr(colon + 1, comma - colon - 1));
        int k = std::stoi(term.substr(comma + 1));
        auto it = p.terms_.find({j, k});
        BigRat acc = (it == p.terms_.end() ? BigRat(0) : it->second) + c;
        p.set(j, k, acc);
    }
    return p;
}

std::string LaurentPolynomial2::str() const {
    std::string s;
    for (const auto& [e, c] : terms_) {
        if (!s.empty()) s += "; ";
        s += c.get_str() + ":" + std::to_string(e.first) + "," + std::to_string(e.second);
    }
    return s.empty() ? "0" : s;
}

namespace {

// Deterministic pairwise tree sum; input order fixed by the caller.
double tree_sum(std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo == 0) return 0.0;
    if (hi - lo == 1) return v[lo];
    std::size_t mid = lo + (hi - lo) / 2;
    return tree_sum(v, lo, mid) + tree_sum(v, mid, hi);
}

struct GridPass {
    double mean = 0;
    long zeros = 0;
};

GridPass grid_mean(const LaurentPolynomial2& p, int N) {
    // roots-of-unity table; each term's value at (j,k) is a single lookup
    std::vector<std::complex<double>> root(N);
    for (int m = 0; m < N; ++m) {
        double th = 2.0 * M_PI * m / N;
        root[m] = {std::cos(th), std::sin(th)};
    }
    struct Term {
        double c;
        long j, k;
    };
    std::vector<Term> terms;
    double scale = 0;
    for (const auto& [e, c] : p.terms()) {
        terms.push_back({c.get_d(), e.first, e.second});
        scale += std::fabs(c.get_d());
    }
    const double zero_eps = 1e-12 * std::max(1.0, scale);
    std::vector<double> logs;
    logs.reserve(static_cast<std::size_t>(N) * N);
    long zeros = 0;
    for (long j = 0; j < N; ++j) {
        for (long k = 0; k < N; ++k) {
            std::complex<double> v{0, 0};
            for (const auto& t : terms) {
                long idx = ((t.j * j + t.k * k) % N + N) % N;
                v += t.c * root[idx];
            }
            double a = std::abs(v);
            if (a <= zero_eps) {
                ++zeros;
                continue;
            }
            logs.push_back(std::log(a));
        }
    }
    // Sorting makes the sum invariant under grid symmetries (z<->w, z->1/z
    // permute the same multiset of values) and independent of evaluation order.
    std::sort(logs.begin(), logs.end());
    GridPass out;
    out.zeros = zeros;
    if (!logs.empty()) out.mean = tree_sum(logs, 0, logs.size()) / static_cast<double>(logs.size());
    return out;
}

}  // namespace

MahlerResult mahler_measure(const LaurentPolynomial2& p, int grid) {
    if (p.zero()) fail(Err::Domain, "mahler_measure: zero polynomial");
    if (grid < 8) fail(Err::Domain, "mahler_measure: grid >= 8 required");
    GridPass full = grid_mean(p, grid);
    GridPass half = grid_mean(p, grid / 2);
    MahlerResult r;
    r.value = full.mean;
    r.error_estimate = std::fabs(full.mean - half.mean);
    r.excluded_zeros = full.zeros;
    r.grid = grid;
    return r;
}

namespace {

double per_site_log(const BigInt& count, int n) {
    return log_bigint(count) / (static_cast<double>(n) * n);
}

}  // namespace

EntropyReport entropy_report(const RestrictingSet& A, int n_max, int grid,
                             const Budget& budget) {
    const bool isAL = A == RestrictingSet::AL();
    const bool isAplus = A == RestrictingSet::Aplus();
    if (!isAL && !isAplus)
        fail(Err::Domain, "entropy_report: tables are wired for AL and A+ only");
    EntropyReport rep;
    rep.set_name = isAL ? "AL" : "A+";
    LaurentPolynomial2 p = isAL ? LaurentPolynomial2::honeycomb_characteristic()
                                : LaurentPolynomial2::square_characteristic();
    MahlerResult q = mahler_measure(p, grid);
    if (isAplus) {
        q.value *= 0.5;  // the theorem's 1/2 prefactor
        q.error_estimate *= 0.5;
    }
    rep.quadrature = q;
    rep.fekete_floor = q.value - q.error_estimate;
    for (int n = 1; n <= n_max; ++n) {
        EntropyRow row;
        row.n = n;
        BoxShape shape = BoxShape::of2(n, n);
        // fix counts through the correspondence: |fix| = |PM| of the quotient
        // double cover (valid for every n)
        UndirectedGraph cover = io_double_cover(torus_quotient(A, shape));
        row.fix_count = count_toral_matchings(cover, budget);
        row.box_count = count_box_permutations(A, shape, budget);
        if (isAL) {
            ALWindow w = al_window(n, n);
            row.pattern_count = count_perfect_covers(cover_instance_from_al_window(w));
        } else {
            BigInt black = count_perfect_covers(square_window_color(n, 0));
            BigInt white = count_perfect_covers(square_window_color(n, 1));
            row.pattern_count = black * white;
        }
        row.log_fix_per_site = per_site_log(row.fix_count, n);
        row.log_box_per_site = per_site_log(row.box_count, n);
        row.log_pattern_per_site = per_site_log(row.pattern_count, n);
        row.fekete_ok = row.log_pattern_per_site >= rep.fekete_floor;
        rep.rows.push_back(row);
    }
    rep.note = "per-site pattern logs upper-bound the entropy (Fekete); no limit is asserted";
    return rep;
}

UniversalBound universal_lower_bound(int grid) {
    MahlerResult m = mahler_measure(LaurentPolynomial2::honeycomb_characteristic(), grid);
    return UniversalBound{m.value, m.error_estimate};
}

bool lower_bound_applies(const RestrictingSet& A) { return affine_dimension(A) >= 2; }

}  // namespace permlattice
