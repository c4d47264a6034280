#include "permlattice/admissibility.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace permlattice {

std::vector<Coords> boundary(const std::vector<Coords>& U, const RestrictingSet& A) {
    std::set<Coords> uset(U.begin(), U.end());
    std::vector<Coords> out;
    for (const auto& u : U) {
        for (const auto& a : A.vectors) {
            Coords p(u.size());
            for (std::size_t i = 0; i < u.size(); ++i) p[i] = u[i] - a[i];
            if (!uset.count(p)) {
                out.push_back(u);
                break;
            }
        }
    }
    return out;
}

std::vector<Coords> interior(const std::vector<Coords>& U, const RestrictingSet& A) {
    std::set<Coords> b;
    for (auto& c : boundary(U, A)) b.insert(c);
    std::vector<Coords> out;
    for (const auto& u : U)
        if (!b.count(u)) out.push_back(u);
    return out;
}

NecessaryCheck necessary_condition(const Pattern& pat) {
    NecessaryCheck out;
    std::map<Coords, Coords> image_src;
    for (std::size_t i = 0; i < pat.domain.size(); ++i) {
        Coords img = pat.image_of(pat.domain[i]);
        auto [it, fresh] = image_src.emplace(img, pat.domain[i]);
        if (!fresh) {
            out.colliding_cells = std::make_pair(it->second, pat.domain[i]);
            return out;
        }
    }
    for (const auto& u : interior(pat.domain, pat.set)) {
        if (!image_src.count(u)) {
            out.uncovered_interior_cell = u;
            return out;
        }
    }
    out.ok = true;
    return out;
}

ForbiddenSet forbidden_preimage_count(const RestrictingSet& A) {
    ForbiddenSet F;
    F.name = "F_{" + std::to_string(A.size()) + "-set}";
    F.alphabet = A;
    std::vector<Coords> domain;
    for (const auto& a : A.vectors) {
        Coords neg(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) neg[i] = -a[i];
        domain.push_back(neg);
    }
    std::sort(domain.begin(), domain.end());
    domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
    std::vector<int> choice(domain.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == domain.size()) {
            int pointing = 0;
            for (std::size_t k = 0; k < domain.size(); ++k) {
                const Coords& v = A.vectors[choice[k]];
                bool at_origin = true;
                for (std::size_t j = 0; j < v.size(); ++j)
                    if (domain[k][j] + v[j] != 0) {
                        at_origin = false;
                        break;
                    }
                if (at_origin) ++pointing;
            }
            if (pointing != 1) {
                std::map<Coords, Coords> m;
                for (std::size_t k = 0; k < domain.size(); ++k)
                    m[domain[k]] = A.vectors[choice[k]];
                F.patterns.push_back(Pattern::from_map(A, m));
            }
            return;
        }
        for (std::size_t ai = 0; ai < A.size(); ++ai) {
            choice[i] = static_cast<int>(ai);
            rec(i + 1);
        }
    };
    rec(0);
    return F;
}

ForbiddenSet forbidden_collisions(const RestrictingSet& pairsFrom) {
    ForbiddenSet F;
    F.name = "collisions";
    F.alphabet = pairsFrom;
    for (std::size_t i = 0; i < pairsFrom.size(); ++i) {
        for (std::size_t j = i + 1; j < pairsFrom.size(); ++j) {
            const Coords& a = pairsFrom.vectors[i];
            const Coords& b = pairsFrom.vectors[j];
            Coords na(a.size()), nb(b.size());
            for (std::size_t k = 0; k < a.size(); ++k) {
                na[k] = -a[k];
                nb[k] = -b[k];
            }
            std::map<Coords, Coords> m;
            m[na] = a;
            m[nb] = b;
            F.patterns.push_back(Pattern::from_map(pairsFrom, m));
        }
    }
    return F;
}

ForbiddenSet preset_F_Aplus() {
    ForbiddenSet F = forbidden_preimage_count(RestrictingSet::Aplus());
    F.name = "F_{A+}";
    return F;
}

ForbiddenSet preset_Fprime_Aplus() {
    ForbiddenSet F = preset_F_Aplus();
    // Collision pairs over A_oplus, so a zero displacement colliding with a
    // move is expressible; A_+-valued configurations never match the extra
    // zero-valued cells, so the defined SFT is unchanged.
    ForbiddenSet coll = forbidden_collisions(RestrictingSet::Aoplus());
    for (auto& p : coll.patterns) F.patterns.push_back(std::move(p));
    F.alphabet = RestrictingSet::Aoplus();
    F.name = "F'_{A+}";
    return F;
}

bool local_admissibility(const Pattern& pat, const ForbiddenSet& F) {
    if (pat.domain.empty()) return true;
    const int d = pat.dim();
    Coords lo = pat.domain.front(), hi = pat.domain.front();
    for (const auto& c : pat.domain)
        for (int i = 0; i < d; ++i) {
            lo[i] = std::min(lo[i], c[i]);
            hi[i] = std::max(hi[i], c[i]);
        }
    for (const auto& w : F.patterns) {
        Coords wlo = w.domain.front(), whi = w.domain.front();
        for (const auto& c : w.domain)
            for (int i = 0; i < d; ++i) {
                wlo[i] = std::min(wlo[i], c[i]);
                whi[i] = std::max(whi[i], c[i]);
            }
        // scan translates t with w's bounding box inside pat's
        Coords t(d);
        std::function<bool(int)> scan = [&](int depth) -> bool {
            if (depth == d) {
                for (std::size_t k = 0; k < w.domain.size(); ++k) {
                    Coords cell(d);
                    for (int i = 0; i < d; ++i) cell[i] = w.domain[k][i] + t[i];
                    int pi = pat.position_of(cell);
                    if (pi < 0) return false;
                    if (!(pat.set.vectors[pat.values[pi]] == w.set.vectors[w.values[k]]))
                        return false;
                }
                return true;  // forbidden pattern embeds
            }
            for (t[depth] = lo[depth] - wlo[depth]; t[depth] <= hi[depth] - whi[depth];
                 ++t[depth])
                if (scan(depth + 1)) return true;
            return false;
        };
        if (scan(0)) return false;
    }
    return true;
}

namespace {

struct Router {
    // torus routing state for the rectangular extension
    Vec2 N;         // torus dimensions
    Vec2 box;       // pattern box dimensions
    std::set<Vec2> blocked;
    std::set<Vec2> reserved;          // entry cells of holes still waiting for a path
    std::map<Vec2, Vec2> assignment;  // cell -> displacement (outside-box routing)

    bool in_box(Vec2 p) const { return p.x >= 0 && p.x < box.x && p.y >= 0 && p.y < box.y; }

    std::vector<Vec2> entries_of(Vec2 hole, const std::vector<Vec2>& steps) const {
        std::vector<Vec2> out;
        for (Vec2 s : steps) {
            Vec2 c = mod_vec(hole - s, N);
            if (!in_box(c)) out.push_back(c);
        }
        return out;
    }

    bool route(Vec2 from, Vec2 hole, const std::vector<Vec2>& steps) {
        // BFS from `from` through free outside cells; final step enters `hole`.
        std::map<Vec2, std::pair<Vec2, Vec2>> parent;  // cell -> (prev, step used)
        std::deque<Vec2> q{from};
        std::set<Vec2> seen{from};
        Vec2 end{-1, -1};
        while (!q.empty() && end == Vec2{-1, -1}) {
            Vec2 c = q.front();
            q.pop_front();
            for (Vec2 s : steps) {
                Vec2 t = mod_vec(c + s, N);
                if (t == hole) {
                    parent[t] = {c, s};
                    end = t;
                    break;
                }
                if (in_box(t) || blocked.count(t) || reserved.count(t) || seen.count(t))
                    continue;
                seen.insert(t);
                parent[t] = {c, s};
                q.push_back(t);
            }
        }
        if (end == Vec2{-1, -1}) return false;
        Vec2 cur = end;
        while (cur != from) {
            auto [prev, step] = parent.at(cur);
            assignment[prev] = step;
            if (prev != from) blocked.insert(prev);
            cur = prev;
        }
        return true;
    }
};

}  // namespace

ExtensionCertificate extend_rectangular(const Pattern& pat) {
    const bool isAL = pat.set == RestrictingSet::AL();
    const bool isAoplus = pat.set == RestrictingSet::Aoplus();
    if (!isAL && !isAoplus)
        fail(Err::Domain, "extend_rectangular: restricting set must be A_L or A_oplus");
    auto boxOpt = pat.box_domain();
    if (!boxOpt) fail(Err::Domain, "extend_rectangular: pattern domain must be a box at origin");
    BoxShape box = *boxOpt;
    NecessaryCheck nec = necessary_condition(pat);
    if (!nec.ok)
        fail(Err::NotAdmissible, "extend_rectangular: pattern fails the necessary condition");

    Vec2 bx{box.n[0], box.n[1]};
    std::set<Vec2> images;
    for (const auto& c : pat.domain) {
        Coords img = pat.image_of(c);
        images.insert({img[0], img[1]});
    }
    std::vector<Vec2> exits, holes;
    for (Vec2 t : images)
        if (!(t.x >= 0 && t.x < bx.x && t.y >= 0 && t.y < bx.y)) exits.push_back(t);
    for (std::int64_t y = 0; y < bx.y; ++y)
        for (std::int64_t x = 0; x < bx.x; ++x)
            if (!images.count({x, y})) holes.push_back({x, y});
    std::sort(exits.begin(), exits.end());
    std::sort(holes.begin(), holes.end());
    if (exits.size() != holes.size())
        fail(Err::Internal, "extend_rectangular: exit/hole count mismatch");

    std::vector<Vec2> steps;
    for (std::size_t i = 0; i < pat.set.size(); ++i) {
        Vec2 a = pat.set.vec2(static_cast<int>(i));
        if (a != Vec2{0, 0}) steps.push_back(a);
    }

    const std::int64_t K = static_cast<std::int64_t>(exits.size());
    for (std::int64_t margin = 2 * K + 4; margin <= 4 * K + 8; margin += 2 * K + 4) {
        Vec2 N{bx.x + margin, bx.y + margin};
        for (std::size_t shift = 0; shift < std::max<std::size_t>(1, exits.size()); ++shift) {
            Router router;
            router.N = N;
            router.box = bx;
            std::vector<Vec2> pendingExits, pendingHoles;
            std::set<Vec2> pairedHoles;
            // pair rule first: an exit adjacent to a hole feeds it directly
            std::map<Vec2, Vec2> direct;
            for (Vec2 m : exits) {
                bool fed = false;
                for (Vec2 s : steps) {
                    Vec2 h = m + s;  // margin keeps this wrap-free
                    if (std::binary_search(holes.begin(), holes.end(), h) &&
                        !pairedHoles.count(h)) {
                        direct[m] = s;
                        pairedHoles.insert(h);
                        fed = true;
                        break;
                    }
                }
                if (!fed) pendingExits.push_back(m);
            }
            for (Vec2 h : holes)
                if (!pairedHoles.count(h)) pendingHoles.push_back(h);
            for (Vec2 m : exits) router.blocked.insert(mod_vec(m, N));
            for (auto& [m, s] : direct) router.assignment[mod_vec(m, N)] = s;
            // keep every waiting hole's entry cells off-limits until its own turn
            for (Vec2 h : pendingHoles)
                for (Vec2 c : router.entries_of(h, steps)) router.reserved.insert(c);
            bool ok = true;
            for (std::size_t i = 0; i < pendingExits.size() && ok; ++i) {
                Vec2 from = mod_vec(pendingExits[i], N);
                Vec2 hole = pendingHoles[(i + shift) % pendingHoles.size()];
                for (Vec2 c : router.entries_of(hole, steps)) router.reserved.erase(c);
                ok = router.route(from, hole, steps);
            }
            if (!ok) continue;
            // assemble the toral displacement field
            std::map<Coords, Coords> field;
            RestrictingSet A = pat.set;
            for (std::int64_t y = 0; y < N.y; ++y)
                for (std::int64_t x = 0; x < N.x; ++x) {
                    Vec2 p{x, y};
                    Coords cell{x, y};
                    if (p.x < bx.x && p.y < bx.y) {
                        field[cell] = pat.value_at(cell);
                    } else if (auto it = router.assignment.find(p);
                               it != router.assignment.end()) {
                        field[cell] = Coords{it->second.x, it->second.y};
                    } else {
                        field[cell] = Coords{0, 0};  // identity off the action
                    }
                }
            BoxShape torus = BoxShape::of({N.x, N.y});
            ToralPermutation cert;
            try {
                cert = ToralPermutation::checked(torus, Pattern::from_map(A, field));
            } catch (const Error&) {
                continue;  // routing produced a clash; try the next pairing
            }
            // machine verification: restriction equals the pattern
            for (const auto& c : pat.domain)
                if (!(cert.pattern.value_at(c) == pat.value_at(c)))
                    fail(Err::Internal, "extend_rectangular: certificate restriction mismatch");
            return ExtensionCertificate{std::move(cert)};
        }
    }
    fail(Err::Internal, "extend_rectangular: routing failed on all pairings");
}

ObstructionOutcome obstruction_search(const Pattern& pat, int radius) {
    ObstructionOutcome out;
    if (pat.dim() != 2) fail(Err::Domain, "obstruction_search: d=2 only");
    Coords lo = pat.domain.front(), hi = pat.domain.front();
    for (const auto& c : pat.domain)
        for (int i = 0; i < 2; ++i) {
            lo[i] = std::min(lo[i], c[i]);
            hi[i] = std::max(hi[i], c[i]);
        }
    std::vector<Coords> window;
    for (std::int64_t y = lo[1] - radius; y <= hi[1] + radius; ++y)
        for (std::int64_t x = lo[0] - radius; x <= hi[0] + radius; ++x)
            window.push_back({x, y});

    // candidate preimages of each window cell (free cells outside the pattern
    // domain always qualify)
    std::map<Coords, std::vector<Coords>> cand;
    for (const auto& c : window) {
        std::vector<Coords> cs;
        for (const auto& a : pat.set.vectors) {
            Coords p{c[0] - a[0], c[1] - a[1]};
            int pi = pat.position_of(p);
            if (pi >= 0) {
                if (pat.set.vectors[pat.values[pi]] == a) cs.push_back(p);
            } else {
                cs.push_back(p);
            }
        }
        std::sort(cs.begin(), cs.end());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
        cand[c] = std::move(cs);
    }

    // Hall check via augmenting paths.
    std::map<Coords, Coords> matchR;  // candidate -> demand
    std::function<bool(const Coords&, std::set<Coords>&)> augment =
        [&](const Coords& u, std::set<Coords>& visited) -> bool {
        for (const auto& p : cand.at(u)) {
            if (visited.count(p)) continue;
            visited.insert(p);
            auto it = matchR.find(p);
            if (it == matchR.end() || augment(it->second, visited)) {
                matchR[p] = u;
                return true;
            }
        }
        return false;
    };
    std::optional<Coords> deficient;
    for (const auto& u : window) {
        std::set<Coords> visited;
        if (!augment(u, visited)) {
            deficient = u;
            break;
        }
    }
    if (!deficient) {
        out.verdict = ObstructionVerdict::Unknown;
        out.reason = "no Hall violation within radius " + std::to_string(radius);
        return out;
    }
    // Koenig-style deficiency set from the unmatched demand.
    std::set<Coords> Z{*deficient};
    std::set<Coords> NZ;
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& u : std::set<Coords>(Z)) {
            for (const auto& p : cand.at(u)) {
                if (NZ.insert(p).second) {
                    auto it = matchR.find(p);
                    if (it != matchR.end() && Z.insert(it->second).second) grew = true;
                }
            }
        }
    }
    if (NZ.size() >= Z.size())
        fail(Err::Internal, "obstruction_search: deficiency extraction failed");
    Obstruction ob;
    ob.demand_cells.assign(Z.begin(), Z.end());
    ob.candidates.assign(NZ.begin(), NZ.end());
    out.verdict = ObstructionVerdict::No;
    out.obstruction = std::move(ob);
    out.reason = "preimage demands exceed candidates";
    return out;
}

AdmissibilityVerdict evaluate_admissibility(const Pattern& pat, const AdmissibilityOptions& opt) {
    AdmissibilityVerdict v;
    NecessaryCheck nec = necessary_condition(pat);
    v.necessary_ok = nec.ok;
    if (opt.forbidden) v.locally_admissible = local_admissibility(pat, *opt.forbidden);
    if (!nec.ok) {
        v.global = GlobalVerdict::No;
        return v;
    }
    bool rectangular = pat.box_domain().has_value();
    if (rectangular &&
        (pat.set == RestrictingSet::AL() || pat.set == RestrictingSet::Aoplus())) {
        v.certificate = extend_rectangular(pat);
        v.global = GlobalVerdict::Yes;
        return v;
    }
    ObstructionOutcome ob = obstruction_search(pat, opt.obstruction_radius);
    if (ob.verdict == ObstructionVerdict::No) {
        v.global = GlobalVerdict::No;
        v.obstruction = ob.obstruction;
    } else {
        v.global = GlobalVerdict::Unknown;
    }
    return v;
}

}  // namespace permlattice
