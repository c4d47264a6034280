#include "permlattice/correspond.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace permlattice {

bool validate_matching(const UndirectedGraph& g, const std::vector<int>& edge_ids) {
    std::vector<int> cover(g.vertices.size(), 0);
    for (int ei : edge_ids) {
        if (ei < 0 || ei >= static_cast<int>(g.edges.size())) return false;
        const auto& e = g.edges[ei];
        if (e.u == e.v) return false;
        ++cover[e.u];
        ++cover[e.v];
    }
    for (int c : cover)
        if (c != 1) return false;
    return true;
}

bool validate_cover(const UndirectedGraph& g, const std::vector<int>& target,
                    const std::vector<int>& edge_ids) {
    std::set<int> tset(target.begin(), target.end());
    std::vector<int> cover(g.vertices.size(), 0);
    for (int ei : edge_ids) {
        if (ei < 0 || ei >= static_cast<int>(g.edges.size())) return false;
        const auto& e = g.edges[ei];
        if (e.u == e.v) return false;
        if (!tset.count(e.u) && !tset.count(e.v)) return false;  // edge must meet V-hat
        ++cover[e.u];
        ++cover[e.v];
    }
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        if (tset.count(static_cast<int>(v))) {
            if (cover[v] != 1) return false;
        } else if (cover[v] > 1) {
            return false;
        }
    }
    return true;
}

namespace {

// host edge id by (Out cell, displacement tag)
std::map<std::pair<Vec2, Vec2>, int> double_cover_index(const UndirectedGraph& host) {
    std::map<std::pair<Vec2, Vec2>, int> idx;
    for (std::size_t ei = 0; ei < host.edges.size(); ++ei) {
        const auto& e = host.edges[ei];
        const auto& lu = host.vertices[e.u];
        if (lu.side != Side::Out) fail(Err::Structure, "psi host: edges must run O->I");
        idx[{lu.pos, e.disp_from_u}] = static_cast<int>(ei);
    }
    return idx;
}

Vec2 cell2(const Coords& c) { return {c[0], c[1]}; }

}  // namespace

PerfectMatching psi(const UndirectedGraph& host, const ToralPermutation& perm) {
    if (perm.shape.dim() != 2) fail(Err::Domain, "psi: d=2 only");
    auto idx = double_cover_index(host);
    PerfectMatching m;
    m.host = &host;
    for (std::size_t i = 0; i < perm.pattern.domain.size(); ++i) {
        Vec2 cell = cell2(perm.pattern.domain[i]);
        Vec2 a = perm.pattern.set.vec2(perm.pattern.values[i]);
        auto it = idx.find({cell, a});
        if (it == idx.end())
            fail(Err::Domain, "psi: host lacks edge for cell " + to_string(cell) +
                                  " displacement " + to_string(a));
        m.edge_ids.push_back(it->second);
    }
    std::sort(m.edge_ids.begin(), m.edge_ids.end());
    if (!validate_matching(host, m.edge_ids)) fail(Err::Internal, "psi: output not a matching");
    return m;
}

ToralPermutation psi_inverse(const PerfectMatching& m, const RestrictingSet& A,
                             const BoxShape& shape) {
    const UndirectedGraph& host = *m.host;
    std::map<Coords, Coords> field;
    for (int ei : m.edge_ids) {
        const auto& e = host.edges[ei];
        const auto& lu = host.vertices[e.u];
        field[{lu.pos.x, lu.pos.y}] = Coords{e.disp_from_u.x, e.disp_from_u.y};
    }
    return ToralPermutation::checked(shape, Pattern::from_map(A, field));
}

PerfectMatching translate_matching(const PerfectMatching& m, Vec2 t, const BoxShape& shape) {
    const UndirectedGraph& host = *m.host;
    Vec2 n{shape.n[0], shape.n[1]};
    auto idx = double_cover_index(host);
    PerfectMatching out;
    out.host = m.host;
    for (int ei : m.edge_ids) {
        const auto& e = host.edges[ei];
        Vec2 cell = mod_vec(host.vertices[e.u].pos + t, n);
        auto it = idx.find({cell, e.disp_from_u});
        if (it == idx.end()) fail(Err::Internal, "translate_matching: edge image missing");
        out.edge_ids.push_back(it->second);
    }
    std::sort(out.edge_ids.begin(), out.edge_ids.end());
    return out;
}

namespace {

struct PhiIndex {
    // undirected record id by (endpoint cell, displacement read from it)
    std::map<std::pair<Vec2, Vec2>, int> byView;
    Vec2 n;
};

PhiIndex phi_index(const UndirectedGraph& host, const BoxShape& shape) {
    PhiIndex idx;
    idx.n = {shape.n[0], shape.n[1]};
    for (std::size_t ei = 0; ei < host.edges.size(); ++ei) {
        const auto& e = host.edges[ei];
        Vec2 pu = host.vertices[e.u].pos;
        Vec2 pv = host.vertices[e.v].pos;
        idx.byView[{pu, e.disp_from_u}] = static_cast<int>(ei);
        idx.byView[{pv, -e.disp_from_u}] = static_cast<int>(ei);
    }
    return idx;
}

int checkerboard(Vec2 p) { return static_cast<int>(mod_floor(p.x + p.y, 2)); }

}  // namespace

std::pair<PerfectMatching, PerfectMatching> phi(const UndirectedGraph& host,
                                                const ToralPermutation& perm) {
    if (perm.shape.dim() != 2) fail(Err::Domain, "phi: d=2 only");
    if (!perm.pattern.set.symmetric())
        fail(Err::Structure, "phi: restricting set must be symmetric");
    if (!host.bipartition)
        fail(Err::Structure, "phi: host is not bipartite");
    // Checkerboard sides need even torus dimensions.
    if (perm.shape.n[0] % 2 || perm.shape.n[1] % 2)
        fail(Err::Structure, "phi: checkerboard bipartition needs even torus dimensions");
    auto idx = phi_index(host, perm.shape);
    PerfectMatching m1, m2;
    m1.host = &host;
    m2.host = &host;
    for (std::size_t i = 0; i < perm.pattern.domain.size(); ++i) {
        Vec2 cell = cell2(perm.pattern.domain[i]);
        Vec2 a = perm.pattern.set.vec2(perm.pattern.values[i]);
        auto it = idx.byView.find({cell, a});
        if (it == idx.byView.end())
            fail(Err::Domain, "phi: host lacks edge at " + to_string(cell));
        (checkerboard(cell) == 0 ? m1 : m2).edge_ids.push_back(it->second);
    }
    std::sort(m1.edge_ids.begin(), m1.edge_ids.end());
    std::sort(m2.edge_ids.begin(), m2.edge_ids.end());
    if (!validate_matching(host, m1.edge_ids) || !validate_matching(host, m2.edge_ids))
        fail(Err::Internal, "phi: output pair not perfect matchings");
    return {m1, m2};
}

ToralPermutation phi_inverse(const PerfectMatching& m1, const PerfectMatching& m2,
                             const RestrictingSet& A, const BoxShape& shape) {
    const UndirectedGraph& host = *m1.host;
    std::map<Coords, Coords> field;
    auto read = [&](const PerfectMatching& m, int parity) {
        for (int ei : m.edge_ids) {
            const auto& e = host.edges[ei];
            for (int side = 0; side < 2; ++side) {
                Vec2 cell = side == 0 ? host.vertices[e.u].pos : host.vertices[e.v].pos;
                if (checkerboard(cell) != parity) continue;
                Vec2 a = side == 0 ? e.disp_from_u : -e.disp_from_u;
                field[{cell.x, cell.y}] = Coords{a.x, a.y};
            }
        }
    };
    read(m1, 0);
    read(m2, 1);
    return ToralPermutation::checked(shape, Pattern::from_map(A, field));
}

std::pair<PerfectMatching, PerfectMatching> translate_phi_pair(
    const std::pair<PerfectMatching, PerfectMatching>& pair, Vec2 t, const BoxShape& shape) {
    const UndirectedGraph& host = *pair.first.host;
    Vec2 n{shape.n[0], shape.n[1]};
    auto idx = phi_index(host, shape);
    auto move = [&](const PerfectMatching& m) {
        PerfectMatching out;
        out.host = m.host;
        for (int ei : m.edge_ids) {
            const auto& e = host.edges[ei];
            Vec2 cell = mod_vec(host.vertices[e.u].pos + t, n);
            auto it = idx.byView.find({cell, e.disp_from_u});
            if (it == idx.byView.end()) fail(Err::Internal, "translate_phi_pair: image missing");
            out.edge_ids.push_back(it->second);
        }
        std::sort(out.edge_ids.begin(), out.edge_ids.end());
        return out;
    };
    auto a = move(pair.first);
    auto b = move(pair.second);
    if (checkerboard(t) == 0) return {a, b};
    return {b, a};  // side-swapping translation swaps the components
}

ALWindow al_window(int n, int m) {
    if (n < 1 || m < 1) fail(Err::Domain, "al_window: n,m >= 1");
    ALWindow w;
    w.n = n;
    w.m = m;
    std::vector<int> target;
    for (std::int64_t y = 0; y < m; ++y)
        for (std::int64_t x = 0; x < n; ++x)
            target.push_back(
                w.graph.add_vertex(VertexLabel{VKind::Cell, Side::Out, {x, y}, -1}));
    const Vec2 steps[3] = {{0, 0}, {1, 0}, {0, 1}};
    std::set<Vec2> wcells;
    for (std::int64_t y = 0; y < m; ++y)
        for (std::int64_t x = 0; x < n; ++x)
            for (Vec2 s : steps) wcells.insert(Vec2{x, y} + s);
    std::vector<Vec2> sorted(wcells.begin(), wcells.end());
    std::sort(sorted.begin(), sorted.end());
    for (Vec2 q : sorted) w.graph.add_vertex(VertexLabel{VKind::Cell, Side::In, q, -1});
    for (std::int64_t y = 0; y < m; ++y)
        for (std::int64_t x = 0; x < n; ++x) {
            int u = w.graph.index_of(VertexLabel{VKind::Cell, Side::Out, {x, y}, -1});
            for (Vec2 s : steps) {
                int v = w.graph.index_of(VertexLabel{VKind::Cell, Side::In, Vec2{x, y} + s, -1});
                w.graph.edges.push_back(EdgeRec{u, v, s, 1});
            }
        }
    // interior I cells: q with q - A_L inside the box
    for (Vec2 q : sorted) {
        bool interior = true;
        for (Vec2 s : steps) {
            Vec2 p = q - s;
            if (p.x < 0 || p.x >= n || p.y < 0 || p.y >= m) {
                interior = false;
                break;
            }
        }
        if (interior)
            target.push_back(w.graph.index_of(VertexLabel{VKind::Cell, Side::In, q, -1}));
    }
    std::sort(target.begin(), target.end());
    w.target = std::move(target);
    std::vector<int> part(w.graph.vertices.size(), 1);
    for (std::size_t i = 0; i < w.graph.vertices.size(); ++i)
        if (w.graph.vertices[i].side == Side::Out) part[i] = 0;
    w.graph.bipartition = part;
    return w;
}

PerfectCover pattern_to_cover(const ALWindow& window, const Pattern& pat) {
    BoxShape shape = BoxShape::of2(window.n, window.m);
    if (!pat.domain_is_box(shape))
        fail(Err::Domain, "pattern_to_cover: pattern domain must be the window box");
    if (!(pat.set == RestrictingSet::AL()))
        fail(Err::Domain, "pattern_to_cover: restricting set must be A_L");
    // Necessary condition: injective with covered interior; otherwise the edge
    // set below violates the cover invariants.
    PerfectCover c;
    c.host = &window.graph;
    c.target = window.target;
    for (std::size_t i = 0; i < pat.domain.size(); ++i) {
        Vec2 cell = cell2(pat.domain[i]);
        Vec2 a = pat.set.vec2(pat.values[i]);
        int u = window.graph.index_of(VertexLabel{VKind::Cell, Side::Out, cell, -1});
        int v = window.graph.index_of(VertexLabel{VKind::Cell, Side::In, cell + a, -1});
        int found = -1;
        for (std::size_t ei = 0; ei < window.graph.edges.size(); ++ei) {
            const auto& e = window.graph.edges[ei];
            if (e.u == u && e.v == v) {
                found = static_cast<int>(ei);
                break;
            }
        }
        if (found < 0) fail(Err::Internal, "pattern_to_cover: window edge missing");
        c.edge_ids.push_back(found);
    }
    std::sort(c.edge_ids.begin(), c.edge_ids.end());
    if (!validate_cover(window.graph, c.target, c.edge_ids))
        fail(Err::NotAdmissible,
             "pattern_to_cover: pattern fails the necessary condition (not a perfect cover)");
    return c;
}

Pattern cover_to_pattern(const ALWindow& window, const PerfectCover& cover) {
    RestrictingSet AL = RestrictingSet::AL();
    std::map<Coords, Coords> field;
    for (int ei : cover.edge_ids) {
        const auto& e = window.graph.edges[ei];
        const auto& lu = window.graph.vertices[e.u];
        if (lu.side != Side::Out) fail(Err::Domain, "cover_to_pattern: edge without O endpoint");
        field[{lu.pos.x, lu.pos.y}] = Coords{e.disp_from_u.x, e.disp_from_u.y};
    }
    Pattern p = Pattern::from_map(AL, field);
    if (!p.domain_is_box(BoxShape::of2(window.n, window.m)))
        fail(Err::Domain, "cover_to_pattern: cover does not determine the full box");
    return p;
}

}  // namespace permlattice
