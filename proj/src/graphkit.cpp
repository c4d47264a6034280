#include "permlattice/graphkit.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace permlattice {

bool operator<(const VertexLabel& a, const VertexLabel& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.side != b.side) return a.side < b.side;
    if (!(a.pos == b.pos)) return a.pos < b.pos;
    return a.sub < b.sub;
}

std::string VertexLabel::str() const {
    std::string s;
    switch (kind) {
        case VKind::Cell:
            if (side == Side::Out) s += "O";
            if (side == Side::In) s += "I";
            s += to_string(pos);
            break;
        case VKind::Gadget:
            s += "T" + to_string(pos) + "." + std::to_string(sub);
            break;
        case VKind::Aux:
            s += "P" + std::to_string(sub);
            break;
    }
    return s;
}

int FiniteGraph::add_vertex(const VertexLabel& l) {
    auto [it, fresh] = index_.emplace(l.str(), static_cast<int>(vertices.size()));
    if (fresh) vertices.push_back(l);
    return it->second;
}

int FiniteGraph::index_of(const VertexLabel& l) const {
    auto it = index_.find(l.str());
    return it == index_.end() ? -1 : it->second;
}

bool FiniteGraph::is_symmetric() const {
    std::set<std::pair<int, int>> pairs;
    for (const auto& e : edges) pairs.emplace(e.from, e.to);
    for (const auto& e : edges)
        if (!pairs.count({e.to, e.from})) return false;
    return true;
}

int UndirectedGraph::add_vertex(const VertexLabel& l) {
    auto [it, fresh] = index_.emplace(l.str(), static_cast<int>(vertices.size()));
    if (fresh) vertices.push_back(l);
    return it->second;
}

int UndirectedGraph::index_of(const VertexLabel& l) const {
    auto it = index_.find(l.str());
    return it == index_.end() ? -1 : it->second;
}

std::vector<std::vector<int>> UndirectedGraph::adjacency() const {
    std::vector<std::vector<int>> adj(vertices.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        adj[edges[i].u].push_back(static_cast<int>(i));
        if (edges[i].v != edges[i].u) adj[edges[i].v].push_back(static_cast<int>(i));
    }
    return adj;
}

std::vector<long> UndirectedGraph::degrees() const {
    std::vector<long> deg(vertices.size(), 0);
    for (const auto& e : edges) {
        deg[e.u] += e.mult;
        if (e.v != e.u) deg[e.v] += e.mult;
    }
    return deg;
}

bool UndirectedGraph::has_parallel_or_loops() const {
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges) {
        if (e.u == e.v) return true;
        auto key = std::minmax(e.u, e.v);
        if (!seen.insert({key.first, key.second}).second) return true;
        if (e.mult > 1) return true;
    }
    return false;
}

std::optional<std::vector<int>> UndirectedGraph::two_coloring() const {
    std::vector<int> color(vertices.size(), -1);
    auto adj = adjacency();
    for (std::size_t s = 0; s < vertices.size(); ++s) {
        if (color[s] != -1) continue;
        color[s] = 0;
        std::deque<int> q{static_cast<int>(s)};
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int ei : adj[v]) {
                const auto& e = edges[ei];
                int w = e.u == v ? e.v : e.u;
                if (w == v) return std::nullopt;  // loop
                if (color[w] == -1) {
                    color[w] = 1 - color[v];
                    q.push_back(w);
                } else if (color[w] == color[v]) {
                    return std::nullopt;
                }
            }
        }
    }
    return color;
}

std::vector<std::string> UndirectedGraph::canonical_signature() const {
    std::vector<std::string> sig;
    sig.reserve(edges.size());
    for (const auto& e : edges) {
        std::string a = vertices[e.u].str(), b = vertices[e.v].str();
        if (b < a) std::swap(a, b);
        sig.push_back(a + "--" + b + " x" + std::to_string(e.mult));
    }
    std::sort(sig.begin(), sig.end());
    return sig;
}

UndirectedGraph io_double_cover(const FiniteGraph& g) {
    UndirectedGraph out;
    for (const auto& v : g.vertices) {
        VertexLabel o = v;
        o.side = Side::Out;
        out.add_vertex(o);
    }
    for (const auto& v : g.vertices) {
        VertexLabel i = v;
        i.side = Side::In;
        out.add_vertex(i);
    }
    const int n = static_cast<int>(g.vertices.size());
    for (const auto& e : g.edges)
        out.edges.push_back(EdgeRec{e.from, n + e.to, e.disp, 1});
    std::vector<int> part(out.vertices.size(), 0);
    for (int i = n; i < 2 * n; ++i) part[i] = 1;
    out.bipartition = part;
    return out;
}

FiniteGraph torus_quotient(const RestrictingSet& A, const BoxShape& shape) {
    if (A.dim != 2 || shape.dim() != 2) fail(Err::Domain, "torus_quotient: d=2 only");
    FiniteGraph g;
    Vec2 n{shape.n[0], shape.n[1]};
    for (std::int64_t y = 0; y < n.y; ++y)
        for (std::int64_t x = 0; x < n.x; ++x)
            g.add_vertex(VertexLabel{VKind::Cell, Side::None, {x, y}, -1});
    for (std::int64_t y = 0; y < n.y; ++y) {
        for (std::int64_t x = 0; x < n.x; ++x) {
            int from = g.index_of(VertexLabel{VKind::Cell, Side::None, {x, y}, -1});
            for (std::size_t ai = 0; ai < A.size(); ++ai) {
                Vec2 a = A.vec2(static_cast<int>(ai));
                Vec2 t = mod_vec(Vec2{x, y} + a, n);
                int to = g.index_of(VertexLabel{VKind::Cell, Side::None, t, -1});
                g.edges.push_back(DirectedEdgeRec{from, to, a});
            }
        }
    }
    return g;
}

UndirectedGraph undirected_version(const FiniteGraph& g) {
    UndirectedGraph out;
    for (const auto& v : g.vertices) out.add_vertex(v);
    // Orbit of (v,u,a) under reversal is {(v,u,a),(u,v,-a)}: keep the
    // representative whose endpoints are (min,max), displacement read from u.
    std::set<std::tuple<int, int, std::int64_t, std::int64_t>> seen;
    for (const auto& e : g.edges) {
        int u = e.from, v = e.to;
        Vec2 d = e.disp;
        if (v < u || (v == u && (d.y < 0 || (d.y == 0 && d.x < 0)))) {
            std::swap(u, v);
            d = -d;
        }
        auto key = std::make_tuple(u, v, d.x, d.y);
        if (!seen.insert(key).second) continue;
        out.edges.push_back(EdgeRec{u, v, d, 1});
    }
    out.bipartition = out.two_coloring();
    return out;
}

UndirectedGraph honeycomb_torus(int n) {
    if (n < 1) fail(Err::Domain, "honeycomb_torus: n >= 1");
    // Two cells per fundamental-domain translate; black cell (m) adjacent to the
    // white cells at m, m+e1, m+e2 (mod n). This is exactly the I/O double cover
    // of the A_L torus quotient under black=O, white=I.
    UndirectedGraph out;
    Vec2 nn{n, n};
    for (std::int64_t y = 0; y < n; ++y)
        for (std::int64_t x = 0; x < n; ++x)
            out.add_vertex(VertexLabel{VKind::Cell, Side::Out, {x, y}, -1});
    for (std::int64_t y = 0; y < n; ++y)
        for (std::int64_t x = 0; x < n; ++x)
            out.add_vertex(VertexLabel{VKind::Cell, Side::In, {x, y}, -1});
    const Vec2 steps[3] = {{0, 0}, {1, 0}, {0, 1}};
    for (std::int64_t y = 0; y < n; ++y) {
        for (std::int64_t x = 0; x < n; ++x) {
            int b = out.index_of(VertexLabel{VKind::Cell, Side::Out, {x, y}, -1});
            for (Vec2 s : steps) {
                Vec2 t = mod_vec(Vec2{x, y} + s, nn);
                int w = out.index_of(VertexLabel{VKind::Cell, Side::In, t, -1});
                out.edges.push_back(EdgeRec{b, w, s, 1});
            }
        }
    }
    std::vector<int> part(out.vertices.size(), 0);
    for (std::size_t i = out.vertices.size() / 2; i < out.vertices.size(); ++i) part[i] = 1;
    out.bipartition = part;
    return out;
}

UndirectedGraph square_grid(const BoxShape& shape) {
    if (shape.dim() != 2) fail(Err::Domain, "square_grid: d=2 only");
    UndirectedGraph out;
    std::int64_t n1 = shape.n[0], n2 = shape.n[1];
    for (std::int64_t y = 0; y < n2; ++y)
        for (std::int64_t x = 0; x < n1; ++x)
            out.add_vertex(VertexLabel{VKind::Cell, Side::None, {x, y}, -1});
    for (std::int64_t y = 0; y < n2; ++y) {
        for (std::int64_t x = 0; x < n1; ++x) {
            int u = out.index_of(VertexLabel{VKind::Cell, Side::None, {x, y}, -1});
            if (x + 1 < n1) {
                int v = out.index_of(VertexLabel{VKind::Cell, Side::None, {x + 1, y}, -1});
                out.edges.push_back(EdgeRec{u, v, {1, 0}, 1});
            }
            if (y + 1 < n2) {
                int v = out.index_of(VertexLabel{VKind::Cell, Side::None, {x, y + 1}, -1});
                out.edges.push_back(EdgeRec{u, v, {0, 1}, 1});
            }
        }
    }
    out.bipartition = out.two_coloring();
    return out;
}

UndirectedGraph square_torus(int n) {
    if (n < 1) fail(Err::Domain, "square_torus: n >= 1");
    UndirectedGraph out;
    Vec2 nn{n, n};
    for (std::int64_t y = 0; y < n; ++y)
        for (std::int64_t x = 0; x < n; ++x)
            out.add_vertex(VertexLabel{VKind::Cell, Side::None, {x, y}, -1});
    const Vec2 steps[2] = {{1, 0}, {0, 1}};
    for (std::int64_t y = 0; y < n; ++y) {
        for (std::int64_t x = 0; x < n; ++x) {
            int u = out.index_of(VertexLabel{VKind::Cell, Side::None, {x, y}, -1});
            for (Vec2 s : steps) {
                Vec2 t = mod_vec(Vec2{x, y} + s, nn);
                if (t == Vec2{x, y}) continue;  // n=1 collapses to a loop; drop it
                int v = out.index_of(VertexLabel{VKind::Cell, Side::None, t, -1});
                out.edges.push_back(EdgeRec{u, v, s, 1});
            }
        }
    }
    out.bipartition = out.two_coloring();
    return out;
}

}  // namespace permlattice
