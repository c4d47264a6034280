#include "permlattice/planarcount.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace permlattice {

namespace {

BigRat qp(long num, long den) { return BigRat(num, den); }

struct Dir {
    BigRat x, y;
};

// CCW angular order starting at the +x axis; exact.
int half_of(const Dir& d) {
    int sy = sgn(d.y), sx = sgn(d.x);
    if (sy > 0 || (sy == 0 && sx > 0)) return 0;
    return 1;
}

BigRat cross(const Dir& a, const Dir& b) { return a.x * b.y - a.y * b.x; }

bool angle_less(const Dir& a, const Dir& b) {
    int ha = half_of(a), hb = half_of(b);
    if (ha != hb) return ha < hb;
    return sgn(cross(a, b)) > 0;
}

std::vector<int> components_of(const UndirectedGraph& g) {
    std::vector<int> comp(g.vertices.size(), -1);
    auto adj = g.adjacency();
    int c = 0;
    for (std::size_t s = 0; s < g.vertices.size(); ++s) {
        if (comp[s] != -1) continue;
        comp[s] = c;
        std::deque<int> q{static_cast<int>(s)};
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int ei : adj[v]) {
                const auto& e = g.edges[ei];
                int w = e.u == v ? e.v : e.u;
                if (comp[w] == -1) {
                    comp[w] = c;
                    q.push_back(w);
                }
            }
        }
        ++c;
    }
    return comp;
}

}  // namespace

PlanarEmbedding embed_from_positions(const UndirectedGraph& g, std::vector<QPoint> pos) {
    if (pos.size() != g.vertices.size())
        fail(Err::Embedding, "embedding: one position per vertex required");
    if (g.has_parallel_or_loops())
        fail(Err::Embedding, "embedding: host must be simple (no loops or parallel records)");
    PlanarEmbedding emb;
    emb.host = g;
    emb.pos = std::move(pos);
    emb.rotation.assign(g.vertices.size(), {});
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        emb.rotation[g.edges[ei].u].push_back(Dart{static_cast<int>(ei), 0});
        emb.rotation[g.edges[ei].v].push_back(Dart{static_cast<int>(ei), 1});
    }
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        auto dir_of = [&](const Dart& d) {
            int w = emb.dart_to(d);
            return Dir{emb.pos[w].x - emb.pos[v].x, emb.pos[w].y - emb.pos[v].y};
        };
        std::sort(emb.rotation[v].begin(), emb.rotation[v].end(),
                  [&](const Dart& a, const Dart& b) { return angle_less(dir_of(a), dir_of(b)); });
        for (std::size_t i = 0; i + 1 < emb.rotation[v].size(); ++i) {
            Dir a = dir_of(emb.rotation[v][i]), b = dir_of(emb.rotation[v][i + 1]);
            if ((a.x == 0 && a.y == 0) || (half_of(a) == half_of(b) && sgn(cross(a, b)) == 0))
                fail(Err::Embedding, "embedding: degenerate edge directions at vertex " +
                                         g.vertices[v].str());
        }
        if (emb.rotation[v].size() == 1) {
            Dir a = dir_of(emb.rotation[v][0]);
            if (a.x == 0 && a.y == 0) fail(Err::Embedding, "embedding: zero-length edge");
        }
    }
    // Genus check happens in compute_faces; run it once here so construction
    // rejects non-planar rotation data.
    compute_faces(emb);
    return emb;
}

PlanarEmbedding embed_from_labels(const UndirectedGraph& g) {
    std::vector<QPoint> pos(g.vertices.size());
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        const auto& l = g.vertices[i];
        BigRat ox = 0, oy = 0;
        if (l.side == Side::Out) {
            ox = qp(3, 20);
            oy = qp(3, 20);
        }
        pos[i] = QPoint{BigRat(static_cast<long>(l.pos.x)) + ox,
                        BigRat(static_cast<long>(l.pos.y)) + oy};
    }
    return embed_from_positions(g, std::move(pos));
}

std::vector<Face> compute_faces(const PlanarEmbedding& emb) {
    const UndirectedGraph& g = emb.host;
    // position of each dart inside its vertex rotation, for O(1) successor lookup
    std::vector<std::array<int, 2>> slot(g.edges.size(), {-1, -1});
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        for (std::size_t i = 0; i < emb.rotation[v].size(); ++i) {
            const Dart& d = emb.rotation[v][i];
            slot[d.edge][d.end] = static_cast<int>(i);
        }
    std::vector<std::array<bool, 2>> seen(g.edges.size(), {false, false});
    std::vector<Face> faces;
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        for (int end = 0; end < 2; ++end) {
            if (seen[ei][end]) continue;
            Face f;
            Dart d{static_cast<int>(ei), end};
            while (!seen[d.edge][d.end]) {
                seen[d.edge][d.end] = true;
                f.walk.push_back(d);
                int w = emb.dart_to(d);
                Dart rev{d.edge, 1 - d.end};
                int i = slot[rev.edge][rev.end];
                const auto& rot = emb.rotation[w];
                // predecessor of the reverse dart in CCW order: bounded faces
                // come out counterclockwise (positive area), the outer one
                // clockwise
                d = rot[(i + rot.size() - 1) % rot.size()];
            }
            f.area2 = 0;
            for (const Dart& dd : f.walk) {
                const QPoint& a = emb.pos[emb.dart_from(dd)];
                const QPoint& b = emb.pos[emb.dart_to(dd)];
                f.area2 += a.x * b.y - b.x * a.y;
            }
            faces.push_back(std::move(f));
        }
    }
    // Each component owns exactly one outer face: its minimum-signed-area walk.
    auto comp = components_of(g);
    int ncomp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<int> outer_idx(ncomp, -1);
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
        int c = comp[emb.dart_from(faces[fi].walk.front())];
        if (outer_idx[c] < 0 || faces[fi].area2 < faces[outer_idx[c]].area2)
            outer_idx[c] = static_cast<int>(fi);
    }
    long isolated = 0;
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        if (emb.rotation[v].empty()) ++isolated;
    for (int c = 0; c < ncomp; ++c) {
        if (outer_idx[c] < 0) continue;  // isolated vertex component
        faces[outer_idx[c]].outer = true;
        if (sgn(faces[outer_idx[c]].area2) > 0)
            fail(Err::Embedding, "embedding: outer face has positive area (crossing drawing?)");
    }
    // Euler per component: V - E + F = 2, with isolated vertices contributing
    // their single unbounded face implicitly.
    long V = static_cast<long>(g.vertices.size());
    long E = static_cast<long>(g.edges.size());
    long F = static_cast<long>(faces.size()) + isolated;
    if (V - E + F != 2 * ncomp)
        fail(Err::Embedding, "embedding: Euler check failed (V-E+F = " +
                                 std::to_string(V - E + F) + ", expected " +
                                 std::to_string(2 * ncomp) + ")");
    for (const auto& f : faces)
        if (!f.outer && sgn(f.area2) < 0)
            fail(Err::Embedding, "embedding: bounded face with negative area");
    return faces;
}

PfaffianOrientation pfaffian_orientation(const PlanarEmbedding& emb) {
    const UndirectedGraph& g = emb.host;
    auto faces = compute_faces(emb);
    auto adj = g.adjacency();
    // Spanning forest: tree edges keep their stored direction.
    std::vector<int> dir(g.edges.size(), -1);
    std::vector<char> visited(g.vertices.size(), 0);
    for (std::size_t s = 0; s < g.vertices.size(); ++s) {
        if (visited[s]) continue;
        visited[s] = 1;
        std::deque<int> q{static_cast<int>(s)};
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int ei : adj[v]) {
                const auto& e = g.edges[ei];
                int w = e.u == v ? e.v : e.u;
                if (!visited[w]) {
                    visited[w] = 1;
                    dir[ei] = 0;
                    q.push_back(w);
                }
            }
        }
    }
    // Fix the remaining edges face by face, innermost out: repeatedly take a
    // bounded face with exactly one undecided edge and set it to odd-clockwise.
    std::vector<std::vector<int>> edge_faces(g.edges.size());
    std::vector<int> undecided(faces.size(), 0);
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
        if (faces[fi].outer) continue;
        std::set<int> es;
        for (const Dart& d : faces[fi].walk) es.insert(d.edge);
        for (int e : es) {
            edge_faces[e].push_back(static_cast<int>(fi));
            if (dir[e] < 0) ++undecided[fi];
        }
    }
    std::deque<int> ready;
    for (std::size_t fi = 0; fi < faces.size(); ++fi)
        if (!faces[fi].outer && undecided[fi] == 1) ready.push_back(static_cast<int>(fi));
    auto cw_count = [&](const Face& f, int skip_edge) {
        int cw = 0;
        for (const Dart& d : f.walk) {
            if (d.edge == skip_edge || dir[d.edge] < 0) continue;
            if (dir[d.edge] != d.end) ++cw;  // against the CCW walk = clockwise
        }
        return cw;
    };
    while (!ready.empty()) {
        int fi = ready.front();
        ready.pop_front();
        if (undecided[fi] != 1) continue;
        const Face& f = faces[fi];
        int pending = -1;
        Dart pend{};
        for (const Dart& d : f.walk)
            if (dir[d.edge] < 0) {
                pending = d.edge;
                pend = d;
                break;
            }
        int cw = cw_count(f, pending);
        // aligned-with-walk iff dir == end; make total clockwise odd
        dir[pending] = (cw % 2 == 0) ? 1 - pend.end : pend.end;
        for (int nf : edge_faces[pending]) {
            if (--undecided[nf] == 1 && !faces[nf].outer) ready.push_back(nf);
        }
        undecided[fi] = 0;
    }
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei)
        if (dir[ei] < 0) {
            // Leftover non-tree edges touch only outer faces; any direction works.
            dir[ei] = 0;
        }
    PfaffianOrientation out;
    out.dir = std::move(dir);
    if (!pfaffian_valid(emb, out)) fail(Err::Internal, "pfaffian orientation: parity audit failed");
    return out;
}

bool pfaffian_valid(const PlanarEmbedding& emb, const PfaffianOrientation& orient) {
    auto faces = compute_faces(emb);
    for (const auto& f : faces) {
        if (f.outer) continue;
        int cw = 0;
        for (const Dart& d : f.walk)
            if (orient.dir[d.edge] != d.end) ++cw;
        if (cw % 2 == 0) return false;
    }
    return true;
}

BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m) {
    const int n = static_cast<int>(m.size());
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            int piv = -1;
            for (int r = k + 1; r < n; ++r)
                if (m[r][k] != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) return 0;
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

namespace {

BigInt sqrt_exact(const BigInt& v) {
    if (v < 0) fail(Err::Internal, "matching count: negative determinant");
    if (mpz_perfect_square_p(v.get_mpz_t()) == 0)
        fail(Err::Internal, "matching count: determinant is not a perfect square");
    BigInt s;
    mpz_sqrt(s.get_mpz_t(), v.get_mpz_t());
    return s;
}

}  // namespace

BigRat count_matchings_planar(const PlanarEmbedding& emb, const EdgeWeights* weights) {
    const UndirectedGraph& g = emb.host;
    const std::size_t V = g.vertices.size();
    if (V == 0) return 1;
    if (V % 2) return 0;
    if (weights && weights->size() != g.edges.size())
        fail(Err::Domain, "count_matchings_planar: one weight per edge required");
    PfaffianOrientation orient = pfaffian_orientation(emb);

    BigInt scale = 1;
    if (weights)
        for (const auto& w : *weights)
            mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), w.get_den().get_mpz_t());
    auto scaled_weight = [&](std::size_t ei) -> BigInt {
        if (!weights) return scale;  // weight 1
        BigRat w = (*weights)[ei] * BigRat(scale);
        if (w.get_den() != 1) fail(Err::Internal, "weight scaling failed");
        return w.get_num();
    };

    std::vector<std::vector<BigInt>> M(V, std::vector<BigInt>(V, 0));
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        const auto& e = g.edges[ei];
        BigInt w = scaled_weight(ei);
        int from = orient.dir[ei] == 0 ? e.u : e.v;
        int to = orient.dir[ei] == 0 ? e.v : e.u;
        M[from][to] = w;
        M[to][from] = -w;
    }
    BigInt det = bareiss_determinant(M);
    BigInt pf = sqrt_exact(det);

    // Bipartite hosts also admit the bi-adjacency determinant route; use it as
    // a cross-check on the orientation.
    auto coloring = g.bipartition ? g.bipartition : g.two_coloring();
    if (coloring) {
        std::vector<int> black, white;
        for (std::size_t v = 0; v < V; ++v)
            ((*coloring)[v] == 0 ? black : white).push_back(static_cast<int>(v));
        if (black.size() == white.size()) {
            std::map<int, int> bi, wi;
            for (std::size_t i = 0; i < black.size(); ++i) bi[black[i]] = static_cast<int>(i);
            for (std::size_t i = 0; i < white.size(); ++i) wi[white[i]] = static_cast<int>(i);
            std::vector<std::vector<BigInt>> B(black.size(),
                                               std::vector<BigInt>(white.size(), 0));
            for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
                const auto& e = g.edges[ei];
                int b = (*coloring)[e.u] == 0 ? e.u : e.v;
                int w = (*coloring)[e.u] == 0 ? e.v : e.u;
                int oriented_from = orient.dir[ei] == 0 ? e.u : e.v;
                BigInt val = scaled_weight(ei);
                B[bi[b]][wi[w]] = (oriented_from == b) ? val : -val;
            }
            BigInt detB = bareiss_determinant(B);
            if (detB < 0) detB = -detB;
            if (detB != pf)
                fail(Err::Internal,
                     "matching count: Pfaffian and bi-adjacency determinant disagree");
        } else if (pf != 0) {
            fail(Err::Internal, "matching count: unbalanced bipartition with nonzero Pfaffian");
        }
    }

    BigRat denom(1);
    for (std::size_t i = 0; i < V / 2; ++i) denom *= BigRat(scale);
    BigRat out = BigRat(pf) / denom;
    out.canonicalize();
    return out;
}

BigInt count_matchings_planar_int(const PlanarEmbedding& emb) {
    BigRat r = count_matchings_planar(emb, nullptr);
    if (r.get_den() != 1) fail(Err::Internal, "unweighted matching count not an integer");
    return r.get_num();
}

CoverInstance cover_instance_from_al_window(const ALWindow& w) {
    CoverInstance inst;
    inst.graph = w.graph;
    inst.target = w.target;
    inst.pos.resize(inst.graph.vertices.size());
    for (std::size_t i = 0; i < inst.graph.vertices.size(); ++i) {
        const auto& l = inst.graph.vertices[i];
        BigRat off = l.side == Side::Out ? qp(3, 20) : BigRat(0);
        inst.pos[i] = QPoint{BigRat(static_cast<long>(l.pos.x)) + off,
                             BigRat(static_cast<long>(l.pos.y)) + off};
    }
    return inst;
}

namespace {

CoverInstance square_window_impl(int n, int parity_or_all) {
    if (n < 1) fail(Err::Domain, "square_window: n >= 1");
    CoverInstance inst;
    const Vec2 steps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    std::vector<Vec2> cells;
    for (std::int64_t y = 0; y < n; ++y)
        for (std::int64_t x = 0; x < n; ++x)
            if (parity_or_all < 0 || (x + y) % 2 == parity_or_all) cells.push_back({x, y});
    for (Vec2 p : cells)
        inst.target.push_back(
            inst.graph.add_vertex(VertexLabel{VKind::Cell, Side::None, p, -1}));
    std::set<std::pair<int, int>> seen;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        int t = inst.target[i];
        for (Vec2 s : steps) {
            int o = inst.graph.add_vertex(
                VertexLabel{VKind::Cell, Side::None, cells[i] + s, -1});
            auto key = std::minmax(t, o);
            if (seen.insert({key.first, key.second}).second)
                inst.graph.edges.push_back(EdgeRec{t, o, s, 1});
        }
    }
    inst.pos.resize(inst.graph.vertices.size());
    for (std::size_t i = 0; i < inst.graph.vertices.size(); ++i)
        inst.pos[i] = QPoint{BigRat(static_cast<long>(inst.graph.vertices[i].pos.x)),
                             BigRat(static_cast<long>(inst.graph.vertices[i].pos.y))};
    return inst;
}

}  // namespace

CoverInstance square_window(int n) { return square_window_impl(n, -1); }
CoverInstance square_window_color(int n, int parity) { return square_window_impl(n, parity); }

GadgetGraph build_cover_gadget(const CoverInstance& inst) {
    const UndirectedGraph& g = inst.graph;
    std::set<int> tset(inst.target.begin(), inst.target.end());
    // Boundary: non-target endpoints of target-incident edges.
    std::set<int> sset;
    for (const auto& e : g.edges) {
        bool tu = tset.count(e.u), tv = tset.count(e.v);
        if (tu && !tv) sset.insert(e.v);
        if (tv && !tu) sset.insert(e.u);
    }
    // Clockwise order around the target centroid.
    if (inst.target.empty() && !sset.empty())
        fail(Err::Geometry, "build_cover_gadget: boundary without target");
    BigRat cx = 0, cy = 0;
    for (int t : inst.target) {
        cx += inst.pos[t].x;
        cy += inst.pos[t].y;
    }
    if (!inst.target.empty()) {
        cx /= BigRat(static_cast<long>(inst.target.size()));
        cy /= BigRat(static_cast<long>(inst.target.size()));
    }
    std::vector<int> order(sset.begin(), sset.end());
    auto dir_of = [&](int v) { return Dir{inst.pos[v].x - cx, inst.pos[v].y - cy}; };
    for (int v : order) {
        Dir d = dir_of(v);
        if (sgn(d.x) == 0 && sgn(d.y) == 0)
            fail(Err::Geometry, "build_cover_gadget: boundary vertex at target centroid");
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        Dir da = dir_of(a), db = dir_of(b);
        int ha = half_of(da), hb = half_of(db);
        if (ha != hb) return ha > hb;  // clockwise: reverse the CCW half order
        int c = sgn(cross(da, db));
        if (c != 0) return c < 0;
        BigRat ra = da.x * da.x + da.y * da.y, rb = db.x * db.x + db.y * db.y;
        return ra < rb;
    });

    GadgetGraph out;
    std::vector<int> remap(g.vertices.size(), -1);
    for (int t : inst.target) {
        remap[t] = out.graph.add_vertex(g.vertices[t]);
        out.pos.push_back(inst.pos[t]);
    }
    // K4 gadget per boundary vertex: sub 1 = external terminal, 2 = chain to
    // next, 3 = chain from previous, 4 = center. Triangle (1,2,3) carries the
    // 1/3 weights.
    const BigRat DELTA = qp(1, 8), DELTA2 = qp(1, 24);
    // Directions toward the V-hat neighbours of each boundary vertex; the
    // cluster must open away from all of them.
    std::map<int, std::vector<Dir>> neighbor_dirs;
    for (const auto& e : g.edges) {
        bool tu = tset.count(e.u), tv = tset.count(e.v);
        if (tu == tv) continue;
        int s = tu ? e.v : e.u;
        int t = tu ? e.u : e.v;
        neighbor_dirs[s].push_back(Dir{inst.pos[t].x - inst.pos[s].x,
                                       inst.pos[t].y - inst.pos[s].y});
    }
    auto norm_inf = [](Dir d) {
        BigRat ax = abs(d.x), ay = abs(d.y);
        BigRat m = ax > ay ? ax : ay;
        return Dir{d.x / m, d.y / m};
    };
    // d must avoid the closed cone swept by the triangle (between the rays
    // toward r and l); exact sign tests
    auto safe_outward = [&](const Dir& u, const std::vector<Dir>& nbrs) {
        Dir tcw{u.y, -u.x}, tccw{-u.y, u.x};
        Dir rdir{DELTA * tcw.x + DELTA2 * u.x, DELTA * tcw.y + DELTA2 * u.y};
        Dir ldir{DELTA * tccw.x + DELTA2 * u.x, DELTA * tccw.y + DELTA2 * u.y};
        for (const Dir& d : nbrs) {
            bool inside = sgn(cross(rdir, d)) >= 0 && sgn(cross(d, ldir)) >= 0;
            if (inside) return false;
        }
        return true;
    };
    auto pick_outward = [&](int s) -> Dir {
        const auto& nbrs = neighbor_dirs[s];
        std::vector<Dir> candidates;
        Dir sum{0, 0};
        for (const Dir& d : nbrs) {
            sum.x += d.x;
            sum.y += d.y;
        }
        if (sgn(sum.x) != 0 || sgn(sum.y) != 0) candidates.push_back(norm_inf(Dir{-sum.x, -sum.y}));
        Dir c = dir_of(s);
        candidates.push_back(norm_inf(c));
        const long compass[8][2] = {{1, 0},  {0, 1},  {-1, 0}, {0, -1},
                                    {1, 1},  {-1, 1}, {-1, -1}, {1, -1}};
        for (auto& dd : compass) candidates.push_back(Dir{BigRat(dd[0]), BigRat(dd[1])});
        for (const Dir& u : candidates)
            if (safe_outward(u, nbrs)) return u;
        fail(Err::Geometry, "build_cover_gadget: no crossing-free gadget direction at " +
                                g.vertices[s].str());
    };
    std::vector<std::array<int, 5>> gadget(order.size());  // index by sub 1..4
    for (std::size_t i = 0; i < order.size(); ++i) {
        int s = order[i];
        Dir u = pick_outward(s);
        Dir tcw{u.y, -u.x}, tccw{-u.y, u.x};  // clockwise / counterclockwise tangents
        auto at = [&](BigRat ox, BigRat oy) {
            return QPoint{inst.pos[s].x + ox, inst.pos[s].y + oy};
        };
        VertexLabel base = g.vertices[s];
        base.kind = VKind::Gadget;
        for (int sub = 1; sub <= 4; ++sub) {
            VertexLabel l = base;
            l.sub = sub;
            gadget[i][sub] = out.graph.add_vertex(l);
        }
        out.pos.push_back(at(0, 0));                                           // sub1: x
        out.pos.push_back(at(DELTA * tcw.x + DELTA2 * u.x, DELTA * tcw.y + DELTA2 * u.y));   // sub2: r
        out.pos.push_back(at(DELTA * tccw.x + DELTA2 * u.x, DELTA * tccw.y + DELTA2 * u.y)); // sub3: l
        out.pos.push_back(at(qp(2, 3) * DELTA2 * u.x, qp(2, 3) * DELTA2 * u.y));             // sub4: c
        // fix vertex order: add_vertex appended 4 labels before positions; keep in sync
    }
    // positions were appended in the same order as the add_vertex calls above

    out.weights.clear();
    auto add_edge = [&](int u, int v, Vec2 disp, const BigRat& w) {
        out.graph.edges.push_back(EdgeRec{u, v, disp, 1});
        out.weights.push_back(w);
    };
    std::map<int, std::size_t> gadget_of;
    for (std::size_t i = 0; i < order.size(); ++i) gadget_of[order[i]] = i;
    for (const auto& e : g.edges) {
        bool tu = tset.count(e.u), tv = tset.count(e.v);
        if (tu && tv) {
            add_edge(remap[e.u], remap[e.v], e.disp_from_u, 1);
        } else if (tu || tv) {
            int t = tu ? e.u : e.v;
            int s = tu ? e.v : e.u;
            add_edge(remap[t], gadget[gadget_of[s]][1], e.disp_from_u, 1);
        }
        // boundary-boundary edges never meet V-hat and are dropped
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        int x = gadget[i][1], r = gadget[i][2], l = gadget[i][3], c = gadget[i][4];
        add_edge(x, l, {0, 0}, qp(1, 3));
        add_edge(x, r, {0, 0}, qp(1, 3));
        add_edge(l, r, {0, 0}, qp(1, 3));
        add_edge(x, c, {0, 0}, 1);
        add_edge(l, c, {0, 0}, 1);
        add_edge(r, c, {0, 0}, 1);
    }
    for (std::size_t i = 0; i + 1 < order.size(); ++i)
        add_edge(gadget[i][2], gadget[i + 1][3], {0, 0}, 1);
    if (inst.target.size() % 2 == 1) {
        if (order.empty()) {
            // odd target with no boundary: no covers; leave the graph odd so
            // the matching count vanishes
        } else {
            // parity pin: forces the chain to start used, so odd crossing
            // counts become matchable
            VertexLabel p;
            p.kind = VKind::Aux;
            p.sub = 0;
            int pv = out.graph.add_vertex(p);
            int l1 = gadget[0][3], c1 = gadget[0][4];
            // just past l, away from the gadget center
            out.pos.push_back(QPoint{out.pos[l1].x + (out.pos[l1].x - out.pos[c1].x) / 4,
                                     out.pos[l1].y + (out.pos[l1].y - out.pos[c1].y) / 4});
            add_edge(pv, l1, {0, 0}, 1);
        }
    }
    return out;
}

namespace {

CoverInstance reduce_instance(const CoverInstance& inst, const std::set<int>& removed) {
    CoverInstance out;
    std::vector<int> remap(inst.graph.vertices.size(), -1);
    for (std::size_t i = 0; i < inst.graph.vertices.size(); ++i) {
        if (removed.count(static_cast<int>(i))) continue;
        remap[i] = out.graph.add_vertex(inst.graph.vertices[i]);
        out.pos.push_back(inst.pos[i]);
    }
    for (const auto& e : inst.graph.edges)
        if (remap[e.u] >= 0 && remap[e.v] >= 0)
            out.graph.edges.push_back(EdgeRec{remap[e.u], remap[e.v], e.disp_from_u, e.mult});
    for (int t : inst.target)
        if (remap[t] >= 0) out.target.push_back(remap[t]);
    return out;
}

// A boundary vertex with every lattice neighbour in the target set sits inside
// the covered region; no planar chain can reach it, so branch on its usage.
int find_enclosed_boundary(const CoverInstance& inst) {
    std::set<int> tset(inst.target.begin(), inst.target.end());
    std::set<Vec2> tpos;
    for (int t : inst.target)
        if (inst.graph.vertices[t].kind == VKind::Cell) tpos.insert(inst.graph.vertices[t].pos);
    std::set<int> touching;
    for (const auto& e : inst.graph.edges) {
        if (tset.count(e.u) && !tset.count(e.v)) touching.insert(e.v);
        if (tset.count(e.v) && !tset.count(e.u)) touching.insert(e.u);
    }
    const Vec2 steps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (int s : touching) {
        const auto& l = inst.graph.vertices[s];
        if (l.kind != VKind::Cell) continue;
        bool enclosed = true;
        for (Vec2 d : steps)
            if (!tpos.count(l.pos + d)) {
                enclosed = false;
                break;
            }
        if (enclosed) return s;
    }
    return -1;
}

}  // namespace

BigInt count_perfect_covers(const CoverInstance& inst) {
    if (inst.target.empty()) return 1;  // the empty cover
    int enclosed = find_enclosed_boundary(inst);
    if (enclosed >= 0) {
        // covers avoiding the enclosed vertex, plus one branch per edge using it
        BigInt total = count_perfect_covers(reduce_instance(inst, {enclosed}));
        std::set<int> tset(inst.target.begin(), inst.target.end());
        for (const auto& e : inst.graph.edges) {
            int other = e.u == enclosed ? e.v : e.v == enclosed ? e.u : -1;
            if (other < 0 || !tset.count(other)) continue;
            total += BigInt(e.mult) * count_perfect_covers(reduce_instance(inst, {enclosed, other}));
        }
        return total;
    }
    GadgetGraph gg = build_cover_gadget(inst);
    PlanarEmbedding emb = embed_from_positions(gg.graph, gg.pos);
    BigRat count = count_matchings_planar(emb, &gg.weights);
    if (count.get_den() != 1)
        fail(Err::Internal, "count_perfect_covers: non-integer weighted count");
    return count.get_num();
}

namespace {

// Standalone matcher for tori too narrow for the column transfer.
BigInt matchings_direct(const UndirectedGraph& g, const Budget& budget) {
    if (g.vertices.size() % 2) return 0;
    if (static_cast<int>(g.edges.size()) > budget.max_brute_edges)
        fail(Err::Capacity, "toral matcher: graph too large for direct fallback");
    auto adj = g.adjacency();
    std::vector<char> cov(g.vertices.size(), 0);
    NodeCounter nodes(budget);
    std::function<BigInt()> rec = [&]() -> BigInt {
        int v = -1;
        for (std::size_t i = 0; i < cov.size(); ++i)
            if (!cov[i]) {
                v = static_cast<int>(i);
                break;
            }
        if (v < 0) return 1;
        nodes.tick();
        BigInt total = 0;
        for (int ei : adj[v]) {
            const auto& e = g.edges[ei];
            if (e.u == e.v) continue;
            int w = e.u == v ? e.v : e.u;
            if (cov[w]) continue;
            cov[v] = cov[w] = 1;
            total += rec() * e.mult;
            cov[v] = cov[w] = 0;
        }
        return total;
    };
    return rec();
}

struct TransferLink {
    int edge;
    int a, b;  // local indices: a in column c, b in column c+1 (mod W)
};

}  // namespace

BigInt count_toral_matchings(const UndirectedGraph& g, const Budget& budget) {
    if (g.vertices.empty()) return 1;
    std::int64_t W = 0;
    for (const auto& v : g.vertices) {
        if (v.pos.x < 0) fail(Err::Domain, "count_toral_matchings: negative column");
        W = std::max(W, v.pos.x + 1);
    }
    if (W > budget.transfer_width_cap)
        fail(Err::Capacity, "count_toral_matchings: width " + std::to_string(W) +
                                " exceeds cap " + std::to_string(budget.transfer_width_cap));
    if (W <= 2) return matchings_direct(g, budget);

    std::vector<std::vector<int>> columns(W);
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        columns[g.vertices[v].pos.x].push_back(static_cast<int>(v));
    std::vector<int> local(g.vertices.size(), -1);
    for (auto& col : columns) {
        std::sort(col.begin(), col.end(),
                  [&](int a, int b) { return g.vertices[a] < g.vertices[b]; });
        if (static_cast<int>(col.size()) > budget.transfer_height_cap)
            fail(Err::Capacity, "count_toral_matchings: column height exceeds cap");
        if (col.empty()) fail(Err::Domain, "count_toral_matchings: empty column");
        for (std::size_t i = 0; i < col.size(); ++i) local[col[i]] = static_cast<int>(i);
    }

    std::vector<std::vector<TransferLink>> intra(W), step(W);  // step[c]: c -> c+1 mod W
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        const auto& e = g.edges[ei];
        std::int64_t cu = g.vertices[e.u].pos.x, cv = g.vertices[e.v].pos.x;
        std::int64_t dx = mod_floor(e.disp_from_u.x, W);
        if (mod_floor(cu + dx, W) != cv)
            fail(Err::Domain, "count_toral_matchings: displacement/column mismatch");
        if (dx == 0) {
            if (cu != cv) fail(Err::Domain, "count_toral_matchings: intra edge across columns");
            intra[cu].push_back({static_cast<int>(ei), local[e.u], local[e.v]});
        } else if (dx == 1) {
            step[cu].push_back({static_cast<int>(ei), local[e.u], local[e.v]});
        } else if (dx == W - 1) {
            step[cv].push_back({static_cast<int>(ei), local[e.v], local[e.u]});
        } else {
            fail(Err::Domain, "count_toral_matchings: step wider than one column");
        }
    }

    NodeCounter nodes(budget);
    const auto& wrap = step[W - 1];
    BigInt total = 0;

    // Column sweep for one fixed wrap subset.
    auto sweep = [&](std::uint32_t mask0, std::uint32_t maskLast, const BigInt& wrapWeight) {
        std::map<std::uint32_t, BigInt> states{{mask0, 1}};
        for (std::int64_t c = 0; c < W; ++c) {
            const auto& verts = columns[c];
            std::vector<std::vector<std::pair<int, int>>> intraAdj(verts.size());
            for (const auto& l : intra[c]) {
                intraAdj[l.a].emplace_back(l.edge, l.b);
                if (l.a != l.b) intraAdj[l.b].emplace_back(l.edge, l.a);
            }
            std::vector<std::vector<std::pair<int, int>>> stepAdj(verts.size());
            if (c < W - 1)
                for (const auto& l : step[c]) stepAdj[l.a].emplace_back(l.edge, l.b);
            std::map<std::uint32_t, BigInt> next;
            for (const auto& [inMaskRaw, weight] : states) {
                std::uint32_t inMask = inMaskRaw;
                if (c == W - 1) {
                    if (inMask & maskLast) continue;  // wrap conflicts with step marks
                    inMask |= maskLast;
                }
                // cover all uncovered vertices of this column
                std::function<void(std::uint32_t, std::uint32_t, BigInt)> rec =
                    [&](std::uint32_t cov, std::uint32_t nextMask, BigInt w) {
                        nodes.tick();
                        int i = -1;
                        for (std::size_t k = 0; k < verts.size(); ++k)
                            if (!(cov & (1u << k))) {
                                i = static_cast<int>(k);
                                break;
                            }
                        if (i < 0) {
                            next[nextMask] += w * weight;
                            return;
                        }
                        for (auto [ei, j] : intraAdj[i]) {
                            if (j == i || (cov & (1u << j))) continue;
                            rec(cov | (1u << i) | (1u << j), nextMask,
                                w * g.edges[ei].mult);
                        }
                        for (auto [ei, j] : stepAdj[i]) {
                            if (nextMask & (1u << j)) continue;
                            rec(cov | (1u << i), nextMask | (1u << j),
                                w * g.edges[ei].mult);
                        }
                    };
                rec(inMask, 0, 1);
            }
            states = std::move(next);
        }
        auto it = states.find(0);
        if (it != states.end()) total += wrapWeight * it->second;
    };

    // Enumerate vertex-disjoint wrap subsets.
    std::function<void(std::size_t, std::uint32_t, std::uint32_t, BigInt)> pick =
        [&](std::size_t i, std::uint32_t m0, std::uint32_t mLast, BigInt w) {
            if (i == wrap.size()) {
                sweep(m0, mLast, w);
                return;
            }
            pick(i + 1, m0, mLast, w);
            const auto& l = wrap[i];  // l.a in column W-1, l.b in column 0
            std::uint32_t bitLast = 1u << l.a, bit0 = 1u << l.b;
            if ((mLast & bitLast) || (m0 & bit0)) return;
            pick(i + 1, m0 | bit0, mLast | bitLast, w * g.edges[l.edge].mult);
        };
    pick(0, 0, 0, 1);
    return total;
}

}  // namespace permlattice
