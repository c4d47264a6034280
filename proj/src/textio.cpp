#include "permlattice/textio.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace permlattice {

namespace {

std::string vec_token(Vec2 v) {
    return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + ")";
}

Vec2 parse_vec_token(const std::string& tok) {
    if (tok.size() < 5 || tok.front() != '(' || tok.back() != ')')
        fail(Err::Domain, "pattern parse: bad vector token '" + tok + "'");
    auto comma = tok.find(',');
    if (comma == std::string::npos) fail(Err::Domain, "pattern parse: bad token '" + tok + "'");
    return Vec2{std::stoll(tok.substr(1, comma - 1)),
                std::stoll(tok.substr(comma + 1, tok.size() - comma - 2))};
}

}  // namespace

std::string pattern_to_text(const Pattern& pat) {
    if (pat.dim() != 2) fail(Err::Domain, "pattern_to_text: d=2 only");
    Vec2 lo{pat.domain.front()[0], pat.domain.front()[1]};
    Vec2 hi = lo;
    for (const auto& c : pat.domain) {
        lo.x = std::min(lo.x, c[0]);
        lo.y = std::min(lo.y, c[1]);
        hi.x = std::max(hi.x, c[0]);
        hi.y = std::max(hi.y, c[1]);
    }
    if (lo.x != 0 || lo.y != 0)
        fail(Err::Domain, "pattern_to_text: domain must sit at the origin box");
    std::ostringstream os;
    os << "d=2 A=[";
    for (std::size_t i = 0; i < pat.set.size(); ++i) {
        if (i) os << ",";
        os << vec_token(pat.set.vec2(static_cast<int>(i)));
    }
    os << "] U=box(" << hi.x + 1 << "," << hi.y + 1 << ")";
    std::vector<Vec2> holes;
    for (std::int64_t y = 0; y <= hi.y; ++y)
        for (std::int64_t x = 0; x <= hi.x; ++x)
            if (pat.position_of({x, y}) < 0) holes.push_back({x, y});
    if (!holes.empty()) {
        os << " minus ";
        for (std::size_t i = 0; i < holes.size(); ++i) {
            if (i) os << ",";
            os << vec_token(holes[i]);
        }
    }
    os << "\n";
    for (std::int64_t y = 0; y <= hi.y; ++y) {
        for (std::int64_t x = 0; x <= hi.x; ++x) {
            if (x) os << " ";
            int pi = pat.position_of({x, y});
            os << (pi < 0 ? "_" : vec_token(pat.set.vec2(pat.values[pi])));
        }
        os << "\n";
    }
    return os.str();
}

Pattern pattern_from_text(const std::string& text) {
    std::istringstream is(text);
    std::string header;
    if (!std::getline(is, header)) fail(Err::Domain, "pattern parse: empty input");
    std::istringstream hs(header);
    std::string tok;
    hs >> tok;
    if (tok != "d=2") fail(Err::Domain, "pattern parse: expected 'd=2', got '" + tok + "'");
    hs >> tok;
    if (tok.rfind("A=", 0) != 0) fail(Err::Domain, "pattern parse: expected A=...");
    std::string aspec = tok.substr(2);
    RestrictingSet A = RestrictingSet::AL();
    if (auto preset = RestrictingSet::preset(aspec)) {
        A = *preset;
    } else {
        if (aspec.front() != '[' || aspec.back() != ']')
            fail(Err::Domain, "pattern parse: A must be a preset token or [(..),..]");
        std::vector<Vec2> vs;
        std::string inner = aspec.substr(1, aspec.size() - 2);
        std::size_t p = 0;
        while (p < inner.size()) {
            auto close = inner.find(')', p);
            if (close == std::string::npos) fail(Err::Domain, "pattern parse: bad A list");
            vs.push_back(parse_vec_token(inner.substr(p, close - p + 1)));
            p = close + 1;
            if (p < inner.size() && inner[p] == ',') ++p;
        }
        A = RestrictingSet::from_vec2(vs);
    }
    hs >> tok;
    if (tok.rfind("U=box(", 0) != 0) fail(Err::Domain, "pattern parse: expected U=box(...)");
    auto close = tok.find(')');
    Vec2 shape = parse_vec_token(tok.substr(5, close - 4));
    std::set<Vec2> holes;
    std::string rest;
    if (hs >> rest) {
        if (rest != "minus") fail(Err::Domain, "pattern parse: expected 'minus'");
        std::string hlist;
        hs >> hlist;
        std::size_t p = 0;
        while (p < hlist.size()) {
            auto c2 = hlist.find(')', p);
            if (c2 == std::string::npos) fail(Err::Domain, "pattern parse: bad hole list");
            holes.insert(parse_vec_token(hlist.substr(p, c2 - p + 1)));
            p = c2 + 1;
            if (p < hlist.size() && hlist[p] == ',') ++p;
        }
    }
    std::map<Coords, Coords> field;
    for (std::int64_t y = 0; y < shape.y; ++y) {
        std::string line;
        if (!std::getline(is, line)) fail(Err::Domain, "pattern parse: missing row " + std::to_string(y));
        std::istringstream ls(line);
        for (std::int64_t x = 0; x < shape.x; ++x) {
            std::string cell;
            if (!(ls >> cell)) fail(Err::Domain, "pattern parse: short row " + std::to_string(y));
            if (cell == "_") {
                if (!holes.count({x, y}))
                    fail(Err::Domain, "pattern parse: hole " + to_string(Vec2{x, y}) +
                                          " not declared in header");
                continue;
            }
            if (holes.count({x, y}))
                fail(Err::Domain, "pattern parse: declared hole " + to_string(Vec2{x, y}) +
                                      " has a value");
            Vec2 v = parse_vec_token(cell);
            field[{x, y}] = Coords{v.x, v.y};
        }
    }
    return Pattern::from_map(A, field);
}

std::string graph_to_text(const UndirectedGraph& g) {
    std::ostringstream os;
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
        os << "v " << i << " " << g.vertices[i].str() << "\n";
    for (const auto& e : g.edges) {
        os << "e " << e.u << " " << e.v;
        if (e.mult != 1) os << " " << e.mult;
        os << "\n";
    }
    return os.str();
}

namespace {

VertexLabel parse_label(const std::string& s) {
    VertexLabel l;
    std::string body = s;
    if (s.rfind("T", 0) == 0 && s.find('.') != std::string::npos) {
        l.kind = VKind::Gadget;
        auto dot = s.rfind('.');
        l.sub = std::stoi(s.substr(dot + 1));
        body = s.substr(1, dot - 1);
    } else if (s.rfind("P", 0) == 0 && s.find('(') == std::string::npos) {
        l.kind = VKind::Aux;
        l.sub = std::stoi(s.substr(1));
        return l;
    } else if (s.front() == 'O') {
        l.side = Side::Out;
        body = s.substr(1);
    } else if (s.front() == 'I') {
        l.side = Side::In;
        body = s.substr(1);
    }
    l.pos = parse_vec_token(body);
    return l;
}

}  // namespace

UndirectedGraph graph_from_text(const std::string& text) {
    UndirectedGraph g;
    std::istringstream is(text);
    std::string line;
    std::map<long, int> ids;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "v") {
            long id;
            std::string label;
            ls >> id >> label;
            ids[id] = g.add_vertex(parse_label(label));
        } else if (kind == "e") {
            long a, b;
            ls >> a >> b;
            long mult = 1;
            ls >> mult;
            if (!ids.count(a) || !ids.count(b))
                fail(Err::Domain, "graph parse: edge references unknown vertex");
            g.edges.push_back(EdgeRec{ids[a], ids[b], {0, 0}, mult < 1 ? 1 : mult});
        } else {
            fail(Err::Domain, "graph parse: unknown line '" + line + "'");
        }
    }
    return g;
}

std::string matching_to_text(const PerfectMatching& m) {
    std::ostringstream os;
    os << "# matching\n";
    os << graph_to_text(*m.host);
    for (int ei : m.edge_ids) {
        const auto& e = m.host->edges[ei];
        os << "m " << e.u << " " << e.v << "\n";
    }
    return os.str();
}

std::string cover_to_text(const PerfectCover& c) {
    std::ostringstream os;
    os << "# cover target=";
    for (std::size_t i = 0; i < c.target.size(); ++i) {
        if (i) os << ",";
        os << c.target[i];
    }
    os << "\n" << graph_to_text(*c.host);
    for (int ei : c.edge_ids) {
        const auto& e = c.host->edges[ei];
        os << "m " << e.u << " " << e.v << "\n";
    }
    return os.str();
}

namespace {

std::string log_str(double v) {
    if (std::isinf(v) && v < 0) return "-inf";
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

}  // namespace

std::string entropy_report_to_csv(const EntropyReport& rep) {
    std::ostringstream os;
    os << "n,fix_count,box_perm_count,pattern_count,log_fix_per_site,log_box_per_site,"
          "log_pattern_per_site\n";
    for (const auto& r : rep.rows) {
        os << r.n << "," << r.fix_count.get_str() << "," << r.box_count.get_str() << ","
           << r.pattern_count.get_str() << "," << log_str(r.log_fix_per_site) << ","
           << log_str(r.log_box_per_site) << "," << log_str(r.log_pattern_per_site) << "\n";
    }
    os << "quadrature," << rep.set_name << ",,," << log_str(rep.quadrature.value) << ",err,"
       << log_str(rep.quadrature.error_estimate) << "\n";
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(Err::Domain, "cannot read " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(Err::Domain, "cannot write " + path);
    f << content;
}

}  // namespace permlattice
