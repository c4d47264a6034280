// Command-line front end: exact counts, entropy tables, admissibility checks,
// and fast-vs-oracle agreement runs.

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "permlattice/admissibility.hpp"
#include "permlattice/correspond.hpp"
#include "permlattice/entropy.hpp"
#include "permlattice/graphkit.hpp"
#include "permlattice/lattice.hpp"
#include "permlattice/oracle.hpp"
#include "permlattice/planarcount.hpp"
#include "permlattice/textio.hpp"

using json = nlohmann::json;
using namespace permlattice;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitOracleDiff = 4;

struct Output {
    std::string format = "text";
    std::string path;

    void emit(const std::string& text, const json& j) const {
        std::string body = format == "json" ? j.dump(2) + "\n" : text;
        if (path.empty())
            std::cout << body;
        else
            write_file(path, body);
    }
};

RestrictingSet parse_set(const std::string& spec) {
    if (auto p = RestrictingSet::preset(spec)) return *p;
    // explicit list: (dx,dy),(dx,dy),...
    std::vector<Vec2> vs;
    std::size_t i = 0;
    while (i < spec.size()) {
        auto close = spec.find(')', i);
        if (spec[i] != '(' || close == std::string::npos)
            fail(Err::Domain, "unknown preset or malformed vector list: " + spec);
        std::string tok = spec.substr(i, close - i + 1);
        auto comma = tok.find(',');
        vs.push_back(Vec2{std::stoll(tok.substr(1, comma - 1)),
                          std::stoll(tok.substr(comma + 1, tok.size() - comma - 2))});
        i = close + 1;
        if (i < spec.size() && spec[i] == ',') ++i;
    }
    return RestrictingSet::from_vec2(vs);
}

BoxShape parse_shape(const std::string& spec) {
    Coords n;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) n.push_back(std::stoll(tok));
    return BoxShape::of(n);
}

UndirectedGraph parse_graph_spec(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon != std::string::npos) {
        std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
        if (kind == "honeycomb") return honeycomb_torus(std::stoi(arg));
        if (kind == "square-torus") return square_torus(std::stoi(arg));
        if (kind == "square") return square_grid(parse_shape(arg));
        fail(Err::Domain, "unknown graph spec kind: " + kind);
    }
    return graph_from_text(read_file(spec));
}

json set_json(const RestrictingSet& A) {
    json v = json::array();
    for (const auto& a : A.vectors) v.push_back({a[0], a[1]});
    return v;
}

int run_count_toral(const std::string& set, const std::string& shape,
                    const std::string& method, const Output& out) {
    RestrictingSet A = parse_set(set);
    BoxShape box = parse_shape(shape);
    BigInt count;
    std::string used;
    if (method == "oracle" || (method == "auto" && box.dim() != 2)) {
        count = brute_toral_permutations(A, box).count;
        used = "oracle";
    } else {
        count = count_toral_matchings(io_double_cover(torus_quotient(A, box)));
        used = "transfer-matrix";
        if (method == "auto" && box.cells() <= 16) {
            BigInt check = brute_toral_permutations(A, box).count;
            if (check != count) fail(Err::Internal, "fast toral count disagrees with oracle");
        }
    }
    std::ostringstream os;
    os << count.get_str() << "\n";
    out.emit(os.str(), json{{"command", "count-toral"},
                            {"set", set_json(A)},
                            {"shape", shape},
                            {"method", used},
                            {"count", count.get_str()},
                            {"alphabet_faithful", alphabet_faithful(A, box)}});
    return kExitOk;
}

int run_count_box(const std::string& set, const std::string& shape, const Output& out) {
    RestrictingSet A = parse_set(set);
    BoxShape box = parse_shape(shape);
    BigInt count = count_box_permutations(A, box);
    out.emit(count.get_str() + "\n", json{{"command", "count-box"},
                                          {"set", set_json(A)},
                                          {"shape", shape},
                                          {"count", count.get_str()}});
    return kExitOk;
}

int run_count_patterns(const std::string& set, const std::string& shape, const Output& out) {
    RestrictingSet A = parse_set(set);
    BoxShape box = parse_shape(shape);
    EnumerationResult r = brute_patterns(A, box);
    std::ostringstream os;
    if (r.exact)
        os << r.count.get_str() << "\n";
    else
        os << "[" << r.lower.get_str() << ", " << r.upper.get_str() << "] (bounds)\n";
    out.emit(os.str(), json{{"command", "count-patterns"},
                            {"set", set_json(A)},
                            {"shape", shape},
                            {"count", r.count.get_str()},
                            {"lower", r.lower.get_str()},
                            {"upper", r.upper.get_str()},
                            {"exact", r.exact},
                            {"method", r.method}});
    return kExitOk;
}

int run_count_matchings(const std::string& graphSpec, const std::string& method,
                        const Output& out) {
    UndirectedGraph g = parse_graph_spec(graphSpec);
    BigInt count;
    std::string used;
    if (method == "oracle") {
        count = brute_matchings(g);
        used = "oracle";
    } else if (g.has_parallel_or_loops() ||
               graphSpec.rfind("square-torus", 0) == 0 ||
               graphSpec.rfind("honeycomb", 0) == 0) {
        count = count_toral_matchings(g);
        used = "transfer-matrix";
    } else {
        count = count_matchings_planar_int(embed_from_labels(g));
        used = "kasteleyn";
    }
    out.emit(count.get_str() + "\n", json{{"command", "count-matchings"},
                                          {"graph", graphSpec},
                                          {"method", used},
                                          {"count", count.get_str()}});
    return kExitOk;
}

CoverInstance parse_window_spec(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) fail(Err::Domain, "window spec must be kind:args");
    std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
    if (kind == "al") {
        BoxShape s = parse_shape(arg);
        return cover_instance_from_al_window(al_window(static_cast<int>(s.n[0]),
                                                       static_cast<int>(s.n[1])));
    }
    if (kind == "square") return square_window(std::stoi(arg));
    fail(Err::Domain, "unknown window kind: " + kind);
}

int run_count_covers(const std::string& windowSpec, bool useOracle, const Output& out) {
    CoverInstance inst = parse_window_spec(windowSpec);
    BigInt count = useOracle ? brute_covers(inst.graph, inst.target)
                             : count_perfect_covers(inst);
    out.emit(count.get_str() + "\n",
             json{{"command", "count-covers"},
                  {"window", windowSpec},
                  {"method", useOracle ? "oracle" : "gadget-kasteleyn"},
                  {"count", count.get_str()}});
    return kExitOk;
}

int run_entropy_integral(const std::string& set, const std::string& poly, int grid,
                         const Output& out) {
    LaurentPolynomial2 p;
    double factor = 1.0;
    std::string name;
    if (!poly.empty()) {
        p = LaurentPolynomial2::parse(poly);
        name = p.str();
    } else if (set == "AL") {
        p = LaurentPolynomial2::honeycomb_characteristic();
        name = "AL";
    } else if (set == "A+" || set == "Aplus") {
        p = LaurentPolynomial2::square_characteristic();
        factor = 0.5;
        name = "A+";
    } else {
        fail(Err::Domain, "entropy integral: --set AL|A+ or --poly required");
    }
    MahlerResult r = mahler_measure(p, grid);
    double value = factor * r.value, err = factor * r.error_estimate;
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << value << " +- " << std::scientific << err << "\n";
    out.emit(os.str(), json{{"command", "entropy-integral"},
                            {"integrand", name},
                            {"grid", r.grid},
                            {"value", value},
                            {"error_estimate", err},
                            {"excluded_zeros", r.excluded_zeros}});
    return kExitOk;
}

int run_entropy_report(const std::string& set, int nmax, int grid, const Output& out) {
    RestrictingSet A = parse_set(set);
    EntropyReport rep = entropy_report(A, nmax, grid);
    std::string csv = entropy_report_to_csv(rep);
    if (out.format == "csv") {
        out.emit(csv, json());
        return kExitOk;
    }
    std::ostringstream os;
    os << "set=" << rep.set_name << " quadrature=" << rep.quadrature.value << " +- "
       << rep.quadrature.error_estimate << "\n";
    os << "n fix box patterns log_fix log_box log_patterns\n";
    for (const auto& r : rep.rows) {
        os << r.n << " " << r.fix_count.get_str() << " " << r.box_count.get_str() << " "
           << r.pattern_count.get_str() << " " << r.log_fix_per_site << " "
           << r.log_box_per_site << " " << r.log_pattern_per_site << "\n";
    }
    os << rep.note << "\n";
    json rows = json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"n", r.n},
                        {"fix", r.fix_count.get_str()},
                        {"box", r.box_count.get_str()},
                        {"patterns", r.pattern_count.get_str()},
                        {"log_fix_per_site", r.log_fix_per_site},
                        {"log_box_per_site", r.log_box_per_site},
                        {"log_pattern_per_site", r.log_pattern_per_site},
                        {"fekete_ok", r.fekete_ok}});
    out.emit(os.str(), json{{"command", "entropy-report"},
                            {"set", rep.set_name},
                            {"quadrature", rep.quadrature.value},
                            {"error_estimate", rep.quadrature.error_estimate},
                            {"rows", rows}});
    return kExitOk;
}

int run_check(const std::string& file, int radius, const std::string& forbidden,
              const Output& out) {
    Pattern pat = pattern_from_text(read_file(file));
    AdmissibilityOptions opt;
    opt.obstruction_radius = radius;
    ForbiddenSet F;
    if (forbidden == "FA+") {
        F = preset_F_Aplus();
        opt.forbidden = &F;
    } else if (forbidden == "F'A+") {
        F = preset_Fprime_Aplus();
        opt.forbidden = &F;
    } else if (!forbidden.empty()) {
        fail(Err::Domain, "unknown forbidden set preset: " + forbidden);
    }
    AdmissibilityVerdict v = evaluate_admissibility(pat, opt);
    std::ostringstream os;
    os << "necessary-condition: " << (v.necessary_ok ? "pass" : "fail") << "\n";
    if (v.locally_admissible)
        os << "locally-admissible(" << forbidden << "): "
           << (*v.locally_admissible ? "yes" : "no") << "\n";
    std::string verdict = v.global == GlobalVerdict::Yes      ? "globally admissible"
                          : v.global == GlobalVerdict::No     ? "not globally admissible"
                                                              : "unknown";
    os << "verdict: " << verdict << "\n";
    json j{{"command", "check"},
           {"file", file},
           {"necessary_ok", v.necessary_ok},
           {"verdict", verdict}};
    if (v.obstruction) {
        os << "obstruction cells:";
        json dc = json::array(), ca = json::array();
        for (const auto& c : v.obstruction->demand_cells) {
            os << " " << to_string(c);
            dc.push_back({c[0], c[1]});
        }
        os << "\nobstruction candidates:";
        for (const auto& c : v.obstruction->candidates) {
            os << " " << to_string(c);
            ca.push_back({c[0], c[1]});
        }
        os << "\n";
        j["obstruction"] = {{"demand_cells", dc}, {"candidates", ca}};
    }
    if (v.certificate) {
        os << "certificate torus: " << to_string(v.certificate->torus.shape.n) << "\n";
        j["certificate_torus"] = to_string(v.certificate->torus.shape.n);
        os << pattern_to_text(v.certificate->torus.pattern);
    }
    if (v.locally_admissible) j["locally_admissible"] = *v.locally_admissible;
    out.emit(os.str(), j);
    return kExitOk;
}

int run_enumerate(const std::string& what, const std::string& set, const std::string& shape,
                  bool witnesses, const Output& out) {
    if (what == "toral") {
        RestrictingSet A = parse_set(set);
        BoxShape box = parse_shape(shape);
        auto all = enumerate_toral(A, box);
        std::ostringstream os;
        os << all.size() << "\n";
        json ws = json::array();
        if (witnesses) {
            for (const auto& tp : all) {
                os << pattern_to_text(tp.pattern);
                if (out.format == "json") ws.push_back(pattern_to_text(tp.pattern));
            }
        }
        out.emit(os.str(), json{{"command", "enumerate-toral"},
                                {"set", set_json(A)},
                                {"shape", shape},
                                {"count", all.size()},
                                {"witnesses", ws}});
        return kExitOk;
    }
    if (what == "matchings") {
        UndirectedGraph g = parse_graph_spec(set);
        auto ms = enumerate_matchings(g);
        std::ostringstream os;
        os << ms.size() << "\n";
        if (witnesses)
            for (const auto& m : ms) {
                PerfectMatching pm;
                pm.host = &g;
                pm.edge_ids = m;
                os << matching_to_text(pm);
            }
        out.emit(os.str(),
                 json{{"command", "enumerate-matchings"}, {"graph", set}, {"count", ms.size()}});
        return kExitOk;
    }
    fail(Err::Domain, "enumerate: unknown kind " + what);
}

int run_oracle_diff(const std::string& suite, const Output& out) {
    struct Row {
        std::string name;
        std::string fast, oracle;
        bool ok;
    };
    std::vector<Row> rows;
    auto add = [&](const std::string& name, const BigInt& fast, const BigInt& oracle) {
        rows.push_back({name, fast.get_str(), oracle.get_str(), fast == oracle});
    };
    int nmax = suite == "small" ? 2 : 3;
    for (int n = 1; n <= nmax + 1; ++n) {
        auto hc = honeycomb_torus(n);
        add("matchings honeycomb:" + std::to_string(n), count_toral_matchings(hc),
            brute_matchings(hc));
        auto st = square_torus(n);
        add("matchings square-torus:" + std::to_string(n), count_toral_matchings(st),
            brute_matchings(st));
    }
    for (int n = 1; n <= nmax; ++n)
        for (int m = 1; m <= nmax; ++m) {
            auto g = square_grid(BoxShape::of2(n + 1, m + 1));
            add("matchings grid " + std::to_string(n + 1) + "x" + std::to_string(m + 1),
                count_matchings_planar_int(embed_from_labels(g)), brute_matchings(g));
            auto w = al_window(n, m);
            auto inst = cover_instance_from_al_window(w);
            add("covers al:" + std::to_string(n) + "," + std::to_string(m),
                count_perfect_covers(inst), brute_covers(w.graph, w.target));
        }
    for (int n = 1; n <= 2; ++n) {
        auto inst = square_window(n);
        add("covers square:" + std::to_string(n), count_perfect_covers(inst),
            brute_covers(inst.graph, inst.target));
    }
    for (int n = 1; n <= nmax; ++n) {
        auto A = RestrictingSet::AL();
        BoxShape box = BoxShape::of2(n, n);
        add("toral AL " + std::to_string(n),
            count_toral_matchings(io_double_cover(torus_quotient(A, box))),
            brute_toral_permutations(A, box).count);
    }
    bool all_ok = true;
    std::ostringstream os;
    json jrows = json::array();
    for (const auto& r : rows) {
        all_ok = all_ok && r.ok;
        os << (r.ok ? "agree " : "DISAGREE ") << r.name << ": fast=" << r.fast
           << " oracle=" << r.oracle << "\n";
        jrows.push_back({{"name", r.name}, {"fast", r.fast}, {"oracle", r.oracle}, {"ok", r.ok}});
    }
    os << (all_ok ? "all agree\n" : "DISAGREEMENT DETECTED\n");
    out.emit(os.str(),
             json{{"command", "oracle-diff"}, {"suite", suite}, {"ok", all_ok}, {"rows", jrows}});
    return all_ok ? kExitOk : kExitOracleDiff;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact counting for restricted-movement lattice permutations"};
    app.require_subcommand(1);
    Output out;
    app.add_option("--format", out.format, "text|json|csv")->default_val("text");
    app.add_option("--output", out.path, "write results to a file instead of stdout");
    int parallelism = 0;
    app.add_option("--parallel", parallelism,
                   "worker bound for parallel sweeps (0 = hardware default)");

    std::string set, shape = "2,2", method = "auto", graphSpec, windowSpec, poly, file;
    std::string forbidden, suite = "standard", enumKind;
    int grid = 2048, nmax = 4, radius = 2;
    bool useOracle = false, witnesses = false;

    auto* count = app.add_subcommand("count", "exact counts");
    auto* toral = count->add_subcommand("toral", "periodic points / toral permutations");
    toral->add_option("--set", set, "restricting set (AL, A+, Aplus, Aoplus or explicit)")
        ->required();
    toral->add_option("--shape", shape, "torus shape n1,n2")->required();
    toral->add_option("--method", method, "auto|fast|oracle");
    auto* boxc = count->add_subcommand("box", "box permutations Pi_n(A)");
    boxc->add_option("--set", set)->required();
    boxc->add_option("--shape", shape)->required();
    auto* pats = count->add_subcommand("patterns", "globally admissible patterns B_n");
    pats->add_option("--set", set)->required();
    pats->add_option("--shape", shape)->required();
    auto* match = count->add_subcommand("matchings", "perfect matchings");
    match->add_option("--graph", graphSpec,
                      "honeycomb:n | square-torus:n | square:n1,n2 | file")
        ->required();
    match->add_option("--method", method, "auto|oracle");
    auto* covers = count->add_subcommand("covers", "perfect covers");
    covers->add_option("--window", windowSpec, "al:n,m | square:n")->required();
    covers->add_flag("--oracle", useOracle, "count by brute force instead of gadgets");

    auto* entropy = app.add_subcommand("entropy", "entropy integrals and tables");
    auto* integral = entropy->add_subcommand("integral", "Mahler-measure quadrature");
    integral->add_option("--set", set, "AL or A+");
    integral->add_option("--poly", poly, "custom integrand c:j,k;...");
    integral->add_option("--grid", grid, "roots-of-unity grid size");
    auto* report = entropy->add_subcommand("report", "finite-size table vs quadrature");
    report->add_option("--set", set)->required();
    report->add_option("--nmax", nmax);
    report->add_option("--grid", grid);

    auto* check = app.add_subcommand("check", "pattern admissibility verdict");
    check->add_option("file", file, "pattern file")->required();
    check->add_option("--radius", radius, "obstruction search window radius");
    check->add_option("--forbidden", forbidden, "FA+ | F'A+");

    auto* enumerate = app.add_subcommand("enumerate", "enumerate witnesses");
    enumerate->add_option("kind", enumKind, "toral|matchings")->required();
    enumerate->add_option("--set", set, "restricting set (toral) or graph spec (matchings)");
    enumerate->add_option("--shape", shape);
    enumerate->add_flag("--witnesses", witnesses, "dump witness objects");

    auto* diff = app.add_subcommand("oracle-diff", "run fast paths against oracles");
    diff->add_option("--suite", suite, "small|standard");

    CLI11_PARSE(app, argc, argv);

    try {
        if (toral->parsed()) return run_count_toral(set, shape, method, out);
        if (boxc->parsed()) return run_count_box(set, shape, out);
        if (pats->parsed()) return run_count_patterns(set, shape, out);
        if (match->parsed()) return run_count_matchings(graphSpec, method, out);
        if (covers->parsed()) return run_count_covers(windowSpec, useOracle, out);
        if (integral->parsed()) return run_entropy_integral(set, poly, grid, out);
        if (report->parsed()) return run_entropy_report(set, nmax, grid, out);
        if (check->parsed()) return run_check(file, radius, forbidden, out);
        if (enumerate->parsed()) return run_enumerate(enumKind, set, shape, witnesses, out);
        if (diff->parsed()) return run_oracle_diff(suite, out);
        std::cerr << "error: no subcommand\n";
        return kExitValidation;
    } catch (const Error& e) {
        std::cerr << err_name(e.kind()) << ": " << e.what() << "\n";
        return e.kind() == Err::Capacity ? kExitCapacity : kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
