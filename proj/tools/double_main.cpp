#include "double/io.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace dbl;

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitUsage = 64;

struct Options {
    WorkspacePaths paths;
    std::string word, at, kind = "X", arc, with, map = "pi", parities;
};

std::vector<std::string> edge_labels(const Triangulation& t) {
    std::vector<std::string> out;
    for (int e = 0; e < t.num_edges(); ++e) out.push_back(std::to_string(t.edge_id(e)));
    return out;
}

// Seed and labels from --tri or --seed; words index edges by id or seed entries from 1.
struct SeedInput {
    Seed seed;
    std::vector<std::string> labels;
    std::vector<int> word;
};

SeedInput seed_input(const Workspace& w, const Options& o) {
    SeedInput in;
    std::vector<long> raw = parse_int_list(o.word);
    if (w.triangulation) {
        in.seed = epsilon_from_triangulation(*w.triangulation);
        in.labels = edge_labels(*w.triangulation);
        for (long id : raw) in.word.push_back(w.triangulation->edge_index(static_cast<int>(id)));
    } else if (w.seed) {
        in.seed = *w.seed;
        in.labels = default_labels(in.seed.n);
        for (long k : raw) {
            if (k < 1 || k > in.seed.n) throw DomainError("mutation index " + std::to_string(k) + " out of range");
            in.word.push_back(static_cast<int>(k - 1));
        }
    } else {
        throw DomainError("give --seed or --tri");
    }
    return in;
}

const Triangulation& need_tri(const Workspace& w) {
    if (!w.triangulation) throw DomainError("this command needs --tri");
    return *w.triangulation;
}

const DLamination& need_curves(const Workspace& w) {
    if (!w.lamination || !w.lamination->curves) throw DomainError("this command needs a curve lamination (--lam)");
    return *w.lamination->curves;
}

std::string matrix_str(const Matrix& m) {
    std::string out = "[";
    for (std::size_t i = 0; i < m.size(); ++i) out += (i ? ",[" : "[") + rational_list_str(m[i]) + "]";
    return out + "]";
}

void print_values(std::ostream& os, const std::string& prefix, const std::vector<std::string>& names,
                  const std::vector<RationalExpr>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << prefix << names[i] << " = " << v[i].str() << "\n";
}

std::vector<std::string> select(const std::vector<std::string>& labels, const std::vector<int>& idx) {
    std::vector<std::string> out;
    for (int i : idx) out.push_back(labels[i]);
    return out;
}

void cmd_mutate(const Workspace& w, const Options& o, std::ostream& os) {
    SeedInput in = seed_input(w, o);
    if (o.kind == "matrix") {
        os << "epsilon " << matrix_str(apply_word(in.seed, in.word).eps) << "\n";
        return;
    }
    StateKind kind = parse_kind(o.kind);
    auto J = in.seed.unfrozen();
    ClusterState st;
    if (kind == StateKind::A || kind == StateKind::X || kind == StateKind::D) {
        st = initial_state(in.seed, kind, in.labels);
    } else {
        auto at = parse_rational_list(o.at);
        if (kind == StateKind::TropD) {
            if (at.size() != 2 * J.size()) throw DomainError("--at needs b then x over the unfrozen indices");
            st = tropical_state(in.seed, kind, {at.begin() + J.size(), at.end()}, {at.begin(), at.begin() + J.size()});
        } else {
            st = tropical_state(in.seed, kind, at);
        }
    }
    st = mutate_state_word(st, in.word);
    os << "epsilon " << matrix_str(st.seed.eps) << "\n";
    auto junf = select(in.labels, J);
    switch (kind) {
        case StateKind::A: print_values(os, "A", in.labels, st.values); break;
        case StateKind::X: print_values(os, "X", junf, st.values); break;
        case StateKind::D:
            print_values(os, "B", junf, st.bvalues);
            print_values(os, "X", junf, st.values);
            break;
        case StateKind::TropA: os << "a " << rational_list_str(st.tvalues) << "\n"; break;
        case StateKind::TropX: os << "x " << rational_list_str(st.tvalues) << "\n"; break;
        case StateKind::TropD:
            os << "b " << rational_list_str(st.tbvalues) << "\n";
            os << "x " << rational_list_str(st.tvalues) << "\n";
            break;
    }
}

void cmd_flip(const Workspace& w, const Options& o, std::ostream& os) {
    Triangulation t = need_tri(w);
    for (long id : parse_int_list(o.word)) t = flip(t, t.edge_index(static_cast<int>(id)));
    os << to_json(t).dump(2) << "\n";
}

// Expansion data of an arc given by --arc, or of the last variable mutated by --word.
struct Expansion {
    std::string laurent, fpoly;
    std::vector<long> g;
};

Expansion expansion(const Workspace& w, const Options& o) {
    if (!o.arc.empty()) {
        const Triangulation& t = need_tri(w);
        std::vector<int> edges;
        for (long id : parse_int_list(o.arc)) edges.push_back(t.edge_index(static_cast<int>(id)));
        ArcExpansion e = expand_arc(t, arc_from_word(t, edges));
        return {e.laurent.str(), e.fpoly.str(), e.g};
    }
    SeedInput in = seed_input(w, o);
    if (in.word.empty()) throw DomainError("give --arc or a nonempty --word");
    PrincipalRun run = principal_run(in.seed, in.word);
    const VariableRecord& v = run.cluster.at(in.seed.position_in_unfrozen(in.word.back()));
    return {v.xpoly.str(), v.fpoly.str(), v.g};
}

void cmd_pair(const Workspace& w, const Options& o, std::ostream& os) {
    const Triangulation& t = need_tri(w);
    RationalExpr v = pair_lamination(t, need_curves(w));
    os << v.str() << "\n";
    if (!o.at.empty()) os << rational_str(v.eval(parse_rational_list(o.at))) << "\n";
}

void cmd_trop(const Workspace& w, const Options& o, std::ostream& os) {
    const Triangulation& t = need_tri(w);
    os << rational_str(trop_eval(pair_lamination(t, need_curves(w)), parse_rational_list(o.at))) << "\n";
}

void cmd_ipair(const Workspace& w, const Options& o, std::ostream& os) {
    const Triangulation& t = need_tri(w);
    if (o.with.empty()) throw DomainError("ipair needs --with");
    LaminationInput m = lamination_input_from_json(t, read_json_file(o.with));
    DLamCoords c = m.coords ? *m.coords : d_coordinates(t, *m.curves);
    os << rational_str(intersection_pairing(t, need_curves(w), c)) << "\n";
}

void cmd_integrality(const Workspace& w, const Options&, std::ostream& os) {
    IntegralityReport r = integrality(need_tri(w), need_curves(w));
    os << std::boolalpha << "coords_integral " << r.coords_integral << "\n"
       << "homology_null " << r.homology_null << "\n"
       << "pairing_rational " << r.pairing_rational << "\n";
}

void cmd_homology(const Workspace& w, const Options& o, std::ostream& os) {
    const Triangulation& t = need_tri(w);
    std::vector<int> par;
    if (!o.parities.empty()) {
        for (long p : parse_int_list(o.parities)) par.push_back(static_cast<int>(p));
    } else {
        par = lamination_parities(t, need_curves(w));
    }
    Z2Result r = z2_cycle_class(t, par);
    os << std::boolalpha << "null_homologous " << r.null_homologous << "\n" << "h1_rank " << r.h1_rank << "\n";
}

void cmd_maps(const Workspace& w, const Options& o, std::ostream& os) {
    SeedInput in = seed_input(w, o);
    const Seed& s = in.seed;
    auto J = s.unfrozen();
    auto junf = select(in.labels, J);
    auto vars = [](const std::vector<std::string>& names) {
        VarSet vs = make_vars(names);
        std::vector<RationalExpr> out;
        for (std::size_t i = 0; i < names.size(); ++i) out.push_back(RationalExpr::variable(vs, i));
        return out;
    };
    std::vector<std::string> an, bn;
    for (const auto& l : in.labels) an.push_back("A" + l);
    for (const auto& l : in.labels) bn.push_back("Ao" + l);
    if (o.map == "p") {
        print_values(os, "X", junf, p_map(s, vars(an)));
    } else if (o.map == "phi") {
        std::vector<std::string> both = an;
        both.insert(both.end(), bn.begin(), bn.end());
        auto all = vars(both);
        DPoint p = phi_map(s, {all.begin(), all.begin() + s.n}, {all.begin() + s.n, all.end()});
        print_values(os, "B", junf, p.b);
        print_values(os, "X", junf, p.x);
    } else if (o.map == "pi") {
        std::vector<std::string> names;
        for (const auto& l : junf) names.push_back("B" + l);
        for (const auto& l : junf) names.push_back("X" + l);
        auto all = vars(names);
        auto [x, xhat] = pi_map(s, {{all.begin(), all.begin() + J.size()}, {all.begin() + J.size(), all.end()}});
        print_values(os, "X", junf, x);
        print_values(os, "Xhat", junf, xhat);
    } else {
        throw DomainError("unknown map '" + o.map + "'; expected p, phi or pi");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cluster coordinates, laminations and the canonical pairing on the symplectic double"};
    app.require_subcommand(1);
    Options o;
    auto add_files = [&](CLI::App* c) {
        c->add_option("--surface", o.paths.surface, "surface file");
        c->add_option("--tri", o.paths.triangulation, "triangulation file");
        c->add_option("--seed", o.paths.seed, "seed file");
        c->add_option("--lam", o.paths.lamination, "lamination file");
    };
    using Handler = void (*)(const Workspace&, const Options&, std::ostream&);
    std::vector<std::pair<CLI::App*, Handler>> commands;
    auto add = [&](const std::string& name, const std::string& help, Handler h) {
        CLI::App* c = app.add_subcommand(name, help);
        add_files(c);
        commands.push_back({c, h});
        return c;
    };
    CLI::App* mutate = add("mutate", "mutate a seed and its coordinates along --word", cmd_mutate);
    mutate->add_option("--kind", o.kind, "matrix, A, X, D, trop-a, trop-x or trop-d");
    mutate->add_option("--word", o.word, "comma-separated indices (edge ids with --tri)");
    mutate->add_option("--at", o.at, "tropical point");
    add("flip", "flip a triangulation along --word", cmd_flip)->add_option("--word", o.word, "edge ids");
    for (std::string name : {"expand", "fpoly", "gvec"}) {
        CLI::App* c = add(name, "expansion data of an arc (--arc) or of a mutated variable (--word)", nullptr);
        c->add_option("--arc", o.arc, "edge ids crossed by the arc");
        c->add_option("--word", o.word, "mutation word");
    }
    add("pair", "canonical pairing of a lamination", cmd_pair)->add_option("--at", o.at, "evaluation point (b then x)");
    add("trop", "tropicalized pairing at a point", cmd_trop)->add_option("--at", o.at, "point (b then x)");
    add("ipair", "intersection pairing with another lamination", cmd_ipair)->add_option("--with", o.with, "lamination file");
    add("integrality", "the three integrality criteria", cmd_integrality);
    add("homology", "mod 2 class of the curve parities", cmd_homology)->add_option("--parities", o.parities, "per-edge bits");
    add("maps", "the canonical maps p, phi and pi", cmd_maps)->add_option("--map", o.map, "p, phi or pi");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    try {
        Workspace w = parse_workspace(o.paths);
        for (auto [c, h] : commands) {
            if (!c->parsed()) continue;
            if (h) {
                h(w, o, std::cout);
            } else {
                Expansion e = expansion(w, o);
                if (c->get_name() == "expand") std::cout << e.laurent << "\n";
                else if (c->get_name() == "fpoly") std::cout << e.fpoly << "\n";
                else {
                    std::string g;
                    for (std::size_t i = 0; i < e.g.size(); ++i) g += (i ? "," : "") + std::to_string(e.g[i]);
                    std::cout << g << "\n";
                }
            }
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return 0;
}
