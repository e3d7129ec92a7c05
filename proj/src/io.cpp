#include "double/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dbl {

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& what) { throw SchemaError(path + ": " + what); }

const Json& field(const Json& j, const std::string& path, const std::string& key) {
    if (!j.is_object()) schema(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) schema(path, "missing field '" + key + "'");
    return *it;
}

const Json& array_field(const Json& j, const std::string& path, const std::string& key) {
    const Json& a = field(j, path, key);
    if (!a.is_array()) schema(path + "." + key, "expected an array");
    return a;
}

long as_long(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) schema(path, "expected an integer");
    return j.get<long>();
}

bool as_bool(const Json& j, const std::string& path) {
    if (!j.is_boolean()) schema(path, "expected a boolean");
    return j.get<bool>();
}

std::string as_string(const Json& j, const std::string& path) {
    if (!j.is_string()) schema(path, "expected a string");
    return j.get<std::string>();
}

Rational as_rational(const Json& j, const std::string& path) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const std::exception& e) {
            schema(path, e.what());
        }
    }
    schema(path, "expected an integer or a \"p/q\" string");
}

Json rational_json(const Rational& r) {
    if (boost::multiprecision::denominator(r) == 1) {
        const Integer& n = boost::multiprecision::numerator(r);
        if (n >= Integer(std::numeric_limits<long>::min()) && n <= Integer(std::numeric_limits<long>::max()))
            return n.convert_to<long>();
    }
    return rational_str(r);
}

std::vector<Rational> rational_array(const Json& j, const std::string& path) {
    if (!j.is_array()) schema(path, "expected an array");
    std::vector<Rational> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_rational(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Json rational_array_json(const std::vector<Rational>& v) {
    Json a = Json::array();
    for (const auto& r : v) a.push_back(rational_json(r));
    return a;
}

int edge_from_id(const Triangulation& t, const Json& j, const std::string& path) {
    long id = as_long(j, path);
    for (int e = 0; e < t.num_edges(); ++e)
        if (t.edge_id(e) == id) return e;
    schema(path, "unknown edge id " + std::to_string(id));
}

std::set<int> orientations_from_json(const Triangulation& t, const Json& j, const std::string& path) {
    std::set<int> out;
    if (!j.contains("orientations")) return out;
    const Json& o = j.at("orientations");
    if (!o.is_object()) schema(path + ".orientations", "expected an object");
    for (const auto& [key, val] : o.items()) {
        std::string p = path + ".orientations." + key;
        int v;
        try {
            std::size_t used = 0;
            v = std::stoi(key, &used);
            if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            schema(p, "vertex keys must be integers");
        }
        if (v < 0 || v >= t.num_vertices()) schema(p, "unknown vertex " + key);
        std::string s = as_string(val, p);
        if (s == "reversed") out.insert(v);
        else if (s != "agrees") schema(p, "expected \"reversed\" or \"agrees\"");
    }
    return out;
}

Json orientations_json(const std::set<int>& reversed) {
    Json o = Json::object();
    for (int v : reversed) o[std::to_string(v)] = "reversed";
    return o;
}

// Candidate arcs for one segment: either an edge (both directions) or a crossing word.
std::vector<NormalCurve> segment_candidates(const Triangulation& t, const Json& s, const std::string& path) {
    if (s.contains("edge")) {
        NormalCurve c = edge_curve(t, edge_from_id(t, s.at("edge"), path + ".edge"));
        return {c, reverse(c)};
    }
    const Json& w = array_field(s, path, "edges");
    std::vector<int> edges;
    for (std::size_t i = 0; i < w.size(); ++i) edges.push_back(edge_from_id(t, w[i], path + ".edges[" + std::to_string(i) + "]"));
    try {
        auto c = arcs_from_word(t, edges);
        if (c.empty()) schema(path, "no arc crosses the given edges in this order");
        return c;
    } catch (const SchemaError&) {
        throw;
    } catch (const DomainError& e) {
        schema(path, e.what());
    }
}

int first_vertex(const Triangulation& t, const NormalCurve& c) {
    return t.corner_vertex(c.visits.front().tri, c.visits.front().in.pos);
}
int last_vertex(const Triangulation& t, const NormalCurve& c) {
    return t.corner_vertex(c.visits.back().tri, c.visits.back().out.pos);
}

IntersectingCurve intersecting_from_json(const Triangulation& t, const Json& j, const std::string& path) {
    const Json& segs = array_field(j, path, "segments");
    std::vector<Side> sides;
    std::vector<std::vector<NormalCurve>> cands;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        std::string p = path + ".segments[" + std::to_string(i) + "]";
        sides.push_back(parse_side(as_string(field(segs[i], p, "side"), p + ".side")));
        cands.push_back(segment_candidates(t, segs[i], p));
    }
    long weight = j.contains("weight") ? as_long(j.at("weight"), path + ".weight") : 1;
    // Pick directions so that consecutive segments share endpoints.
    std::vector<NormalCurve> chosen;
    auto search = [&](auto&& self, std::size_t i) -> bool {
        if (i == cands.size()) return !chosen.empty() && last_vertex(t, chosen.back()) == first_vertex(t, chosen.front());
        for (const auto& c : cands[i]) {
            if (i > 0 && last_vertex(t, chosen.back()) != first_vertex(t, c)) continue;
            chosen.push_back(c);
            if (self(self, i + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    if (cands.empty() || !search(search, 0)) schema(path, "segments do not close up at common marked points");
    IntersectingCurve out{{}, weight};
    for (std::size_t i = 0; i < chosen.size(); ++i) out.segments.push_back({sides[i], chosen[i]});
    return out;
}

Json segment_json(const Triangulation& t, const Segment& s) {
    Json j;
    j["side"] = side_name(s.side);
    if (auto e = curve_as_edge(t, s.arc)) {
        j["edge"] = t.edge_id(*e);
    } else {
        Json w = Json::array();
        for (int e : crossing_word(t, s.arc)) w.push_back(t.edge_id(e));
        j["edges"] = w;
    }
    return j;
}

}  // namespace

Json to_json(const DecoratedSurface& s) {
    Json j;
    j["genus"] = s.genus;
    j["punctures"] = s.punctures;
    j["boundary"] = s.boundary;
    return j;
}

DecoratedSurface surface_from_json(const Json& j) {
    DecoratedSurface s;
    s.genus = static_cast<int>(as_long(field(j, "surface", "genus"), "surface.genus"));
    s.punctures = j.contains("punctures") ? static_cast<int>(as_long(j.at("punctures"), "surface.punctures")) : 0;
    if (j.contains("boundary")) {
        const Json& b = j.at("boundary");
        if (!b.is_array()) schema("surface.boundary", "expected an array");
        for (std::size_t i = 0; i < b.size(); ++i)
            s.boundary.push_back(static_cast<int>(as_long(b[i], "surface.boundary[" + std::to_string(i) + "]")));
        std::sort(s.boundary.begin(), s.boundary.end());
    }
    s.validate();
    return s;
}

Json to_json(const Triangulation& t) {
    Json j;
    Json edges = Json::array();
    for (const auto& e : t.edges()) edges.push_back({{"id", e.id}, {"internal", e.internal}});
    j["edges"] = edges;
    Json tris = Json::array();
    for (const auto& tri : t.triangles()) tris.push_back({t.edge_id(tri[0]), t.edge_id(tri[1]), t.edge_id(tri[2])});
    j["triangles"] = tris;
    return j;
}

Triangulation triangulation_from_json(const Json& j) {
    const std::string path = "triangulation";
    if (j.is_object() && j.contains("builder")) {
        std::string b = as_string(j.at("builder"), path + ".builder");
        std::vector<long> args;
        if (j.contains("args")) {
            const Json& a = j.at("args");
            if (!a.is_array()) schema(path + ".args", "expected an array");
            for (std::size_t i = 0; i < a.size(); ++i) args.push_back(as_long(a[i], path + ".args[" + std::to_string(i) + "]"));
        }
        auto need = [&](std::size_t n) {
            if (args.size() != n) schema(path + ".args", "builder '" + b + "' takes " + std::to_string(n) + " arguments");
        };
        if (b == "polygon") {
            need(1);
            return polygon(static_cast<int>(args[0]));
        }
        if (b == "annulus") {
            need(2);
            return annulus(static_cast<int>(args[0]), static_cast<int>(args[1]));
        }
        if (b == "punctured_torus") {
            need(0);
            return punctured_torus();
        }
        if (b == "punctured_polygon") {
            need(1);
            return punctured_polygon(static_cast<int>(args[0]));
        }
        schema(path + ".builder", "unknown builder '" + b + "'");
    }
    const Json& es = array_field(j, path, "edges");
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < es.size(); ++i) {
        std::string p = path + ".edges[" + std::to_string(i) + "]";
        edges.push_back({static_cast<int>(as_long(field(es[i], p, "id"), p + ".id")),
                         as_bool(field(es[i], p, "internal"), p + ".internal")});
    }
    const Json& ts = array_field(j, path, "triangles");
    std::vector<std::array<int, 3>> tris;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        std::string p = path + ".triangles[" + std::to_string(i) + "]";
        if (!ts[i].is_array() || ts[i].size() != 3) schema(p, "expected three edge ids");
        tris.push_back({static_cast<int>(as_long(ts[i][0], p + "[0]")), static_cast<int>(as_long(ts[i][1], p + "[1]")),
                        static_cast<int>(as_long(ts[i][2], p + "[2]"))});
    }
    return Triangulation::make(edges, tris);
}

Json to_json(const Seed& s) {
    Json j;
    Json eps = Json::array();
    for (const auto& row : s.eps) eps.push_back(rational_array_json(row));
    j["epsilon"] = eps;
    j["frozen"] = s.frozen;
    j["d"] = rational_array_json(s.d);
    return j;
}

Seed seed_from_json(const Json& j) {
    const std::string path = "seed";
    const Json& e = array_field(j, path, "epsilon");
    Matrix eps;
    for (std::size_t i = 0; i < e.size(); ++i) eps.push_back(rational_array(e[i], path + ".epsilon[" + std::to_string(i) + "]"));
    std::vector<bool> frozen;
    if (j.contains("frozen")) {
        const Json& f = j.at("frozen");
        if (!f.is_array()) schema(path + ".frozen", "expected an array");
        for (std::size_t i = 0; i < f.size(); ++i) frozen.push_back(as_bool(f[i], path + ".frozen[" + std::to_string(i) + "]"));
    }
    std::vector<Rational> d;
    if (j.contains("d")) d = rational_array(j.at("d"), path + ".d");
    return Seed::make(eps, frozen, d);
}

Json to_json(const Triangulation& t, const DLamination& l) {
    Json curves = Json::array();
    for (const auto& c : l.loops) {
        Json w = Json::array();
        for (const auto& [e, turn] : c.word) w.push_back({t.edge_id(e), std::string(1, turn_char(turn))});
        curves.push_back({{"loop", {{"side", side_name(c.side)}, {"word", w}, {"weight", c.weight}}}});
    }
    for (const auto& c : l.intersecting) {
        Json segs = Json::array();
        for (const auto& s : c.segments) segs.push_back(segment_json(t, s));
        curves.push_back({{"intersecting", {{"segments", segs}, {"weight", c.weight}}}});
    }
    Json j;
    j["curves"] = curves;
    if (!l.reversed.empty()) j["orientations"] = orientations_json(l.reversed);
    return j;
}

DLamination lamination_from_json(const Triangulation& t, const Json& j) {
    const std::string path = "lamination";
    DLamination l;
    const Json& cs = array_field(j, path, "curves");
    for (std::size_t i = 0; i < cs.size(); ++i) {
        std::string p = path + ".curves[" + std::to_string(i) + "]";
        if (!cs[i].is_object()) schema(p, "expected an object");
        if (cs[i].contains("loop")) {
            const Json& lp = cs[i].at("loop");
            std::string q = p + ".loop";
            LoopCurve c;
            c.side = parse_side(as_string(field(lp, q, "side"), q + ".side"));
            const Json& w = array_field(lp, q, "word");
            for (std::size_t k = 0; k < w.size(); ++k) {
                std::string r = q + ".word[" + std::to_string(k) + "]";
                if (!w[k].is_array() || w[k].size() != 2) schema(r, "expected [edge id, \"L\" or \"R\"]");
                c.word.push_back({edge_from_id(t, w[k][0], r + "[0]"), parse_turn(as_string(w[k][1], r + "[1]"))});
            }
            c.weight = lp.contains("weight") ? as_long(lp.at("weight"), q + ".weight") : 1;
            try {
                loop_from_turn_word(t, c.word);
            } catch (const DomainError& e) {
                schema(q + ".word", e.what());
            }
            l.loops.push_back(c);
        } else if (cs[i].contains("intersecting")) {
            l.intersecting.push_back(intersecting_from_json(t, cs[i].at("intersecting"), p + ".intersecting"));
        } else {
            schema(p, "expected 'loop' or 'intersecting'");
        }
    }
    l.reversed = orientations_from_json(t, j, path);
    validate_lamination(t, l);
    return l;
}

Json to_json(const DLamCoords& c) {
    Json j;
    j["kind"] = "D";
    j["b"] = rational_array_json(c.b);
    j["x"] = rational_array_json(c.x);
    if (!c.reversed.empty()) j["orientations"] = orientations_json(c.reversed);
    return j;
}

DLamCoords coords_from_json(const Triangulation& t, const Json& j) {
    const std::string path = "lamination";
    if (as_string(field(j, path, "kind"), path + ".kind") != "D") schema(path + ".kind", "only \"D\" coordinates are supported");
    DLamCoords c;
    c.b = rational_array(field(j, path, "b"), path + ".b");
    c.x = rational_array(field(j, path, "x"), path + ".x");
    const std::size_t J = t.internal_edges().size();
    if (c.b.size() != J) schema(path + ".b", "expected " + std::to_string(J) + " entries");
    if (c.x.size() != J) schema(path + ".x", "expected " + std::to_string(J) + " entries");
    c.reversed = orientations_from_json(t, j, path);
    return c;
}

LaminationInput lamination_input_from_json(const Triangulation& t, const Json& j) {
    LaminationInput in;
    if (j.is_object() && j.contains("curves")) in.curves = lamination_from_json(t, j);
    else in.coords = coords_from_json(t, j);
    return in;
}

std::string resolve_path(const std::string& path) {
    namespace fs = std::filesystem;
    if (fs::exists(path) || fs::path(path).is_absolute()) return path;
    if (const char* dir = std::getenv("DOUBLE_SEED_DIR")) {
        fs::path p = fs::path(dir) / path;
        if (fs::exists(p)) return p.string();
    }
    return path;
}

Json read_json_file(const std::string& path) {
    std::string real = resolve_path(path);
    std::ifstream in(real);
    if (!in) throw DomainError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

Workspace parse_workspace(const WorkspacePaths& paths) {
    Workspace w;
    auto load = [](const std::string& file, auto&& f) {
        try {
            return f(read_json_file(file));
        } catch (const SchemaError& e) {
            throw SchemaError(file + ": " + e.what());
        } catch (const DomainError& e) {
            throw DomainError(file + ": " + e.what());
        }
    };
    if (!paths.surface.empty()) w.surface = load(paths.surface, surface_from_json);
    if (!paths.triangulation.empty()) {
        w.triangulation = load(paths.triangulation, triangulation_from_json);
        if (w.surface && !(*w.surface == w.triangulation->surface()))
            throw DomainError("triangulation is of " + w.triangulation->surface().str() + ", not of the given " +
                              w.surface->str());
    }
    if (!paths.seed.empty()) w.seed = load(paths.seed, seed_from_json);
    if (!paths.lamination.empty()) {
        if (!w.triangulation) throw DomainError("a lamination needs a triangulation");
        const Triangulation& t = *w.triangulation;
        w.lamination = load(paths.lamination, [&](const Json& j) { return lamination_input_from_json(t, j); });
    }
    return w;
}

std::vector<long> parse_int_list(const std::string& s) {
    std::vector<long> out;
    for (const auto& r : parse_rational_list(s)) {
        if (boost::multiprecision::denominator(r) != 1) throw DomainError("expected integers in '" + s + "'");
        out.push_back(boost::multiprecision::numerator(r).convert_to<long>());
    }
    return out;
}

std::vector<Rational> parse_rational_list(const std::string& s) {
    std::vector<Rational> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(parse_rational(item));
        } catch (const std::exception&) {
            throw DomainError("cannot read '" + item + "' as a number");
        }
    }
    return out;
}

std::string rational_list_str(const std::vector<Rational>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + rational_str(v[i]);
    return out;
}

}  // namespace dbl
