#pragma once

#include "double/tropical.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace dbl {

using Json = nlohmann::ordered_json;

// Malformed input; the message starts with the JSON path of the offending field.
struct SchemaError : DomainError {
    using DomainError::DomainError;
};

Json to_json(const DecoratedSurface& s);
DecoratedSurface surface_from_json(const Json& j);

// {"edges": [{"id": 1, "internal": true}, ...], "triangles": [[id, id, id], ...]}
// or a builder: {"builder": "annulus", "args": [1, 1]}.
Json to_json(const Triangulation& t);
Triangulation triangulation_from_json(const Json& j);

// {"epsilon": [[...]], "frozen": [...], "d": [...]}; entries are integers or "p/q".
Json to_json(const Seed& s);
Seed seed_from_json(const Json& j);

// Curve laminations use edge ids in words; orientations map vertex indices to
// "reversed" or "agrees".
Json to_json(const Triangulation& t, const DLamination& l);
DLamination lamination_from_json(const Triangulation& t, const Json& j);
Json to_json(const DLamCoords& c);
DLamCoords coords_from_json(const Triangulation& t, const Json& j);

// Either kind of lamination file.
struct LaminationInput {
    std::optional<DLamination> curves;
    std::optional<DLamCoords> coords;
};
LaminationInput lamination_input_from_json(const Triangulation& t, const Json& j);

struct Workspace {
    std::optional<DecoratedSurface> surface;
    std::optional<Triangulation> triangulation;
    std::optional<Seed> seed;
    std::optional<LaminationInput> lamination;
};

struct WorkspacePaths {
    std::string surface, triangulation, seed, lamination;
};

// Relative paths that do not exist are looked up under $DOUBLE_SEED_DIR.
std::string resolve_path(const std::string& path);
Json read_json_file(const std::string& path);
Workspace parse_workspace(const WorkspacePaths& paths);

// Comma-separated integers or rationals.
std::vector<long> parse_int_list(const std::string& s);
std::vector<Rational> parse_rational_list(const std::string& s);

std::string rational_list_str(const std::vector<Rational>& v);

}  // namespace dbl
