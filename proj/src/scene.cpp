#include "persep/scene.hpp"

#include <json.hpp>

#include <cmath>
#include <utility>
#include <vector>

namespace persep {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error_at(const std::string& text, std::size_t byte,
                                 const std::string& msg) {
    int line = 1;
    int col = 1;
    const std::size_t stop = std::min(byte, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    throw SceneParseError(line, col, msg);
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known) {
            if (key == k) {
                ok = true;
                break;
            }
        }
        if (!ok) throw SceneError(where + ": unknown key '" + key + "'");
    }
}

double number_at(const json& j, const std::string& where) {
    if (!j.is_number()) throw SceneError(where + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw SceneError(where + ": non-finite number");
    return v;
}

Vec vector_at(const json& j, Index dim, const std::string& where) {
    if (!j.is_array()) throw SceneError(where + ": expected an array of numbers");
    if (static_cast<Index>(j.size()) != dim) {
        throw SceneError(where + ": dimension mismatch (got " + std::to_string(j.size()) +
                         ", expected " + std::to_string(dim) + ")");
    }
    Vec v(dim);
    Index i = 0;
    for (const auto& x : j) v[i++] = number_at(x, where);
    return v;
}

SetPiece piece_at(const json& j, Index dim, const Tolerance& tol, const std::string& where) {
    if (!j.is_object()) throw SceneError(where + ": expected a piece object");
    reject_unknown_keys(j, {"kind", "coords"}, where);
    if (!j.contains("kind") || !j.at("kind").is_string()) {
        throw SceneError(where + ": missing piece kind");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (!j.contains("coords") || !j.at("coords").is_array() || j.at("coords").empty()) {
        throw SceneError(where + ": empty set");
    }
    std::vector<Vec> coords;
    coords.reserve(j.at("coords").size());
    for (const auto& row : j.at("coords")) coords.push_back(vector_at(row, dim, where));
    if (kind == "points") return PointSet::make(std::move(coords), tol);
    if (kind == "polytope") return Polytope::make(std::move(coords), tol);
    throw SceneError(where + ": unknown piece kind '" + kind + "'");
}

SetExpr set_at(const json& j, Index dim, const Tolerance& tol, const std::string& name) {
    if (!j.is_array() || j.empty()) throw SceneError("set " + name + ": empty set");
    std::vector<SetPiece> pieces;
    pieces.reserve(j.size());
    int idx = 0;
    for (const auto& pj : j) {
        pieces.push_back(piece_at(pj, dim, tol, "set " + name + " piece " + std::to_string(idx)));
        ++idx;
    }
    return SetExpr::make(std::move(pieces));
}

json piece_to_json(const SetPiece& piece) {
    json out;
    out["kind"] = std::holds_alternative<PointSet>(piece) ? "points" : "polytope";
    json coords = json::array();
    for (const auto& x : piece_coords(piece)) {
        json row = json::array();
        for (Index i = 0; i < x.size(); ++i) row.push_back(x[i]);
        coords.push_back(std::move(row));
    }
    out["coords"] = std::move(coords);
    return out;
}

json set_to_json(const SetExpr& s) {
    json out = json::array();
    for (const auto& piece : s.pieces) out.push_back(piece_to_json(piece));
    return out;
}

}  // namespace

Scene parse_scene(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        parse_error_at(text, e.byte > 0 ? e.byte - 1 : 0, e.what());
    }
    if (!doc.is_object()) throw SceneError("scene: expected a top-level object");
    reject_unknown_keys(doc, {"dim", "sets", "p", "tolerance"}, "scene");

    if (!doc.contains("dim") || !doc.at("dim").is_number_integer()) {
        throw SceneError("scene: missing integer 'dim'");
    }
    Scene scene;
    scene.dim = doc.at("dim").get<Index>();
    if (scene.dim < 1) throw SceneError("scene: dim must be positive");

    if (doc.contains("tolerance")) {
        const json& tj = doc.at("tolerance");
        if (!tj.is_object()) throw SceneError("tolerance: expected an object");
        reject_unknown_keys(tj, {"eps_feas", "eps_zero", "eps_angle"}, "tolerance");
        ToleranceOverrides ov;
        if (tj.contains("eps_feas")) ov.eps_feas = number_at(tj.at("eps_feas"), "tolerance");
        if (tj.contains("eps_zero")) ov.eps_zero = number_at(tj.at("eps_zero"), "tolerance");
        if (tj.contains("eps_angle")) ov.eps_angle = number_at(tj.at("eps_angle"), "tolerance");
        scene.tolerance_overrides = ov;
    }
    Tolerance tol = scene.effective_tolerance();
    try {
        tol.validate();
    } catch (const std::invalid_argument& e) {
        throw SceneError(e.what());
    }

    if (!doc.contains("sets") || !doc.at("sets").is_object()) {
        throw SceneError("scene: missing 'sets' object");
    }
    const json& sets = doc.at("sets");
    reject_unknown_keys(sets, {"A", "B", "C"}, "sets");
    if (sets.contains("A") && sets.contains("C")) {
        throw SceneError("sets: provide either 'A' or 'C', not both");
    }
    if (sets.contains("A")) {
        scene.set_a_name = "A";
        scene.set_a = set_at(sets.at("A"), scene.dim, tol, "A");
    } else if (sets.contains("C")) {
        scene.set_a_name = "C";
        scene.set_a = set_at(sets.at("C"), scene.dim, tol, "C");
    } else {
        throw SceneError("sets: missing set 'A' (or 'C')");
    }
    if (sets.contains("B")) scene.set_b = set_at(sets.at("B"), scene.dim, tol, "B");

    if (doc.contains("p")) scene.point_p = vector_at(doc.at("p"), scene.dim, "p");

    try {
        scene.effective_tolerance().validate();
    } catch (const std::invalid_argument& e) {
        throw SceneError(e.what());
    }
    return scene;
}

std::string serialize_scene(const Scene& scene) {
    json doc;
    doc["dim"] = scene.dim;
    json sets;
    sets[scene.set_a_name] = set_to_json(scene.set_a);
    if (scene.set_b) sets["B"] = set_to_json(*scene.set_b);
    doc["sets"] = std::move(sets);
    if (scene.point_p) {
        json p = json::array();
        for (Index i = 0; i < scene.point_p->size(); ++i) p.push_back((*scene.point_p)[i]);
        doc["p"] = std::move(p);
    }
    if (scene.tolerance_overrides) {
        json tj;
        if (scene.tolerance_overrides->eps_feas) tj["eps_feas"] = *scene.tolerance_overrides->eps_feas;
        if (scene.tolerance_overrides->eps_zero) tj["eps_zero"] = *scene.tolerance_overrides->eps_zero;
        if (scene.tolerance_overrides->eps_angle) {
            tj["eps_angle"] = *scene.tolerance_overrides->eps_angle;
        }
        doc["tolerance"] = std::move(tj);
    }
    return doc.dump(2) + "\n";
}

namespace {

bool pieces_equal(const SetPiece& x, const SetPiece& y) {
    if (x.index() != y.index()) return false;
    const auto& cx = piece_coords(x);
    const auto& cy = piece_coords(y);
    if (cx.size() != cy.size()) return false;
    for (std::size_t i = 0; i < cx.size(); ++i) {
        if (cx[i].size() != cy[i].size() || cx[i] != cy[i]) return false;
    }
    return true;
}

bool sets_equal(const SetExpr& x, const SetExpr& y) {
    if (x.dim != y.dim || x.pieces.size() != y.pieces.size()) return false;
    for (std::size_t i = 0; i < x.pieces.size(); ++i) {
        if (!pieces_equal(x.pieces[i], y.pieces[i])) return false;
    }
    return true;
}

}  // namespace

bool operator==(const Scene& a, const Scene& b) {
    if (a.dim != b.dim || a.set_a_name != b.set_a_name) return false;
    if (!sets_equal(a.set_a, b.set_a)) return false;
    if (a.set_b.has_value() != b.set_b.has_value()) return false;
    if (a.set_b && !sets_equal(*a.set_b, *b.set_b)) return false;
    if (a.point_p.has_value() != b.point_p.has_value()) return false;
    if (a.point_p && *a.point_p != *b.point_p) return false;
    return a.tolerance_overrides == b.tolerance_overrides;
}

}  // namespace persep
