#include "pbc/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pbc {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
    throw InputError("field '" + path + "': " + what);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) field_error(path + key, "missing");
    return j.at(key);
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) field_error(path, "expected a string");
    return j.get<std::string>();
}

const json& as_array(const json& j, const std::string& path) {
    if (!j.is_array()) field_error(path, "expected an array");
    return j;
}

ObjId object_ref(const FinCategory& c, const json& j, const std::string& path) {
    auto name = as_string(j, path);
    auto x = c.find_object(name);
    if (!x) field_error(path, "unknown object '" + name + "'");
    return *x;
}

MorId morphism_ref(const FinCategory& c, const json& j, const std::string& path) {
    auto name = as_string(j, path);
    auto f = c.find_morphism(name);
    if (!f) field_error(path, "unknown morphism '" + name + "'");
    return *f;
}

WideSubcategory parse_class(const FinCategory& c, const json& j, const std::string& path) {
    WideSubcategory w = WideSubcategory::identities(c);
    const auto& arr = as_array(j, path);
    for (std::size_t k = 0; k < arr.size(); ++k) {
        w.member[morphism_ref(c, arr[k], path + "[" + std::to_string(k) + "]")] = true;
    }
    return w;
}

json class_json(const FinCategory& c, const WideSubcategory& w) {
    json arr = json::array();
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        if (w.contains(f) && !c.is_identity(f)) arr.push_back(c.morphism_name(f));
    }
    return arr;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) line += text[k] == '\n' ? 1 : 0;
    return line;
}

CatPtr parse_poset(const json& root, std::vector<std::pair<std::string, std::string>>& pairs) {
    const auto& objs = as_array(require(root, "objects", ""), "objects");
    std::vector<std::string> names;
    std::map<std::string, int> index;
    for (std::size_t k = 0; k < objs.size(); ++k) {
        names.push_back(as_string(objs[k], "objects[" + std::to_string(k) + "]"));
        if (!index.emplace(names.back(), static_cast<int>(k)).second) {
            field_error("objects[" + std::to_string(k) + "]", "duplicate object '" + names.back() + "'");
        }
    }
    const int n = static_cast<int>(names.size());
    std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
    for (int k = 0; k < n; ++k) le[k][k] = true;
    const auto& rel = as_array(root.at("poset"), "poset");
    for (std::size_t k = 0; k < rel.size(); ++k) {
        const std::string path = "poset[" + std::to_string(k) + "]";
        if (!rel[k].is_array() || rel[k].size() != 2) field_error(path, "expected a pair [a, b]");
        auto a = as_string(rel[k][0], path + "[0]");
        auto b = as_string(rel[k][1], path + "[1]");
        if (!index.count(a)) field_error(path + "[0]", "unknown object '" + a + "'");
        if (!index.count(b)) field_error(path + "[1]", "unknown object '" + b + "'");
        le[index[a]][index[b]] = true;
        pairs.emplace_back(a, b);
    }
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (le[i][k] && le[k][j]) le[i][j] = true;
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (le[i][j] && le[j][i]) {
                field_error("poset", "relation has a cycle through '" + names[i] + "' and '" + names[j] + "'");
            }
        }
    }
    return poset_category(names, [&](int a, int b) { return static_cast<bool>(le[a][b]); });
}

CatPtr parse_table(const json& root) {
    CategoryBuilder b;
    const auto& objs = as_array(require(root, "objects", ""), "objects");
    std::map<std::string, ObjId> obj_index;
    std::map<std::string, MorId> mor_index;  // every morphism id, identities included
    std::set<std::string> non_identity;
    for (std::size_t k = 0; k < objs.size(); ++k) {
        auto name = as_string(objs[k], "objects[" + std::to_string(k) + "]");
        if (obj_index.count(name)) field_error("objects[" + std::to_string(k) + "]", "duplicate object '" + name + "'");
        obj_index[name] = b.add_object(name);
        mor_index["id_" + name] = static_cast<MorId>(b.morphism_count()) - 1;
    }
    if (root.contains("morphisms")) {
        const auto& mors = as_array(root.at("morphisms"), "morphisms");
        for (std::size_t k = 0; k < mors.size(); ++k) {
            const std::string path = "morphisms[" + std::to_string(k) + "].";
            auto id = as_string(require(mors[k], "id", path), path + "id");
            auto src = as_string(require(mors[k], "src", path), path + "src");
            auto tgt = as_string(require(mors[k], "tgt", path), path + "tgt");
            if (!obj_index.count(src)) field_error(path + "src", "unknown object '" + src + "'");
            if (!obj_index.count(tgt)) field_error(path + "tgt", "unknown object '" + tgt + "'");
            if (mor_index.count(id)) field_error(path + "id", "duplicate morphism id '" + id + "'");
            mor_index[id] = b.add_morphism(id, obj_index[src], obj_index[tgt]);
            non_identity.insert(id);
        }
    }
    auto lookup = [&](const json& j, const std::string& path, bool identities_ok) -> MorId {
        auto id = as_string(j, path);
        auto it = mor_index.find(id);
        if (it == mor_index.end() || (!identities_ok && !non_identity.count(id))) {
            field_error(path, "unknown non-identity morphism '" + id + "'");
        }
        return it->second;
    };
    b.freeze();
    if (root.contains("composition")) {
        const auto& comp = as_array(root.at("composition"), "composition");
        for (std::size_t k = 0; k < comp.size(); ++k) {
            const std::string path = "composition[" + std::to_string(k) + "]";
            if (!comp[k].is_array() || comp[k].size() != 3) field_error(path, "expected a triple [g, f, g∘f]");
            MorId g = lookup(comp[k][0], path + "[0]", false);
            MorId f = lookup(comp[k][1], path + "[1]", false);
            MorId gf = lookup(comp[k][2], path + "[2]", true);
            if (b.target(f) != b.source(g)) field_error(path, "morphisms are not composable");
            if (b.source(gf) != b.source(f) || b.target(gf) != b.target(g)) {
                field_error(path + "[2]", "composite has the wrong endpoints");
            }
            b.set_compose(g, f, gf);
        }
    }
    auto c = b.build(true);
    for (MorId f = 0; f < static_cast<MorId>(c->morphism_count()); ++f) {
        if (c->is_identity(f)) continue;
        for (MorId g : c->out(c->target(f))) {
            if (!c->is_identity(g) && c->compose(g, f) == kNone) {
                field_error("composition", "missing composite of (" + c->morphism_name(g) + ", " +
                                               c->morphism_name(f) + ")");
            }
        }
    }
    auto report = validate_category(*c);
    if (!report.empty()) throw InputError("category validation failed: " + report.front().detail);
    return c;
}

FactorizationScheme parse_factorization(const FinCategory& c, const json& j) {
    FactorizationScheme s;
    s.entries.assign(c.morphism_count(), std::nullopt);
    const auto& entries = as_array(require(j, "entries", "factorization."), "factorization.entries");
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const std::string path = "factorization.entries[" + std::to_string(k) + "].";
        const auto& e = entries[k];
        MorId f = morphism_ref(c, require(e, "f", path), path + "f");
        FactorEntry fe;
        fe.mid = object_ref(c, require(e, "mid", path), path + "mid");
        fe.c = morphism_ref(c, require(e, "c", path), path + "c");
        fe.w = morphism_ref(c, require(e, "w", path), path + "w");
        fe.s = morphism_ref(c, require(e, "s", path), path + "s");
        s.entries[f] = fe;
    }
    if (j.contains("mu")) {
        const auto& mu = as_array(j.at("mu"), "factorization.mu");
        for (std::size_t k = 0; k < mu.size(); ++k) {
            const std::string path = "factorization.mu[" + std::to_string(k) + "].";
            const auto& e = mu[k];
            SquareKey key{morphism_ref(c, require(e, "from", path), path + "from"),
                          morphism_ref(c, require(e, "to", path), path + "to"),
                          morphism_ref(c, require(e, "top", path), path + "top"),
                          morphism_ref(c, require(e, "bottom", path), path + "bottom")};
            s.mu[key] = morphism_ref(c, require(e, "mid", path), path + "mid");
        }
    }
    return s;
}

BrownStructure parse_brown(const CatPtr& carrier, const WideSubcategory& weq, const json& j) {
    const auto& c = *carrier;
    const auto n = c.object_count();
    BrownStructure b;
    b.rel = {carrier, weq};
    b.cof = parse_class(c, require(j, "cof", "brown."), "brown.cof");
    b.initial = object_ref(c, require(j, "initial", "brown."), "brown.initial");
    b.coproducts.assign(n * n, {});
    const auto& cps = as_array(require(j, "coproducts", "brown."), "brown.coproducts");
    for (std::size_t k = 0; k < cps.size(); ++k) {
        const std::string path = "brown.coproducts[" + std::to_string(k) + "].";
        ObjId x = object_ref(c, require(cps[k], "left", path), path + "left");
        ObjId y = object_ref(c, require(cps[k], "right", path), path + "right");
        b.coproducts[x * n + y] = {object_ref(c, require(cps[k], "object", path), path + "object"),
                                   morphism_ref(c, require(cps[k], "in1", path), path + "in1"),
                                   morphism_ref(c, require(cps[k], "in2", path), path + "in2")};
    }
    b.cylinders.assign(n, {});
    const auto& cyl = as_array(require(j, "cylinders", "brown."), "brown.cylinders");
    for (std::size_t k = 0; k < cyl.size(); ++k) {
        const std::string path = "brown.cylinders[" + std::to_string(k) + "].";
        ObjId x = object_ref(c, require(cyl[k], "object", path), path + "object");
        b.cylinders[x] = {object_ref(c, require(cyl[k], "cylinder", path), path + "cylinder"),
                          morphism_ref(c, require(cyl[k], "i0", path), path + "i0"),
                          morphism_ref(c, require(cyl[k], "i1", path), path + "i1"),
                          morphism_ref(c, require(cyl[k], "proj", path), path + "proj")};
    }
    b.cylinder_morphisms = derive_cylinder_morphisms(c, b.cylinders);
    return b;
}

}  // namespace

SpecFile parse_spec_text(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError("parse error at line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
    }
    if (!root.is_object()) throw InputError("parse error at line 1: top level must be an object");
    SpecFile spec;
    if (root.contains("version")) {
        if (!root.at("version").is_number_integer()) field_error("version", "expected an integer");
        spec.version = root.at("version").get<int>();
        if (spec.version != 1) field_error("version", "unsupported version " + std::to_string(spec.version));
    }
    if (root.contains("name")) spec.name = as_string(root.at("name"), "name");
    const bool has_poset = root.contains("poset");
    if (has_poset && (root.contains("composition") || root.contains("morphisms"))) {
        field_error("poset", "the poset shortcut cannot be mixed with explicit morphisms or composition");
    }
    if (has_poset) {
        spec.poset.emplace();
        spec.carrier = parse_poset(root, *spec.poset);
    } else {
        spec.carrier = parse_table(root);
    }
    const auto& c = *spec.carrier;
    if (root.contains("weq")) spec.weq = parse_class(c, root.at("weq"), "weq");
    if (root.contains("tcof")) spec.tcof = parse_class(c, root.at("tcof"), "tcof");
    if (root.contains("factorization")) spec.factorization = parse_factorization(c, root.at("factorization"));
    if (root.contains("brown")) {
        if (spec.tcof || spec.factorization) {
            field_error("brown", "a Brown block determines tcof and the factorization; drop those fields");
        }
        spec.brown = parse_brown(spec.carrier, spec.weq ? *spec.weq : WideSubcategory::all(c), root.at("brown"));
    }
    for (auto it = root.begin(); it != root.end(); ++it) {
        static const std::set<std::string> known = {"version", "name", "objects", "morphisms", "composition",
                                                    "poset", "weq", "tcof", "factorization", "brown"};
        if (!known.count(it.key())) field_error(it.key(), "unknown field");
    }
    auto rel = relative_of(spec);
    auto report = check_relative_category(rel);
    if (!report.empty()) throw InputError("validation failed: [" + report.front().law + "] " + report.front().detail);
    if (spec.tcof) {
        report = check_wide_subcategory(c, *spec.tcof, "tcof");
        if (!report.empty()) throw InputError("validation failed: [" + report.front().law + "] " + report.front().detail);
    }
    return spec;
}

SpecFile parse_spec(const std::string& path) { return parse_spec_text(read_file(path)); }

std::string serialize_spec(const SpecFile& spec) {
    const auto& c = *spec.carrier;
    json root;
    root["version"] = spec.version;
    if (!spec.name.empty()) root["name"] = spec.name;
    json objs = json::array();
    for (ObjId x = 0; x < static_cast<ObjId>(c.object_count()); ++x) objs.push_back(c.object_name(x));
    root["objects"] = objs;
    if (spec.poset) {
        json rel = json::array();
        for (const auto& [a, b] : *spec.poset) rel.push_back(json::array({a, b}));
        root["poset"] = rel;
    } else {
        json mors = json::array();
        json comp = json::array();
        for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
            if (c.is_identity(f)) continue;
            json m;
            m["id"] = c.morphism_name(f);
            m["src"] = c.object_name(c.source(f));
            m["tgt"] = c.object_name(c.target(f));
            mors.push_back(m);
            for (MorId g : c.out(c.target(f))) {
                if (c.is_identity(g)) continue;
                comp.push_back(json::array({c.morphism_name(g), c.morphism_name(f), c.morphism_name(c.compose(g, f))}));
            }
        }
        root["morphisms"] = mors;
        root["composition"] = comp;
    }
    if (spec.weq) root["weq"] = class_json(c, *spec.weq);
    if (spec.tcof) root["tcof"] = class_json(c, *spec.tcof);
    if (spec.factorization) {
        // Identities first in object order, then the rest in id order; parsing preserves this.
        std::vector<int> rank(c.morphism_count());
        std::vector<MorId> order;
        for (ObjId x = 0; x < static_cast<ObjId>(c.object_count()); ++x) order.push_back(c.identity(x));
        for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
            if (!c.is_identity(f)) order.push_back(f);
        }
        for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = static_cast<int>(k);
        json fj;
        json entries = json::array();
        for (MorId f : order) {
            if (f >= static_cast<MorId>(spec.factorization->entries.size())) continue;
            const auto& e = spec.factorization->entries[f];
            if (!e) continue;
            json ej;
            ej["f"] = c.morphism_name(f);
            ej["mid"] = c.object_name(e->mid);
            ej["c"] = c.morphism_name(e->c);
            ej["w"] = c.morphism_name(e->w);
            ej["s"] = c.morphism_name(e->s);
            entries.push_back(ej);
        }
        fj["entries"] = entries;
        json mu = json::array();
        std::vector<std::pair<std::array<int, 4>, std::pair<SquareKey, MorId>>> squares;
        for (const auto& [key, mid] : spec.factorization->mu) {
            squares.push_back({{rank[key[0]], rank[key[1]], rank[key[2]], rank[key[3]]}, {key, mid}});
        }
        std::sort(squares.begin(), squares.end());
        for (const auto& [r, km] : squares) {
            const auto& [key, mid] = km;
            json mj;
            mj["from"] = c.morphism_name(key[0]);
            mj["to"] = c.morphism_name(key[1]);
            mj["top"] = c.morphism_name(key[2]);
            mj["bottom"] = c.morphism_name(key[3]);
            mj["mid"] = c.morphism_name(mid);
            mu.push_back(mj);
        }
        fj["mu"] = mu;
        root["factorization"] = fj;
    }
    if (spec.brown) {
        const auto& b = *spec.brown;
        const auto n = c.object_count();
        json bj;
        bj["cof"] = class_json(c, b.cof);
        bj["initial"] = c.object_name(b.initial);
        json cps = json::array();
        for (ObjId x = 0; x < static_cast<ObjId>(n); ++x) {
            for (ObjId y = 0; y < static_cast<ObjId>(n); ++y) {
                const auto& cp = b.coproducts[x * n + y];
                if (cp.object == kNone) continue;
                json cj;
                cj["left"] = c.object_name(x);
                cj["right"] = c.object_name(y);
                cj["object"] = c.object_name(cp.object);
                cj["in1"] = c.morphism_name(cp.in1);
                cj["in2"] = c.morphism_name(cp.in2);
                cps.push_back(cj);
            }
        }
        bj["coproducts"] = cps;
        json cyl = json::array();
        for (ObjId x = 0; x < static_cast<ObjId>(n); ++x) {
            const auto& cy = b.cylinders[x];
            if (cy.object == kNone) continue;
            json cj;
            cj["object"] = c.object_name(x);
            cj["cylinder"] = c.object_name(cy.object);
            cj["i0"] = c.morphism_name(cy.i0);
            cj["i1"] = c.morphism_name(cy.i1);
            cj["proj"] = c.morphism_name(cy.proj);
            cyl.push_back(cj);
        }
        bj["cylinders"] = cyl;
        root["brown"] = bj;
    }
    return root.dump(2) + "\n";
}

RelativeCategory relative_of(const SpecFile& spec) {
    return {spec.carrier, spec.weq ? *spec.weq : WideSubcategory::all(*spec.carrier)};
}

PBCStructure pbc_of(const SpecFile& spec) {
    if (spec.brown) return brown_to_pbc(*spec.brown);
    auto rel = relative_of(spec);
    WideSubcategory tcof = spec.tcof ? *spec.tcof : rel.weq;
    if (spec.factorization) {
        PBCStructure p{rel, tcof, *spec.factorization};
        return p;
    }
    return make_pbc(rel.carrier, rel.weq, tcof);
}

SpecFile spec_from_pbc(const PBCStructure& pbc, std::string name, bool with_factorization) {
    SpecFile s;
    s.name = std::move(name);
    s.carrier = pbc.rel.carrier;
    s.weq = pbc.weq();
    s.tcof = pbc.tcof;
    if (with_factorization) s.factorization = pbc.fact;
    return s;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << contents;
    if (!out) throw std::runtime_error("write failed for " + path);
}

// ----------------------------------------------------------------------------
// DOT

namespace {

std::string quote(const std::string& s) {
    std::string r = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') r += '\\';
        r += ch;
    }
    return r + "\"";
}

bool decomposable(const FinCategory& c, MorId f) {
    for (MorId a : c.out(c.source(f))) {
        if (c.is_identity(a)) continue;
        for (MorId b : c.hom(c.target(a), c.target(f))) {
            if (!c.is_identity(b) && c.compose(b, a) == f) return true;
        }
    }
    return false;
}

}  // namespace

std::string dot_category(const FinCategory& c, const WideSubcategory* dashed, const std::string& graph_name) {
    std::string out = "digraph " + quote(graph_name) + " {\n";
    for (ObjId x = 0; x < static_cast<ObjId>(c.object_count()); ++x) {
        out += "  n" + std::to_string(x) + " [label=" + quote(c.object_name(x)) + "];\n";
    }
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        if (c.is_identity(f) || decomposable(c, f)) continue;
        out += "  n" + std::to_string(c.source(f)) + " -> n" + std::to_string(c.target(f)) +
               " [label=" + quote(c.morphism_name(f));
        if (dashed && dashed->contains(f)) out += ", style=dashed";
        out += "];\n";
    }
    return out + "}\n";
}

std::string dot_cn_object(const DiagramCategory& level, int n, ObjId x) {
    const auto& t = shape_T(n);
    const auto& s = *t.category;
    const auto& m = *level.target;
    const auto& d = level.diagrams.at(x);
    std::string out = "digraph " + quote(level.category->object_name(x)) + " {\n";
    for (ObjId v = 0; v < static_cast<ObjId>(s.object_count()); ++v) {
        auto [p, q] = t.coords[v];
        out += "  m" + std::to_string(p) + std::to_string(q) + " [label=" +
               quote(m.object_name(m.source(d[s.identity(v)]))) + ", pos=\"" + std::to_string(p + q) + "," +
               std::to_string(q - p) + "!\"];\n";
    }
    auto edge = [&](ObjId a, ObjId b, bool backward) {
        auto [p, q] = t.coords[a];
        auto [p2, q2] = t.coords[b];
        out += "  m" + std::to_string(p) + std::to_string(q) + " -> m" + std::to_string(p2) + std::to_string(q2) +
               " [label=" + quote(m.morphism_name(d[t.arrow(a, b)]));
        if (backward) out += ", style=dashed";
        out += "];\n";
    };
    for (int p = 0; p <= n; ++p) {
        for (int q = p; q < n; ++q) edge(t.object_at(p, q), t.object_at(p, q + 1), false);
    }
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q <= n; ++q) edge(t.object_at(p + 1, q), t.object_at(p, q), true);
    }
    return out + "}\n";
}

}  // namespace pbc
