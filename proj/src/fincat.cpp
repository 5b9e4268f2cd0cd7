#include "pbc/fincat.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace pbc {

std::uint64_t default_budget() {
    static const std::uint64_t value = [] {
        if (const char* env = std::getenv("PBC_BUDGET")) {
            char* end = nullptr;
            auto parsed = std::strtoull(env, &end, 10);
            if (end != env && parsed > 0) return static_cast<std::uint64_t>(parsed);
        }
        return static_cast<std::uint64_t>(1'000'000);
    }();
    return value;
}

bool report_mentions(const Report& report, std::string_view law) {
    return std::any_of(report.begin(), report.end(), [&](const Issue& i) { return i.law == law; });
}

std::string pack_key(const std::vector<int>& v) {
    std::string key(v.size() * sizeof(int), '\0');
    if (!v.empty()) std::memcpy(key.data(), v.data(), key.size());
    return key;
}

namespace {

std::uint64_t pair_key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

}  // namespace

// ----------------------------------------------------------------------------
// FinCategory

MorId FinCategory::compose(MorId g, MorId f) const {
    if (tgt_[f] != src_[g]) return kNone;
    return table_[table_offset_[f] + position_in_out_[g]];
}

std::span<const MorId> FinCategory::out(ObjId x) const {
    return {out_.data() + out_offset_[x], out_.data() + out_offset_[x + 1]};
}

std::span<const MorId> FinCategory::hom(ObjId a, ObjId b) const {
    auto row = out(a);
    auto lo = std::lower_bound(row.begin(), row.end(), b,
                               [&](MorId f, ObjId t) { return tgt_[f] < t; });
    auto hi = std::upper_bound(lo, row.end(), b,
                               [&](ObjId t, MorId f) { return t < tgt_[f]; });
    return {lo, hi};
}

std::optional<ObjId> FinCategory::find_object(std::string_view name) const {
    for (std::size_t i = 0; i < object_names_.size(); ++i) {
        if (object_names_[i] == name) return static_cast<ObjId>(i);
    }
    return std::nullopt;
}

std::optional<MorId> FinCategory::find_morphism(std::string_view name) const {
    for (std::size_t i = 0; i < morphism_names_.size(); ++i) {
        if (morphism_names_[i] == name) return static_cast<MorId>(i);
    }
    return std::nullopt;
}

bool FinCategory::operator==(const FinCategory& other) const {
    return object_names_ == other.object_names_ && morphism_names_ == other.morphism_names_ &&
           src_ == other.src_ && tgt_ == other.tgt_ && identity_ == other.identity_ &&
           table_ == other.table_;
}

// ----------------------------------------------------------------------------
// CategoryBuilder

ObjId CategoryBuilder::add_object(std::string name) {
    ObjId x = add_bare_object(name);
    MorId id = add_morphism("id_" + name, x, x);
    set_identity(x, id);
    return x;
}

ObjId CategoryBuilder::add_bare_object(std::string name) {
    if (frozen_) throw ConsistencyError("add_object after freeze");
    cat_->object_names_.push_back(std::move(name));
    cat_->identity_.push_back(kNone);
    return static_cast<ObjId>(cat_->object_names_.size() - 1);
}

MorId CategoryBuilder::add_morphism(std::string name, ObjId src, ObjId tgt) {
    if (frozen_) throw ConsistencyError("add_morphism after freeze");
    auto n = static_cast<int>(cat_->object_names_.size());
    if (src < 0 || src >= n || tgt < 0 || tgt >= n) {
        throw InputError("morphism '" + name + "' has an endpoint outside the object set");
    }
    cat_->morphism_names_.push_back(std::move(name));
    cat_->src_.push_back(src);
    cat_->tgt_.push_back(tgt);
    return static_cast<MorId>(cat_->src_.size() - 1);
}

void CategoryBuilder::set_identity(ObjId x, MorId f) { cat_->identity_[x] = f; }

void CategoryBuilder::freeze() {
    if (frozen_) return;
    frozen_ = true;
    auto& c = *cat_;
    const std::size_t n = c.object_names_.size();
    const std::size_t m = c.src_.size();
    std::vector<std::vector<MorId>> rows(n);
    for (std::size_t f = 0; f < m; ++f) rows[c.src_[f]].push_back(static_cast<MorId>(f));
    c.out_offset_.assign(n + 1, 0);
    c.out_.clear();
    c.out_.reserve(m);
    c.position_in_out_.assign(m, 0);
    for (std::size_t x = 0; x < n; ++x) {
        auto& row = rows[x];
        std::stable_sort(row.begin(), row.end(),
                         [&](MorId a, MorId b) { return c.tgt_[a] < c.tgt_[b]; });
        c.out_offset_[x] = c.out_.size();
        for (std::size_t k = 0; k < row.size(); ++k) {
            c.position_in_out_[row[k]] = k;
            c.out_.push_back(row[k]);
        }
    }
    c.out_offset_[n] = c.out_.size();
    c.table_offset_.assign(m, 0);
    std::size_t total = 0;
    for (std::size_t f = 0; f < m; ++f) {
        c.table_offset_[f] = total;
        auto t = c.tgt_[f];
        total += c.out_offset_[t + 1] - c.out_offset_[t];
    }
    c.table_.assign(total, kNone);
}

std::span<const MorId> CategoryBuilder::hom(ObjId a, ObjId b) {
    freeze();
    return cat_->hom(a, b);
}

std::span<const MorId> CategoryBuilder::out(ObjId x) {
    freeze();
    return cat_->out(x);
}

void CategoryBuilder::set_compose(MorId g, MorId f, MorId gf) {
    freeze();
    auto& c = *cat_;
    if (c.tgt_[f] != c.src_[g]) {
        throw InputError("composition entry for non-composable pair (" + c.morphism_names_[g] +
                         ", " + c.morphism_names_[f] + ")");
    }
    c.table_[c.table_offset_[f] + c.position_in_out_[g]] = gf;
}

void CategoryBuilder::compose_all(const std::function<MorId(MorId, MorId)>& fn) {
    freeze();
    auto& c = *cat_;
    for (std::size_t f = 0; f < c.src_.size(); ++f) {
        auto row = c.out(c.tgt_[f]);
        for (std::size_t k = 0; k < row.size(); ++k) {
            c.table_[c.table_offset_[f] + k] = fn(row[k], static_cast<MorId>(f));
        }
    }
}

CatPtr CategoryBuilder::build(bool fill_identity_laws) {
    freeze();
    auto& c = *cat_;
    if (fill_identity_laws) {
        for (std::size_t f = 0; f < c.src_.size(); ++f) {
            auto fid = static_cast<MorId>(f);
            MorId left = c.identity_[c.tgt_[f]];
            MorId right = c.identity_[c.src_[f]];
            if (left != kNone) {
                auto& slot = c.table_[c.table_offset_[f] + c.position_in_out_[left]];
                if (slot == kNone) slot = fid;
            }
            if (right != kNone) {
                auto& slot = c.table_[c.table_offset_[right] + c.position_in_out_[fid]];
                if (slot == kNone) slot = fid;
            }
        }
    }
    CatPtr result = cat_;
    cat_ = std::make_shared<FinCategory>();
    frozen_ = false;
    return result;
}

// ----------------------------------------------------------------------------
// Named categories

CatPtr terminal_category() { return discrete_category(1); }

CatPtr empty_category() {
    CategoryBuilder b;
    return b.build();
}

CatPtr discrete_category(int n) {
    CategoryBuilder b;
    for (int i = 0; i < n; ++i) b.add_object(std::to_string(i));
    return b.build();
}

CatPtr poset_category(const std::vector<std::string>& names,
                      const std::function<bool(int, int)>& less_eq) {
    CategoryBuilder b;
    const int n = static_cast<int>(names.size());
    for (int i = 0; i < n; ++i) b.add_bare_object(names[i]);
    std::vector<MorId> arrow(static_cast<std::size_t>(n) * n, kNone);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!less_eq(i, j)) continue;
            std::string name = i == j ? "id_" + names[i] : names[i] + "<" + names[j];
            arrow[i * n + j] = b.add_morphism(name, i, j);
            if (i == j) b.set_identity(i, arrow[i * n + j]);
        }
    }
    b.freeze();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (arrow[i * n + j] == kNone) continue;
            for (int k = 0; k < n; ++k) {
                if (arrow[j * n + k] == kNone) continue;
                if (arrow[i * n + k] == kNone) {
                    throw InputError("relation is not transitive at " + names[i] + "<" + names[j] +
                                     "<" + names[k]);
                }
                b.set_compose(arrow[j * n + k], arrow[i * n + j], arrow[i * n + k]);
            }
        }
    }
    return b.build();
}

CatPtr ordinal_category(int n) {
    std::vector<std::string> names;
    for (int i = 0; i <= n; ++i) names.push_back(std::to_string(i));
    return poset_category(names, [](int a, int b) { return a <= b; });
}

// ----------------------------------------------------------------------------
// Validation

Report validate_category(const FinCategory& c) {
    Report report;
    const auto n = static_cast<ObjId>(c.object_count());
    const auto m = static_cast<MorId>(c.morphism_count());
    bool identities_ok = true;
    for (ObjId x = 0; x < n; ++x) {
        MorId id = c.identity(x);
        if (id == kNone || id >= m || c.source(id) != x || c.target(id) != x) {
            report.push_back({"identity", "object " + c.object_name(x) + " has no valid identity"});
            identities_ok = false;
        }
    }
    for (MorId f = 0; f < m; ++f) {
        for (MorId g : c.out(c.target(f))) {
            MorId gf = c.compose(g, f);
            if (gf == kNone || gf < 0 || gf >= m) {
                report.push_back({"composability", "compose(" + c.morphism_name(g) + ", " +
                                                       c.morphism_name(f) + ") is undefined"});
            } else if (c.source(gf) != c.source(f) || c.target(gf) != c.target(g)) {
                report.push_back({"composability", "compose(" + c.morphism_name(g) + ", " +
                                                       c.morphism_name(f) +
                                                       ") has the wrong endpoints"});
            }
        }
    }
    if (!report.empty()) return report;
    if (identities_ok) {
        for (MorId f = 0; f < m; ++f) {
            if (c.compose(c.identity(c.target(f)), f) != f) {
                report.push_back({"identity", "compose(id, " + c.morphism_name(f) + ") != " +
                                                  c.morphism_name(f)});
            }
            if (c.compose(f, c.identity(c.source(f))) != f) {
                report.push_back({"identity", "compose(" + c.morphism_name(f) + ", id) != " +
                                                  c.morphism_name(f)});
            }
        }
    }
    for (MorId f = 0; f < m; ++f) {
        for (MorId g : c.out(c.target(f))) {
            MorId gf = c.compose(g, f);
            for (MorId h : c.out(c.target(g))) {
                if (c.compose(h, gf) != c.compose(c.compose(h, g), f)) {
                    report.push_back({"associativity", "(" + c.morphism_name(h) + ", " +
                                                           c.morphism_name(g) + ", " +
                                                           c.morphism_name(f) + ")"});
                }
            }
        }
    }
    return report;
}

CatPtr opposite(const FinCategory& c) {
    CategoryBuilder b;
    for (ObjId x = 0; x < static_cast<ObjId>(c.object_count()); ++x) b.add_bare_object(c.object_name(x));
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        b.add_morphism(c.morphism_name(f), c.target(f), c.source(f));
    }
    for (ObjId x = 0; x < static_cast<ObjId>(c.object_count()); ++x) b.set_identity(x, c.identity(x));
    b.compose_all([&](MorId g, MorId f) { return c.compose(f, g); });
    return b.build(false);
}

CatPtr combine(const FinCategory& c, const FinCategory& d, CombineMode mode) {
    CategoryBuilder b;
    const auto cn = static_cast<int>(c.object_count());
    const auto dn = static_cast<int>(d.object_count());
    const auto cm = static_cast<int>(c.morphism_count());
    const auto dm = static_cast<int>(d.morphism_count());
    if (mode == CombineMode::product) {
        for (int a = 0; a < cn; ++a) {
            for (int x = 0; x < dn; ++x) {
                b.add_bare_object("(" + c.object_name(a) + "," + d.object_name(x) + ")");
            }
        }
        for (int f = 0; f < cm; ++f) {
            for (int g = 0; g < dm; ++g) {
                b.add_morphism("(" + c.morphism_name(f) + "," + d.morphism_name(g) + ")",
                               product_index(c.source(f), d.source(g), d.object_count()),
                               product_index(c.target(f), d.target(g), d.object_count()));
            }
        }
        for (int a = 0; a < cn; ++a) {
            for (int x = 0; x < dn; ++x) {
                b.set_identity(product_index(a, x, d.object_count()),
                               product_index(c.identity(a), d.identity(x), d.morphism_count()));
            }
        }
        b.compose_all([&](MorId g, MorId f) {
            MorId first = c.compose(g / dm, f / dm);
            MorId second = d.compose(g % dm, f % dm);
            if (first == kNone || second == kNone) return kNone;
            return product_index(first, second, d.morphism_count());
        });
        return b.build(false);
    }
    for (int a = 0; a < cn; ++a) b.add_bare_object("L:" + c.object_name(a));
    for (int x = 0; x < dn; ++x) b.add_bare_object("R:" + d.object_name(x));
    for (int f = 0; f < cm; ++f) b.add_morphism("L:" + c.morphism_name(f), c.source(f), c.target(f));
    for (int g = 0; g < dm; ++g) {
        b.add_morphism("R:" + d.morphism_name(g), cn + d.source(g), cn + d.target(g));
    }
    for (int a = 0; a < cn; ++a) b.set_identity(a, c.identity(a));
    for (int x = 0; x < dn; ++x) b.set_identity(cn + x, cm + d.identity(x));
    b.compose_all([&](MorId g, MorId f) {
        if (f < cm) return c.compose(g, f);
        MorId r = d.compose(g - cm, f - cm);
        return r == kNone ? kNone : r + cm;
    });
    return b.build(false);
}

// ----------------------------------------------------------------------------
// Functors

bool Functor::operator==(const Functor& other) const {
    if (on_objects != other.on_objects || on_morphisms != other.on_morphisms) return false;
    auto same = [](const CatPtr& a, const CatPtr& b) { return a == b || (a && b && *a == *b); };
    return same(source, other.source) && same(target, other.target);
}

Functor identity_functor(const CatPtr& c) {
    Functor f{c, c, {}, {}};
    f.on_objects.resize(c->object_count());
    f.on_morphisms.resize(c->morphism_count());
    std::iota(f.on_objects.begin(), f.on_objects.end(), 0);
    std::iota(f.on_morphisms.begin(), f.on_morphisms.end(), 0);
    return f;
}

Functor compose(const Functor& g, const Functor& f) {
    Functor r{f.source, g.target, {}, {}};
    r.on_objects.reserve(f.on_objects.size());
    for (ObjId x : f.on_objects) r.on_objects.push_back(g.obj(x));
    r.on_morphisms.reserve(f.on_morphisms.size());
    for (MorId m : f.on_morphisms) r.on_morphisms.push_back(g.mor(m));
    return r;
}

Functor functor_from_morphisms(CatPtr source, CatPtr target, std::vector<MorId> on_morphisms) {
    Functor f{std::move(source), std::move(target), {}, std::move(on_morphisms)};
    f.on_objects.resize(f.source->object_count());
    for (ObjId x = 0; x < static_cast<ObjId>(f.source->object_count()); ++x) {
        f.on_objects[x] = f.target->source(f.on_morphisms[f.source->identity(x)]);
    }
    return f;
}

Report validate_functor(const Functor& fn) {
    Report report;
    const auto& a = *fn.source;
    const auto& b = *fn.target;
    if (fn.on_objects.size() != a.object_count() || fn.on_morphisms.size() != a.morphism_count()) {
        report.push_back({"functor-shape", "object or morphism map has the wrong size"});
        return report;
    }
    for (MorId f = 0; f < static_cast<MorId>(a.morphism_count()); ++f) {
        MorId img = fn.mor(f);
        if (img < 0 || img >= static_cast<MorId>(b.morphism_count()) ||
            b.source(img) != fn.obj(a.source(f)) || b.target(img) != fn.obj(a.target(f))) {
            report.push_back({"functor-endpoints", "image of " + a.morphism_name(f) +
                                                       " has the wrong endpoints"});
        }
    }
    if (!report.empty()) return report;
    for (ObjId x = 0; x < static_cast<ObjId>(a.object_count()); ++x) {
        if (fn.mor(a.identity(x)) != b.identity(fn.obj(x))) {
            report.push_back({"functor-identity", "identity of " + a.object_name(x) + " not preserved"});
        }
    }
    for (MorId f = 0; f < static_cast<MorId>(a.morphism_count()); ++f) {
        for (MorId g : a.out(a.target(f))) {
            if (fn.mor(a.compose(g, f)) != b.compose(fn.mor(g), fn.mor(f))) {
                report.push_back({"functor-composition", "(" + a.morphism_name(g) + ", " +
                                                             a.morphism_name(f) + ")"});
            }
        }
    }
    return report;
}

bool is_strict_isomorphism(const Functor& f) {
    if (f.source->object_count() != f.target->object_count() ||
        f.source->morphism_count() != f.target->morphism_count()) {
        return false;
    }
    std::vector<bool> seen_obj(f.target->object_count()), seen_mor(f.target->morphism_count());
    for (ObjId x : f.on_objects) {
        if (seen_obj[x]) return false;
        seen_obj[x] = true;
    }
    for (MorId m : f.on_morphisms) {
        if (seen_mor[m]) return false;
        seen_mor[m] = true;
    }
    return true;
}

Functor inverse_functor(const Functor& f) {
    Functor r{f.target, f.source, std::vector<ObjId>(f.on_objects.size()),
              std::vector<MorId>(f.on_morphisms.size())};
    for (std::size_t x = 0; x < f.on_objects.size(); ++x) r.on_objects[f.on_objects[x]] = static_cast<ObjId>(x);
    for (std::size_t m = 0; m < f.on_morphisms.size(); ++m) r.on_morphisms[f.on_morphisms[m]] = static_cast<MorId>(m);
    return r;
}

NatTransformation identity_transformation(const Functor& f) {
    NatTransformation t{f, f, {}};
    for (ObjId x : f.on_objects) t.components.push_back(f.target->identity(x));
    return t;
}

Report validate_nat_transformation(const NatTransformation& t) {
    Report report;
    const auto& a = *t.from.source;
    const auto& b = *t.from.target;
    if (t.components.size() != a.object_count()) {
        report.push_back({"transformation-shape", "wrong number of components"});
        return report;
    }
    for (ObjId x = 0; x < static_cast<ObjId>(a.object_count()); ++x) {
        MorId c = t.components[x];
        if (c < 0 || c >= static_cast<MorId>(b.morphism_count()) || b.source(c) != t.from.obj(x) ||
            b.target(c) != t.to.obj(x)) {
            report.push_back({"transformation-endpoints", "component at " + a.object_name(x)});
        }
    }
    if (!report.empty()) return report;
    for (MorId h = 0; h < static_cast<MorId>(a.morphism_count()); ++h) {
        ObjId x = a.source(h);
        ObjId y = a.target(h);
        if (b.compose(t.to.mor(h), t.components[x]) != b.compose(t.components[y], t.from.mor(h))) {
            report.push_back({"naturality", "square at " + a.morphism_name(h)});
        }
    }
    return report;
}

NatTransformation vertical_compose(const NatTransformation& beta, const NatTransformation& alpha) {
    NatTransformation r{alpha.from, beta.to, {}};
    for (std::size_t x = 0; x < alpha.components.size(); ++x) {
        r.components.push_back(alpha.from.target->compose(beta.components[x], alpha.components[x]));
    }
    return r;
}

NatTransformation whisker_left(const Functor& h, const NatTransformation& t) {
    NatTransformation r{compose(h, t.from), compose(h, t.to), {}};
    for (MorId c : t.components) r.components.push_back(h.mor(c));
    return r;
}

NatTransformation whisker_right(const NatTransformation& t, const Functor& h) {
    NatTransformation r{compose(t.from, h), compose(t.to, h), {}};
    for (ObjId x : h.on_objects) r.components.push_back(t.components[x]);
    return r;
}

bool verify_adjunction(const Adjunction& adj) {
    const auto& l = adj.left;
    const auto& r = adj.right;
    const auto na = l.source->object_count();
    const auto nb = l.target->object_count();
    if (r.source->object_count() != nb || r.target->object_count() != na ||
        adj.unit.components.size() != na || adj.counit.components.size() != nb) {
        throw InputError("adjunction constituents are not parallel-compatible");
    }
    Functor rl = compose(r, l);
    Functor lr = compose(l, r);
    if (adj.unit.from.on_morphisms != identity_functor(l.source).on_morphisms ||
        adj.unit.to.on_morphisms != rl.on_morphisms ||
        adj.counit.from.on_morphisms != lr.on_morphisms ||
        adj.counit.to.on_morphisms != identity_functor(l.target).on_morphisms) {
        throw InputError("unit or counit has the wrong source or target functor");
    }
    if (!validate_nat_transformation(adj.unit).empty() ||
        !validate_nat_transformation(adj.counit).empty()) {
        return false;
    }
    const auto& a = *l.source;
    const auto& b = *l.target;
    for (ObjId x = 0; x < static_cast<ObjId>(na); ++x) {
        // counit_{L x} . L(unit_x) = id_{L x}
        MorId tri = b.compose(adj.counit.components[l.obj(x)], l.mor(adj.unit.components[x]));
        if (tri != b.identity(l.obj(x))) return false;
    }
    for (ObjId y = 0; y < static_cast<ObjId>(nb); ++y) {
        // R(counit_y) . unit_{R y} = id_{R y}
        MorId tri = a.compose(r.mor(adj.counit.components[y]), adj.unit.components[r.obj(y)]);
        if (tri != a.identity(r.obj(y))) return false;
    }
    return true;
}

// ----------------------------------------------------------------------------
// Enumeration

namespace {

/// Shape morphisms grouped by the larger endpoint index, for incremental checks.
std::vector<std::vector<MorId>> morphisms_by_last_object(const FinCategory& a) {
    std::vector<std::vector<MorId>> by_last(a.object_count());
    for (MorId h = 0; h < static_cast<MorId>(a.morphism_count()); ++h) {
        by_last[std::max(a.source(h), a.target(h))].push_back(h);
    }
    return by_last;
}

/// Raw natural-transformation search between two diagrams given by object and
/// morphism maps on a shape.
class TransformationSearch {
public:
    TransformationSearch(const FinCategory& shape, const FinCategory& target,
                         const std::vector<bool>* restriction)
        : shape_(shape), target_(target), restriction_(restriction),
          by_last_(morphisms_by_last_object(shape)) {}

    template <typename Visit>
    void run(const std::vector<ObjId>& f_obj, const std::vector<MorId>& f_mor,
             const std::vector<ObjId>& g_obj, const std::vector<MorId>& g_mor, Budget* budget,
             Visit&& visit) {
        const auto n = shape_.object_count();
        candidates_.assign(n, {});
        for (std::size_t x = 0; x < n; ++x) {
            for (MorId c : target_.hom(f_obj[x], g_obj[x])) {
                if (!restriction_ || (*restriction_)[c]) candidates_[x].push_back(c);
            }
            if (candidates_[x].empty()) return;
        }
        components_.assign(n, kNone);
        descend(0, f_mor, g_mor, budget, visit);
    }

private:
    template <typename Visit>
    bool descend(std::size_t x, const std::vector<MorId>& f_mor, const std::vector<MorId>& g_mor,
                 Budget* budget, Visit& visit) {
        if (x == shape_.object_count()) return visit(components_);
        for (MorId c : candidates_[x]) {
            if (budget) budget->charge();
            components_[x] = c;
            bool ok = true;
            for (MorId h : by_last_[x]) {
                ObjId s = shape_.source(h);
                ObjId t = shape_.target(h);
                if (target_.compose(g_mor[h], components_[s]) !=
                    target_.compose(components_[t], f_mor[h])) {
                    ok = false;
                    break;
                }
            }
            if (ok && !descend(x + 1, f_mor, g_mor, budget, visit)) return false;
        }
        components_[x] = kNone;
        return true;
    }

    const FinCategory& shape_;
    const FinCategory& target_;
    const std::vector<bool>* restriction_;
    std::vector<std::vector<MorId>> by_last_;
    std::vector<std::vector<MorId>> candidates_;
    std::vector<MorId> components_;
};

}  // namespace

std::vector<NatTransformation> enumerate_nat_trans(const Functor& f, const Functor& g,
                                                   const std::vector<bool>* restriction,
                                                   Budget* budget) {
    if (f.on_objects.size() != g.on_objects.size() ||
        f.target->morphism_count() != g.target->morphism_count()) {
        throw InputError("enumerate_nat_trans: functors are not parallel");
    }
    std::vector<NatTransformation> result;
    TransformationSearch search(*f.source, *f.target, restriction);
    search.run(f.on_objects, f.on_morphisms, g.on_objects, g.on_morphisms, budget,
               [&](const std::vector<MorId>& comps) {
                   result.push_back({f, g, comps});
                   return true;
               });
    return result;
}

namespace {

/// Backtracking over morphism assignments once objects are fixed. Handles the
/// composition constraints of a functor; optional injectivity for isomorphism search.
class MorphismAssignment {
public:
    MorphismAssignment(const FinCategory& a, const FinCategory& b) : a_(a), b_(b) {
        const auto m = static_cast<MorId>(a.morphism_count());
        for (MorId f = 0; f < m; ++f) {
            if (!a.is_identity(f)) order_.push_back(f);
        }
        rank_.assign(m, -1);
        for (std::size_t k = 0; k < order_.size(); ++k) rank_[order_[k]] = static_cast<int>(k);
        triples_by_rank_.assign(order_.size(), {});
        for (MorId f : order_) {
            for (MorId g : a.out(a.target(f))) {
                if (a.is_identity(g)) continue;
                MorId h = a.compose(g, f);
                int last = std::max({rank_[f], rank_[g], rank_[h]});
                if (last < 0) continue;
                triples_by_rank_[last].push_back({g, f, h});
            }
        }
    }

    template <typename Allowed, typename Visit>
    bool run(const std::vector<ObjId>& objects, Allowed&& allowed, bool injective, Budget& budget,
             Visit&& visit) {
        const auto m = a_.morphism_count();
        image_.assign(m, kNone);
        for (ObjId x = 0; x < static_cast<ObjId>(a_.object_count()); ++x) {
            MorId id = b_.identity(objects[x]);
            if (!allowed(a_.identity(x), id)) return true;
            image_[a_.identity(x)] = id;
        }
        used_.assign(b_.morphism_count(), false);
        if (injective) {
            for (ObjId x = 0; x < static_cast<ObjId>(a_.object_count()); ++x) used_[image_[a_.identity(x)]] = true;
        }
        return descend(0, objects, allowed, injective, budget, visit);
    }

private:
    struct Triple {
        MorId g, f, h;
    };

    MorId value(MorId f) const { return image_[f]; }

    template <typename Allowed, typename Visit>
    bool descend(std::size_t k, const std::vector<ObjId>& objects, Allowed& allowed, bool injective,
                 Budget& budget, Visit& visit) {
        if (k == order_.size()) return visit(image_);
        MorId f = order_[k];
        for (MorId c : b_.hom(objects[a_.source(f)], objects[a_.target(f)])) {
            budget.charge();
            if (injective && used_[c]) continue;
            if (!allowed(f, c)) continue;
            image_[f] = c;
            bool ok = true;
            for (const auto& t : triples_by_rank_[k]) {
                if (b_.compose(value(t.g), value(t.f)) != value(t.h)) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                if (injective) used_[c] = true;
                bool cont = descend(k + 1, objects, allowed, injective, budget, visit);
                if (injective) used_[c] = false;
                if (!cont) {
                    image_[f] = kNone;
                    return false;
                }
            }
        }
        image_[f] = kNone;
        return true;
    }

    const FinCategory& a_;
    const FinCategory& b_;
    std::vector<MorId> order_;
    std::vector<int> rank_;
    std::vector<std::vector<Triple>> triples_by_rank_;
    std::vector<MorId> image_;
    std::vector<bool> used_;
};

}  // namespace

void for_each_functor(const CatPtr& a, const CatPtr& b,
                      const std::function<bool(MorId, MorId)>& allowed,
                      const std::function<bool(const Functor&)>& visit, Budget& budget) {
    const auto n = static_cast<ObjId>(a->object_count());
    const auto by_last = morphisms_by_last_object(*a);
    MorphismAssignment assign(*a, *b);
    std::vector<ObjId> objects(n, kNone);
    bool stop = false;

    std::function<void(ObjId)> place = [&](ObjId x) {
        if (stop) return;
        if (x == n) {
            bool cont = assign.run(objects, allowed, false, budget, [&](const std::vector<MorId>& image) {
                Functor fn{a, b, objects, image};
                if (!visit(fn)) {
                    stop = true;
                    return false;
                }
                return true;
            });
            if (!cont) stop = true;
            return;
        }
        for (ObjId y = 0; y < static_cast<ObjId>(b->object_count()) && !stop; ++y) {
            budget.charge();
            objects[x] = y;
            bool ok = true;
            for (MorId h : by_last[x]) {
                auto hs = b->hom(objects[a->source(h)], objects[a->target(h)]);
                if (std::none_of(hs.begin(), hs.end(), [&](MorId c) { return allowed(h, c); })) {
                    ok = false;
                    break;
                }
            }
            if (ok) place(x + 1);
        }
        objects[x] = kNone;
    };
    place(0);
}

std::vector<Functor> enumerate_functors(const CatPtr& a, const CatPtr& b,
                                        const std::function<bool(MorId, MorId)>& allowed,
                                        Budget& budget) {
    std::vector<Functor> result;
    for_each_functor(a, b, allowed, [&](const Functor& f) {
        result.push_back(f);
        return true;
    }, budget);
    return result;
}

// ----------------------------------------------------------------------------
// Subcategories and pullbacks

Subcategory subcategory(const CatPtr& parent, const std::vector<bool>& keep_objects,
                        const std::vector<bool>& keep_morphisms) {
    const auto& p = *parent;
    Subcategory sub;
    sub.object_from_parent.assign(p.object_count(), kNone);
    sub.morphism_from_parent.assign(p.morphism_count(), kNone);
    CategoryBuilder b;
    std::vector<ObjId> obj_back;
    std::vector<MorId> mor_back;
    for (ObjId x = 0; x < static_cast<ObjId>(p.object_count()); ++x) {
        if (!keep_objects[x]) continue;
        if (!keep_morphisms[p.identity(x)]) {
            throw ConsistencyError("subcategory misses the identity of " + p.object_name(x));
        }
        sub.object_from_parent[x] = b.add_bare_object(p.object_name(x));
        obj_back.push_back(x);
    }
    for (MorId f = 0; f < static_cast<MorId>(p.morphism_count()); ++f) {
        if (!keep_morphisms[f]) continue;
        ObjId s = sub.object_from_parent[p.source(f)];
        ObjId t = sub.object_from_parent[p.target(f)];
        if (s == kNone || t == kNone) {
            throw ConsistencyError("subcategory keeps " + p.morphism_name(f) + " but not its endpoints");
        }
        sub.morphism_from_parent[f] = b.add_morphism(p.morphism_name(f), s, t);
        mor_back.push_back(f);
    }
    for (std::size_t x = 0; x < obj_back.size(); ++x) {
        b.set_identity(static_cast<ObjId>(x), sub.morphism_from_parent[p.identity(obj_back[x])]);
    }
    b.compose_all([&](MorId g, MorId f) {
        MorId r = p.compose(mor_back[g], mor_back[f]);
        MorId local = r == kNone ? kNone : sub.morphism_from_parent[r];
        if (local == kNone) {
            throw ConsistencyError("subcategory not closed under composition at (" +
                                   p.morphism_name(mor_back[g]) + ", " + p.morphism_name(mor_back[f]) + ")");
        }
        return local;
    });
    sub.category = b.build(false);
    sub.inclusion = Functor{sub.category, parent, obj_back, mor_back};
    return sub;
}

Subcategory fiber(const Functor& f, ObjId d) { return fiber(std::vector<Functor>{f}, {d}); }

Subcategory fiber(const std::vector<Functor>& fs, const std::vector<ObjId>& ds) {
    if (fs.empty() || fs.size() != ds.size()) throw InputError("fiber: mismatched functor/object lists");
    const auto& src = fs.front().source;
    std::vector<bool> keep_obj(src->object_count(), true);
    std::vector<bool> keep_mor(src->morphism_count(), true);
    for (std::size_t k = 0; k < fs.size(); ++k) {
        const auto& fn = fs[k];
        if (ds[k] < 0 || ds[k] >= static_cast<ObjId>(fn.target->object_count())) {
            throw InputError("fiber: base object out of range");
        }
        MorId id = fn.target->identity(ds[k]);
        for (ObjId x = 0; x < static_cast<ObjId>(src->object_count()); ++x) {
            if (fn.obj(x) != ds[k]) keep_obj[x] = false;
        }
        for (MorId m = 0; m < static_cast<MorId>(src->morphism_count()); ++m) {
            if (fn.mor(m) != id) keep_mor[m] = false;
        }
    }
    return subcategory(src, keep_obj, keep_mor);
}

ObjId FiberProduct::object_of(ObjId a, ObjId b) const {
    auto it = object_lookup.find(pair_key(a, b));
    return it == object_lookup.end() ? kNone : it->second;
}

MorId FiberProduct::morphism_of(MorId f, MorId g) const {
    auto it = morphism_lookup.find(pair_key(f, g));
    return it == morphism_lookup.end() ? kNone : it->second;
}

FiberProduct fiber_product(const Functor& f, const Functor& g) {
    if (f.target->object_count() != g.target->object_count() ||
        f.target->morphism_count() != g.target->morphism_count()) {
        throw InputError("fiber_product: functors have different targets");
    }
    const auto& c = *f.source;
    const auto& d = *g.source;
    const auto& e = *f.target;
    FiberProduct p;
    std::vector<std::vector<ObjId>> d_over(e.object_count());
    for (ObjId y = 0; y < static_cast<ObjId>(d.object_count()); ++y) d_over[g.obj(y)].push_back(y);
    std::vector<std::vector<MorId>> dm_over(e.morphism_count());
    for (MorId m = 0; m < static_cast<MorId>(d.morphism_count()); ++m) dm_over[g.mor(m)].push_back(m);

    CategoryBuilder b;
    for (ObjId x = 0; x < static_cast<ObjId>(c.object_count()); ++x) {
        for (ObjId y : d_over[f.obj(x)]) {
            ObjId id = b.add_bare_object("(" + c.object_name(x) + "," + d.object_name(y) + ")");
            p.objects.emplace_back(x, y);
            p.object_lookup.emplace(pair_key(x, y), id);
        }
    }
    for (MorId m = 0; m < static_cast<MorId>(c.morphism_count()); ++m) {
        for (MorId n : dm_over[f.mor(m)]) {
            MorId id = b.add_morphism("(" + c.morphism_name(m) + "," + d.morphism_name(n) + ")",
                                      p.object_of(c.source(m), d.source(n)),
                                      p.object_of(c.target(m), d.target(n)));
            p.morphisms.emplace_back(m, n);
            p.morphism_lookup.emplace(pair_key(m, n), id);
        }
    }
    for (std::size_t k = 0; k < p.objects.size(); ++k) {
        auto [x, y] = p.objects[k];
        b.set_identity(static_cast<ObjId>(k), p.morphism_of(c.identity(x), d.identity(y)));
    }
    b.compose_all([&](MorId h, MorId k) {
        auto [h1, h2] = p.morphisms[h];
        auto [k1, k2] = p.morphisms[k];
        return p.morphism_of(c.compose(h1, k1), d.compose(h2, k2));
    });
    p.category = b.build(false);
    p.first = Functor{p.category, f.source, {}, {}};
    p.second = Functor{p.category, g.source, {}, {}};
    for (auto [x, y] : p.objects) {
        p.first.on_objects.push_back(x);
        p.second.on_objects.push_back(y);
    }
    for (auto [m, n] : p.morphisms) {
        p.first.on_morphisms.push_back(m);
        p.second.on_morphisms.push_back(n);
    }
    return p;
}

Functor pair_into(const FiberProduct& p, const Functor& a, const Functor& b) {
    Functor r{a.source, p.category, {}, {}};
    for (std::size_t x = 0; x < a.on_objects.size(); ++x) {
        ObjId id = p.object_of(a.obj(static_cast<ObjId>(x)), b.obj(static_cast<ObjId>(x)));
        if (id == kNone) throw ConsistencyError("pair_into: object does not lie over a common base");
        r.on_objects.push_back(id);
    }
    for (std::size_t m = 0; m < a.on_morphisms.size(); ++m) {
        MorId id = p.morphism_of(a.mor(static_cast<MorId>(m)), b.mor(static_cast<MorId>(m)));
        if (id == kNone) throw ConsistencyError("pair_into: morphism does not lie over a common base");
        r.on_morphisms.push_back(id);
    }
    return r;
}

// ----------------------------------------------------------------------------
// Pushouts and isomorphisms

bool is_pushout(const FinCategory& c, MorId f, MorId g, MorId i, MorId j) {
    if (c.source(f) != c.source(g) || c.target(f) != c.source(i) || c.target(g) != c.source(j) ||
        c.target(i) != c.target(j)) {
        return false;
    }
    if (c.compose(i, f) != c.compose(j, g)) return false;
    const ObjId b = c.target(f);
    const ObjId d = c.target(g);
    const ObjId p = c.target(i);
    std::set<std::pair<MorId, MorId>> images;
    for (ObjId q = 0; q < static_cast<ObjId>(c.object_count()); ++q) {
        std::size_t cocones = 0;
        for (MorId x : c.hom(b, q)) {
            MorId xf = c.compose(x, f);
            for (MorId y : c.hom(d, q)) {
                if (xf == c.compose(y, g)) ++cocones;
            }
        }
        images.clear();
        for (MorId h : c.hom(p, q)) {
            if (!images.emplace(c.compose(h, i), c.compose(h, j)).second) return false;
        }
        if (images.size() != cocones) return false;
    }
    return true;
}

std::optional<Cocone> pushout(const FinCategory& c, MorId f, MorId g) {
    if (c.source(f) != c.source(g)) {
        throw InputError("pushout: " + c.morphism_name(f) + " and " + c.morphism_name(g) +
                         " have different sources");
    }
    const ObjId b = c.target(f);
    const ObjId d = c.target(g);
    for (ObjId p = 0; p < static_cast<ObjId>(c.object_count()); ++p) {
        for (MorId i : c.hom(b, p)) {
            for (MorId j : c.hom(d, p)) {
                if (c.compose(i, f) == c.compose(j, g) && is_pushout(c, f, g, i, j)) {
                    return Cocone{p, i, j};
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<MorId> inverse_of(const FinCategory& c, MorId f) {
    for (MorId g : c.hom(c.target(f), c.source(f))) {
        if (c.compose(g, f) == c.identity(c.source(f)) && c.compose(f, g) == c.identity(c.target(f))) {
            return g;
        }
    }
    return std::nullopt;
}

std::vector<bool> isomorphisms(const FinCategory& c) {
    std::vector<bool> iso(c.morphism_count(), false);
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        iso[f] = c.is_identity(f) || inverse_of(c, f).has_value();
    }
    return iso;
}

EquivalenceCheck check_equivalence(const Functor& fn) {
    EquivalenceCheck result;
    const auto& a = *fn.source;
    const auto& b = *fn.target;
    const auto na = static_cast<ObjId>(a.object_count());
    std::vector<MorId> seen;
    for (ObjId x = 0; x < na; ++x) {
        for (ObjId y = 0; y < na; ++y) {
            auto src = a.hom(x, y);
            auto dst = b.hom(fn.obj(x), fn.obj(y));
            seen.clear();
            for (MorId m : src) seen.push_back(fn.mor(m));
            std::sort(seen.begin(), seen.end());
            bool injective = std::adjacent_find(seen.begin(), seen.end()) == seen.end();
            if (!injective || src.size() != dst.size()) {
                result.counterexample = "hom(" + a.object_name(x) + ", " + a.object_name(y) +
                                        ") -> hom(" + b.object_name(fn.obj(x)) + ", " +
                                        b.object_name(fn.obj(y)) + ") is not bijective";
                return result;
            }
        }
    }
    std::vector<ObjId> image_of(b.object_count(), kNone);
    for (ObjId x = na - 1; x >= 0; --x) image_of[fn.obj(x)] = x;
    for (ObjId y = 0; y < static_cast<ObjId>(b.object_count()); ++y) {
        if (image_of[y] != kNone) {
            result.essential_preimage.emplace_back(image_of[y], b.identity(y));
            continue;
        }
        bool found = false;
        for (ObjId x = 0; x < na && !found; ++x) {
            for (MorId m : b.hom(fn.obj(x), y)) {
                if (inverse_of(b, m)) {
                    result.essential_preimage.emplace_back(x, m);
                    found = true;
                    break;
                }
            }
        }
        if (!found) {
            result.essential_preimage.clear();
            result.counterexample = "object " + b.object_name(y) + " is not isomorphic to any image object";
            return result;
        }
    }
    result.holds = true;
    return result;
}

std::optional<Functor> find_isomorphism(const CatPtr& a, const CatPtr& b,
                                        const std::vector<int>* a_colour,
                                        const std::vector<int>* b_colour, Budget* budget) {
    Budget local;
    Budget& bud = budget ? *budget : local;
    if (a->object_count() != b->object_count() || a->morphism_count() != b->morphism_count()) {
        return std::nullopt;
    }
    const auto n = static_cast<ObjId>(a->object_count());
    auto signature = [](const FinCategory& c, const std::vector<int>* colour, ObjId x) {
        std::vector<int> sig;
        std::size_t in = 0;
        for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
            if (c.target(f) == x) ++in;
        }
        sig.push_back(static_cast<int>(c.out(x).size()));
        sig.push_back(static_cast<int>(in));
        sig.push_back(static_cast<int>(c.hom(x, x).size()));
        if (colour) {
            std::vector<int> cs;
            for (MorId f : c.out(x)) cs.push_back((*colour)[f]);
            std::sort(cs.begin(), cs.end());
            sig.insert(sig.end(), cs.begin(), cs.end());
        }
        return sig;
    };
    std::vector<std::vector<int>> sa(n), sb(n);
    for (ObjId x = 0; x < n; ++x) {
        sa[x] = signature(*a, a_colour, x);
        sb[x] = signature(*b, b_colour, x);
    }
    auto allowed = [&](MorId f, MorId g) {
        return !a_colour || !b_colour || (*a_colour)[f] == (*b_colour)[g];
    };
    MorphismAssignment assign(*a, *b);
    std::vector<ObjId> objects(n, kNone);
    std::vector<bool> used(n, false);
    std::optional<Functor> found;
    std::function<void(ObjId)> place = [&](ObjId x) {
        if (found) return;
        if (x == n) {
            assign.run(objects, allowed, true, bud, [&](const std::vector<MorId>& image) {
                found = Functor{a, b, objects, image};
                return false;
            });
            return;
        }
        for (ObjId y = 0; y < n && !found; ++y) {
            if (used[y] || sa[x] != sb[y]) continue;
            bud.charge();
            objects[x] = y;
            bool ok = true;
            for (ObjId z = 0; z < x && ok; ++z) {
                ok = a->hom(z, x).size() == b->hom(objects[z], y).size() &&
                     a->hom(x, z).size() == b->hom(y, objects[z]).size();
            }
            if (ok) {
                used[y] = true;
                place(x + 1);
                used[y] = false;
            }
        }
        objects[x] = kNone;
    };
    place(0);
    return found;
}

std::optional<Adjunction> find_left_adjoint(const Functor& g) {
    // g: B -> A; look for L: A -> B with unit eta_a: a -> G L a universal.
    const auto& a = *g.target;
    const auto& b = *g.source;
    const auto na = static_cast<ObjId>(a.object_count());
    const auto nb = static_cast<ObjId>(b.object_count());
    std::vector<ObjId> l_obj(na, kNone);
    std::vector<MorId> unit(na, kNone);
    auto universal = [&](ObjId x, ObjId bx, MorId eta) {
        for (ObjId y = 0; y < nb; ++y) {
            auto target_hom = a.hom(x, g.obj(y));
            auto src_hom = b.hom(bx, y);
            if (target_hom.size() != src_hom.size()) return false;
            std::set<MorId> images;
            for (MorId h : src_hom) {
                if (!images.insert(a.compose(g.mor(h), eta)).second) return false;
            }
        }
        return true;
    };
    for (ObjId x = 0; x < na; ++x) {
        for (ObjId bx = 0; bx < nb && l_obj[x] == kNone; ++bx) {
            for (MorId eta : a.hom(x, g.obj(bx))) {
                if (universal(x, bx, eta)) {
                    l_obj[x] = bx;
                    unit[x] = eta;
                    break;
                }
            }
        }
        if (l_obj[x] == kNone) return std::nullopt;
    }
    auto mediate = [&](ObjId bx, MorId eta, ObjId y, MorId target) -> MorId {
        for (MorId h : b.hom(bx, y)) {
            if (a.compose(g.mor(h), eta) == target) return h;
        }
        return kNone;
    };
    Functor l{g.target, g.source, l_obj, std::vector<MorId>(a.morphism_count(), kNone)};
    for (MorId h = 0; h < static_cast<MorId>(a.morphism_count()); ++h) {
        ObjId x = a.source(h);
        ObjId y = a.target(h);
        l.on_morphisms[h] = mediate(l_obj[x], unit[x], l_obj[y], a.compose(unit[y], h));
        if (l.on_morphisms[h] == kNone) return std::nullopt;
    }
    Functor gl = compose(g, l);
    Functor lg = compose(l, g);
    NatTransformation eta{identity_functor(g.target), gl, unit};
    NatTransformation eps{lg, identity_functor(g.source), std::vector<MorId>(nb, kNone)};
    for (ObjId y = 0; y < nb; ++y) {
        ObjId gy = g.obj(y);
        eps.components[y] = mediate(l_obj[gy], unit[gy], y, a.identity(gy));
        if (eps.components[y] == kNone) return std::nullopt;
    }
    Adjunction adj{l, g, eta, eps};
    if (!validate_functor(l).empty() || !verify_adjunction(adj)) return std::nullopt;
    return adj;
}

std::optional<Adjunction> find_right_adjoint(const Functor& f) {
    // f: A -> B; look for R: B -> A with counit eps_b: F R b -> b couniversal.
    const auto& a = *f.source;
    const auto& b = *f.target;
    const auto na = static_cast<ObjId>(a.object_count());
    const auto nb = static_cast<ObjId>(b.object_count());
    std::vector<ObjId> r_obj(nb, kNone);
    std::vector<MorId> counit(nb, kNone);
    auto couniversal = [&](ObjId y, ObjId ay, MorId eps) {
        for (ObjId x = 0; x < na; ++x) {
            auto target_hom = b.hom(f.obj(x), y);
            auto src_hom = a.hom(x, ay);
            if (target_hom.size() != src_hom.size()) return false;
            std::set<MorId> images;
            for (MorId h : src_hom) {
                if (!images.insert(b.compose(eps, f.mor(h))).second) return false;
            }
        }
        return true;
    };
    for (ObjId y = 0; y < nb; ++y) {
        for (ObjId ay = 0; ay < na && r_obj[y] == kNone; ++ay) {
            for (MorId eps : b.hom(f.obj(ay), y)) {
                if (couniversal(y, ay, eps)) {
                    r_obj[y] = ay;
                    counit[y] = eps;
                    break;
                }
            }
        }
        if (r_obj[y] == kNone) return std::nullopt;
    }
    auto mediate = [&](ObjId x, ObjId ay, MorId eps, MorId target) -> MorId {
        for (MorId h : a.hom(x, ay)) {
            if (b.compose(eps, f.mor(h)) == target) return h;
        }
        return kNone;
    };
    Functor r{f.target, f.source, r_obj, std::vector<MorId>(b.morphism_count(), kNone)};
    for (MorId k = 0; k < static_cast<MorId>(b.morphism_count()); ++k) {
        ObjId y = b.source(k);
        ObjId z = b.target(k);
        r.on_morphisms[k] = mediate(r_obj[y], r_obj[z], counit[z], b.compose(k, counit[y]));
        if (r.on_morphisms[k] == kNone) return std::nullopt;
    }
    NatTransformation eps{compose(f, r), identity_functor(f.target), counit};
    NatTransformation eta{identity_functor(f.source), compose(r, f), std::vector<MorId>(na, kNone)};
    for (ObjId x = 0; x < na; ++x) {
        ObjId fx = f.obj(x);
        eta.components[x] = mediate(x, r_obj[fx], counit[fx], b.identity(fx));
        if (eta.components[x] == kNone) return std::nullopt;
    }
    Adjunction adj{f, r, eta, eps};
    if (!validate_functor(r).empty() || !verify_adjunction(adj)) return std::nullopt;
    return adj;
}

std::optional<std::vector<ObjId>> find_loop(const FinCategory& c) {
    const auto n = static_cast<ObjId>(c.object_count());
    std::vector<std::vector<ObjId>> next(n);
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        if (c.is_identity(f)) continue;
        if (c.source(f) == c.target(f)) return std::vector<ObjId>{c.source(f)};
        next[c.source(f)].push_back(c.target(f));
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    std::vector<int> state(n, 0);
    std::vector<ObjId> parent(n, kNone);
    for (ObjId root = 0; root < n; ++root) {
        if (state[root]) continue;
        std::vector<std::pair<ObjId, std::size_t>> stack{{root, 0}};
        state[root] = 1;
        while (!stack.empty()) {
            auto& [x, k] = stack.back();
            if (k < next[x].size()) {
                ObjId y = next[x][k++];
                if (state[y] == 1) {
                    std::vector<ObjId> cycle{y};
                    for (ObjId z = x; z != y; z = parent[z]) cycle.push_back(z);
                    std::reverse(cycle.begin() + 1, cycle.end());
                    return cycle;
                }
                if (state[y] == 0) {
                    state[y] = 1;
                    parent[y] = x;
                    stack.emplace_back(y, 0);
                }
            } else {
                state[x] = 2;
                stack.pop_back();
            }
        }
    }
    return std::nullopt;
}

// ----------------------------------------------------------------------------
// Diagram categories

ObjId DiagramCategory::find_object(const std::vector<MorId>& diagram) const {
    auto it = index.find(pack_key(diagram));
    return it == index.end() ? kNone : it->second;
}

Functor DiagramCategory::diagram(ObjId x) const {
    return functor_from_morphisms(shape, target, diagrams[x]);
}

NatTransformation DiagramCategory::transformation(MorId f) const {
    return {diagram(category->source(f)), diagram(category->target(f)), components[f]};
}

DiagramCategory build_diagram_category(const CatPtr& shape, const CatPtr& target,
                                       std::vector<std::vector<MorId>> diagrams,
                                       const std::vector<bool>& allowed_components,
                                       const DiagramNamer& namer, Budget& budget) {
    DiagramCategory dc;
    dc.shape = shape;
    dc.target = target;
    const auto& s = *shape;
    const auto& t = *target;
    std::vector<std::vector<ObjId>> obj_maps;
    obj_maps.reserve(diagrams.size());
    for (const auto& d : diagrams) {
        std::vector<ObjId> om(s.object_count());
        for (ObjId x = 0; x < static_cast<ObjId>(s.object_count()); ++x) om[x] = t.source(d[s.identity(x)]);
        obj_maps.push_back(std::move(om));
    }
    budget.charge(diagrams.size());
    CategoryBuilder b;
    for (std::size_t k = 0; k < diagrams.size(); ++k) {
        b.add_bare_object(namer(diagrams[k]));
        dc.index.emplace(pack_key(diagrams[k]), static_cast<ObjId>(k));
    }
    TransformationSearch search(s, t, &allowed_components);
    std::vector<MorId> identities(diagrams.size(), kNone);
    for (std::size_t from = 0; from < diagrams.size(); ++from) {
        for (std::size_t to = 0; to < diagrams.size(); ++to) {
            search.run(obj_maps[from], diagrams[from], obj_maps[to], diagrams[to], nullptr,
                       [&](const std::vector<MorId>& comps) {
                           std::string name = "[";
                           for (std::size_t x = 0; x < comps.size(); ++x) {
                               if (x) name += ",";
                               name += t.morphism_name(comps[x]);
                           }
                           name += "]";
                           MorId id = b.add_morphism(std::move(name), static_cast<ObjId>(from),
                                                     static_cast<ObjId>(to));
                           if (from == to &&
                               std::all_of(comps.begin(), comps.end(),
                                           [&](MorId c) { return t.is_identity(c); })) {
                               identities[from] = id;
                           }
                           dc.components.push_back(comps);
                           return true;
                       });
            if (from == to && identities[from] == kNone) {
                throw ConsistencyError("identity transformation excluded by the component restriction");
            }
        }
    }
    for (std::size_t k = 0; k < diagrams.size(); ++k) b.set_identity(static_cast<ObjId>(k), identities[k]);
    std::vector<MorId> scratch(s.object_count());
    b.compose_all([&](MorId g, MorId f) {
        for (std::size_t x = 0; x < scratch.size(); ++x) {
            scratch[x] = t.compose(dc.components[g][x], dc.components[f][x]);
        }
        for (MorId h : b.hom(b.source(f), b.target(g))) {
            if (dc.components[h] == scratch) return h;
        }
        throw ConsistencyError("composite transformation missing from the diagram category");
    });
    dc.category = b.build(false);
    dc.diagrams = std::move(diagrams);
    return dc;
}

Functor precompose(const DiagramCategory& src, const DiagramCategory& dst, const Functor& along) {
    const auto& ds = *dst.shape;
    const auto& cat = *dst.category;
    Functor r{src.category, dst.category, {}, {}};
    r.on_objects.reserve(src.diagrams.size());
    std::vector<MorId> diag(ds.morphism_count());
    for (const auto& d : src.diagrams) {
        for (MorId h = 0; h < static_cast<MorId>(ds.morphism_count()); ++h) diag[h] = d[along.mor(h)];
        ObjId x = dst.find_object(diag);
        if (x == kNone) throw ConsistencyError("precompose: restricted diagram is not an object of the target level");
        r.on_objects.push_back(x);
    }
    std::vector<MorId> comps(ds.object_count());
    for (MorId f = 0; f < static_cast<MorId>(src.category->morphism_count()); ++f) {
        for (ObjId x = 0; x < static_cast<ObjId>(ds.object_count()); ++x) {
            comps[x] = src.components[f][along.obj(x)];
        }
        MorId found = kNone;
        for (MorId h : cat.hom(r.obj(src.category->source(f)), r.obj(src.category->target(f)))) {
            if (dst.components[h] == comps) {
                found = h;
                break;
            }
        }
        if (found == kNone) throw ConsistencyError("precompose: restricted transformation is missing");
        r.on_morphisms.push_back(found);
    }
    return r;
}

}  // namespace pbc
