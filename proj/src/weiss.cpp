#include "pbc/weiss.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "weiss_internal.hpp"

namespace pbc {

namespace detail {

bool is_thin(const FinCategory& c) {
    for (ObjId a = 0; a < static_cast<ObjId>(c.object_count()); ++a) {
        for (ObjId b = 0; b < static_cast<ObjId>(c.object_count()); ++b) {
            if (c.hom(a, b).size() > 1) return false;
        }
    }
    return true;
}

DiagramNamer diagram_namer(const FinCategory& shape, const FinCategory& target) {
    const bool thin = is_thin(target);
    return [&shape, &target, thin](const std::vector<MorId>& d) {
        std::string name = "(";
        for (ObjId x = 0; x < static_cast<ObjId>(shape.object_count()); ++x) {
            if (x) name += ",";
            name += target.object_name(target.source(d[shape.identity(x)]));
        }
        if (!thin) {
            std::string sep = "|";
            for (MorId h = 0; h < static_cast<MorId>(shape.morphism_count()); ++h) {
                if (shape.is_identity(h)) continue;
                name += sep + target.morphism_name(d[h]);
                sep = ",";
            }
        }
        return name + ")";
    };
}

MorId find_transformation(const DiagramCategory& dc, ObjId from, ObjId to, const std::vector<MorId>& comps) {
    if (from == kNone || to == kNone) return kNone;
    for (MorId h : dc.category->hom(from, to)) {
        if (dc.components[h] == comps) return h;
    }
    return kNone;
}

std::vector<MorId> diagram_from_generators(const FinCategory& m, const TShape& t,
                                           const std::vector<std::vector<ObjId>>& objects,
                                           const std::vector<std::vector<MorId>>& forward,
                                           const std::vector<std::vector<MorId>>& backward) {
    const auto& s = *t.category;
    std::vector<MorId> d(s.morphism_count(), kNone);
    for (MorId h = 0; h < static_cast<MorId>(s.morphism_count()); ++h) {
        auto [p, q] = t.coords[s.source(h)];
        auto [p2, q2] = t.coords[s.target(h)];
        MorId r = m.identity(objects[p][q]);
        for (int k = q; k < q2 && r != kNone; ++k) r = m.compose(forward[p][k], r);
        for (int k = p - 1; k >= p2 && r != kNone; --k) r = m.compose(backward[k][q2], r);
        if (r == kNone) throw ConsistencyError("generator images do not compose in the carrier");
        d[h] = r;
    }
    return d;
}

Functor restrict_functor(const Functor& f, const Subcategory& from, const Subcategory& to) {
    Functor r{from.category, to.category, {}, {}};
    for (ObjId x = 0; x < static_cast<ObjId>(from.category->object_count()); ++x) {
        ObjId y = to.object_from_parent[f.obj(from.inclusion.obj(x))];
        if (y == kNone) throw ConsistencyError("restricted functor leaves the subcategory");
        r.on_objects.push_back(y);
    }
    for (MorId g = 0; g < static_cast<MorId>(from.category->morphism_count()); ++g) {
        MorId h = to.morphism_from_parent[f.mor(from.inclusion.mor(g))];
        if (h == kNone) throw ConsistencyError("restricted functor leaves the subcategory");
        r.on_morphisms.push_back(h);
    }
    return r;
}

IteratedProduct iterate_product(const CatPtr& level1, const Functor& d0, const Functor& d1, int n) {
    IteratedProduct ip;
    ip.level1 = level1;
    ip.n = n;
    for (int k = 2; k <= n; ++k) {
        if (k == 2) {
            ip.products.push_back(fiber_product(d0, d1));
        } else {
            ip.products.push_back(fiber_product(compose(d0, ip.products.back().second), d1));
        }
    }
    return ip;
}

CatPtr IteratedProduct::top() const { return products.empty() ? level1 : products.back().category; }

Functor IteratedProduct::factor(int j) const {
    // Factor j (1-based) of the top level.
    Functor f = identity_functor(top());
    for (int k = n; k > j; --k) f = compose(products[k - 2].first, f);
    if (j >= 2) f = compose(products[j - 2].second, f);
    return f;
}

Functor IteratedProduct::extend(const IteratedProduct& src, const Functor& phi1) const {
    Functor acc = phi1;
    for (int k = 2; k <= n; ++k) {
        const auto& sp = src.products[k - 2];
        acc = pair_into(products[k - 2], compose(acc, sp.first), compose(phi1, sp.second));
    }
    return acc;
}

std::vector<MorId> IteratedProduct::extend_components(const IteratedProduct& src,
                                                      const std::function<MorId(ObjId)>& t1) const {
    std::vector<MorId> comps(src.level1->object_count());
    for (ObjId x = 0; x < static_cast<ObjId>(comps.size()); ++x) comps[x] = t1(x);
    for (int k = 2; k <= n; ++k) {
        const auto& sp = src.products[k - 2];
        std::vector<MorId> next(sp.category->object_count());
        for (ObjId o = 0; o < static_cast<ObjId>(next.size()); ++o) {
            MorId a = comps[sp.first.obj(o)];
            MorId b = t1(sp.second.obj(o));
            next[o] = a == kNone || b == kNone ? kNone : products[k - 2].morphism_of(a, b);
        }
        comps = std::move(next);
    }
    return comps;
}

}  // namespace detail

using namespace detail;

namespace {

CatPtr ordinal_shape(int n) {
    static std::mutex lock;
    static std::map<int, CatPtr> cache;
    std::lock_guard<std::mutex> guard(lock);
    auto& slot = cache[n];
    if (!slot) slot = ordinal_category(n);
    return slot;
}

bool pushout_conditions(const PBCStructure& pbc, const TShape& t, const std::vector<MorId>& d) {
    const auto& m = pbc.carrier();
    for (int p = 0; p < t.n; ++p) {
        for (int q = p + 1; q <= t.n - 1; ++q) {
            MorId f = d[t.arrow(t.object_at(p + 1, q), t.object_at(p, q))];
            MorId g = d[t.arrow(t.object_at(p + 1, q), t.object_at(p + 1, q + 1))];
            MorId i = d[t.arrow(t.object_at(p, q), t.object_at(p, q + 1))];
            MorId j = d[t.arrow(t.object_at(p + 1, q + 1), t.object_at(p, q + 1))];
            if (!is_pushout(m, f, g, i, j)) return false;
        }
    }
    return true;
}

ObjId c0_object(CnTower& tower, ObjId m) {
    ObjId x = tower.C(0).find_object({tower.carrier().identity(m)});
    if (x == kNone) throw ConsistencyError("carrier object missing from C_0");
    return x;
}

}  // namespace

bool is_cn_object(const PBCStructure& pbc, int n, const std::vector<MorId>& diagram) {
    const auto& t = shape_T(n);
    const auto& s = *t.category;
    const auto& m = pbc.carrier();
    if (diagram.size() != s.morphism_count()) return false;
    for (MorId d : diagram) {
        if (d < 0 || d >= static_cast<MorId>(m.morphism_count())) return false;
    }
    for (MorId h = 0; h < static_cast<MorId>(s.morphism_count()); ++h) {
        if (m.source(diagram[h]) != m.source(diagram[s.identity(s.source(h))])) return false;
        if (m.target(diagram[h]) != m.source(diagram[s.identity(s.target(h))])) return false;
        if (s.is_identity(h) && !m.is_identity(diagram[h])) return false;
        if (t.backward[h] && !pbc.tcof.contains(diagram[h])) return false;
        for (MorId g : s.out(s.target(h))) {
            if (m.compose(diagram[g], diagram[h]) != diagram[s.compose(g, h)]) return false;
        }
    }
    return pushout_conditions(pbc, t, diagram);
}

DiagramCategory enumerate_Cn(const PBCStructure& pbc, int n, Budget& budget) {
    const auto& t = shape_T(n);
    std::vector<std::vector<MorId>> diagrams;
    for_each_functor(
        t.category, pbc.rel.carrier,
        [&](MorId h, MorId f) { return !t.backward[h] || pbc.tcof.contains(f); },
        [&](const Functor& f) {
            if (pushout_conditions(pbc, t, f.on_morphisms)) diagrams.push_back(f.on_morphisms);
            return true;
        },
        budget);
    return build_diagram_category(t.category, pbc.rel.carrier, std::move(diagrams), pbc.weq().member,
                                  diagram_namer(*t.category, pbc.carrier()), budget);
}

DiagramCategory rezk_nerve_level(const RelativeCategory& rel, int n, Budget& budget) {
    CatPtr shape = ordinal_shape(n);
    auto diagrams_f = enumerate_functors(shape, rel.carrier, [](MorId, MorId) { return true; }, budget);
    std::vector<std::vector<MorId>> diagrams;
    for (auto& f : diagrams_f) diagrams.push_back(std::move(f.on_morphisms));
    return build_diagram_category(shape, rel.carrier, std::move(diagrams), rel.weq.member,
                                  diagram_namer(*shape, *rel.carrier), budget);
}

DiagramCategory enumerate_E1(const PBCStructure& pbc, Budget& budget) {
    const auto& t = shape_T(1);
    auto fs = enumerate_functors(
        t.category, pbc.rel.carrier, [&](MorId h, MorId f) { return !t.backward[h] || pbc.weq().contains(f); },
        budget);
    std::vector<std::vector<MorId>> diagrams;
    for (auto& f : fs) diagrams.push_back(std::move(f.on_morphisms));
    return build_diagram_category(t.category, pbc.rel.carrier, std::move(diagrams), pbc.weq().member,
                                  diagram_namer(*t.category, pbc.carrier()), budget);
}

Functor ordinal_functor(const MonotoneMap& f, int n) {
    if (!is_monotone(f, n)) throw InputError("ordinal_functor: map is not monotone into [" + std::to_string(n) + "]");
    CatPtr src = ordinal_shape(static_cast<int>(f.size()) - 1);
    CatPtr dst = ordinal_shape(n);
    Functor r{src, dst, {}, {}};
    for (int v : f) r.on_objects.push_back(v);
    for (MorId h = 0; h < static_cast<MorId>(src->morphism_count()); ++h) {
        r.on_morphisms.push_back(dst->hom(f[src->source(h)], f[src->target(h)]).front());
    }
    return r;
}

// ----------------------------------------------------------------------------
// Tower

CnTower::CnTower(PBCStructure pbc, std::uint64_t budget) : pbc_(std::move(pbc)), budget_(budget) {}

const DiagramCategory& CnTower::C(int n) {
    if (n < 0) throw InputError("negative simplicial degree");
    auto& slot = c_[n];
    if (!slot) slot = std::make_unique<DiagramCategory>(enumerate_Cn(pbc_, n, budget_));
    return *slot;
}

const DiagramCategory& CnTower::NR(int n) {
    if (n < 0) throw InputError("negative simplicial degree");
    auto& slot = nr_[n];
    if (!slot) slot = std::make_unique<DiagramCategory>(rezk_nerve_level(pbc_.rel, n, budget_));
    return *slot;
}

const DiagramCategory& CnTower::E1() {
    if (!e1_) e1_ = std::make_unique<DiagramCategory>(enumerate_E1(pbc_, budget_));
    return *e1_;
}

const Functor& CnTower::face(int n, int i) {
    if (n < 1 || i < 0 || i > n) throw InputError("face index out of range");
    auto& slot = faces_[{n, i}];
    if (!slot) slot = std::make_unique<Functor>(precompose(C(n), C(n - 1), cosimplicial_T(coface_map(n, i), n)));
    return *slot;
}

const Functor& CnTower::degeneracy(int n, int j) {
    if (n < 0 || j < 0 || j > n) throw InputError("degeneracy index out of range");
    auto& slot = degens_[{n, j}];
    if (!slot) {
        slot = std::make_unique<Functor>(precompose(C(n), C(n + 1), cosimplicial_T(codegeneracy_map(n, j), n)));
    }
    return *slot;
}

const Functor& CnTower::vertex(int n, int i) {
    if (n < 0 || i < 0 || i > n) throw InputError("vertex index out of range");
    auto& slot = vertices_[{n, i}];
    if (!slot) slot = std::make_unique<Functor>(precompose(C(n), C(0), cosimplicial_T({i}, n)));
    return *slot;
}

SimplicialCategoryTrunc cn_simplicial(CnTower& tower, int max_dim) {
    SimplicialCategoryTrunc s;
    s.max_dim = max_dim;
    s.faces.resize(max_dim + 1);
    s.degeneracies.resize(max_dim);
    for (int n = 0; n <= max_dim; ++n) {
        s.levels.push_back(tower.C(n).category);
        for (int i = 0; n > 0 && i <= n; ++i) s.faces[n].push_back(tower.face(n, i));
    }
    for (int n = 0; n < max_dim; ++n) {
        for (int j = 0; j <= n; ++j) s.degeneracies[n].push_back(tower.degeneracy(n, j));
    }
    return s;
}

SimplicialCategoryTrunc rezk_simplicial(CnTower& tower, int max_dim) {
    SimplicialCategoryTrunc s;
    s.max_dim = max_dim;
    s.faces.resize(max_dim + 1);
    s.degeneracies.resize(max_dim);
    for (int n = 0; n <= max_dim; ++n) {
        s.levels.push_back(tower.NR(n).category);
        for (int i = 0; n > 0 && i <= n; ++i) {
            s.faces[n].push_back(precompose(tower.NR(n), tower.NR(n - 1), ordinal_functor(coface_map(n, i), n)));
        }
    }
    for (int n = 0; n < max_dim; ++n) {
        for (int j = 0; j <= n; ++j) {
            s.degeneracies[n].push_back(
                precompose(tower.NR(n), tower.NR(n + 1), ordinal_functor(codegeneracy_map(n, j), n)));
        }
    }
    return s;
}

// ----------------------------------------------------------------------------
// Classification adjunction

ClassificationAdjunction classification_adjoint(CnTower& tower, int k) {
    const auto& c = tower.C(k);
    const auto& nr = tower.NR(k);
    const auto& t = shape_T(k);
    const auto& ts = *t.category;
    const auto& ord = *nr.shape;

    Functor iota{nr.shape, t.category, {}, {}};
    for (int p = 0; p <= k; ++p) iota.on_objects.push_back(t.object_at(0, p));
    for (MorId h = 0; h < static_cast<MorId>(ord.morphism_count()); ++h) {
        iota.on_morphisms.push_back(t.arrow(iota.obj(ord.source(h)), iota.obj(ord.target(h))));
    }

    ClassificationAdjunction r;
    r.restriction = precompose(c, nr, iota);

    Functor ext{nr.category, c.category, {}, {}};
    std::vector<MorId> diag(ts.morphism_count());
    for (const auto& chain : nr.diagrams) {
        for (MorId h = 0; h < static_cast<MorId>(ts.morphism_count()); ++h) {
            int q = t.coords[ts.source(h)].second;
            int q2 = t.coords[ts.target(h)].second;
            diag[h] = chain[ord.hom(q, q2).front()];
        }
        ObjId x = c.find_object(diag);
        if (x == kNone) throw ConsistencyError("extended chain is not an object of C_k");
        ext.on_objects.push_back(x);
    }
    std::vector<MorId> comps(ts.object_count());
    for (MorId f = 0; f < static_cast<MorId>(nr.category->morphism_count()); ++f) {
        for (ObjId x = 0; x < static_cast<ObjId>(ts.object_count()); ++x) {
            comps[x] = nr.components[f][t.coords[x].second];
        }
        MorId h = find_transformation(c, ext.obj(nr.category->source(f)), ext.obj(nr.category->target(f)), comps);
        if (h == kNone) throw ConsistencyError("extended ladder is not a morphism of C_k");
        ext.on_morphisms.push_back(h);
    }
    r.extension = ext;

    Functor lu = compose(r.extension, r.restriction);
    NatTransformation unit{identity_functor(c.category), lu, {}};
    for (ObjId x = 0; x < static_cast<ObjId>(c.category->object_count()); ++x) {
        for (ObjId y = 0; y < static_cast<ObjId>(ts.object_count()); ++y) {
            comps[y] = c.diagrams[x][t.arrow(y, t.object_at(0, t.coords[y].second))];
        }
        MorId h = find_transformation(c, x, lu.obj(x), comps);
        if (h == kNone) throw ConsistencyError("unit component missing from C_k");
        unit.components.push_back(h);
    }
    Functor ul = compose(r.restriction, r.extension);
    NatTransformation counit{ul, identity_functor(nr.category), {}};
    for (ObjId x = 0; x < static_cast<ObjId>(nr.category->object_count()); ++x) {
        if (ul.obj(x) != x) throw ConsistencyError("restriction after extension is not the identity");
        counit.components.push_back(nr.category->identity(x));
    }
    r.adjunction = Adjunction{r.restriction, r.extension, unit, counit};
    r.verified = validate_functor(r.restriction).empty() && validate_functor(r.extension).empty() &&
                 validate_nat_transformation(unit).empty() && validate_nat_transformation(counit).empty() &&
                 verify_adjunction(r.adjunction);
    return r;
}

// ----------------------------------------------------------------------------
// Zig-zags and mapping categories

ObjId identity_zigzag(CnTower& tower, ObjId m) {
    const auto& t = shape_T(1);
    std::vector<MorId> d(t.category->morphism_count(), tower.carrier().identity(m));
    ObjId x = tower.C(1).find_object(d);
    if (x == kNone) throw ConsistencyError("identity zig-zag missing from C_1");
    return x;
}

ZigzagComposite compose_zigzags(CnTower& tower, ObjId z1, ObjId z2) {
    const auto& c1 = tower.C(1);
    const auto& m = tower.carrier();
    const auto& t1 = shape_T(1);
    const MorId fwd = t1.arrow(t1.object_at(0, 0), t1.object_at(0, 1));
    const MorId bwd = t1.arrow(t1.object_at(1, 1), t1.object_at(0, 1));
    auto ncount = static_cast<ObjId>(c1.category->object_count());
    if (z1 < 0 || z1 >= ncount || z2 < 0 || z2 >= ncount) throw InputError("compose_zigzags: unknown zig-zag");
    const auto& d1 = c1.diagrams[z1];
    const auto& d2 = c1.diagrams[z2];
    MorId f1 = d1[fwd], b1 = d1[bwd], f2 = d2[fwd], b2 = d2[bwd];
    if (m.source(b1) != m.source(f2)) {
        throw InputError("compose_zigzags: " + c1.category->object_name(z1) + " ends at " +
                         m.object_name(m.source(b1)) + " but " + c1.category->object_name(z2) + " starts at " +
                         m.object_name(m.source(f2)));
    }
    auto po = pushout(m, b1, f2);
    if (!po) {
        throw InputError("compose_zigzags: no pushout of " + m.morphism_name(b1) + " and " + m.morphism_name(f2) +
                         "; cobase change of a trivial cofibration fails");
    }
    const auto& t2 = shape_T(2);
    ObjId x = m.source(f1), y1 = m.target(f1), y = m.source(b1), z1o = m.target(f2), z = m.source(b2);
    std::vector<std::vector<ObjId>> objects = {{x, y1, po->apex}, {kNone, y, z1o}, {kNone, kNone, z}};
    std::vector<std::vector<MorId>> forward = {{f1, po->first}, {kNone, f2}};
    std::vector<std::vector<MorId>> backward = {{kNone, b1, po->second}, {kNone, kNone, b2}};
    auto diag = diagram_from_generators(m, t2, objects, forward, backward);
    ZigzagComposite r;
    r.filled = tower.C(2).find_object(diag);
    if (r.filled == kNone) throw ConsistencyError("composite zig-zag square is not an object of C_2");
    r.outer = tower.face(2, 1).obj(r.filled);
    r.backward = c1.diagrams[r.outer][bwd];
    return r;
}

Subcategory mapping_category(CnTower& tower, ObjId x, ObjId y) {
    const auto& m = tower.carrier();
    auto n = static_cast<ObjId>(m.object_count());
    if (x < 0 || x >= n || y < 0 || y >= n) throw InputError("mapping_category: unknown object");
    return fiber(std::vector<Functor>{tower.face(1, 1), tower.face(1, 0)},
                 std::vector<ObjId>{c0_object(tower, x), c0_object(tower, y)});
}

TruncatedSimplicialSet hom_space(CnTower& tower, ObjId x, ObjId y, int max_dim) {
    return truncated_nerve(*mapping_category(tower, x, y).category, max_dim);
}

// ----------------------------------------------------------------------------
// Segal maps

SegalMap segal_map(const CatPtr& level_n, const std::vector<Functor>& spines, const Functor& d0,
                   const Functor& d1) {
    if (spines.empty()) throw InputError("segal_map: no spine functors");
    const int n = static_cast<int>(spines.size());
    auto ip = iterate_product(spines.front().target, d0, d1, n);
    SegalMap r;
    r.products = ip.products;
    r.target = ip.top();
    Functor acc = spines[0];
    for (int k = 2; k <= n; ++k) acc = pair_into(ip.products[k - 2], acc, spines[k - 1]);
    if (acc.source != level_n && !(*acc.source == *level_n)) throw InputError("segal_map: spine source mismatch");
    r.map = acc;
    r.check = check_equivalence(acc);
    return r;
}

SegalResult segal_check(CnTower& tower, int n) {
    if (n < 1) throw InputError("segal_check: degree must be at least 1");
    std::vector<Functor> spines;
    for (int i = 1; i <= n; ++i) {
        spines.push_back(precompose(tower.C(n), tower.C(1), cosimplicial_T({i - 1, i}, n)));
    }
    auto sm = segal_map(tower.C(n).category, spines, tower.face(1, 0), tower.face(1, 1));
    SegalResult r;
    r.n = n;
    r.source_objects = tower.C(n).category->object_count();
    r.target_objects = sm.target->object_count();
    std::set<ObjId> seen(sm.map.on_objects.begin(), sm.map.on_objects.end());
    r.injective_on_objects = seen.size() == sm.map.on_objects.size();
    r.check = sm.check;
    return r;
}

}  // namespace pbc
