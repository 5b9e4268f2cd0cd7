#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>

#include "doctest.h"
#include "oracle.hpp"
#include "pbc/io.hpp"
#include "pbc/weiss.hpp"

using namespace pbc;

namespace {

PBCStructure load(const std::string& file) { return pbc_of(parse_spec(std::string(PBC_FIXTURES) + "/" + file)); }

/// Object of M at grid position (p, q) of a C_n object.
ObjId at(const DiagramCategory& level, ObjId x, int p, int q, int n) {
    const auto& t = shape_T(n);
    MorId id = t.category->identity(t.object_at(p, q));
    return level.target->source(level.diagrams[x][id]);
}

oracle::Rel tcof_rel(const PBCStructure& m) {
    const auto& c = m.carrier();
    return [&m, &c](int a, int b) {
        for (MorId f : c.hom(a, b)) {
            if (m.tcof.contains(f)) return true;
        }
        return false;
    };
}

const char* kPosetFixtures[] = {"p1.json", "p2.json", "disc_p1.json", "disc2.json", "term.json",
                                "p1xp1.json", "p1_plus_p1.json", "diamond_brown.json", "mixed.json"};

}  // namespace

TEST_CASE("C_n counts agree with the brute-force oracle") {
    for (const char* file : kPosetFixtures) {
        CAPTURE(file);
        auto m = load(file);
        auto p = oracle::poset_of(m.carrier());
        CnTower tower(m);
        for (int n = 0; n <= 2; ++n) {
            CHECK(static_cast<long>(tower.C(n).category->object_count()) == oracle::count_Cn(p, tcof_rel(m), n));
        }
    }
    CnTower p1(load("p1.json"));
    CHECK(p1.C(3).category->object_count() == 34);
    CHECK(oracle::count_Cn(oracle::poset_of(p1.carrier()), tcof_rel(p1.pbc()), 3) == 34);
}

TEST_CASE("C_1 and C_0 of P1") {
    CnTower tower(load("p1.json"));
    const auto& c1 = tower.C(1);
    std::set<std::vector<int>> got;
    for (ObjId x = 0; x < static_cast<ObjId>(c1.category->object_count()); ++x) {
        got.insert({at(c1, x, 0, 0, 1), at(c1, x, 0, 1, 1), at(c1, x, 1, 1, 1)});
    }
    std::set<std::vector<int>> expected = {{0, 0, 0}, {0, 1, 0}, {0, 1, 1}, {1, 1, 0}, {1, 1, 1}};
    CHECK(got == expected);
    CHECK(tower.C(0).category->object_count() == 2);
    CHECK(tower.C(0).category->morphism_count() == 3);
    for (ObjId x = 0; x < 5; ++x) CHECK(is_cn_object(tower.pbc(), 1, c1.diagrams[x]));
    for (ObjId x = 0; x < static_cast<ObjId>(tower.C(2).category->object_count()); ++x) {
        CHECK(is_cn_object(tower.pbc(), 2, tower.C(2).diagrams[x]));
    }
}

TEST_CASE("C_1 of a discrete structure") {
    auto m = load("disc_parallel.json");
    CnTower tower(m);
    const auto& c1 = tower.C(1);
    CHECK(c1.category->object_count() == m.carrier().morphism_count());
    CHECK(c1.category->morphism_count() == c1.category->object_count());
}

TEST_CASE("simplicial structure of C") {
    for (const char* file : {"p1.json", "p2.json", "disc_parallel.json", "p1_arrows.json"}) {
        CAPTURE(file);
        CnTower tower(load(file));
        auto s = cn_simplicial(tower, 3);
        CHECK(check_simplicial_identities(s).empty());
        auto r = rezk_simplicial(tower, 3);
        CHECK(check_simplicial_identities(r).empty());
    }
    CnTower tower(load("p1.json"));
    // faces of a pentagon: inner-left, outer, inner-right edges
    const auto& c2 = tower.C(2);
    const auto& c1 = tower.C(1);
    for (ObjId x = 0; x < static_cast<ObjId>(c2.category->object_count()); ++x) {
        ObjId d0 = tower.face(2, 0).obj(x), d1 = tower.face(2, 1).obj(x), d2 = tower.face(2, 2).obj(x);
        CHECK(at(c1, d2, 0, 1, 1) == at(c2, x, 0, 1, 2));
        CHECK(at(c1, d1, 0, 1, 1) == at(c2, x, 0, 2, 2));
        CHECK(at(c1, d0, 0, 1, 1) == at(c2, x, 1, 2, 2));
        CHECK(at(c1, d1, 1, 1, 1) == at(c2, x, 2, 2, 2));
    }
    // s_0 on C_0 inserts identities
    for (ObjId m = 0; m < 2; ++m) {
        ObjId z = tower.degeneracy(0, 0).obj(m);
        for (MorId f : c1.diagrams[z]) CHECK(tower.carrier().is_identity(f));
        CHECK(tower.face(1, 0).obj(z) == m);
    }
}

TEST_CASE("Rezk nerve levels") {
    for (const char* file : {"p1.json", "p2.json", "diamond_brown.json"}) {
        auto m = load(file);
        CnTower tower(m);
        auto p = oracle::poset_of(m.carrier());
        for (int n = 0; n <= 3; ++n) {
            CHECK(static_cast<long>(tower.NR(n).category->object_count()) == oracle::count_chains(p, n));
        }
    }
    CnTower p1(load("p1.json"));
    CHECK(p1.NR(1).category->object_count() == 3);
    CHECK(p1.NR(1).category->morphism_count() == 6);
    CnTower d(load("disc_parallel.json"));
    CHECK(d.NR(1).category->object_count() == 4);
    CHECK(d.NR(1).category->morphism_count() == 4);
}

TEST_CASE("classification adjunction") {
    for (const char* file : {"p1.json", "p2.json", "disc_parallel.json", "p1_plus_p1.json"}) {
        CAPTURE(file);
        CnTower tower(load(file));
        for (int k = 0; k <= 3; ++k) {
            auto a = classification_adjoint(tower, k);
            CHECK(a.verified);
            CHECK(verify_adjunction(a.adjunction));
        }
    }
    CnTower p1(load("p1.json"));
    auto a0 = classification_adjoint(p1, 0);
    CHECK(a0.extension == identity_functor(p1.C(0).category));
    auto a2 = classification_adjoint(p1, 2);
    std::set<ObjId> image(a2.extension.on_objects.begin(), a2.extension.on_objects.end());
    CHECK(image.size() == 4);
    const auto& t2 = shape_T(2);
    for (ObjId x : image) {
        for (MorId h = 0; h < static_cast<MorId>(t2.category->morphism_count()); ++h) {
            if (t2.backward[h]) CHECK(p1.carrier().is_identity(p1.C(2).diagrams[x][h]));
        }
    }
    CHECK(homology_iso_check(classification_adjoint(p1, 1).extension, 2));
}

TEST_CASE("zig-zag composition on P1") {
    CnTower tower(load("p1.json"));
    const auto& c1 = *tower.C(1).category;
    auto z = [&](const char* name) { return *c1.find_object(name); };
    auto r = compose_zigzags(tower, z("(0,1,1)"), z("(1,1,1)"));
    CHECK(c1.object_name(r.outer) == "(0,1,1)");
    CHECK(tower.carrier().is_identity(r.backward));
    CHECK(tower.face(2, 1).obj(r.filled) == r.outer);

    for (ObjId a = 0; a < static_cast<ObjId>(c1.object_count()); ++a) {
        ObjId x = at(tower.C(1), a, 0, 0, 1), y = at(tower.C(1), a, 1, 1, 1);
        auto left = compose_zigzags(tower, identity_zigzag(tower, x), a);
        auto right = compose_zigzags(tower, a, identity_zigzag(tower, y));
        CHECK(left.outer == a);
        CHECK(right.outer == a);
        CHECK(tower.pbc().tcof.contains(left.backward));
    }
    CHECK_THROWS_AS(compose_zigzags(tower, z("(0,1,1)"), z("(0,0,0)")), InputError);
}

TEST_CASE("mapping categories") {
    CnTower p1(load("p1.json"));
    auto m01 = mapping_category(p1, 0, 1);
    CHECK(m01.category->object_count() == 1);
    CHECK(m01.category->morphism_count() == 1);
    auto m00 = mapping_category(p1, 0, 0);
    CHECK(find_isomorphism(m00.category, ordinal_category(1)).has_value());
    auto h = hom_space(p1, 0, 0, 2);
    CHECK(h.nondegenerate_count(1) == 1);
    auto hh = homology(*m00.category, 2);
    CHECK(hh[0].betti == 1);
    CHECK(hh[1].betti == 0);
    CHECK(mapping_category(p1, 1, 0).category->object_count() == 1);  // 1 -> 1 <= 0

    for (const char* file : {"disc2.json", "disc_p1.json", "disc_parallel.json"}) {
        CAPTURE(file);
        auto m = load(file);
        CnTower tower(m);
        const auto& c = m.carrier();
        for (ObjId x = 0; x < static_cast<ObjId>(c.object_count()); ++x) {
            for (ObjId y = 0; y < static_cast<ObjId>(c.object_count()); ++y) {
                auto mc = mapping_category(tower, x, y);
                CHECK(mc.category->object_count() == c.hom(x, y).size());
                CHECK(mc.category->morphism_count() == c.hom(x, y).size());
            }
        }
    }
}

TEST_CASE("Segal maps") {
    for (const char* file : kPosetFixtures) {
        CAPTURE(file);
        auto m = load(file);
        CnTower tower(m);
        auto p = oracle::poset_of(m.carrier());
        for (int n = 2; n <= 3; ++n) {
            auto s = segal_check(tower, n);
            CHECK(s.check.holds);
            CHECK(s.injective_on_objects);
            CHECK(static_cast<long>(s.target_objects) == oracle::count_zigzag_chains(p, tcof_rel(m), n));
        }
    }
    CnTower p1(load("p1.json"));
    auto s2 = segal_check(p1, 2);
    CHECK(s2.source_objects == 13);
    CHECK(s2.target_objects == 13);
    CnTower arrows(load("p1_arrows.json"));
    CHECK(segal_check(arrows, 2).check.holds);
}

TEST_CASE("Grothendieck construction") {
    auto base = ordinal_category(1);
    auto a = ordinal_category(2);
    GrothendieckInput constant{base, {a, a}, {}};
    for (MorId f = 0; f < 3; ++f) constant.transport.push_back(identity_functor(a));
    CHECK(validate_grothendieck_input(constant).empty());
    auto gr = grothendieck(constant);
    CHECK(find_isomorphism(gr.category, combine(*base, *a, CombineMode::product)).has_value());
    auto q = property_Q_report(constant);
    CHECK(q.verdict == QVerdict::witnessed);

    GrothendieckInput point{terminal_category(), {a}, {identity_functor(a)}};
    CHECK(find_isomorphism(grothendieck(point).category, a).has_value());

    auto two = discrete_category(2);
    auto term = terminal_category();
    GrothendieckInput bad{base, {two, term}, {identity_functor(two), functor_from_morphisms(term, two, {0}),
                                              identity_functor(term)}};
    CHECK(validate_grothendieck_input(bad).empty());
    CHECK(property_Q_report(bad).verdict == QVerdict::refuted);
}

TEST_CASE("Gr(P) recovers C_1") {
    for (const char* file : {"p1.json", "p2.json", "disc_parallel.json", "p1xp1.json", "mixed.json"}) {
        CAPTURE(file);
        CnTower tower(load(file));
        auto p = zigzag_functor(tower);
        CHECK(validate_grothendieck_input(p.input).empty());
        auto gr = grothendieck(p.input);
        auto iso = grothendieck_comparison(tower, p, gr);
        REQUIRE(iso);
        CHECK(is_strict_isomorphism(*iso));
        CHECK(compose(tower.face(1, 1), *iso) == gr.projection);
        CHECK(property_Q_report(p.input).verdict == QVerdict::witnessed);
    }
}

TEST_CASE("retraction of E_1 onto D_1") {
    for (const char* file : {"p1.json", "disc_parallel.json", "p1_explicit.json"}) {
        CAPTURE(file);
        CnTower tower(load(file));
        auto r = en_retraction_check(tower, 1);
        CHECK(r.ok());
        CHECK_FALSE(r.alpha_proper);
    }
    CnTower p1(load("p1.json"));
    auto r2 = en_retraction_check(p1, 2);
    CHECK(r2.extrapolated);
    CHECK(r2.ok());
    // the mixed fixture has no factorization scheme, so beta cannot be built
    CnTower mixed(load("mixed.json"));
    auto rm = en_retraction_check(mixed, 1);
    CHECK(rm.alpha_proper);
    CHECK_FALSE(rm.beta_defined);
}

TEST_CASE("Weiss bicategory") {
    for (const char* file : {"p1.json", "p2.json", "disc_parallel.json", "diamond_brown.json"}) {
        CAPTURE(file);
        CnTower tower(load(file));
        auto w = weiss_bicategory(tower, 3);
        CHECK(w.level0_discrete);
        CHECK(w.level1_is_mapping_union);
        CHECK(check_simplicial_identities(w.levels).empty());
        for (int n = 2; n <= 3; ++n) CHECK(w.tamsamani.at(n).holds);
    }
    CnTower d(load("disc_parallel.json"));
    auto w = weiss_bicategory(d, 2);
    for (int n = 0; n <= 2; ++n) CHECK(*w.levels.levels[n] == *d.C(n).category);
    CnTower p1(load("p1.json"));
    auto wp = weiss_bicategory(p1, 1);
    std::size_t total = 0;
    for (ObjId x = 0; x < 2; ++x) {
        for (ObjId y = 0; y < 2; ++y) total += mapping_category(p1, x, y).category->morphism_count();
    }
    CHECK(wp.levels.levels[1]->morphism_count() == total);
}

TEST_CASE("main theorem evidence") {
    CnTower disc(load("disc2.json"));
    auto r = main_theorem_suite(disc, 2);
    CHECK(r.verdict == Status::pass);
    CnTower p1(load("p1.json"));
    auto rp = main_theorem_suite(p1, 2);
    CHECK(rp.verdict == Status::pass);
    for (const auto& c : rp.checks) CHECK(c.status == Status::pass);

    CnTower bad(load("mutants/p1_bad_factorization.json"));
    auto rb = main_theorem_suite(bad, 1);
    CHECK(rb.verdict == Status::fail);
    CHECK(rb.checks.back().name == "retraction");
    CHECK(rb.checks.back().status == Status::fail);
}
