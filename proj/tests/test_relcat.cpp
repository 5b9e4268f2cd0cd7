#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "pbc/relcat.hpp"

using namespace pbc;

namespace {

PBCStructure p1() {
    auto c = ordinal_category(1);
    return make_pbc(c, WideSubcategory::all(*c), WideSubcategory::all(*c));
}

PBCStructure disc(const CatPtr& c) {
    return make_pbc(c, WideSubcategory::identities(*c), WideSubcategory::identities(*c));
}

WideSubcategory with(const FinCategory& c, std::initializer_list<const char*> names) {
    auto w = WideSubcategory::identities(c);
    for (const char* n : names) w.member[*c.find_morphism(n)] = true;
    return w;
}

CatPtr diamond() {
    std::vector<std::vector<bool>> le = {{1, 1, 1, 1}, {0, 1, 0, 1}, {0, 0, 1, 1}, {0, 0, 0, 1}};
    return poset_category({"b", "l", "r", "t"}, [le](int a, int b) { return le[a][b]; });
}

}  // namespace

TEST_CASE("relative category closure") {
    auto c = ordinal_category(2);
    CHECK(check_relative_category({c, WideSubcategory::identities(*c)}).empty());
    CHECK(check_relative_category({c, WideSubcategory::all(*c)}).empty());
    auto bad = check_relative_category({c, with(*c, {"0<1", "1<2"})});
    REQUIRE_FALSE(bad.empty());
    CHECK(bad.front().detail.find("1<2") != std::string::npos);
}

TEST_CASE("two out of three") {
    auto c = ordinal_category(2);
    CHECK(check_two_out_of_three({c, WideSubcategory::all(*c)}).empty());
    CHECK(check_two_out_of_three({c, WideSubcategory::isomorphisms(*c)}).empty());
    auto r = check_two_out_of_three({c, with(*c, {"0<1", "0<2"})});
    REQUIRE_FALSE(r.empty());
    CHECK(r.front().detail.find("0<1") != std::string::npos);
    CHECK(r.front().detail.find("1<2") != std::string::npos);
}

TEST_CASE("P1 and discrete structures are PBCs") {
    CHECK(check_pbc(p1()).empty());
    CHECK(check_pbc(disc(ordinal_category(2))).empty());
    CHECK(check_pbc(disc(diamond())).empty());
    CHECK(check_pbc(disc(terminal_category())).empty());
    auto f = p1().fact.entries[*ordinal_category(1)->find_morphism("0<1")];
    REQUIRE(f);
    CHECK(f->c == *ordinal_category(1)->find_morphism("0<1"));
    CHECK(f->w == ordinal_category(1)->identity(1));
    CHECK(f->s == ordinal_category(1)->identity(1));
}

TEST_CASE("perturbing the section breaks axiom 4") {
    auto p = p1();
    MorId u = *p.carrier().find_morphism("0<1");
    p.fact.entries[u]->mid = 0;
    p.fact.entries[u]->c = p.carrier().identity(0);
    p.fact.entries[u]->w = u;
    p.fact.entries[u]->s = p.carrier().identity(1);  // wrong object
    auto r = check_pbc(p);
    CHECK(report_mentions(r, "axiom4"));
}

TEST_CASE("derive_factorization finds or rules out schemes") {
    auto c = ordinal_category(1);
    auto ids = derive_factorization({c, WideSubcategory::identities(*c)}, WideSubcategory::identities(*c));
    REQUIRE(ids);
    // weq = {ids, u}, tcof = ids: c_u = id forces w_u = u, which has no section
    auto none = derive_factorization({c, WideSubcategory::all(*c)}, WideSubcategory::identities(*c));
    CHECK_FALSE(none.has_value());
    // the same happens for 0<1<2 with tcof = {ids, 1<2}
    auto c2 = ordinal_category(2);
    CHECK_FALSE(derive_factorization({c2, WideSubcategory::all(*c2)}, with(*c2, {"1<2"})).has_value());
}

TEST_CASE("axiom failures are attributed") {
    auto c = ordinal_category(2);
    PBCStructure p = make_pbc(c, WideSubcategory::all(*c), WideSubcategory::all(*c));
    auto tc = p;
    tc.tcof.member[c->identity(2)] = false;
    CHECK(report_mentions(check_pbc(tc), "wide-subcategory"));

    auto a1 = p;
    a1.rel.weq = WideSubcategory::identities(*c);  // tcof ⊄ weq
    CHECK(report_mentions(check_pbc(a1), "axiom1"));

    auto a2 = p;
    a2.rel.weq = with(*c, {"0<1", "0<2"});
    a2.tcof = with(*c, {"0<1", "0<2"});
    CHECK(report_mentions(check_pbc(a2), "axiom2"));

    // poset with two minimal upper bounds: cobase change of x<a along x<b is missing
    std::vector<std::vector<bool>> le = {{1, 1, 1}, {0, 1, 0}, {0, 0, 1}};
    auto v = poset_category({"x", "a", "b"}, [le](int i, int j) { return le[i][j]; });
    auto a3 = make_pbc(v, WideSubcategory::all(*v), WideSubcategory::all(*v));
    CHECK(report_mentions(check_pbc(a3), "axiom3"));
}

TEST_CASE("Brown structure on a lattice") {
    auto b = lattice_brown(diamond());
    CHECK(check_brown_category(b).empty());
    auto p = brown_to_pbc(b);
    CHECK(check_pbc(p).empty());
    auto t = lattice_brown(terminal_category());
    CHECK(check_brown_category(t).empty());
    CHECK(check_pbc(brown_to_pbc(t)).empty());
}

TEST_CASE("lattice with a join removed") {
    // drop the top of the diamond: l and r have no join
    std::vector<std::vector<bool>> le = {{1, 1, 1}, {0, 1, 0}, {0, 0, 1}};
    auto v = poset_category({"b", "l", "r"}, [le](int i, int j) { return le[i][j]; });
    auto b = lattice_brown(v);
    auto r = check_brown_category(b);
    CHECK_FALSE(r.empty());
    CHECK_THROWS_AS(brown_to_pbc(b), InputError);
}

TEST_CASE("Ken Brown examples") {
    auto p = p1();
    auto sub = weq_subcategory(p);
    auto id = identity_functor(sub.category);
    RelativeCategory target{sub.category, WideSubcategory::all(*sub.category)};
    auto r = ken_brown_check(id, p, target);
    CHECK(r.hypothesis);
    CHECK(r.conclusion);
    CHECK_FALSE(r.flagged);

    auto term = terminal_category();
    auto collapse = functor_from_morphisms(sub.category, term, std::vector<MorId>(sub.category->morphism_count(), 0));
    auto rc = ken_brown_check(collapse, p, {term, WideSubcategory::all(*term)});
    CHECK(rc.hypothesis);
    CHECK(rc.conclusion);

    // into a relative category with only identities: hypothesis fails, no flag
    auto rd = ken_brown_check(id, p, {sub.category, WideSubcategory::identities(*sub.category)});
    CHECK_FALSE(rd.hypothesis);
    CHECK_FALSE(rd.flagged);
}

TEST_CASE("combinators preserve the axioms") {
    auto a = p1();
    auto prod = pbc_combine(a, a, CombineMode::product);
    CHECK(check_pbc(prod).empty());
    CHECK(prod.carrier().object_count() == 4);
    auto co = pbc_combine(a, a, CombineMode::coproduct);
    CHECK(check_pbc(co).empty());
    CHECK(co.carrier().object_count() == 4);
    CHECK(co.carrier().morphism_count() == 6);
    auto unit = pbc_combine(a, disc(terminal_category()), CombineMode::product);
    CHECK(find_isomorphism(unit.rel.carrier, a.rel.carrier).has_value());
}

TEST_CASE("functor category PBCs") {
    auto a = p1();
    auto term = terminal_category();
    auto t = pbc_functor_category(a, {term, WideSubcategory::all(*term)});
    CHECK(check_pbc(t.pbc).empty());
    CHECK(find_isomorphism(t.pbc.rel.carrier, a.rel.carrier).has_value());

    auto two = discrete_category(2);
    auto d = pbc_functor_category(a, {two, WideSubcategory::all(*two)});
    CHECK(check_pbc(d.pbc).empty());
    auto prod = pbc_combine(a, a, CombineMode::product);
    CHECK(find_isomorphism(d.pbc.rel.carrier, prod.rel.carrier).has_value());

    auto shape = ordinal_category(1);
    auto arrows = pbc_functor_category(a, {shape, WideSubcategory::identities(*shape)});
    CHECK(check_pbc(arrows.pbc).empty());
    CHECK(arrows.pbc.carrier().object_count() == 3);  // 0<=0, 0<=1, 1<=1
    CHECK(arrows.pbc.carrier().morphism_count() == 6);
}

TEST_CASE("check_pbc agrees with its sub-checks on random posets") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(rng() % 3);
        std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
        for (int i = 0; i < n; ++i) {
            le[i][i] = true;
            for (int j = i + 1; j < n; ++j) le[i][j] = rng() % 2;
        }
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) le[i][j] = le[i][j] || (le[i][k] && le[k][j]);
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
        auto c = poset_category(names, [&](int i, int j) { return le[i][j]; });
        auto p = make_pbc(c, WideSubcategory::all(*c), WideSubcategory::all(*c));
        if (!check_pbc(p).empty()) continue;
        CHECK(check_relative_category(p.rel).empty());
        CHECK(check_two_out_of_three(p.rel).empty());
    }
}
