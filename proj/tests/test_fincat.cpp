#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracle.hpp"
#include "pbc/fincat.hpp"

using namespace pbc;

namespace {

CatPtr chain3() { return ordinal_category(2); }

CatPtr diamond() {
    // b < l, b < r, l < t, r < t
    std::vector<std::vector<bool>> le = {
        {1, 1, 1, 1}, {0, 1, 0, 1}, {0, 0, 1, 1}, {0, 0, 0, 1}};
    return poset_category({"b", "l", "r", "t"}, [le](int a, int b) { return le[a][b]; });
}

CatPtr iso_pair() {
    CategoryBuilder b;
    ObjId x = b.add_object("x");
    ObjId y = b.add_object("y");
    MorId f = b.add_morphism("f", x, y);
    MorId g = b.add_morphism("g", y, x);
    b.set_compose(g, f, 0);  // id_x
    b.set_compose(f, g, 1);  // id_y
    return b.build();
}

}  // namespace

TEST_CASE("ordinal categories have the expected counts") {
    for (int n = 0; n <= 4; ++n) {
        auto c = ordinal_category(n);
        CHECK(c->object_count() == static_cast<std::size_t>(n + 1));
        CHECK(c->morphism_count() == static_cast<std::size_t>((n + 1) * (n + 2) / 2));
        CHECK(validate_category(*c).empty());
    }
    CHECK(terminal_category()->morphism_count() == 1);
    CHECK(empty_category()->object_count() == 0);
    CHECK(discrete_category(3)->morphism_count() == 3);
}

TEST_CASE("composition table of a poset is the order") {
    auto c = chain3();
    MorId u = *c->find_morphism("0<1");
    MorId v = *c->find_morphism("1<2");
    CHECK(c->compose(v, u) == *c->find_morphism("0<2"));
    CHECK(c->compose(u, v) == kNone);
    CHECK(c->compose(c->identity(1), u) == u);
    CHECK(c->hom(2, 0).empty());
    CHECK(c->hom(0, 2).size() == 1);
}

TEST_CASE("walking isomorphism and inverses") {
    auto c = iso_pair();
    REQUIRE(validate_category(*c).empty());
    auto f = *c->find_morphism("f");
    REQUIRE(inverse_of(*c, f).has_value());
    CHECK(*inverse_of(*c, f) == *c->find_morphism("g"));
    auto isos = isomorphisms(*c);
    CHECK(std::count(isos.begin(), isos.end(), true) == 4);
    CHECK(find_loop(*c).has_value());
    CHECK_FALSE(find_loop(*chain3()).has_value());
}

TEST_CASE("validate_category reports a broken table") {
    CategoryBuilder b;
    ObjId x = b.add_object("x");
    ObjId y = b.add_object("y");
    ObjId z = b.add_object("z");
    MorId f = b.add_morphism("f", x, y);
    MorId g = b.add_morphism("g", y, z);
    (void)f;
    (void)g;
    auto c = b.build();  // g∘f has no entry
    CHECK_FALSE(validate_category(*c).empty());
}

TEST_CASE("opposite is an involution and combine counts") {
    auto c = diamond();
    auto oo = opposite(*opposite(*c));
    CHECK(*oo == *c);
    auto prod = combine(*c, *chain3(), CombineMode::product);
    CHECK(prod->object_count() == 12);
    CHECK(prod->morphism_count() == c->morphism_count() * 6);
    CHECK(validate_category(*prod).empty());
    auto co = combine(*c, *chain3(), CombineMode::coproduct);
    CHECK(co->object_count() == 7);
    CHECK(co->morphism_count() == c->morphism_count() + 6);
}

TEST_CASE("functor enumeration matches monotone map counts") {
    Budget budget(1'000'000);
    auto all = [](MorId, MorId) { return true; };
    // monotone maps [m] -> [n] number C(m+n+1, m+1)
    CHECK(enumerate_functors(ordinal_category(1), ordinal_category(1), all, budget).size() == 3);
    CHECK(enumerate_functors(ordinal_category(1), ordinal_category(2), all, budget).size() == 6);
    CHECK(enumerate_functors(ordinal_category(2), ordinal_category(2), all, budget).size() == 10);
    auto fs = enumerate_functors(diamond(), diamond(), all, budget);
    for (const auto& f : fs) CHECK(validate_functor(f).empty());
    // identity, swap and the two constants
    CHECK(enumerate_functors(iso_pair(), iso_pair(), all, budget).size() == 4);
}

TEST_CASE("functor composition and inverses") {
    Budget budget(100000);
    auto all = [](MorId, MorId) { return true; };
    auto fs = enumerate_functors(iso_pair(), iso_pair(), all, budget);
    int strict = 0;
    for (const auto& f : fs) {
        if (!is_strict_isomorphism(f)) continue;
        ++strict;
        CHECK(compose(inverse_functor(f), f) == identity_functor(f.source));
    }
    CHECK(strict == 2);
}

TEST_CASE("natural transformations between monotone maps") {
    auto id = identity_functor(ordinal_category(1));
    auto c0 = functor_from_morphisms(ordinal_category(1), ordinal_category(1), {0, 0, 0});
    // const_0 => id exists, id => const_0 does not
    CHECK(enumerate_nat_trans(c0, id).size() == 1);
    CHECK(enumerate_nat_trans(id, c0).empty());
    auto t = enumerate_nat_trans(c0, id).front();
    CHECK(validate_nat_transformation(t).empty());
    auto tt = vertical_compose(identity_transformation(id), t);
    CHECK(tt.components == t.components);
}

TEST_CASE("pushouts in a poset are joins") {
    auto c = diamond();
    auto p = oracle::poset_of(*c);
    for (MorId f = 0; f < static_cast<MorId>(c->morphism_count()); ++f) {
        for (MorId g = 0; g < static_cast<MorId>(c->morphism_count()); ++g) {
            if (c->source(f) != c->source(g)) continue;
            auto po = pushout(*c, f, g);
            auto j = oracle::join(p, c->target(f), c->target(g));
            REQUIRE(po.has_value() == j.has_value());
            if (po) {
                CHECK(po->apex == *j);
                CHECK(is_pushout(*c, f, g, po->first, po->second));
            }
        }
    }
    // l and r have no common lower bound in the opposite order
    auto op = opposite(*c);
    auto bl = *op->find_morphism("l<t");
    auto br = *op->find_morphism("r<t");
    auto po = pushout(*op, bl, br);
    REQUIRE(po);
    CHECK(op->object_name(po->apex) == "b");
}

TEST_CASE("missing pushout in a poset without joins") {
    // x, y < a, b: two minimal upper bounds
    std::vector<std::vector<bool>> le = {{1, 0, 1, 1, 1}, {0, 1, 1, 1, 1}, {0, 0, 1, 0, 0}, {0, 0, 0, 1, 0},
                                         {0, 0, 0, 0, 1}};
    auto c = poset_category({"x", "y", "a", "b", "z"}, [le](int a, int b) { return le[a][b]; });
    auto xa = *c->find_morphism("x<a");
    auto xb = *c->find_morphism("x<b");
    CHECK_FALSE(pushout(*c, xa, xb).has_value());
}

TEST_CASE("fiber product counts") {
    auto c = ordinal_category(1);
    auto id = identity_functor(c);
    auto fp = fiber_product(id, id);
    CHECK(fp.category->object_count() == 2);
    CHECK(fp.category->morphism_count() == 3);
    auto to_point = functor_from_morphisms(c, terminal_category(), {0, 0, 0});
    auto square = fiber_product(to_point, to_point);
    CHECK(square.category->object_count() == 4);
    CHECK(square.category->morphism_count() == 9);
    auto pr = pair_into(square, id, id);
    CHECK(validate_functor(pr).empty());
    CHECK(compose(square.first, pr) == id);
}

TEST_CASE("fibers and subcategories") {
    auto c = diamond();
    auto to_point = functor_from_morphisms(c, terminal_category(), std::vector<MorId>(c->morphism_count(), 0));
    auto f = fiber(to_point, 0);
    CHECK(*f.category == *c);
    std::vector<bool> keep_obj = {true, true, false, false};
    std::vector<bool> keep_mor(c->morphism_count(), false);
    for (MorId m = 0; m < static_cast<MorId>(c->morphism_count()); ++m) {
        keep_mor[m] = keep_obj[c->source(m)] && keep_obj[c->target(m)];
    }
    auto s = subcategory(c, keep_obj, keep_mor);
    CHECK(s.category->object_count() == 2);
    CHECK(s.category->morphism_count() == 3);
    CHECK(validate_functor(s.inclusion).empty());
}

TEST_CASE("isomorphism search and equivalences") {
    auto a = diamond();
    auto b = combine(*ordinal_category(1), *ordinal_category(1), CombineMode::product);
    auto iso = find_isomorphism(a, b);
    REQUIRE(iso);
    CHECK(is_strict_isomorphism(*iso));
    CHECK_FALSE(find_isomorphism(a, chain3()));
    auto to_point = functor_from_morphisms(iso_pair(), terminal_category(), {0, 0, 0, 0});
    CHECK(check_equivalence(to_point).holds);
    auto incl = functor_from_morphisms(terminal_category(), discrete_category(2), {0});
    CHECK_FALSE(check_equivalence(incl).holds);
}

TEST_CASE("adjoint search") {
    // inclusion {1} -> [1] has a left adjoint (constant 1) since 1 is terminal
    auto incl = functor_from_morphisms(terminal_category(), ordinal_category(1), {2});
    auto left = find_left_adjoint(incl);
    REQUIRE(left);
    CHECK(verify_adjunction(*left));
    auto right = find_right_adjoint(incl);
    CHECK_FALSE(right.has_value());
    auto incl0 = functor_from_morphisms(terminal_category(), ordinal_category(1), {0});
    auto r0 = find_right_adjoint(incl0);
    REQUIRE(r0);
    CHECK(verify_adjunction(*r0));
}

TEST_CASE("budget guard") {
    Budget tiny(3);
    auto all = [](MorId, MorId) { return true; };
    CHECK_THROWS_AS(enumerate_functors(ordinal_category(3), ordinal_category(3), all, tiny), BudgetExceeded);
}

TEST_CASE("diagram categories and precomposition") {
    Budget budget(1'000'000);
    auto all = [](MorId, MorId) { return true; };
    auto shape = ordinal_category(1);
    auto target = chain3();
    auto fs = enumerate_functors(shape, target, all, budget);
    std::vector<std::vector<MorId>> ds;
    for (const auto& f : fs) ds.push_back(f.on_morphisms);
    std::vector<bool> allowed(target->morphism_count(), true);
    auto namer = [](const std::vector<MorId>& d) { return pack_key(d); };
    auto arrows = build_diagram_category(shape, target, ds, allowed, namer, budget);
    CHECK(arrows.category->object_count() == 6);
    CHECK(validate_category(*arrows.category).empty());
    // the arrow category of [2] is a poset; count its morphisms with the order oracle
    auto p = oracle::poset_of(*target);
    long expected = 0;
    for (const auto& a : ds) {
        for (const auto& b : ds) {
            ObjId a0 = target->source(a[0]), a1 = target->source(a[2]);
            ObjId b0 = target->source(b[0]), b1 = target->source(b[2]);
            expected += p.le[a0][b0] && p.le[a1][b1];
        }
    }
    CHECK(static_cast<long>(arrows.category->morphism_count()) == expected);

    std::vector<std::vector<MorId>> objs;
    for (int x = 0; x < 3; ++x) objs.push_back({target->identity(x)});
    auto points = build_diagram_category(terminal_category(), target, objs, allowed, namer, budget);
    auto src = functor_from_morphisms(terminal_category(), shape, {0});
    auto restrict = precompose(arrows, points, src);
    CHECK(validate_functor(restrict).empty());
}
