#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "pbc/simplicial.hpp"

using namespace pbc;

namespace {

/// Levels of two incomparable points each, every point below every point of the next level.
/// Its nerve is a sphere of dimension levels - 1.
CatPtr sphere_poset(int levels) {
    std::vector<std::string> names;
    for (int i = 0; i < 2 * levels; ++i) names.push_back("v" + std::to_string(i));
    return poset_category(names, [](int a, int b) { return a == b || a / 2 < b / 2; });
}

std::vector<int> bettis(const std::vector<HomologyGroup>& hs) {
    std::vector<int> b;
    for (const auto& h : hs) b.push_back(h.betti);
    return b;
}

}  // namespace

TEST_CASE("T_n shapes") {
    for (int n = 0; n <= 6; ++n) {
        const auto& t = shape_T(n);
        CHECK(t.category->object_count() == static_cast<std::size_t>((n + 1) * (n + 2) / 2));
        CHECK(validate_category(*t.category).empty());
        CHECK_FALSE(find_loop(*t.category).has_value());
    }
    const auto& t1 = shape_T(1);
    CHECK(t1.category->object_count() == 3);
    MorId fwd = t1.arrow(t1.object_at(0, 0), t1.object_at(0, 1));
    MorId bwd = t1.arrow(t1.object_at(1, 1), t1.object_at(0, 1));
    CHECK(t1.forward[fwd]);
    CHECK(t1.backward[bwd]);
    CHECK(t1.arrow(t1.object_at(0, 1), t1.object_at(0, 0)) == kNone);
    CHECK(shape_T(0).category->morphism_count() == 1);
}

TEST_CASE("cosimplicial identities on T") {
    CHECK(cosimplicial_T({0, 1, 2}, 2) == identity_functor(shape_T(2).category));
    auto d1 = cosimplicial_T(coface_map(2, 1), 2);
    const auto& t2 = shape_T(2);
    CHECK(d1.obj(shape_T(1).object_at(0, 1)) == t2.object_at(0, 2));
    auto s0 = cosimplicial_T(codegeneracy_map(0, 0), 0);
    for (ObjId x = 0; x < 3; ++x) CHECK(s0.obj(x) == 0);
    CHECK_THROWS_AS(cosimplicial_T({1, 0}, 1), InputError);

    // all composable pairs of monotone maps with degrees <= 3
    auto monotone = [](int m, int n) {
        std::vector<MonotoneMap> out;
        MonotoneMap f(m + 1, 0);
        std::function<void(int, int)> go = [&](int i, int lo) {
            if (i > m) {
                out.push_back(f);
                return;
            }
            for (int v = lo; v <= n; ++v) {
                f[i] = v;
                go(i + 1, v);
            }
        };
        go(0, 0);
        return out;
    };
    int checked = 0;
    for (int a = 0; a <= 2; ++a) {
        for (int b = 0; b <= 3; ++b) {
            for (int c = 0; c <= 3; ++c) {
                for (const auto& f : monotone(a, b)) {
                    for (const auto& g : monotone(b, c)) {
                        MonotoneMap gf(f.size());
                        for (std::size_t i = 0; i < f.size(); ++i) gf[i] = g[f[i]];
                        CHECK(cosimplicial_T(gf, c) == compose(cosimplicial_T(g, c), cosimplicial_T(f, b)));
                        ++checked;
                    }
                }
            }
        }
    }
    CHECK(checked > 500);
}

TEST_CASE("truncated nerves") {
    auto point = truncated_nerve(*terminal_category(), 3);
    for (int n = 0; n <= 3; ++n) CHECK(point.count(n) == 1);
    CHECK(point.nondegenerate_count(1) == 0);

    auto p1 = truncated_nerve(*ordinal_category(1), 2);
    CHECK(p1.count(0) == 2);
    CHECK(p1.count(1) == 3);
    CHECK(p1.nondegenerate_count(1) == 1);
    CHECK(p1.nondegenerate_count(2) == 0);

    for (auto c : {ordinal_category(3), sphere_poset(2), discrete_category(3)}) {
        auto s = truncated_nerve(*c, 3);
        CHECK(check_simplicial_identities(s).empty());
        auto p = oracle::poset_of(*c);
        for (int n = 0; n <= 3; ++n) CHECK(static_cast<long>(s.count(n)) == oracle::count_chains(p, n));
    }
}

TEST_CASE("Smith normal form") {
    IntMatrix a(2, 2);
    a.at(0, 0) = 2;
    a.at(0, 1) = 4;
    a.at(1, 0) = 6;
    a.at(1, 1) = 8;
    auto s = smith_normal_form(a);
    REQUIRE(s.diagonal.size() == 2);
    CHECK(s.diagonal[0] == 2);
    CHECK(s.diagonal[1] == 4);
    auto d = s.u * a * s.v;
    CHECK(d.at(0, 0) == 2);
    CHECK(d.at(1, 1) == 4);
    CHECK(d.at(0, 1) == 0);
    CHECK(d.at(1, 0) == 0);

    std::mt19937 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        int r = 1 + static_cast<int>(rng() % 5), c = 1 + static_cast<int>(rng() % 5);
        IntMatrix m(r, c);
        for (auto& x : m.data) x = static_cast<int>(rng() % 7) - 3;
        auto f = smith_normal_form(m);
        auto prod = f.u * m * f.v;
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < c; ++j) {
                std::int64_t expect = (i == j && i < f.rank()) ? f.diagonal[i] : 0;
                CHECK(prod.at(i, j) == expect);
            }
        }
        for (int i = 1; i < f.rank(); ++i) CHECK(f.diagonal[i] % f.diagonal[i - 1] == 0);
    }
}

TEST_CASE("boundary squares to zero") {
    for (auto c : {ordinal_category(3), sphere_poset(3)}) {
        auto cx = normalized_chains(*c, 3);
        for (std::size_t n = 2; n < cx.boundary.size(); ++n) {
            if (cx.boundary[n].cols == 0 || cx.boundary[n - 1].rows == 0) continue;
            CHECK((cx.boundary[n - 1] * cx.boundary[n]).is_zero());
        }
    }
}

TEST_CASE("homology of small categories") {
    CHECK(bettis(homology(*terminal_category(), 2)) == std::vector<int>{1, 0, 0});
    CHECK(bettis(homology(*ordinal_category(1), 2)) == std::vector<int>{1, 0, 0});
    CHECK(bettis(homology(*discrete_category(2), 2)) == std::vector<int>{2, 0, 0});
    CHECK(bettis(homology(*sphere_poset(2), 2)) == std::vector<int>{1, 1, 0});
    CHECK(bettis(homology(*sphere_poset(3), 2)) == std::vector<int>{1, 0, 1});
    CHECK(describe(homology(*discrete_category(2), 0)[0]) == "Z^2");

    CategoryBuilder b;
    ObjId x = b.add_object("x");
    ObjId y = b.add_object("y");
    MorId f = b.add_morphism("f", x, y);
    MorId g = b.add_morphism("g", y, x);
    b.set_compose(g, f, 0);
    b.set_compose(f, g, 1);
    CHECK_THROWS_AS(homology(*b.build(), 1), InputError);
}

TEST_CASE("homology agrees with the mod-p oracle") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 3 + static_cast<int>(rng() % 4);
        std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
        for (int i = 0; i < n; ++i) {
            le[i][i] = true;
            for (int j = i + 1; j < n; ++j) le[i][j] = rng() % 3 == 0;
        }
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) le[i][j] = le[i][j] || (le[i][k] && le[k][j]);
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
        auto c = poset_category(names, [&](int i, int j) { return le[i][j]; });
        CHECK(bettis(homology(*c, 2)) == oracle::betti_mod_p(*c, 2));
    }
    CHECK(oracle::betti_mod_p(*sphere_poset(3), 2) == std::vector<int>{1, 0, 1});
}

TEST_CASE("lattices with a top are contractible") {
    std::vector<std::vector<bool>> le = {{1, 1, 1, 1}, {0, 1, 0, 1}, {0, 0, 1, 1}, {0, 0, 0, 1}};
    auto c = poset_category({"b", "l", "r", "t"}, [le](int a, int b) { return le[a][b]; });
    CHECK(bettis(homology(*c, 3)) == std::vector<int>{1, 0, 0, 0});
    CHECK(bettis(homology(*combine(*c, *ordinal_category(2), CombineMode::product), 2)) ==
          std::vector<int>{1, 0, 0});
}

TEST_CASE("homology isomorphism check") {
    auto c = sphere_poset(2);
    CHECK(homology_iso_check(identity_functor(c), 2));
    auto incl = functor_from_morphisms(terminal_category(), discrete_category(2), {0});
    CHECK_FALSE(homology_iso_check(incl, 2));
    auto to_point = functor_from_morphisms(ordinal_category(2), terminal_category(), {0, 0, 0, 0, 0, 0});
    CHECK(homology_iso_check(to_point, 2));
}

TEST_CASE("weak equivalence witnesses") {
    auto c = ordinal_category(2);
    auto w = weq_witness(identity_functor(c));
    CHECK(w.kind() == "Isomorphism");
    CHECK(verify_witness(identity_functor(c), w));

    auto incl = functor_from_morphisms(terminal_category(), discrete_category(2), {0});
    auto none = weq_witness(incl);
    CHECK(none.kind() == "None");
    CHECK(none.refuted);

    auto to_point = functor_from_morphisms(c, terminal_category(), std::vector<MorId>(c->morphism_count(), 0));
    auto adj = weq_witness(to_point);
    CHECK(adj.witnessed());
    CHECK(verify_witness(to_point, adj));
    if (adj.kind() == "Adjunction" || adj.kind() == "CatEquivalence") CHECK(homology_iso_check(to_point, 2));
}

TEST_CASE("witness cross-validation against homology") {
    // every functor [2] -> [2] that carries an adjunction or equivalence witness is a homology iso
    Budget budget(100000);
    auto c = ordinal_category(2);
    auto fs = enumerate_functors(c, c, [](MorId, MorId) { return true; }, budget);
    for (const auto& f : fs) {
        auto w = weq_witness(f);
        if (w.kind() == "Adjunction" || w.kind() == "CatEquivalence" || w.kind() == "Isomorphism") {
            CHECK(homology_iso_check(f, 2));
        }
        if (w.witnessed()) CHECK(verify_witness(f, w));
    }
}
