#include "pbc/relcat.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace pbc {

WideSubcategory WideSubcategory::all(const FinCategory& c) {
    return {std::vector<bool>(c.morphism_count(), true)};
}

WideSubcategory WideSubcategory::identities(const FinCategory& c) {
    WideSubcategory w{std::vector<bool>(c.morphism_count(), false)};
    for (ObjId x = 0; x < static_cast<ObjId>(c.object_count()); ++x) w.member[c.identity(x)] = true;
    return w;
}

WideSubcategory WideSubcategory::isomorphisms(const FinCategory& c) {
    return {pbc::isomorphisms(c)};
}

std::size_t WideSubcategory::size() const {
    return static_cast<std::size_t>(std::count(member.begin(), member.end(), true));
}

Report check_wide_subcategory(const FinCategory& c, const WideSubcategory& w, std::string_view label) {
    Report report;
    const std::string name(label);
    if (w.member.size() != c.morphism_count()) {
        report.push_back({"wide-subcategory", name + " membership has the wrong size"});
        return report;
    }
    for (ObjId x = 0; x < static_cast<ObjId>(c.object_count()); ++x) {
        if (!w.contains(c.identity(x))) {
            report.push_back({"wide-subcategory", name + " misses identity " + c.morphism_name(c.identity(x))});
        }
    }
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        if (!w.contains(f)) continue;
        for (MorId g : c.out(c.target(f))) {
            if (w.contains(g) && !w.contains(c.compose(g, f))) {
                report.push_back({"wide-subcategory", name + " not closed under composition at (" +
                                                          c.morphism_name(g) + ", " + c.morphism_name(f) + ")"});
            }
        }
    }
    return report;
}

Report check_relative_category(const RelativeCategory& rc) {
    return check_wide_subcategory(*rc.carrier, rc.weq, "weq");
}

Report check_two_out_of_three(const RelativeCategory& rc) {
    Report report;
    const auto& c = *rc.carrier;
    const auto& w = rc.weq;
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        for (MorId g : c.out(c.target(f))) {
            MorId gf = c.compose(g, f);
            int count = w.contains(f) + w.contains(g) + w.contains(gf);
            if (count == 2) {
                report.push_back({"two-out-of-three", "(" + c.morphism_name(f) + ", " + c.morphism_name(g) +
                                                          ") with composite " + c.morphism_name(gf)});
            }
        }
    }
    return report;
}

// ----------------------------------------------------------------------------
// Arrow category

ArrowCategory arrow_category(const FinCategory& c, const WideSubcategory& w) {
    ArrowCategory ac;
    ac.object_of_morphism.assign(c.morphism_count(), kNone);
    CategoryBuilder b;
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        if (!w.contains(f)) continue;
        ac.object_of_morphism[f] = b.add_bare_object(c.morphism_name(f));
        ac.object_to_morphism.push_back(f);
    }
    std::map<SquareKey, MorId> lookup;
    std::vector<MorId> identities(ac.object_to_morphism.size(), kNone);
    for (std::size_t a = 0; a < ac.object_to_morphism.size(); ++a) {
        MorId f = ac.object_to_morphism[a];
        for (std::size_t bb = 0; bb < ac.object_to_morphism.size(); ++bb) {
            MorId g = ac.object_to_morphism[bb];
            for (MorId u : c.hom(c.source(f), c.source(g))) {
                if (!w.contains(u)) continue;
                MorId gu = c.compose(g, u);
                for (MorId v : c.hom(c.target(f), c.target(g))) {
                    if (!w.contains(v) || c.compose(v, f) != gu) continue;
                    SquareKey key{f, g, u, v};
                    MorId id = b.add_morphism("(" + c.morphism_name(u) + "," + c.morphism_name(v) + ")",
                                              static_cast<ObjId>(a), static_cast<ObjId>(bb));
                    ac.squares.push_back(key);
                    lookup.emplace(key, id);
                    if (a == bb && c.is_identity(u) && c.is_identity(v)) identities[a] = id;
                }
            }
        }
    }
    for (std::size_t a = 0; a < identities.size(); ++a) b.set_identity(static_cast<ObjId>(a), identities[a]);
    b.compose_all([&](MorId t, MorId s) {
        const auto& first = ac.squares[s];
        const auto& second = ac.squares[t];
        SquareKey key{first[0], second[1], c.compose(second[2], first[2]), c.compose(second[3], first[3])};
        auto it = lookup.find(key);
        return it == lookup.end() ? kNone : it->second;
    });
    ac.category = b.build(false);
    return ac;
}

// ----------------------------------------------------------------------------
// PBC axioms

namespace {

bool valid_morphism(const FinCategory& c, MorId f, ObjId src, ObjId tgt) {
    return f >= 0 && f < static_cast<MorId>(c.morphism_count()) && c.source(f) == src && c.target(f) == tgt;
}

std::string square_name(const FinCategory& c, const SquareKey& k) {
    return "square " + c.morphism_name(k[0]) + " -> " + c.morphism_name(k[1]) + " via (" +
           c.morphism_name(k[2]) + ", " + c.morphism_name(k[3]) + ")";
}

}  // namespace

Report check_factorization(const PBCStructure& pbc) {
    Report report;
    const auto& c = pbc.carrier();
    const auto& weq = pbc.weq();
    const auto& tcof = pbc.tcof;
    const auto& fact = pbc.fact;
    std::vector<bool> good(c.morphism_count(), false);
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        if (!weq.contains(f)) continue;
        const std::string at = " at " + c.morphism_name(f);
        if (f >= static_cast<MorId>(fact.entries.size()) || !fact.entries[f]) {
            report.push_back({"axiom4", "no factorization" + at});
            continue;
        }
        const auto& e = *fact.entries[f];
        if (e.mid < 0 || e.mid >= static_cast<ObjId>(c.object_count()) ||
            !valid_morphism(c, e.c, c.source(f), e.mid) || !valid_morphism(c, e.w, e.mid, c.target(f)) ||
            !valid_morphism(c, e.s, c.target(f), e.mid)) {
            report.push_back({"axiom4", "factorization data has the wrong endpoints" + at});
            continue;
        }
        bool ok = true;
        auto fail = [&](const std::string& what) {
            report.push_back({"axiom4", what + at});
            ok = false;
        };
        if (c.compose(e.w, e.c) != f) fail("w∘c != f");
        if (c.compose(e.w, e.s) != c.identity(c.target(f))) fail("w∘s != id");
        if (!tcof.contains(e.c)) fail("c not a trivial cofibration");
        if (!tcof.contains(e.s)) fail("s not a trivial cofibration");
        if (!weq.contains(e.w)) fail("w not a weak equivalence");
        good[f] = ok;
    }
    ArrowCategory ac = arrow_category(c, weq);
    const auto& a = *ac.category;
    std::vector<MorId> mu(ac.squares.size(), kNone);
    for (std::size_t k = 0; k < ac.squares.size(); ++k) {
        const auto& key = ac.squares[k];
        auto [f, g, u, v] = key;
        if (!good[f] || !good[g]) continue;
        auto it = fact.mu.find(key);
        if (it == fact.mu.end()) {
            report.push_back({"axiom4", "no mid morphism for " + square_name(c, key)});
            continue;
        }
        const auto& ef = *fact.entries[f];
        const auto& eg = *fact.entries[g];
        MorId m = it->second;
        if (!valid_morphism(c, m, ef.mid, eg.mid)) {
            report.push_back({"axiom4", "mid morphism has the wrong endpoints for " + square_name(c, key)});
            continue;
        }
        mu[k] = m;
        if (!weq.contains(m)) report.push_back({"axiom4", "mid morphism not a weak equivalence for " + square_name(c, key)});
        if (c.compose(m, ef.c) != c.compose(eg.c, u)) report.push_back({"axiom4", "c-square fails for " + square_name(c, key)});
        if (c.compose(v, ef.w) != c.compose(eg.w, m)) report.push_back({"axiom4", "w-square fails for " + square_name(c, key)});
        if (c.compose(m, ef.s) != c.compose(eg.s, v)) report.push_back({"axiom4", "s-square fails for " + square_name(c, key)});
    }
    for (ObjId x = 0; x < static_cast<ObjId>(a.object_count()); ++x) {
        MorId f = ac.object_to_morphism[x];
        MorId id = a.identity(x);
        if (mu[id] != kNone && mu[id] != c.identity(fact.entries[f]->mid)) {
            report.push_back({"axiom4", "mid morphism of the identity square is not an identity at " + c.morphism_name(f)});
        }
    }
    for (MorId s = 0; s < static_cast<MorId>(a.morphism_count()); ++s) {
        if (mu[s] == kNone) continue;
        for (MorId t : a.out(a.target(s))) {
            MorId ts = a.compose(t, s);
            if (mu[t] == kNone || mu[ts] == kNone) continue;
            if (mu[ts] != c.compose(mu[t], mu[s])) {
                report.push_back({"axiom4", "mid morphisms do not compose: " + square_name(c, ac.squares[t]) +
                                                " after " + square_name(c, ac.squares[s])});
            }
        }
    }
    return report;
}

Report check_pbc(const PBCStructure& pbc) {
    Report report;
    const auto& c = pbc.carrier();
    auto append = [&](Report r) { report.insert(report.end(), r.begin(), r.end()); };
    append(check_wide_subcategory(c, pbc.weq(), "weq"));
    append(check_wide_subcategory(c, pbc.tcof, "tcof"));
    if (!report.empty()) return report;

    auto iso = isomorphisms(c);
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        if (iso[f] && !pbc.weq().contains(f)) report.push_back({"axiom1", "isomorphism " + c.morphism_name(f) + " not in weq"});
        if (iso[f] && !pbc.tcof.contains(f)) report.push_back({"axiom1", "isomorphism " + c.morphism_name(f) + " not in tcof"});
        if (pbc.tcof.contains(f) && !pbc.weq().contains(f)) {
            report.push_back({"axiom1", "trivial cofibration " + c.morphism_name(f) + " not in weq"});
        }
    }
    for (auto& issue : check_two_out_of_three(pbc.rel)) report.push_back({"axiom2", issue.detail});
    for (MorId i = 0; i < static_cast<MorId>(c.morphism_count()); ++i) {
        if (!pbc.tcof.contains(i)) continue;
        for (MorId g : c.out(c.source(i))) {
            auto po = pushout(c, i, g);
            if (!po) {
                report.push_back({"axiom3", "no pushout of " + c.morphism_name(i) + " along " + c.morphism_name(g)});
            } else if (!pbc.tcof.contains(po->second)) {
                report.push_back({"axiom3", "cobase change of " + c.morphism_name(i) + " along " +
                                                c.morphism_name(g) + " is not a trivial cofibration"});
            }
        }
    }
    append(check_factorization(pbc));
    return report;
}

FactorizationScheme trivial_factorization(const FinCategory& c, const WideSubcategory& weq) {
    FactorizationScheme s;
    s.entries.assign(c.morphism_count(), std::nullopt);
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        if (!weq.contains(f)) continue;
        MorId id = c.identity(c.target(f));
        s.entries[f] = FactorEntry{c.target(f), f, id, id};
    }
    ArrowCategory ac = arrow_category(c, weq);
    for (const auto& key : ac.squares) s.mu.emplace(key, key[3]);
    return s;
}

std::optional<FactorizationScheme> derive_factorization(const RelativeCategory& rel,
                                                        const WideSubcategory& tcof, Budget* budget) {
    const auto& c = *rel.carrier;
    const auto& weq = rel.weq;
    Budget local;
    Budget& bud = budget ? *budget : local;
    bool weq_in_tcof = true;
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        if (weq.contains(f) && !tcof.contains(f)) weq_in_tcof = false;
    }
    if (weq_in_tcof) return trivial_factorization(c, weq);

    // General search: candidate (mid, c, w, s) per weak equivalence, then mid morphisms.
    std::vector<MorId> targets;
    std::vector<std::vector<FactorEntry>> candidates;
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        if (!weq.contains(f)) continue;
        std::vector<FactorEntry> list;
        ObjId a = c.source(f);
        ObjId b = c.target(f);
        if (tcof.contains(f)) list.push_back({b, f, c.identity(b), c.identity(b)});
        for (ObjId m = 0; m < static_cast<ObjId>(c.object_count()); ++m) {
            for (MorId cf : c.hom(a, m)) {
                if (!tcof.contains(cf)) continue;
                for (MorId wf : c.hom(m, b)) {
                    if (!weq.contains(wf) || c.compose(wf, cf) != f) continue;
                    for (MorId sf : c.hom(b, m)) {
                        bud.charge();
                        if (!tcof.contains(sf) || c.compose(wf, sf) != c.identity(b)) continue;
                        FactorEntry e{m, cf, wf, sf};
                        bool dup = std::any_of(list.begin(), list.end(), [&](const FactorEntry& o) {
                            return o.mid == e.mid && o.c == e.c && o.w == e.w && o.s == e.s;
                        });
                        if (!dup) list.push_back(e);
                    }
                }
            }
        }
        if (list.empty()) return std::nullopt;
        targets.push_back(f);
        candidates.push_back(std::move(list));
    }
    ArrowCategory ac = arrow_category(c, weq);
    FactorizationScheme scheme;
    scheme.entries.assign(c.morphism_count(), std::nullopt);
    std::optional<FactorizationScheme> found;

    auto try_mu = [&]() {
        auto allowed = [&](MorId sq, MorId m) {
            const auto& key = ac.squares[sq];
            const auto& ef = *scheme.entries[key[0]];
            const auto& eg = *scheme.entries[key[1]];
            if (c.source(m) != ef.mid || c.target(m) != eg.mid) return false;
            if (ac.category->is_identity(sq)) return m == c.identity(ef.mid);
            return weq.contains(m) && c.compose(m, ef.c) == c.compose(eg.c, key[2]) &&
                   c.compose(key[3], ef.w) == c.compose(eg.w, m) &&
                   c.compose(m, ef.s) == c.compose(eg.s, key[3]);
        };
        for_each_functor(ac.category, rel.carrier, allowed, [&](const Functor& fn) {
            FactorizationScheme out = scheme;
            for (std::size_t k = 0; k < ac.squares.size(); ++k) out.mu.emplace(ac.squares[k], fn.mor(static_cast<MorId>(k)));
            found = std::move(out);
            return false;
        }, bud);
    };

    std::function<void(std::size_t)> choose = [&](std::size_t k) {
        if (found) return;
        if (k == targets.size()) {
            try_mu();
            return;
        }
        for (const auto& e : candidates[k]) {
            bud.charge();
            scheme.entries[targets[k]] = e;
            choose(k + 1);
            if (found) return;
        }
        scheme.entries[targets[k]] = std::nullopt;
    };
    choose(0);
    return found;
}

PBCStructure make_pbc(CatPtr carrier, WideSubcategory weq, WideSubcategory tcof) {
    PBCStructure p{{std::move(carrier), std::move(weq)}, std::move(tcof), {}};
    auto scheme = derive_factorization(p.rel, p.tcof);
    if (scheme) {
        p.fact = std::move(*scheme);
    } else {
        p.fact.entries.assign(p.carrier().morphism_count(), std::nullopt);
    }
    return p;
}

// ----------------------------------------------------------------------------
// Brown categories

Report check_brown_category(const BrownStructure& b) {
    Report report;
    const auto& c = *b.rel.carrier;
    const auto n = static_cast<ObjId>(c.object_count());
    const auto& weq = b.rel.weq;
    const auto& cof = b.cof;
    auto append = [&](Report r) { report.insert(report.end(), r.begin(), r.end()); };
    append(check_wide_subcategory(c, weq, "weq"));
    append(check_wide_subcategory(c, cof, "cof"));
    if (!report.empty()) return report;

    auto iso = isomorphisms(c);
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        if (iso[f] && !weq.contains(f)) report.push_back({"axiom1", "isomorphism " + c.morphism_name(f) + " not in weq"});
        if (iso[f] && !cof.contains(f)) report.push_back({"axiom2", "isomorphism " + c.morphism_name(f) + " not a cofibration"});
    }
    for (auto& issue : check_two_out_of_three(b.rel)) report.push_back({"axiom1", issue.detail});

    for (MorId i = 0; i < static_cast<MorId>(c.morphism_count()); ++i) {
        if (!cof.contains(i)) continue;
        for (MorId g : c.out(c.source(i))) {
            auto po = pushout(c, i, g);
            if (!po) {
                report.push_back({"axiom3", "no pushout of " + c.morphism_name(i) + " along " + c.morphism_name(g)});
                continue;
            }
            if (!cof.contains(po->second)) {
                report.push_back({"axiom3", "cobase change of cofibration " + c.morphism_name(i) + " along " +
                                                c.morphism_name(g) + " is not a cofibration"});
            }
            if (weq.contains(i) && !(weq.contains(po->second) && cof.contains(po->second))) {
                report.push_back({"axiom3", "cobase change of trivial cofibration " + c.morphism_name(i) +
                                                " along " + c.morphism_name(g) + " is not trivial"});
            }
        }
    }

    bool coproducts_ok = b.coproducts.size() == static_cast<std::size_t>(n) * n;
    if (!coproducts_ok) report.push_back({"coproduct", "coproduct table has the wrong size"});
    for (ObjId x = 0; x < n && coproducts_ok; ++x) {
        for (ObjId y = 0; y < n; ++y) {
            const auto& cp = b.coproducts[x * n + y];
            const std::string pair = "(" + c.object_name(x) + ", " + c.object_name(y) + ")";
            if (cp.object == kNone) {
                report.push_back({"coproduct", "no coproduct of " + pair});
                continue;
            }
            if (!valid_morphism(c, cp.in1, x, cp.object) || !valid_morphism(c, cp.in2, y, cp.object)) {
                report.push_back({"coproduct", "injections of " + pair + " have the wrong endpoints"});
                continue;
            }
            for (ObjId q = 0; q < n; ++q) {
                std::set<std::pair<MorId, MorId>> seen;
                for (MorId h : c.hom(cp.object, q)) seen.emplace(c.compose(h, cp.in1), c.compose(h, cp.in2));
                if (seen.size() != c.hom(cp.object, q).size() ||
                    seen.size() != c.hom(x, q).size() * c.hom(y, q).size()) {
                    report.push_back({"coproduct", "universal property of " + pair + " fails at " + c.object_name(q)});
                    break;
                }
            }
        }
    }

    if (b.cylinders.size() != static_cast<std::size_t>(n)) {
        report.push_back({"cylinder", "cylinder table has the wrong size"});
    } else {
        for (ObjId x = 0; x < n; ++x) {
            const auto& cy = b.cylinders[x];
            const std::string at = " at " + c.object_name(x);
            if (cy.object < 0 || cy.object >= n || !valid_morphism(c, cy.i0, x, cy.object) ||
                !valid_morphism(c, cy.i1, x, cy.object) || !valid_morphism(c, cy.proj, cy.object, x)) {
                report.push_back({"axiom4", "cylinder data has the wrong endpoints" + at});
                continue;
            }
            if (c.compose(cy.proj, cy.i0) != c.identity(x) || c.compose(cy.proj, cy.i1) != c.identity(x)) {
                report.push_back({"axiom4", "cylinder does not factor the codiagonal" + at});
            }
            if (!weq.contains(cy.proj)) report.push_back({"axiom4", "cylinder projection not a weak equivalence" + at});
            if (!coproducts_ok) continue;
            const auto& cp = b.coproducts[x * n + x];
            if (cp.object == kNone) continue;
            MorId fold = kNone;
            for (MorId h : c.hom(cp.object, cy.object)) {
                if (c.compose(h, cp.in1) == cy.i0 && c.compose(h, cp.in2) == cy.i1) fold = h;
            }
            if (fold == kNone || !cof.contains(fold)) {
                report.push_back({"axiom4", "inclusion of the two ends is not a cofibration" + at});
            }
        }
        if (b.cylinder_morphisms.size() != c.morphism_count()) {
            report.push_back({"cylinder", "cylinder is not given on morphisms"});
        } else {
            for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
                ObjId x = c.source(f);
                ObjId y = c.target(f);
                MorId fi = b.cylinder_morphisms[f];
                const auto& cx = b.cylinders[x];
                const auto& cy = b.cylinders[y];
                if (!valid_morphism(c, fi, cx.object, cy.object)) {
                    report.push_back({"cylinder", "image of " + c.morphism_name(f) + " has the wrong endpoints"});
                    continue;
                }
                if (c.compose(fi, cx.i0) != c.compose(cy.i0, f) || c.compose(fi, cx.i1) != c.compose(cy.i1, f) ||
                    c.compose(cy.proj, fi) != c.compose(f, cx.proj)) {
                    report.push_back({"cylinder", "cylinder structure maps not natural at " + c.morphism_name(f)});
                }
                if (c.is_identity(f) && fi != c.identity(cx.object)) {
                    report.push_back({"cylinder", "identity not preserved at " + c.morphism_name(f)});
                }
                for (MorId g : c.out(y)) {
                    MorId gi = b.cylinder_morphisms[g];
                    if (valid_morphism(c, gi, cy.object, b.cylinders[c.target(g)].object) &&
                        b.cylinder_morphisms[c.compose(g, f)] != c.compose(gi, fi)) {
                        report.push_back({"cylinder", "composition not preserved at (" + c.morphism_name(g) + ", " +
                                                          c.morphism_name(f) + ")"});
                    }
                }
            }
        }
    }

    if (b.initial < 0 || b.initial >= n) {
        report.push_back({"axiom5", "no initial object"});
    } else {
        for (ObjId x = 0; x < n; ++x) {
            auto h = c.hom(b.initial, x);
            if (h.size() != 1) {
                report.push_back({"axiom5", c.object_name(b.initial) + " is not initial at " + c.object_name(x)});
            } else if (!cof.contains(h[0])) {
                report.push_back({"axiom5", "map from the initial object to " + c.object_name(x) + " is not a cofibration"});
            }
        }
    }
    return report;
}

std::vector<MorId> derive_cylinder_morphisms(const FinCategory& c, const std::vector<Cylinder>& cyl) {
    std::vector<MorId> out(c.morphism_count(), kNone);
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        const auto& cx = cyl[c.source(f)];
        const auto& cy = cyl[c.target(f)];
        if (c.is_identity(f)) {
            out[f] = c.identity(cx.object);
            continue;
        }
        for (MorId h : c.hom(cx.object, cy.object)) {
            if (c.compose(h, cx.i0) == c.compose(cy.i0, f) && c.compose(h, cx.i1) == c.compose(cy.i1, f) &&
                c.compose(cy.proj, h) == c.compose(f, cx.proj)) {
                out[f] = h;
                break;
            }
        }
    }
    return out;
}

PBCStructure brown_to_pbc(const BrownStructure& b) {
    Report report = check_brown_category(b);
    if (!report.empty()) {
        std::string msg = "not a Brown category:";
        for (const auto& issue : report) msg += " [" + issue.law + "] " + issue.detail + ";";
        throw InputError(msg);
    }
    const auto& c = *b.rel.carrier;
    const auto& weq = b.rel.weq;
    PBCStructure p;
    p.rel = b.rel;
    p.tcof.member.assign(c.morphism_count(), false);
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        p.tcof.member[f] = weq.contains(f) && b.cof.contains(f);
    }
    p.fact.entries.assign(c.morphism_count(), std::nullopt);
    std::vector<Cocone> cocones(c.morphism_count());
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        if (!weq.contains(f)) continue;
        const auto& cy = b.cylinders[c.source(f)];
        auto po = pushout(c, cy.i0, f);
        if (!po) {
            throw InputError("pushout of " + c.morphism_name(cy.i0) + " and " + c.morphism_name(f) + " does not exist");
        }
        cocones[f] = *po;
        MorId fold = kNone;
        MorId want = c.compose(f, cy.proj);
        for (MorId h : c.hom(po->apex, c.target(f))) {
            if (c.compose(h, po->first) == want && c.compose(h, po->second) == c.identity(c.target(f))) {
                fold = h;
                break;
            }
        }
        if (fold == kNone) throw ConsistencyError("no induced map from the mapping cylinder of " + c.morphism_name(f));
        p.fact.entries[f] = FactorEntry{po->apex, c.compose(po->first, cy.i1), fold, po->second};
    }
    ArrowCategory ac = arrow_category(c, weq);
    for (const auto& key : ac.squares) {
        auto [f, g, u, v] = key;
        const auto& pf = cocones[f];
        const auto& pg = cocones[g];
        MorId a = c.compose(pg.first, b.cylinder_morphisms[u]);
        MorId bb = c.compose(pg.second, v);
        MorId mid = kNone;
        for (MorId h : c.hom(pf.apex, pg.apex)) {
            if (c.compose(h, pf.first) == a && c.compose(h, pf.second) == bb) {
                mid = h;
                break;
            }
        }
        if (mid == kNone) throw ConsistencyError("no induced map between mapping cylinders for " + square_name(c, key));
        p.fact.mu.emplace(key, mid);
    }
    return p;
}

BrownStructure lattice_brown(const CatPtr& poset) {
    const auto& c = *poset;
    const auto n = static_cast<ObjId>(c.object_count());
    BrownStructure b;
    b.rel = {poset, WideSubcategory::all(c)};
    b.cof = WideSubcategory::all(c);
    auto leq = [&](ObjId x, ObjId y) { return !c.hom(x, y).empty(); };
    for (ObjId x = 0; x < n && b.initial == kNone; ++x) {
        bool bottom = true;
        for (ObjId y = 0; y < n; ++y) bottom = bottom && leq(x, y);
        if (bottom) b.initial = x;
    }
    b.coproducts.assign(static_cast<std::size_t>(n) * n, {});
    for (ObjId x = 0; x < n; ++x) {
        for (ObjId y = 0; y < n; ++y) {
            for (ObjId z = 0; z < n; ++z) {
                if (!leq(x, z) || !leq(y, z)) continue;
                bool least = true;
                for (ObjId w = 0; w < n && least; ++w) {
                    if (leq(x, w) && leq(y, w)) least = leq(z, w);
                }
                if (least) {
                    b.coproducts[x * n + y] = {z, c.hom(x, z)[0], c.hom(y, z)[0]};
                    break;
                }
            }
        }
    }
    for (ObjId x = 0; x < n; ++x) b.cylinders.push_back({x, c.identity(x), c.identity(x), c.identity(x)});
    b.cylinder_morphisms.resize(c.morphism_count());
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) b.cylinder_morphisms[f] = f;
    return b;
}

// ----------------------------------------------------------------------------
// Ken Brown

Subcategory weq_subcategory(const PBCStructure& pbc) {
    return subcategory(pbc.rel.carrier, std::vector<bool>(pbc.carrier().object_count(), true), pbc.weq().member);
}

KenBrownResult ken_brown_check(const Functor& f, const PBCStructure& pbc, const RelativeCategory& target) {
    KenBrownResult r;
    const auto& c = pbc.carrier();
    Subcategory sub = weq_subcategory(pbc);
    if (f.on_morphisms.size() != sub.category->morphism_count()) {
        throw InputError("ken_brown_check: functor is not defined on the weq subcategory");
    }
    r.hypothesis = true;
    r.conclusion = true;
    for (MorId m = 0; m < static_cast<MorId>(c.morphism_count()); ++m) {
        if (!pbc.weq().contains(m)) continue;
        bool sent = target.weq.contains(f.mor(sub.morphism_from_parent[m]));
        if (sent) continue;
        r.conclusion = false;
        r.report.push_back({"conclusion", c.morphism_name(m) + " not sent to a weak equivalence"});
        if (pbc.tcof.contains(m)) {
            r.hypothesis = false;
            r.report.push_back({"hypothesis", "trivial cofibration " + c.morphism_name(m) + " not sent to a weak equivalence"});
        }
    }
    r.flagged = r.hypothesis && !r.conclusion;
    if (r.flagged) r.report.push_back({"ken-brown", "hypothesis holds but some weak equivalence is not preserved"});
    return r;
}

// ----------------------------------------------------------------------------
// Combinators

PBCStructure pbc_combine(const PBCStructure& a, const PBCStructure& b, CombineMode mode) {
    const auto& ca = a.carrier();
    const auto& cb = b.carrier();
    PBCStructure p;
    CatPtr carrier = combine(ca, cb, mode);
    const auto m = carrier->morphism_count();
    p.rel.carrier = carrier;
    p.rel.weq.member.assign(m, false);
    p.tcof.member.assign(m, false);
    p.fact.entries.assign(m, std::nullopt);
    auto entry = [](const PBCStructure& s, MorId f) -> const std::optional<FactorEntry>& {
        static const std::optional<FactorEntry> none;
        return f < static_cast<MorId>(s.fact.entries.size()) ? s.fact.entries[f] : none;
    };
    if (mode == CombineMode::product) {
        const auto ob = cb.object_count();
        const auto mb = cb.morphism_count();
        for (MorId f = 0; f < static_cast<MorId>(ca.morphism_count()); ++f) {
            for (MorId g = 0; g < static_cast<MorId>(mb); ++g) {
                MorId fg = product_index(f, g, mb);
                p.rel.weq.member[fg] = a.weq().contains(f) && b.weq().contains(g);
                p.tcof.member[fg] = a.tcof.contains(f) && b.tcof.contains(g);
                const auto& ef = entry(a, f);
                const auto& eg = entry(b, g);
                if (p.rel.weq.member[fg] && ef && eg) {
                    p.fact.entries[fg] = FactorEntry{product_index(ef->mid, eg->mid, ob), product_index(ef->c, eg->c, mb),
                                                     product_index(ef->w, eg->w, mb), product_index(ef->s, eg->s, mb)};
                }
            }
        }
        for (const auto& [ka, ma] : a.fact.mu) {
            for (const auto& [kb, mb2] : b.fact.mu) {
                SquareKey key;
                for (int i = 0; i < 4; ++i) key[i] = product_index(ka[i], kb[i], mb);
                p.fact.mu.emplace(key, product_index(ma, mb2, mb));
            }
        }
        return p;
    }
    const auto oa = static_cast<int>(ca.object_count());
    const auto ma = static_cast<int>(ca.morphism_count());
    for (MorId f = 0; f < ma; ++f) {
        p.rel.weq.member[f] = a.weq().contains(f);
        p.tcof.member[f] = a.tcof.contains(f);
        if (const auto& e = entry(a, f)) p.fact.entries[f] = e;
    }
    for (MorId g = 0; g < static_cast<MorId>(cb.morphism_count()); ++g) {
        p.rel.weq.member[ma + g] = b.weq().contains(g);
        p.tcof.member[ma + g] = b.tcof.contains(g);
        if (const auto& e = entry(b, g)) {
            p.fact.entries[ma + g] = FactorEntry{e->mid + oa, e->c + ma, e->w + ma, e->s + ma};
        }
    }
    for (const auto& [k, v] : a.fact.mu) p.fact.mu.emplace(k, v);
    for (const auto& [k, v] : b.fact.mu) p.fact.mu.emplace(SquareKey{k[0] + ma, k[1] + ma, k[2] + ma, k[3] + ma}, v + ma);
    return p;
}

FunctorCategoryPBC pbc_functor_category(const PBCStructure& m, const RelativeCategory& shape, Budget* budget) {
    Budget local;
    Budget& bud = budget ? *budget : local;
    const auto& s = *shape.carrier;
    const auto& t = m.carrier();
    std::vector<std::vector<MorId>> diagrams;
    for_each_functor(shape.carrier, m.rel.carrier,
                     [&](MorId h, MorId k) { return !shape.weq.contains(h) || m.weq().contains(k); },
                     [&](const Functor& f) {
                         diagrams.push_back(f.on_morphisms);
                         return true;
                     },
                     bud);
    bool thin = true;
    for (ObjId x = 0; x < static_cast<ObjId>(t.object_count()); ++x) {
        for (ObjId y = 0; y < static_cast<ObjId>(t.object_count()); ++y) thin = thin && t.hom(x, y).size() <= 1;
    }
    DiagramNamer namer = [&](const std::vector<MorId>& d) {
        std::string name = "<";
        for (ObjId x = 0; x < static_cast<ObjId>(s.object_count()); ++x) {
            if (x) name += ",";
            name += t.object_name(t.source(d[s.identity(x)]));
        }
        if (!thin) {
            for (MorId h = 0; h < static_cast<MorId>(s.morphism_count()); ++h) {
                if (!s.is_identity(h)) name += "|" + t.morphism_name(d[h]);
            }
        }
        return name + ">";
    };
    FunctorCategoryPBC out;
    out.diagrams = build_diagram_category(shape.carrier, m.rel.carrier, std::move(diagrams),
                                          std::vector<bool>(t.morphism_count(), true), namer, bud);
    const auto& dc = out.diagrams;
    const auto& cat = *dc.category;
    auto& p = out.pbc;
    p.rel.carrier = dc.category;
    p.rel.weq.member.assign(cat.morphism_count(), false);
    p.tcof.member.assign(cat.morphism_count(), false);
    p.fact.entries.assign(cat.morphism_count(), std::nullopt);
    for (MorId a = 0; a < static_cast<MorId>(cat.morphism_count()); ++a) {
        const auto& comps = dc.components[a];
        p.rel.weq.member[a] = std::all_of(comps.begin(), comps.end(), [&](MorId c) { return m.weq().contains(c); });
        p.tcof.member[a] = std::all_of(comps.begin(), comps.end(), [&](MorId c) { return m.tcof.contains(c); });
    }
    auto find_transformation = [&](ObjId from, ObjId to, const std::vector<MorId>& comps) {
        for (MorId h : cat.hom(from, to)) {
            if (dc.components[h] == comps) return h;
        }
        return kNone;
    };
    const auto n = s.object_count();
    for (MorId a = 0; a < static_cast<MorId>(cat.morphism_count()); ++a) {
        if (!p.rel.weq.member[a]) continue;
        const auto& comps = dc.components[a];
        const auto& fd = dc.diagrams[cat.source(a)];
        const auto& gd = dc.diagrams[cat.target(a)];
        std::vector<FactorEntry> e(n);
        bool ok = true;
        for (std::size_t x = 0; x < n && ok; ++x) {
            const auto& ex = m.fact.entries[comps[x]];
            if (!ex) ok = false;
            else e[x] = *ex;
        }
        if (!ok) continue;
        std::vector<MorId> mid(s.morphism_count(), kNone);
        for (MorId h = 0; h < static_cast<MorId>(s.morphism_count()) && ok; ++h) {
            ObjId x = s.source(h);
            ObjId y = s.target(h);
            if (s.is_identity(h)) {
                mid[h] = t.identity(e[x].mid);
                continue;
            }
            auto fits = [&](MorId k) {
                return t.compose(k, e[x].c) == t.compose(e[y].c, fd[h]) &&
                       t.compose(gd[h], e[x].w) == t.compose(e[y].w, k) &&
                       t.compose(k, e[x].s) == t.compose(e[y].s, gd[h]);
            };
            auto it = m.fact.mu.find({comps[x], comps[y], fd[h], gd[h]});
            if (it != m.fact.mu.end() && fits(it->second)) {
                mid[h] = it->second;
                continue;
            }
            for (MorId k : t.hom(e[x].mid, e[y].mid)) {
                if (fits(k)) {
                    mid[h] = k;
                    break;
                }
            }
            if (mid[h] == kNone) ok = false;
        }
        if (!ok) continue;
        ObjId h_obj = dc.find_object(mid);
        if (h_obj == kNone) continue;
        std::vector<MorId> cc(n), ww(n), ss(n);
        for (std::size_t x = 0; x < n; ++x) {
            cc[x] = e[x].c;
            ww[x] = e[x].w;
            ss[x] = e[x].s;
        }
        FactorEntry fe{h_obj, find_transformation(cat.source(a), h_obj, cc),
                       find_transformation(h_obj, cat.target(a), ww), find_transformation(cat.target(a), h_obj, ss)};
        if (fe.c == kNone || fe.w == kNone || fe.s == kNone) continue;
        p.fact.entries[a] = fe;
    }
    ArrowCategory ac = arrow_category(cat, p.rel.weq);
    for (const auto& key : ac.squares) {
        const auto& ef = p.fact.entries[key[0]];
        const auto& eg = p.fact.entries[key[1]];
        if (!ef || !eg) continue;
        std::vector<MorId> comps(n);
        bool ok = true;
        for (std::size_t x = 0; x < n && ok; ++x) {
            auto it = m.fact.mu.find({dc.components[key[0]][x], dc.components[key[1]][x], dc.components[key[2]][x],
                                      dc.components[key[3]][x]});
            if (it == m.fact.mu.end()) ok = false;
            else comps[x] = it->second;
        }
        if (!ok) continue;
        MorId h = find_transformation(ef->mid, eg->mid, comps);
        if (h != kNone) p.fact.mu.emplace(key, h);
    }
    return out;
}

}  // namespace pbc
