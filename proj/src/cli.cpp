#include "pbc/cli.hpp"

#include <chrono>
#include <sstream>

#include "json.hpp"

namespace pbc {

using json = nlohmann::ordered_json;

Status SuiteReport::status() const {
    bool unknown = false;
    for (const auto& c : checks) {
        if (c.status == Status::fail) return Status::fail;
        unknown = unknown || c.status == Status::unknown;
    }
    return unknown ? Status::unknown : Status::pass;
}

int exit_code(const SuiteReport& report) { return report.status() == Status::fail ? 1 : 0; }

namespace {

CheckResult from_report(const std::string& name, const Report& r) {
    CheckResult c{name, r.empty() ? Status::pass : Status::fail, "", ""};
    c.detail = r.empty() ? "holds" : r.front().detail;
    if (r.size() > 1) c.detail += " (+" + std::to_string(r.size() - 1) + " more)";
    return c;
}

CheckResult law_check(const std::string& name, const Report& r, const std::string& law) {
    Report matching;
    for (const auto& issue : r) {
        if (issue.law == law) matching.push_back(issue);
    }
    return from_report(name, matching);
}

void pbc_laws(std::vector<CheckResult>& out, const PBCStructure& p, const std::string& prefix = "") {
    auto r = check_pbc(p);
    for (const char* law : {"wide-subcategory", "axiom1", "axiom2", "axiom3", "axiom4"}) {
        out.push_back(law_check(prefix + law, r, law));
    }
}

bool pbc_ok(std::vector<CheckResult>& out, const PBCStructure& p) {
    auto r = check_pbc(p);
    if (r.empty()) return true;
    out.push_back({"pbc", Status::fail, "[" + r.front().law + "] " + r.front().detail, ""});
    return false;
}

std::string homology_text(const std::vector<HomologyGroup>& hs) {
    std::string s;
    for (std::size_t k = 0; k < hs.size(); ++k) {
        if (k) s += ", ";
        s += "H_" + std::to_string(k) + "=" + describe(hs[k]);
    }
    return s;
}

CheckResult homology_check(const std::string& name, const FinCategory& c, int dim) {
    CheckResult r{name, Status::unknown, "", ""};
    if (auto loop = find_loop(c)) {
        r.detail = "not loop-free (cycle through " + c.object_name(loop->front()) + ")";
        return r;
    }
    try {
        r.detail = homology_text(homology(c, dim));
        r.status = Status::pass;
    } catch (const BudgetExceeded& e) {
        r.detail = e.what();
    } catch (const std::overflow_error& e) {
        r.detail = e.what();
    }
    return r;
}

ObjId object_named(const FinCategory& c, const std::string& name, const char* what) {
    auto x = c.find_object(name);
    if (!x) throw InputError(std::string("unknown ") + what + " '" + name + "'");
    return *x;
}

std::string eq_detail(const EquivalenceCheck& e) { return e.holds ? "equivalence" : e.counterexample; }

}  // namespace

SuiteReport run_suite(const SpecFile& spec, const std::string& suite, const SuiteOptions& options) {
    auto started = std::chrono::steady_clock::now();
    SuiteReport rep;
    rep.suite = suite;
    rep.fixture = spec.name;
    rep.fixture_hash = hash_hex(fnv1a64(serialize_spec(spec)));
    auto& out = rep.checks;
    const auto& c = *spec.carrier;

    if (suite == "validate") {
        out.push_back(from_report("category", validate_category(c)));
        auto rel = relative_of(spec);
        out.push_back(from_report("relative-category", check_relative_category(rel)));
        out.push_back(from_report("two-out-of-three", check_two_out_of_three(rel)));
        if (spec.brown) {
            auto br = check_brown_category(*spec.brown);
            for (const char* law : {"wide-subcategory", "axiom1", "axiom2", "axiom3", "axiom4", "axiom5",
                                    "coproduct", "cylinder"}) {
                out.push_back(law_check(std::string("brown-") + law, br, law));
            }
            if (!br.empty()) return rep;
        }
        auto p = pbc_of(spec);
        pbc_laws(out, p);
        rep.work_units = 0;
    } else if (suite == "segal" || suite == "weiss" || suite == "main-theorem" || suite == "map-space" ||
               suite == "compose") {
        auto p = pbc_of(spec);
        if (!pbc_ok(out, p)) return rep;
        CnTower tower(p, options.budget);
        if (suite == "segal") {
            if (options.max_n < 2) throw InputError("--max-n must be at least 2");
            out.push_back(from_report("simplicial-identities",
                                      check_simplicial_identities(cn_simplicial(tower, options.max_n))));
            for (int n = 2; n <= options.max_n; ++n) {
                auto s = segal_check(tower, n);
                CheckResult r{"segal-" + std::to_string(n), s.check.holds ? Status::pass : Status::fail, "", ""};
                r.detail = "|C_" + std::to_string(n) + "|=" + std::to_string(s.source_objects) +
                           " |fiber product|=" + std::to_string(s.target_objects) +
                           (s.injective_on_objects ? " injective" : " not injective");
                if (!s.check.holds) r.detail += "; " + s.check.counterexample;
                r.witness = s.check.holds ? "CatEquivalence" : "";
                out.push_back(r);
            }
        } else if (suite == "weiss") {
            auto w = weiss_bicategory(tower, options.max_dim);
            out.push_back({"level0-discrete", w.level0_discrete ? Status::pass : Status::fail,
                           std::to_string(w.levels.levels[0]->object_count()) + " objects", ""});
            out.push_back(from_report("simplicial-identities", check_simplicial_identities(w.levels)));
            for (const auto& [n, chk] : w.tamsamani) {
                out.push_back({"tamsamani-" + std::to_string(n), chk.holds ? Status::pass : Status::fail,
                               eq_detail(chk), chk.holds ? "CatEquivalence" : ""});
            }
            if (options.max_dim >= 1) {
                out.push_back({"level1-mapping-union", w.level1_is_mapping_union ? Status::pass : Status::fail,
                               "level 1 against the mapping categories", ""});
            }
        } else if (suite == "main-theorem") {
            auto mt = main_theorem_suite(tower, options.max_dim);
            for (const auto& chk : mt.checks) out.push_back({chk.name, chk.status, chk.detail, chk.witness});
        } else if (suite == "map-space") {
            ObjId x = object_named(c, options.from, "object");
            ObjId y = object_named(c, options.to, "object");
            auto mc = mapping_category(tower, x, y);
            out.push_back({"mapping-category", Status::pass,
                           std::to_string(mc.category->object_count()) + " objects, " +
                               std::to_string(mc.category->morphism_count()) + " morphisms",
                           ""});
            auto nerve = truncated_nerve(*mc.category, options.max_dim);
            std::string counts;
            for (int n = 0; n <= options.max_dim; ++n) {
                if (n) counts += ",";
                counts += std::to_string(nerve.nondegenerate_count(n));
            }
            out.push_back({"hom-space", from_report("", check_simplicial_identities(nerve)).status,
                           "nondegenerate simplices (" + counts + ")", ""});
            out.push_back(homology_check("hom-space-homology", *mc.category, options.max_dim));
        } else {
            const auto& c1 = tower.C(1);
            ObjId z1 = object_named(*c1.category, options.z1, "zig-zag");
            ObjId z2 = object_named(*c1.category, options.z2, "zig-zag");
            auto comp = compose_zigzags(tower, z1, z2);
            out.push_back({"compose", Status::pass,
                           tower.C(2).category->object_name(comp.filled) + " with outer " +
                               c1.category->object_name(comp.outer),
                           ""});
            out.push_back({"backward-in-tcof", p.tcof.contains(comp.backward) ? Status::pass : Status::fail,
                           c.morphism_name(comp.backward), ""});
        }
        rep.work_units = tower.budget().used();
    } else if (suite == "homology") {
        out.push_back(homology_check("carrier", c, options.dim));
        auto p = pbc_of(spec);
        if (pbc_ok(out, p)) {
            CnTower tower(p, options.budget);
            out.push_back(homology_check("C_0", *tower.C(0).category, options.dim));
            out.push_back(homology_check("C_1", *tower.C(1).category, options.dim));
            rep.work_units = tower.budget().used();
        }
    } else {
        throw InputError("unknown suite '" + suite + "'");
    }
    if (options.timing) {
        rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    }
    return rep;
}

std::string emit_report(const SuiteReport& report, const std::string& format) {
    if (format == "json") {
        json j;
        j["suite"] = report.suite;
        j["fixture"] = report.fixture;
        j["fixture_hash"] = report.fixture_hash;
        j["status"] = to_string(report.status());
        json checks = json::array();
        json witnesses = json::array();
        for (const auto& c : report.checks) {
            json cj;
            cj["name"] = c.name;
            cj["status"] = to_string(c.status);
            cj["detail"] = c.detail;
            checks.push_back(cj);
            if (!c.witness.empty()) {
                json wj;
                wj["check"] = c.name;
                wj["kind"] = c.witness;
                witnesses.push_back(wj);
            }
        }
        j["checks"] = checks;
        j["witnesses"] = witnesses;
        j["work_units"] = report.work_units;
        if (report.seconds) {
            j["timing"] = json{{"seconds", *report.seconds}};
        } else {
            j["timing"] = nullptr;
        }
        return j.dump(2) + "\n";
    }
    if (format != "text") throw InputError("unknown format '" + format + "'");
    std::ostringstream s;
    s << "suite " << report.suite << " on " << (report.fixture.empty() ? "<unnamed>" : report.fixture) << " ("
      << report.fixture_hash << ")\n";
    for (const auto& c : report.checks) {
        s << "  [" << to_string(c.status) << "] " << c.name << ": " << c.detail;
        if (!c.witness.empty()) s << " {" << c.witness << "}";
        s << "\n";
    }
    std::size_t unknown = 0;
    for (const auto& c : report.checks) unknown += c.status == Status::unknown ? 1 : 0;
    s << "status: " << to_string(report.status());
    if (unknown) s << " (" << unknown << " unknown)";
    s << "\n";
    if (report.seconds) s << "time: " << *report.seconds << " s\n";
    return s.str();
}

std::string export_dot(const SpecFile& spec, const std::string& target, const SuiteOptions& options) {
    const auto& c = *spec.carrier;
    if (target == "carrier") {
        auto p = pbc_of(spec);
        return dot_category(c, &p.tcof, spec.name.empty() ? "M" : spec.name);
    }
    auto p = pbc_of(spec);
    auto issues = check_pbc(p);
    if (!issues.empty()) throw InputError("not a PBC: [" + issues.front().law + "] " + issues.front().detail);
    CnTower tower(p, options.budget);
    if (target.rfind("level:", 0) == 0) {
        int n = std::stoi(target.substr(6));
        return dot_category(*tower.C(n).category, nullptr, "C_" + std::to_string(n));
    }
    if (target.rfind("cn:", 0) == 0) {
        auto rest = target.substr(3);
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw InputError("expected cn:N:OBJECT");
        int n = std::stoi(rest.substr(0, colon));
        const auto& level = tower.C(n);
        ObjId x = object_named(*level.category, rest.substr(colon + 1), "object of C_n");
        return dot_cn_object(level, n, x);
    }
    if (target.rfind("map:", 0) == 0) {
        auto rest = target.substr(4);
        auto comma = rest.find(',');
        if (comma == std::string::npos) throw InputError("expected map:X,Y");
        ObjId x = object_named(c, rest.substr(0, comma), "object");
        ObjId y = object_named(c, rest.substr(comma + 1), "object");
        auto mc = mapping_category(tower, x, y);
        return dot_category(*mc.category, nullptr, "map(" + rest + ")");
    }
    throw InputError("unknown export target '" + target + "'");
}

}  // namespace pbc
