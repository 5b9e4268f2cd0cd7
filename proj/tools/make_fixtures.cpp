// Regenerates fixtures/ in canonical serialized form.
#include <filesystem>
#include <iostream>

#include "pbc/io.hpp"

using namespace pbc;

namespace {

void save(const std::filesystem::path& dir, const std::string& file, const SpecFile& spec) {
    write_file((dir / file).string(), serialize_spec(spec));
    std::cout << file << "\n";
}

SpecFile poset_spec(std::string name, std::vector<std::string> objects,
                    std::vector<std::pair<std::string, std::string>> pairs) {
    std::string text = "{\"name\":\"" + name + "\",\"objects\":[";
    for (std::size_t k = 0; k < objects.size(); ++k) text += (k ? ",\"" : "\"") + objects[k] + "\"";
    text += "],\"poset\":[";
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        text += std::string(k ? "," : "") + "[\"" + pairs[k].first + "\",\"" + pairs[k].second + "\"]";
    }
    return parse_spec_text(text + "]}");
}

}  // namespace

int main(int argc, char** argv) {
    std::filesystem::path dir = argc > 1 ? argv[1] : "fixtures";
    std::filesystem::create_directories(dir / "mutants");

    save(dir, "term.json", poset_spec("TERM", {"*"}, {}));
    auto p1 = poset_spec("P1", {"0", "1"}, {{"0", "1"}});
    save(dir, "p1.json", p1);
    save(dir, "p2.json", poset_spec("P2", {"0", "1", "2"}, {{"0", "1"}, {"1", "2"}}));
    save(dir, "disc2.json", poset_spec("DISC2", {"x", "y"}, {}));

    auto disc_p1 = p1;
    disc_p1.name = "DISC(P1)";
    disc_p1.weq = WideSubcategory::identities(*p1.carrier);
    save(dir, "disc_p1.json", disc_p1);

    CategoryBuilder pb;
    ObjId x = pb.add_object("x");
    ObjId y = pb.add_object("y");
    pb.add_morphism("a", x, y);
    pb.add_morphism("b", x, y);
    SpecFile parallel;
    parallel.name = "DISC(parallel)";
    parallel.carrier = pb.build();
    parallel.weq = WideSubcategory::identities(*parallel.carrier);
    save(dir, "disc_parallel.json", parallel);

    auto diamond = poset_spec("DIAMOND", {"b", "l", "r", "t"}, {{"b", "l"}, {"b", "r"}, {"l", "t"}, {"r", "t"}});
    diamond.brown = lattice_brown(diamond.carrier);
    save(dir, "diamond_brown.json", diamond);

    auto P1 = pbc_of(p1);
    save(dir, "p1xp1.json", spec_from_pbc(pbc_combine(P1, P1, CombineMode::product), "P1xP1"));
    save(dir, "p1_plus_p1.json", spec_from_pbc(pbc_combine(P1, P1, CombineMode::coproduct), "P1+P1"));
    auto arrow = pbc_functor_category(P1, RelativeCategory{P1.rel.carrier, WideSubcategory::all(*P1.rel.carrier)});
    save(dir, "p1_arrows.json", spec_from_pbc(arrow.pbc, "P1^[1]"));
    save(dir, "p1_explicit.json", spec_from_pbc(P1, "P1-explicit", true));

    auto mixed = poset_spec("MIXED", {"0", "1", "2"}, {{"0", "1"}, {"1", "2"}});
    mixed.tcof = WideSubcategory::identities(*mixed.carrier);
    mixed.tcof->member[*mixed.carrier->find_morphism("1<2")] = true;
    save(dir, "mixed.json", mixed);

    // Mutants.
    auto bad = spec_from_pbc(P1, "P1-missing-entry", true);
    bad.factorization->entries[*p1.carrier->find_morphism("0<1")].reset();
    save(dir, "mutants/p1_bad_factorization.json", bad);
    return 0;
}
