#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "pbc/relcat.hpp"
#include "pbc/weiss.hpp"

namespace pbc {

/// Contents of a category spec file.
struct SpecFile {
    int version = 1;
    std::string name;
    CatPtr carrier;
    /// Generating relation when the poset shortcut was used.
    std::optional<std::vector<std::pair<std::string, std::string>>> poset;
    std::optional<WideSubcategory> weq;
    std::optional<WideSubcategory> tcof;
    std::optional<FactorizationScheme> factorization;
    std::optional<BrownStructure> brown;
};

/// Throws InputError with a line number or field path on malformed input.
SpecFile parse_spec_text(std::string_view text);
SpecFile parse_spec(const std::string& path);
std::string serialize_spec(const SpecFile& spec);

RelativeCategory relative_of(const SpecFile& spec);
/// The PBC described by the file. Brown blocks go through brown_to_pbc; an absent
/// factorization is derived, or left empty when no scheme exists.
PBCStructure pbc_of(const SpecFile& spec);

/// A spec for the given structure, written with an explicit composition table.
SpecFile spec_from_pbc(const PBCStructure& pbc, std::string name, bool with_factorization = false);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::uint64_t h);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// DOT export

/// Objects as nodes, indecomposable non-identity morphisms as edges; morphisms in
/// `dashed` (if given) are drawn dashed.
std::string dot_category(const FinCategory& c, const WideSubcategory* dashed = nullptr,
                         const std::string& graph_name = "C");

/// An object of C_n drawn on the (p, q) grid; degree 2 gives the pentagon layout.
std::string dot_cn_object(const DiagramCategory& level, int n, ObjId x);

}  // namespace pbc
