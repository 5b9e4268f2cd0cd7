#pragma once

#include <string>
#include <variant>

#include "pbc/fincat.hpp"

namespace pbc {

// ----------------------------------------------------------------------------
// The shapes T_n

/// T_n: pairs (p, q) with 0 <= p <= q <= n, a unique arrow (p,q) -> (p',q') iff
/// p' <= p and q <= q'.
struct TShape {
    int n = 0;
    CatPtr category;
    std::vector<std::pair<int, int>> coords;  // per object
    std::vector<bool> backward;               // (p,q) -> (p',q), p' < p
    std::vector<bool> forward;                // (p,q) -> (p,q'), q < q'

    ObjId object_at(int p, int q) const;
    /// The unique arrow a -> b, or kNone.
    MorId arrow(ObjId a, ObjId b) const;
};

TShape build_T(int n);
/// Cached instance, built once per degree.
const TShape& shape_T(int n);

/// Monotone map [m] -> [n] given by its values.
using MonotoneMap = std::vector<int>;
MonotoneMap coface_map(int n, int i);        // [n-1] -> [n], skips i
MonotoneMap codegeneracy_map(int n, int j);  // [n+1] -> [n], repeats j
bool is_monotone(const MonotoneMap& f, int n);

/// (p, q) -> (f p, f q). Throws InputError for a non-monotone f.
Functor cosimplicial_T(const MonotoneMap& f, int n);

// ----------------------------------------------------------------------------
// Truncated simplicial data

struct TruncatedSimplicialSet {
    int max_dim = 0;
    /// simplices[0][k] = {object}; simplices[n][k] = composable chain f_1..f_n.
    std::vector<std::vector<std::vector<int>>> simplices;
    std::vector<std::vector<std::vector<int>>> faces;         // faces[n][i][k], n >= 1
    std::vector<std::vector<std::vector<int>>> degeneracies;  // degeneracies[n][j][k], n < max_dim
    std::vector<std::vector<bool>> degenerate;                // per level, chain contains an identity

    std::size_t count(int n) const { return simplices[n].size(); }
    std::size_t nondegenerate_count(int n) const;
};

TruncatedSimplicialSet truncated_nerve(const FinCategory& c, int max_dim);

struct SimplicialCategoryTrunc {
    int max_dim = 0;
    std::vector<CatPtr> levels;
    std::vector<std::vector<Functor>> faces;         // faces[n][i]: level n -> n-1
    std::vector<std::vector<Functor>> degeneracies;  // degeneracies[n][j]: level n -> n+1
};

Report check_simplicial_identities(const TruncatedSimplicialSet& s);
Report check_simplicial_identities(const SimplicialCategoryTrunc& s);

// ----------------------------------------------------------------------------
// Integer homology

struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::int64_t> data;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0) {}
    std::int64_t& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    std::int64_t at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
    static IntMatrix identity(int n);
    IntMatrix operator*(const IntMatrix& o) const;
    bool is_zero() const;
};

/// U * A * V = D with D diagonal, d_1 | d_2 | ..., all positive; U and V unimodular.
struct SmithForm {
    IntMatrix u;
    IntMatrix v;
    std::vector<std::int64_t> diagonal;  // the nonzero invariant factors
    int rank() const { return static_cast<int>(diagonal.size()); }
};

/// Throws std::overflow_error if an intermediate entry leaves int64.
SmithForm smith_normal_form(const IntMatrix& a, bool with_transforms = true);

/// Normalized chain complex of a nerve: basis = chains without identities.
struct ChainComplexZ {
    std::vector<std::vector<std::vector<MorId>>> basis;  // basis[0][k] = {object}
    std::vector<IntMatrix> boundary;  // boundary[n]: C_n -> C_{n-1}; boundary[0] is 0 x |C_0|
};

/// Throws InputError naming a cycle when c is not loop-free.
ChainComplexZ normalized_chains(const FinCategory& c, int max_dim);

struct HomologyGroup {
    int betti = 0;
    std::vector<std::int64_t> torsion;
    bool operator==(const HomologyGroup&) const = default;
};

std::vector<HomologyGroup> homology(const FinCategory& c, int max_dim);
std::string describe(const HomologyGroup& h);

struct HomologyIsoResult {
    bool iso = false;
    std::string detail;
};

/// Mapping-cone test that F induces isomorphisms on H_0..H_d.
HomologyIsoResult homology_iso_detail(const Functor& f, int max_dim);
bool homology_iso_check(const Functor& f, int max_dim);

/// Connected components of c, as a component index per object.
std::vector<int> components(const FinCategory& c);

// ----------------------------------------------------------------------------
// Weak-equivalence witnesses

struct IsomorphismWitness {
    Functor inverse;
};
struct EquivalenceWitness {
    std::vector<std::pair<ObjId, MorId>> essential_preimage;
};
struct AdjunctionWitness {
    Adjunction adjunction;
    bool functor_is_left = false;
};
/// A functor G back, with zig-zags G∘F ~ id and F∘G ~ id of natural transformations.
struct ZigzagWitness {
    Functor back;
    std::vector<NatTransformation> source_side;
    std::vector<NatTransformation> target_side;
};
struct HomologyWitness {
    int up_to_dim = 0;
};
struct NoWitness {};

struct WeqWitness {
    std::variant<IsomorphismWitness, EquivalenceWitness, AdjunctionWitness, ZigzagWitness, HomologyWitness,
                 NoWitness>
        data = NoWitness{};
    bool refuted = false;
    std::string note;

    std::string kind() const;
    bool witnessed() const { return !std::holds_alternative<NoWitness>(data); }
};

struct WitnessOptions {
    int homology_dim = 2;
    int zigzag_length = 2;
    std::uint64_t search_budget = 20000;
};

WeqWitness weq_witness(const Functor& f, const WitnessOptions& options = {});
/// Re-checks the evidence carried by w against f.
bool verify_witness(const Functor& f, const WeqWitness& w);

}  // namespace pbc
