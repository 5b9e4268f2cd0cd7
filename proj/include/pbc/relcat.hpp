#pragma once

#include <array>
#include <map>
#include <optional>

#include "pbc/fincat.hpp"

namespace pbc {

/// A morphism subset that should contain all identities and be closed under composition.
struct WideSubcategory {
    std::vector<bool> member;

    bool contains(MorId f) const { return member[f]; }
    static WideSubcategory all(const FinCategory& c);
    static WideSubcategory identities(const FinCategory& c);
    static WideSubcategory isomorphisms(const FinCategory& c);
    std::size_t size() const;
};

Report check_wide_subcategory(const FinCategory& c, const WideSubcategory& w, std::string_view label);

struct RelativeCategory {
    CatPtr carrier;
    WideSubcategory weq;
};

/// Factorization f = w∘c with section s of w, for one weak equivalence f.
struct FactorEntry {
    ObjId mid = kNone;
    MorId c = kNone;
    MorId w = kNone;
    MorId s = kNone;
};

/// A morphism of the arrow category: square with top u, bottom v, v∘from = to∘u.
using SquareKey = std::array<MorId, 4>;  // {from, to, top, bottom}

struct FactorizationScheme {
    std::vector<std::optional<FactorEntry>> entries;  // indexed by morphism id
    std::map<SquareKey, MorId> mu;
};

struct PBCStructure {
    RelativeCategory rel;
    WideSubcategory tcof;
    FactorizationScheme fact;

    const FinCategory& carrier() const { return *rel.carrier; }
    const WideSubcategory& weq() const { return rel.weq; }
};

struct Coproduct {
    ObjId object = kNone;
    MorId in1 = kNone;
    MorId in2 = kNone;
};

/// X ⊗ I with its two ends and the projection back to X.
struct Cylinder {
    ObjId object = kNone;
    MorId i0 = kNone;
    MorId i1 = kNone;
    MorId proj = kNone;
};

struct BrownStructure {
    RelativeCategory rel;
    WideSubcategory cof;
    ObjId initial = kNone;
    std::vector<Coproduct> coproducts;     // index x * |Ob| + y
    std::vector<Cylinder> cylinders;       // per object
    std::vector<MorId> cylinder_morphisms; // per morphism f, the map f ⊗ I
};

/// The arrow category of a wide subcategory: its morphisms as objects, commuting
/// squares with legs in the subcategory as morphisms.
struct ArrowCategory {
    CatPtr category;
    std::vector<MorId> object_to_morphism;
    std::vector<SquareKey> squares;
    std::vector<ObjId> object_of_morphism;  // kNone outside the subcategory
};

ArrowCategory arrow_category(const FinCategory& c, const WideSubcategory& w);

Report check_relative_category(const RelativeCategory& rc);
Report check_two_out_of_three(const RelativeCategory& rc);

/// Issues carry laws "wide-subcategory", "axiom1" ... "axiom4".
Report check_pbc(const PBCStructure& pbc);

/// The axiom-4 part of check_pbc on its own.
Report check_factorization(const PBCStructure& pbc);

std::optional<FactorizationScheme> derive_factorization(const RelativeCategory& rel,
                                                        const WideSubcategory& tcof,
                                                        Budget* budget = nullptr);

/// The scheme with c = f and w = s = id; legal exactly when weq ⊆ tcof.
FactorizationScheme trivial_factorization(const FinCategory& c, const WideSubcategory& weq);

Report check_brown_category(const BrownStructure& b);

/// f ⊗ I for each morphism f, chosen by naturality of the cylinder maps; kNone where none fits.
std::vector<MorId> derive_cylinder_morphisms(const FinCategory& c, const std::vector<Cylinder>& cylinders);

/// Throws InputError naming the missing pushout if the cylinder construction fails.
PBCStructure brown_to_pbc(const BrownStructure& b);

/// The Brown structure on a finite lattice: weq = cof = all, joins as coproducts,
/// X ⊗ I = X. Missing joins leave the coproduct entry empty.
BrownStructure lattice_brown(const CatPtr& poset);

struct KenBrownResult {
    bool hypothesis = false;
    bool conclusion = false;
    bool flagged = false;  // hypothesis holds but the conclusion fails
    Report report;
};

/// f is defined on the weq subcategory of pbc (as produced by weq_subcategory).
KenBrownResult ken_brown_check(const Functor& f, const PBCStructure& pbc,
                               const RelativeCategory& target);

/// The weq subcategory as its own finite category.
Subcategory weq_subcategory(const PBCStructure& pbc);

PBCStructure pbc_combine(const PBCStructure& a, const PBCStructure& b, CombineMode mode);

struct FunctorCategoryPBC {
    PBCStructure pbc;
    DiagramCategory diagrams;
};

FunctorCategoryPBC pbc_functor_category(const PBCStructure& m, const RelativeCategory& shape,
                                        Budget* budget = nullptr);

/// Structure with the given classes; the scheme is derived when possible, else left empty.
PBCStructure make_pbc(CatPtr carrier, WideSubcategory weq, WideSubcategory tcof);

}  // namespace pbc
