#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pbc {

using ObjId = int;
using MorId = int;
inline constexpr int kNone = -1;

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an internal construction produces something that violates its
/// own postcondition. Never expected on valid input.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Candidate budget for exhaustive searches. Reads PBC_BUDGET once, defaults to 10^6.
std::uint64_t default_budget();

/// Counts search steps and throws BudgetExceeded past the limit.
class Budget {
public:
    explicit Budget(std::uint64_t limit = default_budget()) : limit_(limit) {}
    void charge(std::uint64_t n = 1) {
        used_ += n;
        if (used_ > limit_) {
            throw BudgetExceeded("search budget of " + std::to_string(limit_) + " candidates exceeded");
        }
    }
    std::uint64_t used() const { return used_; }
    std::uint64_t limit() const { return limit_; }

private:
    std::uint64_t limit_;
    std::uint64_t used_ = 0;
};

/// One violated law in a validation report.
struct Issue {
    std::string law;
    std::string detail;
};
using Report = std::vector<Issue>;

bool report_mentions(const Report& report, std::string_view law);

class CategoryBuilder;

/// A finite category with an explicit composition table on composable pairs.
/// Ids are dense indices; names are labels used for IO.
class FinCategory {
public:
    std::size_t object_count() const { return object_names_.size(); }
    std::size_t morphism_count() const { return src_.size(); }

    ObjId source(MorId f) const { return src_[f]; }
    ObjId target(MorId f) const { return tgt_[f]; }
    MorId identity(ObjId x) const { return identity_[x]; }
    bool is_identity(MorId f) const { return identity_[src_[f]] == f; }

    /// g after f. kNone when the pair is not composable or the table has a hole.
    MorId compose(MorId g, MorId f) const;

    /// Morphisms out of x, sorted by target then id.
    std::span<const MorId> out(ObjId x) const;
    std::span<const MorId> hom(ObjId a, ObjId b) const;

    const std::string& object_name(ObjId x) const { return object_names_[x]; }
    const std::string& morphism_name(MorId f) const { return morphism_names_[f]; }
    std::optional<ObjId> find_object(std::string_view name) const;
    std::optional<MorId> find_morphism(std::string_view name) const;

    bool operator==(const FinCategory& other) const;

private:
    friend class CategoryBuilder;

    std::vector<std::string> object_names_;
    std::vector<std::string> morphism_names_;
    std::vector<ObjId> src_;
    std::vector<ObjId> tgt_;
    std::vector<MorId> identity_;

    std::vector<std::size_t> out_offset_;  // size object_count + 1
    std::vector<MorId> out_;
    std::vector<std::size_t> position_in_out_;  // per morphism, index within out(src)
    std::vector<std::size_t> table_offset_;     // per morphism f, start of row for g in out(tgt f)
    std::vector<MorId> table_;
};

using CatPtr = std::shared_ptr<const FinCategory>;

/// Two-phase construction: add objects and morphisms, then fill composition.
/// Identity laws are filled in by build() wherever the table has no entry.
class CategoryBuilder {
public:
    /// Adds an object together with its identity morphism "id_<name>".
    ObjId add_object(std::string name);
    /// Adds an object whose identity is added later with set_identity.
    ObjId add_bare_object(std::string name);
    MorId add_morphism(std::string name, ObjId src, ObjId tgt);
    void set_identity(ObjId x, MorId f);

    std::size_t object_count() const { return cat_->object_names_.size(); }
    std::size_t morphism_count() const { return cat_->src_.size(); }
    ObjId source(MorId f) const { return cat_->src_[f]; }
    ObjId target(MorId f) const { return cat_->tgt_[f]; }

    /// Available after the first call to set_compose or freeze.
    std::span<const MorId> hom(ObjId a, ObjId b);
    std::span<const MorId> out(ObjId x);

    void set_compose(MorId g, MorId f, MorId gf);
    /// Fills every composable pair using fn(g, f).
    void compose_all(const std::function<MorId(MorId, MorId)>& fn);
    void freeze();

    CatPtr build(bool fill_identity_laws = true);

private:
    std::shared_ptr<FinCategory> cat_ = std::make_shared<FinCategory>();
    bool frozen_ = false;
};

// Small named categories used throughout.
CatPtr terminal_category();
CatPtr empty_category();
CatPtr discrete_category(int n);
/// Thin category on 0..n-1 with a morphism i->j iff less_eq(i, j).
CatPtr poset_category(const std::vector<std::string>& names,
                      const std::function<bool(int, int)>& less_eq);
/// The ordinal [n] = {0 < 1 < ... < n}.
CatPtr ordinal_category(int n);

Report validate_category(const FinCategory& c);

CatPtr opposite(const FinCategory& c);

enum class CombineMode { product, coproduct };
CatPtr combine(const FinCategory& c, const FinCategory& d, CombineMode mode);
/// Index of the pair (a, b) in combine(c, d, product) for objects or morphisms.
inline int product_index(int a, int b, std::size_t d_count) {
    return a * static_cast<int>(d_count) + b;
}

// ----------------------------------------------------------------------------
// Functors and natural transformations

struct Functor {
    CatPtr source;
    CatPtr target;
    std::vector<ObjId> on_objects;
    std::vector<MorId> on_morphisms;

    ObjId obj(ObjId x) const { return on_objects[x]; }
    MorId mor(MorId f) const { return on_morphisms[f]; }

    bool operator==(const Functor& other) const;
};

Functor identity_functor(const CatPtr& c);
/// g after f.
Functor compose(const Functor& g, const Functor& f);
/// Builds a functor from its morphism map; objects are read off the identities.
Functor functor_from_morphisms(CatPtr source, CatPtr target, std::vector<MorId> on_morphisms);
Report validate_functor(const Functor& f);
bool is_strict_isomorphism(const Functor& f);
/// Inverse of a strict isomorphism.
Functor inverse_functor(const Functor& f);

struct NatTransformation {
    Functor from;
    Functor to;
    std::vector<MorId> components;
};

NatTransformation identity_transformation(const Functor& f);
Report validate_nat_transformation(const NatTransformation& t);
/// Whiskering and vertical composition.
NatTransformation vertical_compose(const NatTransformation& beta, const NatTransformation& alpha);
NatTransformation whisker_left(const Functor& h, const NatTransformation& t);   // H t
NatTransformation whisker_right(const NatTransformation& t, const Functor& h);  // t H

struct Adjunction {
    Functor left;
    Functor right;
    NatTransformation unit;    // id -> right∘left
    NatTransformation counit;  // left∘right -> id
};

/// True iff both triangle identities hold at every object.
bool verify_adjunction(const Adjunction& adj);

/// All natural transformations F => G, optionally with components restricted to
/// a morphism subset of the common target. Canonical order: lexicographic in the
/// component vector.
std::vector<NatTransformation> enumerate_nat_trans(const Functor& f, const Functor& g,
                                                   const std::vector<bool>* restriction = nullptr,
                                                   Budget* budget = nullptr);

/// Calls visit for every functor A -> B whose morphism images pass allowed(a_mor, b_mor).
/// Enumeration is lexicographic over (object map, morphism map). visit returns false to stop.
void for_each_functor(const CatPtr& a, const CatPtr& b,
                      const std::function<bool(MorId, MorId)>& allowed,
                      const std::function<bool(const Functor&)>& visit, Budget& budget);

std::vector<Functor> enumerate_functors(const CatPtr& a, const CatPtr& b,
                                        const std::function<bool(MorId, MorId)>& allowed,
                                        Budget& budget);

// ----------------------------------------------------------------------------
// Subcategories, fibers and strict pullbacks

struct Subcategory {
    CatPtr category;
    Functor inclusion;
    std::vector<int> object_from_parent;    // parent id -> sub id or kNone
    std::vector<int> morphism_from_parent;  // parent id -> sub id or kNone
};

/// Throws ConsistencyError if the chosen morphisms are not closed.
Subcategory subcategory(const CatPtr& parent, const std::vector<bool>& keep_objects,
                        const std::vector<bool>& keep_morphisms);

/// Objects sent to d and morphisms sent to id_d.
Subcategory fiber(const Functor& f, ObjId d);
/// Simultaneous fiber of several functors with a common source.
Subcategory fiber(const std::vector<Functor>& fs, const std::vector<ObjId>& ds);

struct FiberProduct {
    CatPtr category;
    Functor first;
    Functor second;
    std::vector<std::pair<ObjId, ObjId>> objects;
    std::vector<std::pair<MorId, MorId>> morphisms;
    std::unordered_map<std::uint64_t, ObjId> object_lookup;
    std::unordered_map<std::uint64_t, MorId> morphism_lookup;

    ObjId object_of(ObjId a, ObjId b) const;
    MorId morphism_of(MorId f, MorId g) const;
};

/// Strict pullback C x_E D of F: C -> E and G: D -> E.
FiberProduct fiber_product(const Functor& f, const Functor& g);

/// The functor X -> C x_E D induced by a: X -> C and b: X -> D with F a = G b.
Functor pair_into(const FiberProduct& p, const Functor& a, const Functor& b);

// ----------------------------------------------------------------------------
// Colimits, isomorphisms, equivalences

struct Cocone {
    ObjId apex;
    MorId first;   // from target(f)
    MorId second;  // from target(g)
};

/// True iff (i, j) with i∘f = j∘g satisfies the pushout universal property.
bool is_pushout(const FinCategory& c, MorId f, MorId g, MorId i, MorId j);

/// Pushout of the span b <-f- a -g-> c, smallest apex id first.
std::optional<Cocone> pushout(const FinCategory& c, MorId f, MorId g);

/// Two-sided inverse if one exists.
std::optional<MorId> inverse_of(const FinCategory& c, MorId f);
std::vector<bool> isomorphisms(const FinCategory& c);

struct EquivalenceCheck {
    bool holds = false;
    std::string counterexample;
    /// For each target object y: a source object x and an isomorphism F(x) -> y.
    std::vector<std::pair<ObjId, MorId>> essential_preimage;
};

EquivalenceCheck check_equivalence(const Functor& f);

/// Searches for a strict isomorphism A -> B. Optional colourings must be preserved.
std::optional<Functor> find_isomorphism(const CatPtr& a, const CatPtr& b,
                                        const std::vector<int>* a_colour = nullptr,
                                        const std::vector<int>* b_colour = nullptr,
                                        Budget* budget = nullptr);

/// Left adjoint L of G: B -> A via universal arrows; adjunction (L ⊣ G).
std::optional<Adjunction> find_left_adjoint(const Functor& g);
/// Right adjoint R of F: A -> B via couniversal arrows; adjunction (F ⊣ R).
std::optional<Adjunction> find_right_adjoint(const Functor& f);

/// Directed cycle through non-identity morphisms, if any (object names).
std::optional<std::vector<ObjId>> find_loop(const FinCategory& c);

// ----------------------------------------------------------------------------
// Functor categories

/// A full or wide subcategory of the functor category shape -> target:
/// chosen functors as objects and all natural transformations between them whose
/// components lie in an allowed morphism set.
struct DiagramCategory {
    CatPtr shape;
    CatPtr target;
    CatPtr category;
    std::vector<std::vector<MorId>> diagrams;    // morphism map per object
    std::vector<std::vector<MorId>> components;  // per morphism, one per shape object

    ObjId find_object(const std::vector<MorId>& diagram) const;
    Functor diagram(ObjId x) const;
    NatTransformation transformation(MorId f) const;

    std::unordered_map<std::string, ObjId> index;  // key: packed diagram
};

using DiagramNamer = std::function<std::string(const std::vector<MorId>&)>;

DiagramCategory build_diagram_category(const CatPtr& shape, const CatPtr& target,
                                       std::vector<std::vector<MorId>> diagrams,
                                       const std::vector<bool>& allowed_components,
                                       const DiagramNamer& namer, Budget& budget);

/// Precomposition with along: dst.shape -> src.shape, as a functor src -> dst.
/// Throws ConsistencyError if some restricted diagram or transformation is missing in dst.
Functor precompose(const DiagramCategory& src, const DiagramCategory& dst, const Functor& along);

std::string pack_key(const std::vector<int>& v);

}  // namespace pbc
