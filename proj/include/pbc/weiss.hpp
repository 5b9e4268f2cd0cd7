#pragma once

#include <map>
#include <memory>

#include "pbc/relcat.hpp"
#include "pbc/simplicial.hpp"

namespace pbc {

/// True iff the diagram T_n -> M (morphism map over T_n) is functorial, sends
/// backward arrows to trivial cofibrations and has the required pushout squares.
bool is_cn_object(const PBCStructure& pbc, int n, const std::vector<MorId>& diagram);

/// The category C_n(M): objects as above, morphisms the objectwise weak equivalences.
DiagramCategory enumerate_Cn(const PBCStructure& pbc, int n, Budget& budget);

/// Functors [n] -> M with objectwise weak equivalences as morphisms.
DiagramCategory rezk_nerve_level(const RelativeCategory& rel, int n, Budget& budget);

/// Zig-zags m -> a <- n with the backward leg only a weak equivalence.
DiagramCategory enumerate_E1(const PBCStructure& pbc, Budget& budget);

/// The functor [m] -> [n] of ordinals given by a monotone map.
Functor ordinal_functor(const MonotoneMap& f, int n);

/// Lazily built levels of C(M), N^R(M) and the structure functors between them.
class CnTower {
public:
    explicit CnTower(PBCStructure pbc, std::uint64_t budget = default_budget());

    const PBCStructure& pbc() const { return pbc_; }
    const FinCategory& carrier() const { return pbc_.carrier(); }
    Budget& budget() { return budget_; }

    const DiagramCategory& C(int n);
    const DiagramCategory& NR(int n);
    const DiagramCategory& E1();
    /// d_i: C_n -> C_{n-1} and s_j: C_n -> C_{n+1}.
    const Functor& face(int n, int i);
    const Functor& degeneracy(int n, int j);
    /// Vertex restriction C_n -> C_0 at the diagonal object (i, i).
    const Functor& vertex(int n, int i);

private:
    PBCStructure pbc_;
    Budget budget_;
    std::map<int, std::unique_ptr<DiagramCategory>> c_, nr_;
    std::unique_ptr<DiagramCategory> e1_;
    std::map<std::pair<int, int>, std::unique_ptr<Functor>> faces_, degens_, vertices_;
};

SimplicialCategoryTrunc cn_simplicial(CnTower& tower, int max_dim);
SimplicialCategoryTrunc rezk_simplicial(CnTower& tower, int max_dim);

struct ClassificationAdjunction {
    Functor restriction;  // U_k: C_k -> N^R_k
    Functor extension;    // L_k: N^R_k -> C_k
    /// U_k on the left: unit id -> L∘U has the backward maps as components.
    Adjunction adjunction;
    bool verified = false;
};

ClassificationAdjunction classification_adjoint(CnTower& tower, int k);

struct ZigzagComposite {
    ObjId filled = kNone;  // object of C_2
    ObjId outer = kNone;   // object of C_1, the d_1 face
    MorId backward = kNone;  // backward leg of the outer zig-zag, in M
};

/// Composite of x -> y' <- y and y -> z' <- z through the pushout of y' <- y -> z'.
/// Throws InputError when the pushout is missing.
ZigzagComposite compose_zigzags(CnTower& tower, ObjId z1, ObjId z2);

/// The zig-zag with identity legs at object m of M, as an object of C_1.
ObjId identity_zigzag(CnTower& tower, ObjId m);

/// Fiber of (d_1, d_0): C_1 -> C_0 x C_0 over (x, y), as a subcategory of C_1.
Subcategory mapping_category(CnTower& tower, ObjId x, ObjId y);
TruncatedSimplicialSet hom_space(CnTower& tower, ObjId x, ObjId y, int max_dim);

/// Segal map X_n -> X_1 x_{X_0} ... x_{X_0} X_1 from the spine functors.
struct SegalMap {
    std::vector<FiberProduct> products;  // products[k] has k + 2 factors
    CatPtr target;
    Functor map;
    EquivalenceCheck check;
};

SegalMap segal_map(const CatPtr& level_n, const std::vector<Functor>& spines, const Functor& d0,
                   const Functor& d1);

struct SegalResult {
    int n = 0;
    std::size_t source_objects = 0;
    std::size_t target_objects = 0;
    bool injective_on_objects = false;
    EquivalenceCheck check;
};

SegalResult segal_check(CnTower& tower, int n);

// ----------------------------------------------------------------------------
// Grothendieck construction

/// A contravariant functor X^op -> Cat: a category per base object and, for each
/// base morphism f: X -> Y, a functor F(f): F(Y) -> F(X).
struct GrothendieckInput {
    CatPtr base;
    std::vector<CatPtr> fibers;
    std::vector<Functor> transport;
};

Report validate_grothendieck_input(const GrothendieckInput& g);

struct GrothendieckResult {
    CatPtr category;
    Functor projection;
    std::vector<std::pair<ObjId, ObjId>> objects;    // (X, a)
    std::vector<std::pair<MorId, MorId>> morphisms;  // (f, u)
};

GrothendieckResult grothendieck(const GrothendieckInput& g);

/// P: C_0^op -> Cat, P(m) the zig-zags out of m with morphisms fixing m.
struct ZigzagFunctor {
    GrothendieckInput input;
    std::vector<Subcategory> fibers;  // subcategories of C_1
};

ZigzagFunctor zigzag_functor(CnTower& tower);

/// The canonical comparison Gr(P) -> C_1, checked to be a strict isomorphism over C_0.
std::optional<Functor> grothendieck_comparison(CnTower& tower, const ZigzagFunctor& p,
                                               const GrothendieckResult& gr);

enum class QVerdict { witnessed, refuted, unknown };
std::string to_string(QVerdict v);

struct PropertyQReport {
    std::vector<WeqWitness> witnesses;  // per base morphism
    QVerdict verdict = QVerdict::unknown;
};

PropertyQReport property_Q_report(const GrothendieckInput& g, const WitnessOptions& options = {});

// ----------------------------------------------------------------------------
// Retraction D_n -> E_n

struct RetractionReport {
    int n = 1;
    bool extrapolated = false;  // n >= 2 uses the componentwise extension
    std::size_t d_objects = 0;
    std::size_t e_objects = 0;
    bool alpha_proper = false;  // some object of E_n is not in the image of alpha
    bool beta_defined = false;
    bool beta_alpha_to_id = false;
    bool alpha_beta_to_id = false;
    bool nonidentity_witness = false;  // some component of the transformations is not an identity
    Report issues;

    bool ok() const { return beta_defined && beta_alpha_to_id && alpha_beta_to_id && issues.empty(); }
};

RetractionReport en_retraction_check(CnTower& tower, int n);

// ----------------------------------------------------------------------------
// Weiss bicategory

struct WeissBicategory {
    SimplicialCategoryTrunc levels;
    std::vector<Subcategory> inclusions;  // level n inside C_n
    bool level0_discrete = false;
    std::map<int, EquivalenceCheck> tamsamani;  // n -> check on the Segal map
    bool level1_is_mapping_union = false;
};

WeissBicategory weiss_bicategory(CnTower& tower, int max_dim);

// ----------------------------------------------------------------------------
// Main theorem evidence

enum class Status { pass, fail, unknown };
std::string to_string(Status s);

struct TheoremCheck {
    std::string name;
    Status status = Status::unknown;
    std::string detail;
    std::string witness;
};

struct MainTheoremReport {
    std::vector<TheoremCheck> checks;
    Status verdict = Status::unknown;
};

MainTheoremReport main_theorem_suite(CnTower& tower, int max_dim);

}  // namespace pbc
