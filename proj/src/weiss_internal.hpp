#pragma once

#include "pbc/weiss.hpp"

namespace pbc::detail {

bool is_thin(const FinCategory& c);
DiagramNamer diagram_namer(const FinCategory& shape, const FinCategory& target);
MorId find_transformation(const DiagramCategory& dc, ObjId from, ObjId to, const std::vector<MorId>& comps);

/// Diagram T_n -> M from the images of (p,q) -> (p,q+1) in forward[p][q] and of
/// (p+1,q) -> (p,q) in backward[p][q]; objects[p][q] gives the identities.
std::vector<MorId> diagram_from_generators(const FinCategory& m, const TShape& t,
                                           const std::vector<std::vector<ObjId>>& objects,
                                           const std::vector<std::vector<MorId>>& forward,
                                           const std::vector<std::vector<MorId>>& backward);

Functor restrict_functor(const Functor& f, const Subcategory& from, const Subcategory& to);

/// X_1 x_{X_0} ... x_{X_0} X_1 with n factors, glued along d0 of each factor and d1 of the next.
struct IteratedProduct {
    CatPtr level1;
    int n = 1;
    std::vector<FiberProduct> products;  // products[k - 2] has k factors

    CatPtr top() const;
    Functor factor(int j) const;
    /// The functor src.top() -> top() applying phi1 in every factor.
    Functor extend(const IteratedProduct& src, const Functor& phi1) const;
    /// Components at each object of src.top() built factorwise from t1; kNone where missing.
    std::vector<MorId> extend_components(const IteratedProduct& src, const std::function<MorId(ObjId)>& t1) const;
};

IteratedProduct iterate_product(const CatPtr& level1, const Functor& d0, const Functor& d1, int n);

}  // namespace pbc::detail
