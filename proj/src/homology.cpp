#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "pbc/simplicial.hpp"

namespace pbc {

namespace {

std::int64_t sub_mul(std::int64_t a, std::int64_t q, std::int64_t b) {
    std::int64_t p = 0;
    std::int64_t r = 0;
    if (__builtin_mul_overflow(q, b, &p) || __builtin_sub_overflow(a, p, &r)) {
        throw std::overflow_error("integer overflow in Smith normal form");
    }
    return r;
}

std::int64_t magnitude(std::int64_t x) { return x < 0 ? -x : x; }

}  // namespace

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    IntMatrix r(rows, o.cols);
    for (int i = 0; i < rows; ++i) {
        for (int k = 0; k < cols; ++k) {
            std::int64_t a = at(i, k);
            if (a == 0) continue;
            for (int j = 0; j < o.cols; ++j) r.at(i, j) = sub_mul(r.at(i, j), -a, o.at(k, j));
        }
    }
    return r;
}

bool IntMatrix::is_zero() const {
    return std::all_of(data.begin(), data.end(), [](std::int64_t x) { return x == 0; });
}

SmithForm smith_normal_form(const IntMatrix& input, bool with_transforms) {
    IntMatrix a = input;
    const int m = a.rows;
    const int n = a.cols;
    SmithForm out;
    if (with_transforms) {
        out.u = IntMatrix::identity(m);
        out.v = IntMatrix::identity(n);
    }
    auto row_op = [&](int target, int src, std::int64_t q) {  // row_target -= q row_src
        if (q == 0) return;
        for (int j = 0; j < n; ++j) a.at(target, j) = sub_mul(a.at(target, j), q, a.at(src, j));
        if (with_transforms) {
            for (int j = 0; j < m; ++j) out.u.at(target, j) = sub_mul(out.u.at(target, j), q, out.u.at(src, j));
        }
    };
    auto col_op = [&](int target, int src, std::int64_t q) {  // col_target -= q col_src
        if (q == 0) return;
        for (int i = 0; i < m; ++i) a.at(i, target) = sub_mul(a.at(i, target), q, a.at(i, src));
        if (with_transforms) {
            for (int i = 0; i < n; ++i) out.v.at(i, target) = sub_mul(out.v.at(i, target), q, out.v.at(i, src));
        }
    };
    auto swap_rows = [&](int i, int k) {
        if (i == k) return;
        for (int j = 0; j < n; ++j) std::swap(a.at(i, j), a.at(k, j));
        if (with_transforms) {
            for (int j = 0; j < m; ++j) std::swap(out.u.at(i, j), out.u.at(k, j));
        }
    };
    auto swap_cols = [&](int j, int k) {
        if (j == k) return;
        for (int i = 0; i < m; ++i) std::swap(a.at(i, j), a.at(i, k));
        if (with_transforms) {
            for (int i = 0; i < n; ++i) std::swap(out.v.at(i, j), out.v.at(i, k));
        }
    };
    for (int t = 0; t < std::min(m, n); ++t) {
        int pi = -1;
        int pj = -1;
        std::int64_t best = 0;
        for (int i = t; i < m; ++i) {
            for (int j = t; j < n; ++j) {
                std::int64_t x = magnitude(a.at(i, j));
                if (x != 0 && (best == 0 || x < best)) {
                    best = x;
                    pi = i;
                    pj = j;
                }
            }
        }
        if (pi < 0) break;
        swap_rows(t, pi);
        swap_cols(t, pj);
        while (true) {
            bool changed = false;
            for (int i = t + 1; i < m; ++i) {
                if (a.at(i, t) == 0) continue;
                row_op(i, t, a.at(i, t) / a.at(t, t));
                if (a.at(i, t) != 0) {
                    swap_rows(t, i);
                    changed = true;
                }
            }
            for (int j = t + 1; j < n; ++j) {
                if (a.at(t, j) == 0) continue;
                col_op(j, t, a.at(t, j) / a.at(t, t));
                if (a.at(t, j) != 0) {
                    swap_cols(t, j);
                    changed = true;
                }
            }
            if (changed) continue;
            int bad = -1;
            for (int i = t + 1; i < m && bad < 0; ++i) {
                for (int j = t + 1; j < n; ++j) {
                    if (a.at(i, j) % a.at(t, t) != 0) {
                        bad = i;
                        break;
                    }
                }
            }
            if (bad < 0) break;
            row_op(t, bad, -1);
        }
        if (a.at(t, t) < 0) {
            for (int j = 0; j < n; ++j) a.at(t, j) = -a.at(t, j);
            if (with_transforms) {
                for (int j = 0; j < m; ++j) out.u.at(t, j) = -out.u.at(t, j);
            }
        }
        out.diagonal.push_back(a.at(t, t));
    }
    return out;
}

// ----------------------------------------------------------------------------
// Chains

namespace {

void require_loop_free(const FinCategory& c) {
    if (auto loop = find_loop(c)) {
        std::string names;
        for (ObjId x : *loop) names += (names.empty() ? "" : " -> ") + c.object_name(x);
        throw InputError("category is not loop-free; cycle through " + names);
    }
}

}  // namespace

// Dense Smith forms beyond this rank are too slow to be useful.
constexpr std::size_t kMaxChainRank = 3000;

ChainComplexZ normalized_chains(const FinCategory& c, int max_dim) {
    require_loop_free(c);
    ChainComplexZ cc;
    cc.basis.resize(max_dim + 1);
    std::vector<std::unordered_map<std::string, int>> index(max_dim + 1);
    for (ObjId x = 0; x < static_cast<ObjId>(c.object_count()); ++x) {
        cc.basis[0].push_back({x});
        index[0].emplace(pack_key({x}), x);
    }
    for (int n = 1; n <= max_dim; ++n) {
        for (const auto& prev : cc.basis[n - 1]) {
            ObjId end = n == 1 ? prev[0] : c.target(prev.back());
            for (MorId g : c.out(end)) {
                if (c.is_identity(g)) continue;
                std::vector<MorId> chain = n == 1 ? std::vector<MorId>{} : prev;
                chain.push_back(g);
                index[n].emplace(pack_key(chain), static_cast<int>(cc.basis[n].size()));
                cc.basis[n].push_back(std::move(chain));
                if (cc.basis[n].size() > kMaxChainRank) {
                    throw BudgetExceeded("chain group in degree " + std::to_string(n) +
                                         " exceeds the dense limit of " + std::to_string(kMaxChainRank) +
                                         " generators");
                }
            }
        }
    }
    cc.boundary.resize(max_dim + 1);
    cc.boundary[0] = IntMatrix(0, static_cast<int>(cc.basis[0].size()));
    for (int n = 1; n <= max_dim; ++n) {
        IntMatrix d(static_cast<int>(cc.basis[n - 1].size()), static_cast<int>(cc.basis[n].size()));
        for (std::size_t k = 0; k < cc.basis[n].size(); ++k) {
            const auto& chain = cc.basis[n][k];
            for (int i = 0; i <= n; ++i) {
                std::vector<MorId> face;
                if (n == 1) {
                    face = {i == 0 ? c.target(chain[0]) : c.source(chain[0])};
                } else if (i == 0) {
                    face.assign(chain.begin() + 1, chain.end());
                } else if (i == n) {
                    face.assign(chain.begin(), chain.end() - 1);
                } else {
                    face.assign(chain.begin(), chain.begin() + (i - 1));
                    face.push_back(c.compose(chain[i], chain[i - 1]));
                    face.insert(face.end(), chain.begin() + (i + 1), chain.end());
                }
                auto it = index[n - 1].find(pack_key(face));
                if (it == index[n - 1].end()) continue;  // degenerate face
                d.at(it->second, static_cast<int>(k)) += (i % 2 == 0) ? 1 : -1;
            }
        }
        cc.boundary[n] = std::move(d);
    }
    return cc;
}

std::vector<HomologyGroup> homology(const FinCategory& c, int max_dim) {
    if (max_dim < 0) throw InputError("homology: negative dimension");
    ChainComplexZ cc = normalized_chains(c, max_dim + 1);
    std::vector<SmithForm> snf;
    for (int n = 0; n <= max_dim + 1; ++n) snf.push_back(smith_normal_form(cc.boundary[n], false));
    std::vector<HomologyGroup> out;
    for (int k = 0; k <= max_dim; ++k) {
        HomologyGroup h;
        h.betti = static_cast<int>(cc.basis[k].size()) - snf[k].rank() - snf[k + 1].rank();
        for (auto d : snf[k + 1].diagonal) {
            if (d > 1) h.torsion.push_back(d);
        }
        out.push_back(std::move(h));
    }
    return out;
}

std::string describe(const HomologyGroup& h) {
    std::string s;
    if (h.betti > 0) s = h.betti == 1 ? "Z" : "Z^" + std::to_string(h.betti);
    for (auto t : h.torsion) s += (s.empty() ? "" : "+") + ("Z/" + std::to_string(t));
    return s.empty() ? "0" : s;
}

std::vector<int> components(const FinCategory& c) {
    std::vector<int> parent(c.object_count());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        int a = find(c.source(f));
        int b = find(c.target(f));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<int> label(c.object_count(), -1);
    std::vector<int> out(c.object_count());
    int next = 0;
    for (std::size_t x = 0; x < c.object_count(); ++x) {
        int r = find(static_cast<int>(x));
        if (label[r] < 0) label[r] = next++;
        out[x] = label[r];
    }
    return out;
}

HomologyIsoResult homology_iso_detail(const Functor& f, int d) {
    const auto& a = *f.source;
    const auto& b = *f.target;
    ChainComplexZ ca = normalized_chains(a, d + 1);
    ChainComplexZ cb = normalized_chains(b, d + 1);
    auto dim = [](const ChainComplexZ& c, int k) {
        return k < 0 || k >= static_cast<int>(c.basis.size()) ? 0 : static_cast<int>(c.basis[k].size());
    };
    // Chain map on basis chains; chains hitting an identity go to zero.
    std::vector<IntMatrix> phi;
    for (int k = 0; k <= d + 1; ++k) {
        std::unordered_map<std::string, int> idx;
        for (std::size_t i = 0; i < cb.basis[k].size(); ++i) idx.emplace(pack_key(cb.basis[k][i]), static_cast<int>(i));
        IntMatrix m(dim(cb, k), dim(ca, k));
        for (std::size_t j = 0; j < ca.basis[k].size(); ++j) {
            std::vector<int> image;
            bool degenerate = false;
            for (int x : ca.basis[k][j]) {
                if (k == 0) {
                    image.push_back(f.obj(x));
                } else {
                    MorId g = f.mor(x);
                    degenerate = degenerate || b.is_identity(g);
                    image.push_back(g);
                }
            }
            if (degenerate) continue;
            auto it = idx.find(pack_key(image));
            if (it == idx.end()) throw ConsistencyError("chain map image missing from the target basis");
            m.at(it->second, static_cast<int>(j)) = 1;
        }
        phi.push_back(std::move(m));
    }
    // Cone_k = C_{k-1}(A) + C_k(B); D_k(x, y) = (-dA x, phi x + dB y).
    auto cone_dim = [&](int k) { return dim(ca, k - 1) + dim(cb, k); };
    auto cone_boundary = [&](int k) {
        IntMatrix m(cone_dim(k - 1), cone_dim(k));
        const int ra = dim(ca, k - 2);
        const int ca_cols = dim(ca, k - 1);
        if (k - 1 >= 1) {
            const auto& da = ca.boundary[k - 1];
            for (int i = 0; i < da.rows; ++i) {
                for (int j = 0; j < da.cols; ++j) m.at(i, j) = -da.at(i, j);
            }
        }
        if (k - 1 >= 0) {
            const auto& p = phi[k - 1];
            for (int i = 0; i < p.rows; ++i) {
                for (int j = 0; j < p.cols; ++j) m.at(ra + i, j) = p.at(i, j);
            }
        }
        const auto& db = cb.boundary[k];
        for (int i = 0; i < db.rows; ++i) {
            for (int j = 0; j < db.cols; ++j) m.at(ra + i, ca_cols + j) = db.at(i, j);
        }
        return m;
    };
    std::vector<SmithForm> snf(d + 2);
    std::vector<IntMatrix> cone(d + 2);
    for (int k = 1; k <= d + 1; ++k) {
        cone[k] = cone_boundary(k);
        snf[k] = smith_normal_form(cone[k], k == d + 1);
    }
    for (int k = 0; k <= d; ++k) {
        int rank_in = k == 0 ? 0 : snf[k].rank();
        int rank_out = snf[k + 1].rank();
        int h = cone_dim(k) - rank_in - rank_out;
        bool torsion = std::any_of(snf[k + 1].diagonal.begin(), snf[k + 1].diagonal.end(),
                                   [](std::int64_t x) { return x > 1; });
        if (h != 0 || torsion) {
            return {false, "mapping cone has nonzero homology in degree " + std::to_string(k)};
        }
    }
    // Injectivity in degree d: every cone cycle of degree d+1 has a boundary as its A-part.
    const auto& top = snf[d + 1];
    SmithForm da = smith_normal_form(ca.boundary[d + 1], true);
    const int a_dim = dim(ca, d);
    for (int col = top.rank(); col < cone[d + 1].cols; ++col) {
        std::vector<std::int64_t> x(a_dim);
        for (int i = 0; i < a_dim; ++i) x[i] = top.v.at(i, col);
        std::vector<std::int64_t> y(a_dim, 0);
        for (int i = 0; i < a_dim; ++i) {
            for (int j = 0; j < a_dim; ++j) y[i] = sub_mul(y[i], -da.u.at(i, j), x[j]);
        }
        for (int i = 0; i < a_dim; ++i) {
            bool ok = i < da.rank() ? y[i] % da.diagonal[i] == 0 : y[i] == 0;
            if (!ok) return {false, "induced map is not injective on H_" + std::to_string(d)};
        }
    }
    return {true, "isomorphism on H_0..H_" + std::to_string(d)};
}

bool homology_iso_check(const Functor& f, int max_dim) { return homology_iso_detail(f, max_dim).iso; }

// ----------------------------------------------------------------------------
// Witnesses

std::string WeqWitness::kind() const {
    static const char* names[] = {"Isomorphism", "CatEquivalence", "Adjunction", "NatTransZigzag", "HomologyIso", "None"};
    return names[data.index()];
}

namespace {

Functor constant_functor(const CatPtr& src, const CatPtr& dst, ObjId o) {
    Functor k{src, dst, std::vector<ObjId>(src->object_count(), o),
              std::vector<MorId>(src->morphism_count(), dst->identity(o))};
    return k;
}

/// Zig-zag of natural transformations of length at most max_len between x and y.
std::optional<std::vector<NatTransformation>> connect(const Functor& x, const Functor& y, int max_len,
                                                      Budget& budget) {
    if (max_len >= 1) {
        auto xy = enumerate_nat_trans(x, y, nullptr, &budget);
        if (!xy.empty()) return std::vector<NatTransformation>{xy.front()};
        auto yx = enumerate_nat_trans(y, x, nullptr, &budget);
        if (!yx.empty()) return std::vector<NatTransformation>{yx.front()};
    }
    if (max_len >= 2) {
        for (ObjId o = 0; o < static_cast<ObjId>(x.target->object_count()); ++o) {
            Functor k = constant_functor(x.source, x.target, o);
            auto first = enumerate_nat_trans(x, k, nullptr, &budget);
            if (first.empty()) first = enumerate_nat_trans(k, x, nullptr, &budget);
            if (first.empty()) continue;
            auto second = enumerate_nat_trans(k, y, nullptr, &budget);
            if (second.empty()) second = enumerate_nat_trans(y, k, nullptr, &budget);
            if (second.empty()) continue;
            return std::vector<NatTransformation>{first.front(), second.front()};
        }
    }
    return std::nullopt;
}

bool loop_free(const FinCategory& c) { return !find_loop(c).has_value(); }

}  // namespace

WeqWitness weq_witness(const Functor& f, const WitnessOptions& options) {
    WeqWitness w;
    if (is_strict_isomorphism(f) && validate_functor(f).empty()) {
        w.data = IsomorphismWitness{inverse_functor(f)};
        return w;
    }
    auto eq = check_equivalence(f);
    if (eq.holds) {
        w.data = EquivalenceWitness{eq.essential_preimage};
        return w;
    }
    if (auto adj = find_right_adjoint(f)) {
        w.data = AdjunctionWitness{*adj, true};
        return w;
    }
    if (auto adj = find_left_adjoint(f)) {
        w.data = AdjunctionWitness{*adj, false};
        return w;
    }
    if (options.zigzag_length >= 1) {
        Budget budget(options.search_budget);
        try {
            std::optional<ZigzagWitness> found;
            for_each_functor(f.target, f.source, [](MorId, MorId) { return true; }, [&](const Functor& g) {
                auto left = connect(compose(g, f), identity_functor(f.source), options.zigzag_length, budget);
                if (!left) return true;
                auto right = connect(compose(f, g), identity_functor(f.target), options.zigzag_length, budget);
                if (!right) return true;
                found = ZigzagWitness{g, *left, *right};
                return false;
            }, budget);
            if (found) {
                w.data = std::move(*found);
                return w;
            }
        } catch (const BudgetExceeded&) {
            w.note = "zig-zag search budget exhausted; ";
        }
    }
    // pi_0 is computable for every category.
    auto ca = components(*f.source);
    auto cb = components(*f.target);
    int na = ca.empty() ? 0 : *std::max_element(ca.begin(), ca.end()) + 1;
    int nb = cb.empty() ? 0 : *std::max_element(cb.begin(), cb.end()) + 1;
    std::vector<int> image(na, -1);
    std::vector<bool> hit(nb, false);
    bool pi0_bijective = true;
    for (std::size_t x = 0; x < ca.size(); ++x) {
        int target = cb[f.obj(static_cast<ObjId>(x))];
        if (image[ca[x]] >= 0 && image[ca[x]] != target) pi0_bijective = false;
        image[ca[x]] = target;
        hit[target] = true;
    }
    if (na != nb || std::count(hit.begin(), hit.end(), true) != nb) pi0_bijective = false;
    if (!pi0_bijective) {
        w.refuted = true;
        w.note += "H_0 differs (" + std::to_string(na) + " vs " + std::to_string(nb) + " components)";
        return w;
    }
    if (loop_free(*f.source) && loop_free(*f.target)) {
        try {
            auto r = homology_iso_detail(f, options.homology_dim);
            if (r.iso) {
                w.data = HomologyWitness{options.homology_dim};
            } else {
                w.refuted = true;
                w.note += r.detail;
            }
        } catch (const std::overflow_error& e) {
            w.note += e.what();
        } catch (const BudgetExceeded& e) {
            w.note += e.what();
        }
        return w;
    }
    w.note += "no witness found";
    return w;
}

bool verify_witness(const Functor& f, const WeqWitness& w) {
    return std::visit(
        [&](const auto& data) -> bool {
            using T = std::decay_t<decltype(data)>;
            if constexpr (std::is_same_v<T, IsomorphismWitness>) {
                return compose(data.inverse, f).on_morphisms == identity_functor(f.source).on_morphisms &&
                       compose(f, data.inverse).on_morphisms == identity_functor(f.target).on_morphisms;
            } else if constexpr (std::is_same_v<T, EquivalenceWitness>) {
                return check_equivalence(f).holds;
            } else if constexpr (std::is_same_v<T, AdjunctionWitness>) {
                const Functor& side = data.functor_is_left ? data.adjunction.left : data.adjunction.right;
                return side.on_morphisms == f.on_morphisms && verify_adjunction(data.adjunction);
            } else if constexpr (std::is_same_v<T, ZigzagWitness>) {
                if (!validate_functor(data.back).empty()) return false;
                for (const auto* side : {&data.source_side, &data.target_side}) {
                    if (side->empty()) return false;
                    for (const auto& t : *side) {
                        if (!validate_nat_transformation(t).empty()) return false;
                    }
                }
                return true;
            } else if constexpr (std::is_same_v<T, HomologyWitness>) {
                return homology_iso_check(f, data.up_to_dim);
            } else {
                return true;
            }
        },
        w.data);
}

}  // namespace pbc
