#include "pbc/simplicial.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace pbc {

ObjId TShape::object_at(int p, int q) const {
    // Lexicographic order over the grid: rows p = 0..n of length n - p + 1.
    if (p < 0 || q < p || q > n) return kNone;
    int before = p * (n + 1) - p * (p - 1) / 2;
    return before + (q - p);
}

MorId TShape::arrow(ObjId a, ObjId b) const {
    auto h = category->hom(a, b);
    return h.empty() ? kNone : h.front();
}

TShape build_T(int n) {
    if (n < 0) throw InputError("build_T: negative degree");
    TShape t;
    t.n = n;
    std::vector<std::string> names;
    for (int p = 0; p <= n; ++p) {
        for (int q = p; q <= n; ++q) {
            t.coords.emplace_back(p, q);
            names.push_back("(" + std::to_string(p) + "," + std::to_string(q) + ")");
        }
    }
    t.category = poset_category(names, [&](int a, int b) {
        auto [p, q] = t.coords[a];
        auto [p2, q2] = t.coords[b];
        return p2 <= p && q <= q2;
    });
    const auto& c = *t.category;
    t.backward.assign(c.morphism_count(), false);
    t.forward.assign(c.morphism_count(), false);
    for (MorId f = 0; f < static_cast<MorId>(c.morphism_count()); ++f) {
        auto [p, q] = t.coords[c.source(f)];
        auto [p2, q2] = t.coords[c.target(f)];
        t.backward[f] = q == q2 && p2 < p;
        t.forward[f] = p == p2 && q < q2;
    }
    return t;
}

const TShape& shape_T(int n) {
    static std::mutex lock;
    static std::map<int, std::unique_ptr<TShape>> cache;
    std::lock_guard<std::mutex> guard(lock);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<TShape>(build_T(n));
    return *slot;
}

MonotoneMap coface_map(int n, int i) {
    MonotoneMap f;
    for (int k = 0; k < n; ++k) f.push_back(k < i ? k : k + 1);
    return f;
}

MonotoneMap codegeneracy_map(int n, int j) {
    MonotoneMap f;
    for (int k = 0; k <= n + 1; ++k) f.push_back(k <= j ? k : k - 1);
    return f;
}

bool is_monotone(const MonotoneMap& f, int n) {
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (f[k] < 0 || f[k] > n) return false;
        if (k > 0 && f[k] < f[k - 1]) return false;
    }
    return !f.empty();
}

Functor cosimplicial_T(const MonotoneMap& f, int n) {
    if (!is_monotone(f, n)) throw InputError("cosimplicial_T: map is not monotone into [" + std::to_string(n) + "]");
    const int m = static_cast<int>(f.size()) - 1;
    const auto& src = shape_T(m);
    const auto& dst = shape_T(n);
    Functor fn{src.category, dst.category, {}, {}};
    for (auto [p, q] : src.coords) fn.on_objects.push_back(dst.object_at(f[p], f[q]));
    const auto& c = *src.category;
    for (MorId h = 0; h < static_cast<MorId>(c.morphism_count()); ++h) {
        fn.on_morphisms.push_back(dst.arrow(fn.obj(c.source(h)), fn.obj(c.target(h))));
    }
    return fn;
}

// ----------------------------------------------------------------------------
// Nerve

std::size_t TruncatedSimplicialSet::nondegenerate_count(int n) const {
    std::size_t count = 0;
    for (bool d : degenerate[n]) count += d ? 0 : 1;
    return count;
}

TruncatedSimplicialSet truncated_nerve(const FinCategory& c, int max_dim) {
    if (max_dim < 0) throw InputError("truncated_nerve: negative dimension");
    TruncatedSimplicialSet s;
    s.max_dim = max_dim;
    s.simplices.resize(max_dim + 1);
    s.degenerate.resize(max_dim + 1);
    std::vector<std::unordered_map<std::string, int>> index(max_dim + 1);
    for (ObjId x = 0; x < static_cast<ObjId>(c.object_count()); ++x) {
        s.simplices[0].push_back({x});
        s.degenerate[0].push_back(false);
        index[0].emplace(pack_key({x}), x);
    }
    auto end_vertex = [&](int n, const std::vector<int>& chain) {
        return n == 0 ? chain[0] : c.target(chain.back());
    };
    for (int n = 1; n <= max_dim; ++n) {
        for (std::size_t k = 0; k < s.simplices[n - 1].size(); ++k) {
            const auto prev = s.simplices[n - 1][k];
            for (MorId g : c.out(end_vertex(n - 1, prev))) {
                std::vector<int> chain = n == 1 ? std::vector<int>{} : prev;
                chain.push_back(g);
                index[n].emplace(pack_key(chain), static_cast<int>(s.simplices[n].size()));
                s.degenerate[n].push_back((n > 1 && s.degenerate[n - 1][k]) || c.is_identity(g));
                s.simplices[n].push_back(std::move(chain));
            }
        }
    }
    auto lookup = [&](int n, const std::vector<int>& chain) {
        auto it = index[n].find(pack_key(chain));
        if (it == index[n].end()) throw ConsistencyError("nerve face or degeneracy left the simplex set");
        return it->second;
    };
    s.faces.resize(max_dim + 1);
    for (int n = 1; n <= max_dim; ++n) {
        s.faces[n].assign(n + 1, {});
        for (const auto& chain : s.simplices[n]) {
            for (int i = 0; i <= n; ++i) {
                std::vector<int> face;
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
                s.faces[n][i].push_back(lookup(n - 1, face));
            }
        }
    }
    s.degeneracies.resize(max_dim);
    for (int n = 0; n < max_dim; ++n) {
        s.degeneracies[n].assign(n + 1, {});
        for (const auto& chain : s.simplices[n]) {
            for (int j = 0; j <= n; ++j) {
                std::vector<int> deg;
                if (n == 0) {
                    deg = {c.identity(chain[0])};
                } else {
                    ObjId vertex = j == 0 ? c.source(chain[0]) : c.target(chain[j - 1]);
                    deg.assign(chain.begin(), chain.begin() + j);
                    deg.push_back(c.identity(vertex));
                    deg.insert(deg.end(), chain.begin() + j, chain.end());
                }
                s.degeneracies[n][j].push_back(lookup(n + 1, deg));
            }
        }
    }
    return s;
}

// ----------------------------------------------------------------------------
// Simplicial identities, for index maps and for functors alike.

namespace {

template <typename Map, typename Compose, typename Identity>
Report simplicial_identities(int max_dim, const std::vector<std::vector<Map>>& faces,
                             const std::vector<std::vector<Map>>& degens, Compose&& compose,
                             Identity&& identity) {
    Report report;
    auto tag = [](const std::string& rel, int n, int i, int j) {
        return rel + " on level " + std::to_string(n) + " (i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")";
    };
    // d_i d_j = d_{j-1} d_i for i < j, on level n.
    for (int n = 2; n <= max_dim; ++n) {
        for (int j = 1; j <= n; ++j) {
            for (int i = 0; i < j; ++i) {
                if (!(compose(faces[n - 1][i], faces[n][j]) == compose(faces[n - 1][j - 1], faces[n][i]))) {
                    report.push_back({"simplicial-identity", tag("d_i d_j = d_{j-1} d_i", n, i, j)});
                }
            }
        }
    }
    // Degeneracies out of level n into level n + 1.
    for (int n = 0; n + 1 <= max_dim; ++n) {
        for (int j = 0; j <= n; ++j) {
            const Map& sj = degens[n][j];
            for (int i = 0; i <= n + 1; ++i) {
                const Map lhs = compose(faces[n + 1][i], sj);
                bool ok = true;
                if (i == j || i == j + 1) {
                    ok = lhs == identity(n);
                } else if (i < j) {
                    ok = lhs == compose(degens[n - 1][j - 1], faces[n][i]);
                } else {
                    ok = lhs == compose(degens[n - 1][j], faces[n][i - 1]);
                }
                if (!ok) report.push_back({"simplicial-identity", tag("d_i s_j", n, i, j)});
            }
        }
    }
    // s_i s_j = s_{j+1} s_i for i <= j, from level n into n + 2.
    for (int n = 0; n + 2 <= max_dim; ++n) {
        for (int j = 0; j <= n; ++j) {
            for (int i = 0; i <= j; ++i) {
                if (!(compose(degens[n + 1][i], degens[n][j]) == compose(degens[n + 1][j + 1], degens[n][i]))) {
                    report.push_back({"simplicial-identity", tag("s_i s_j = s_{j+1} s_i", n, i, j)});
                }
            }
        }
    }
    return report;
}

}  // namespace

Report check_simplicial_identities(const TruncatedSimplicialSet& s) {
    using Map = std::vector<int>;
    auto compose_maps = [](const Map& g, const Map& f) {
        Map r(f.size());
        for (std::size_t k = 0; k < f.size(); ++k) r[k] = g[f[k]];
        return r;
    };
    auto identity = [&](int n) {
        Map r(s.simplices[n].size());
        for (std::size_t k = 0; k < r.size(); ++k) r[k] = static_cast<int>(k);
        return r;
    };
    return simplicial_identities(s.max_dim, s.faces, s.degeneracies, compose_maps, identity);
}

Report check_simplicial_identities(const SimplicialCategoryTrunc& s) {
    struct Maps {
        std::vector<ObjId> objects;
        std::vector<MorId> morphisms;
        bool operator==(const Maps&) const = default;
    };
    auto to_maps = [](const Functor& f) { return Maps{f.on_objects, f.on_morphisms}; };
    std::vector<std::vector<Maps>> faces(s.faces.size()), degens(s.degeneracies.size());
    for (std::size_t n = 0; n < s.faces.size(); ++n) {
        for (const auto& f : s.faces[n]) faces[n].push_back(to_maps(f));
    }
    for (std::size_t n = 0; n < s.degeneracies.size(); ++n) {
        for (const auto& f : s.degeneracies[n]) degens[n].push_back(to_maps(f));
    }
    auto compose_maps = [](const Maps& g, const Maps& f) {
        Maps r;
        for (ObjId x : f.objects) r.objects.push_back(g.objects[x]);
        for (MorId m : f.morphisms) r.morphisms.push_back(g.morphisms[m]);
        return r;
    };
    auto identity = [&](int n) { return to_maps(identity_functor(s.levels[n])); };
    return simplicial_identities(s.max_dim, faces, degens, compose_maps, identity);
}

}  // namespace pbc
