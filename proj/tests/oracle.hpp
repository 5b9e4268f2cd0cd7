#pragma once
// Brute-force reference computations used only by the tests. They work from
// the raw order relation or raw composition table and share no code paths with
// the library's searches.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "pbc/fincat.hpp"

namespace oracle {

struct Poset {
    int n = 0;
    std::vector<std::vector<bool>> le;
};

inline Poset poset_of(const pbc::FinCategory& c) {
    Poset p;
    p.n = static_cast<int>(c.object_count());
    p.le.assign(p.n, std::vector<bool>(p.n, false));
    for (int a = 0; a < p.n; ++a) {
        for (int b = 0; b < p.n; ++b) p.le[a][b] = !c.hom(a, b).empty();
    }
    return p;
}

inline std::optional<int> join(const Poset& p, int a, int b) {
    for (int z = 0; z < p.n; ++z) {
        if (!p.le[a][z] || !p.le[b][z]) continue;
        bool least = true;
        for (int w = 0; w < p.n; ++w) {
            if (p.le[a][w] && p.le[b][w] && !p.le[z][w]) least = false;
        }
        if (least) return z;
    }
    return std::nullopt;
}

using Rel = std::function<bool(int, int)>;

/// Objects of C_n for a poset: labellings of the grid p <= q <= n.
inline long count_Cn(const Poset& p, const Rel& tcof, int n) {
    std::vector<std::pair<int, int>> cells;
    for (int a = 0; a <= n; ++a) {
        for (int b = a; b <= n; ++b) cells.emplace_back(a, b);
    }
    std::map<std::pair<int, int>, int> m;
    long count = 0;
    std::function<void(std::size_t)> go = [&](std::size_t k) {
        if (k == cells.size()) {
            for (auto [a, b] : cells) {
                for (auto [a2, b2] : cells) {
                    if (a2 <= a && b <= b2 && !p.le[m[{a, b}]][m[{a2, b2}]]) return;
                    if (b2 == b && a2 < a && !tcof(m[{a, b}], m[{a2, b2}])) return;
                }
            }
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b <= n - 1; ++b) {
                    auto j = join(p, m[{a, b}], m[{a + 1, b + 1}]);
                    if (!j || *j != m[{a, b + 1}]) return;
                }
            }
            ++count;
            return;
        }
        for (int v = 0; v < p.n; ++v) {
            m[cells[k]] = v;
            go(k + 1);
        }
    };
    go(0);
    return count;
}

/// |C_1 x_{C_0} ... x_{C_0} C_1| with n factors, for a poset.
inline long count_zigzag_chains(const Poset& p, const Rel& tcof, int n) {
    // zig-zags as (start, apex, end); chain them by matching end to start.
    std::vector<std::vector<long>> ways(n + 1, std::vector<long>(p.n, 0));
    for (int x = 0; x < p.n; ++x) ways[0][x] = 1;
    for (int k = 1; k <= n; ++k) {
        for (int s = 0; s < p.n; ++s) {
            if (!ways[k - 1][s]) continue;
            for (int apex = 0; apex < p.n; ++apex) {
                for (int e = 0; e < p.n; ++e) {
                    if (p.le[s][apex] && p.le[e][apex] && tcof(e, apex)) ways[k][e] += ways[k - 1][s];
                }
            }
        }
    }
    long total = 0;
    for (long w : ways[n]) total += w;
    return total;
}

/// Weakly increasing chains c_0 <= ... <= c_n.
inline long count_chains(const Poset& p, int n) {
    std::vector<long> ways(p.n, 1);
    for (int k = 1; k <= n; ++k) {
        std::vector<long> next(p.n, 0);
        for (int a = 0; a < p.n; ++a) {
            for (int b = 0; b < p.n; ++b) {
                if (p.le[a][b]) next[b] += ways[a];
            }
        }
        ways = next;
    }
    long total = 0;
    for (long w : ways) total += w;
    return total;
}

/// Betti numbers over F_p from the raw composition table (nondegenerate chains).
inline std::vector<int> betti_mod_p(const pbc::FinCategory& c, int max_dim) {
    constexpr std::int64_t P = 1000003;
    std::vector<std::vector<std::vector<int>>> chains(max_dim + 2);
    for (int x = 0; x < static_cast<int>(c.object_count()); ++x) chains[0].push_back({x});
    for (int f = 0; f < static_cast<int>(c.morphism_count()); ++f) {
        if (!c.is_identity(f)) chains[1].push_back({f});
    }
    for (int n = 2; n <= max_dim + 1; ++n) {
        for (const auto& ch : chains[n - 1]) {
            for (int g = 0; g < static_cast<int>(c.morphism_count()); ++g) {
                if (!c.is_identity(g) && c.source(g) == c.target(ch.back())) {
                    auto next = ch;
                    next.push_back(g);
                    chains[n].push_back(next);
                }
            }
        }
    }
    auto face = [&](const std::vector<int>& ch, int n, int i) -> std::vector<int> {
        if (n == 1) return {i == 0 ? c.target(ch[0]) : c.source(ch[0])};
        std::vector<int> r;
        for (int k = 0; k < n; ++k) {
            if (i == 0 && k == 0) continue;
            if (i == n && k == n - 1) continue;
            if (i > 0 && i < n && k == i - 1) {
                r.push_back(c.compose(ch[i], ch[i - 1]));
                continue;
            }
            if (i > 0 && i < n && k == i) continue;
            r.push_back(ch[k]);
        }
        return r;
    };
    auto rank = [&](int n) -> int {
        if (n == 0 || n > max_dim + 1) return 0;
        std::map<std::vector<int>, int> index;
        for (std::size_t k = 0; k < chains[n - 1].size(); ++k) index[chains[n - 1][k]] = static_cast<int>(k);
        std::vector<std::vector<std::int64_t>> m(chains[n].size(), std::vector<std::int64_t>(chains[n - 1].size(), 0));
        for (std::size_t k = 0; k < chains[n].size(); ++k) {
            for (int i = 0; i <= n; ++i) {
                auto fc = face(chains[n][k], n, i);
                bool degenerate = false;
                if (n > 1) {
                    for (int g : fc) degenerate = degenerate || c.is_identity(g);
                }
                if (degenerate) continue;
                auto& cell = m[k][index.at(fc)];
                cell = ((cell + (i % 2 ? -1 : 1)) % P + P) % P;
            }
        }
        int r = 0;
        std::size_t cols = chains[n - 1].size();
        for (std::size_t col = 0; col < cols && r < static_cast<int>(m.size()); ++col) {
            int piv = -1;
            for (std::size_t row = r; row < m.size(); ++row) {
                if (m[row][col]) {
                    piv = static_cast<int>(row);
                    break;
                }
            }
            if (piv < 0) continue;
            std::swap(m[piv], m[r]);
            std::int64_t inv = 1, base = m[r][col], e = P - 2;
            while (e) {
                if (e & 1) inv = inv * base % P;
                base = base * base % P;
                e >>= 1;
            }
            for (std::size_t row = 0; row < m.size(); ++row) {
                if (static_cast<int>(row) == r || !m[row][col]) continue;
                std::int64_t factor = m[row][col] * inv % P;
                for (std::size_t k = col; k < cols; ++k) m[row][k] = ((m[row][k] - factor * m[r][k]) % P + P) % P;
            }
            ++r;
        }
        return r;
    };
    std::vector<int> ranks(max_dim + 2);
    for (int n = 0; n <= max_dim + 1; ++n) ranks[n] = rank(n);
    std::vector<int> betti;
    for (int n = 0; n <= max_dim; ++n) {
        betti.push_back(static_cast<int>(chains[n].size()) - ranks[n] - ranks[n + 1]);
    }
    return betti;
}

}  // namespace oracle
