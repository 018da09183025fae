#include "psub/hypercore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace psub {

BigInt binom(std::uint64_t a, std::uint64_t b) {
    if (b > a) return 0;
    b = std::min(b, a - b);
    BigInt c = 1;
    for (std::uint64_t i = 0; i < b; ++i) {
        c *= a - i;
        c /= i + 1;
    }
    return c;
}

std::uint64_t binom_u64(std::uint64_t a, std::uint64_t b) {
    if (b > a) return 0;
    b = std::min(b, a - b);
    unsigned __int128 c = 1;
    for (std::uint64_t i = 0; i < b; ++i) {
        c = c * (a - i) / (i + 1);
        if (c > std::numeric_limits<std::uint64_t>::max())
            throw GuardExceeded("binomial C(" + std::to_string(a) + "," + std::to_string(b) +
                                ") overflows 64 bits");
    }
    return static_cast<std::uint64_t>(c);
}

double binom_double(std::uint64_t a, std::uint64_t b) {
    if (b > a) return 0.0;
    if (std::min(b, a - b) < 64) {
        try {
            return static_cast<double>(binom_u64(a, b));
        } catch (const GuardExceeded&) {
        }
    }
    return std::exp(log_binom(static_cast<double>(a), static_cast<double>(b)));
}

double log_binom(double a, double b) {
    if (b < 0 || b > a) return -std::numeric_limits<double>::infinity();
    return std::lgamma(a + 1) - std::lgamma(b + 1) - std::lgamma(a - b + 1);
}

SubsetIndexer::SubsetIndexer(std::uint32_t n, std::uint32_t r) : n_(n), r_(r) {
    if (r == 0) throw ValidationError("subset size must be positive");
    size_ = binom_u64(n, r);
    table_.assign(static_cast<std::size_t>(n + 1) * (r + 1), 0);
    for (std::uint32_t a = 0; a <= n; ++a) {
        for (std::uint32_t b = 0; b <= std::min(a, r); ++b) {
            table_[static_cast<std::size_t>(a) * (r + 1) + b] =
                (b == 0 || b == a) ? 1
                                   : table_[static_cast<std::size_t>(a - 1) * (r + 1) + b - 1] +
                                         (b <= a - 1 ? table_[static_cast<std::size_t>(a - 1) * (r + 1) + b] : 0);
        }
    }
}

std::uint64_t SubsetIndexer::rank(std::span<const Vertex> sorted) const {
    // Subsets before `sorted`: at position i, those whose i-th element lies in (prev, v_i).
    std::uint64_t rank = 0;
    std::uint32_t next = 0;
    for (std::uint32_t i = 0; i < r_; ++i) {
        const std::uint32_t v = sorted[i];
        rank += c(n_ - next, r_ - i) - c(n_ - v, r_ - i);
        next = v + 1;
    }
    return rank;
}

void SubsetIndexer::unrank(std::uint64_t rank, std::span<Vertex> out) const {
    std::uint32_t v = 0;
    for (std::uint32_t i = 0; i < r_; ++i) {
        for (;;) {
            const std::uint64_t block = c(n_ - 1 - v, r_ - 1 - i);
            if (rank < block) break;
            rank -= block;
            ++v;
        }
        out[i] = v++;
    }
}

const SubsetIndexer& SubsetIndexer::get(std::uint32_t n, std::uint32_t r) {
    static std::mutex mutex;
    static std::map<std::pair<std::uint32_t, std::uint32_t>, std::unique_ptr<SubsetIndexer>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{n, r}];
    if (!slot) slot = std::make_unique<SubsetIndexer>(n, r);
    return *slot;
}

std::uint64_t rank_subset(std::span<const Vertex> vertices, std::uint32_t n) {
    if (vertices.empty()) throw ValidationError("empty vertex list");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i] >= n) throw ValidationError("vertex out of range");
        if (i > 0 && vertices[i] <= vertices[i - 1])
            throw ValidationError("vertices must be strictly increasing");
    }
    return SubsetIndexer::get(n, static_cast<std::uint32_t>(vertices.size())).rank(vertices);
}

VertexList unrank_subset(std::uint64_t rank, std::uint32_t n, std::uint32_t r) {
    const auto& idx = SubsetIndexer::get(n, r);
    if (rank >= idx.size()) throw ValidationError("rank out of range");
    VertexList out(r);
    idx.unrank(rank, out);
    return out;
}

bool next_combination(std::span<Vertex> comb, std::uint32_t n) {
    const std::size_t r = comb.size();
    std::size_t i = r;
    while (i > 0) {
        --i;
        if (comb[i] < n - r + i) {
            ++comb[i];
            for (std::size_t j = i + 1; j < r; ++j) comb[j] = comb[j - 1] + 1;
            return true;
        }
    }
    return false;
}

void for_each_subset(std::span<const Vertex> ground, std::uint32_t r,
                     const std::function<void(std::span<const Vertex>)>& fn) {
    const auto size = static_cast<std::uint32_t>(ground.size());
    if (r > size) return;
    VertexList pos(r), chosen(r);
    std::iota(pos.begin(), pos.end(), 0U);
    do {
        for (std::uint32_t i = 0; i < r; ++i) chosen[i] = ground[pos[i]];
        fn(chosen);
    } while (r > 0 && next_combination(pos, size));
}

HyperedgeId HyperedgeId::from_vertices(VertexList vertices, std::uint32_t n) {
    const std::uint64_t rank = rank_subset(vertices, n);
    return {std::move(vertices), rank};
}

HyperedgeId HyperedgeId::from_rank(std::uint64_t rank, std::uint32_t n, std::uint32_t r) {
    return {unrank_subset(rank, n, r), rank};
}

Hypergraph::Hypergraph(std::uint32_t n, std::uint32_t r) : n_(n), r_(r) {
    if (r < 2) throw ValidationError("hypergraph uniformity must be at least 2");
    indexer_ = &SubsetIndexer::get(n, r);
    coords_ = indexer_->size();
    if (coords_ > (std::uint64_t{1} << 36)) throw GuardExceeded("hypergraph too large to store");
    words_.assign((coords_ + 63) / 64, 0);
}

Hypergraph Hypergraph::from_mask(std::uint32_t n, std::uint32_t r, std::uint64_t mask) {
    Hypergraph g(n, r);
    if (g.coords_ > 64) throw ValidationError("from_mask requires at most 64 coordinates");
    if (!g.words_.empty()) g.words_[0] = mask;
    g.trim();
    return g;
}

std::uint64_t Hypergraph::edge_count() const {
    std::uint64_t total = 0;
    for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
    return total;
}

std::uint64_t Hypergraph::mask() const {
    if (coords_ > 64) throw ValidationError("mask() requires at most 64 coordinates");
    return words_.empty() ? 0 : words_[0];
}

void Hypergraph::trim() {
    if (coords_ % 64 != 0 && !words_.empty())
        words_.back() &= (std::uint64_t{1} << (coords_ % 64)) - 1;
}

void validate_permutation(std::span<const Vertex> pi, std::uint32_t n) {
    if (pi.size() != n) throw ValidationError("permutation has wrong length");
    std::vector<bool> seen(n, false);
    for (auto v : pi) {
        if (v >= n || seen[v]) throw ValidationError("not a bijection on [0,n)");
        seen[v] = true;
    }
}

VertexList inverse_permutation(std::span<const Vertex> pi) {
    VertexList inv(pi.size());
    for (std::size_t u = 0; u < pi.size(); ++u) inv[pi[u]] = static_cast<Vertex>(u);
    return inv;
}

VertexList compose(std::span<const Vertex> tau, std::span<const Vertex> sigma) {
    VertexList out(sigma.size());
    for (std::size_t u = 0; u < sigma.size(); ++u) out[u] = tau[sigma[u]];
    return out;
}

Hypergraph relabel(const Hypergraph& g, std::span<const Vertex> pi) {
    validate_permutation(pi, g.n());
    Hypergraph out(g.n(), g.r());
    if (g.num_coords() == 0) return out;
    const auto& idx = g.indexer();
    VertexList comb(g.r()), image(g.r());
    std::iota(comb.begin(), comb.end(), 0U);
    std::uint64_t rank = 0;
    do {
        if (g.present(rank)) {
            for (std::uint32_t i = 0; i < g.r(); ++i) image[i] = pi[comb[i]];
            std::sort(image.begin(), image.end());
            out.set_present(idx.rank(image), true);
        }
        ++rank;
    } while (next_combination(comb, g.n()));
    return out;
}

Hypergraph induced(const Hypergraph& g, std::span<const Vertex> vertices) {
    if (vertices.size() < g.r()) throw ValidationError("induced: fewer than r vertices");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i] >= g.n()) throw ValidationError("induced: vertex out of range");
        if (i > 0 && vertices[i] <= vertices[i - 1])
            throw ValidationError("induced: vertices must be strictly increasing");
    }
    const auto m = static_cast<std::uint32_t>(vertices.size());
    Hypergraph out(m, g.r());
    const auto& idx = g.indexer();
    VertexList pos(g.r()), image(g.r());
    std::iota(pos.begin(), pos.end(), 0U);
    std::uint64_t rank = 0;
    do {
        for (std::uint32_t i = 0; i < g.r(); ++i) image[i] = vertices[pos[i]];
        out.set_present(rank++, g.present(idx.rank(image)));
    } while (next_combination(pos, m));
    return out;
}

void Embedding::validate() const {
    if (k > n) throw ValidationError("embedding: k exceeds n");
    if (map.size() != k) throw ValidationError("embedding: map has wrong length");
    std::vector<bool> used(n, false);
    for (auto v : map) {
        if (v >= n || used[v]) throw ValidationError("embedding: map is not injective into [0,n)");
        used[v] = true;
    }
    for (auto u : fixed) {
        if (u >= k || map[u] != u) throw ValidationError("embedding: leaked vertex not fixed");
    }
}

BigInt embedding_count(std::uint32_t n, std::uint32_t k, std::uint32_t l) {
    BigInt c = 1;
    for (std::uint32_t i = 0; i < k - l; ++i) c *= n - l - i;
    return c;
}

void for_each_embedding(std::uint32_t n, std::uint32_t k, std::span<const Vertex> fixed,
                        const std::function<void(std::span<const Vertex>)>& fn) {
    VertexList map(k, 0);
    std::vector<bool> is_fixed(n, false);
    for (auto u : fixed) {
        map[u] = u;
        is_fixed[u] = true;
    }
    VertexList domain, pool;
    for (Vertex u = 0; u < k; ++u)
        if (!is_fixed[u]) domain.push_back(u);
    for (Vertex v = 0; v < n; ++v)
        if (!is_fixed[v]) pool.push_back(v);
    std::vector<bool> used(pool.size(), false);

    std::function<void(std::size_t)> assign = [&](std::size_t depth) {
        if (depth == domain.size()) {
            fn(map);
            return;
        }
        for (std::size_t j = 0; j < pool.size(); ++j) {
            if (used[j]) continue;
            used[j] = true;
            map[domain[depth]] = pool[j];
            assign(depth + 1);
            used[j] = false;
        }
    };
    assign(0);
}

}  // namespace psub
