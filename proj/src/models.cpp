#include "psub/models.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "psub/kernels.hpp"

namespace psub {

void ModelParams::validate() const {
    if (r < 2) throw ValidationError("model: r must be at least 2");
    if (r > n) throw ValidationError("model: r exceeds n");
    if (k > n) throw ValidationError("model: k exceeds n");
    for (std::size_t i = 0; i < L.size(); ++i) {
        if (L[i] >= k) throw ValidationError("model: leaked vertex outside [0,k)");
        if (i > 0 && L[i] <= L[i - 1]) throw ValidationError("model: L must be sorted and distinct");
    }
}

void check_shape(const Hypergraph& H, const ModelParams& params) {
    params.validate();
    if (H.n() != params.k || H.r() != params.r)
        throw ValidationError("H must have k vertices and uniformity r");
}

void fill_uniform(Hypergraph& g, Rng& rng) {
    for (auto& w : g.words()) w = rng();
    g.trim();
}

Hypergraph sample_H(std::uint32_t k, std::uint32_t r, Rng& rng) {
    Hypergraph h(k, r);
    fill_uniform(h, rng);
    return h;
}

Embedding sample_embedding(const ModelParams& params, Rng& rng) {
    params.validate();
    Embedding emb{params.n, params.k, VertexList(params.k), params.L};
    std::vector<bool> leaked(params.n, false);
    for (auto u : params.L) {
        leaked[u] = true;
        emb.map[u] = u;
    }
    VertexList pool;
    pool.reserve(params.n);
    for (Vertex v = 0; v < params.n; ++v)
        if (!leaked[v]) pool.push_back(v);
    std::size_t next = 0;
    for (Vertex u = 0; u < params.k; ++u) {
        if (leaked[u]) continue;
        const std::size_t j = next + uniform_below(rng, pool.size() - next);
        std::swap(pool[next], pool[j]);
        emb.map[u] = pool[next++];
    }
    return emb;
}

void embed_into(const Hypergraph& H, std::span<const Vertex> map, Hypergraph& G) {
    if (H.num_coords() == 0) return;
    const auto& idx = G.indexer();
    const std::uint32_t r = H.r();
    VertexList comb(r), image(r);
    std::iota(comb.begin(), comb.end(), 0U);
    std::uint64_t h = 0;
    do {
        for (std::uint32_t i = 0; i < r; ++i) image[i] = map[comb[i]];
        std::sort(image.begin(), image.end());
        G.set_present(idx.rank(image), H.present(h++));
    } while (next_combination(comb, H.n()));
}

Hypergraph sample_planted(const Hypergraph& H, const ModelParams& params, Rng& rng, Embedding& embedding_out) {
    check_shape(H, params);
    embedding_out = sample_embedding(params, rng);
    Hypergraph G(params.n, params.r);
    fill_uniform(G, rng);
    embed_into(H, embedding_out.map, G);
    return G;
}

Hypergraph sample_planted(const Hypergraph& H, const ModelParams& params, Rng& rng) {
    Embedding emb;
    return sample_planted(H, params, rng, emb);
}

Hypergraph sample_null(const Hypergraph& H, const ModelParams& params, Rng& rng) {
    check_shape(H, params);
    Hypergraph G(params.n, params.r);
    fill_uniform(G, rng);
    const auto& idx = G.indexer();
    for_each_subset(params.L, params.r, [&](std::span<const Vertex> e) {
        G.set_present(idx.rank(e), H.present(e));
    });
    return G;
}

Hypergraph sample_model(Which which, const Hypergraph& H, const ModelParams& params, Rng& rng) {
    return which == Which::planted ? sample_planted(H, params, rng) : sample_null(H, params, rng);
}

double Pmf::prob(std::uint64_t g) const {
    return static_cast<double>(weight[g]) / static_cast<double>(denominator);
}

Rational Pmf::exact(std::uint64_t g) const { return Rational(BigInt(weight[g]), denominator); }

Rational Pmf::total() const {
    BigInt sum = 0;
    for (auto w : weight) sum += w;
    return Rational(sum, denominator);
}

namespace {

void guard_enumeration(const ModelParams& params) {
    const std::uint64_t coords = binom_u64(params.n, params.r);
    if (coords > kExactCoordLimit)
        throw GuardExceeded("exact enumeration needs C(n,r) <= " + std::to_string(kExactCoordLimit));
    if (embedding_count(params.n, params.k, params.l()) > kEmbeddingLimit)
        throw GuardExceeded("too many embeddings for exact enumeration");
}

}  // namespace

Pmf exact_pmf(const Hypergraph& H, const ModelParams& params, Which which, Exec exec) {
    check_shape(H, params);
    guard_enumeration(params);
    Pmf pmf;
    pmf.n = params.n;
    pmf.r = params.r;
    pmf.coords = static_cast<unsigned>(binom_u64(params.n, params.r));
    const auto& idx = SubsetIndexer::get(params.n, params.r);

    if (which == Which::null) {
        std::uint64_t mask = 0, value = 0;
        for_each_subset(params.L, params.r, [&](std::span<const Vertex> e) {
            const std::uint64_t bit = std::uint64_t{1} << idx.rank(e);
            mask |= bit;
            if (H.present(e)) value |= bit;
        });
        pmf.weight.assign(std::size_t{1} << pmf.coords, 0);
        for (std::uint64_t g = 0; g < pmf.weight.size(); ++g) pmf.weight[g] = (g & mask) == value ? 1 : 0;
        pmf.denominator = BigInt(1) << static_cast<unsigned>(pmf.coords - std::popcount(mask));
        return pmf;
    }

    std::vector<kernels::EmbeddingPattern> patterns;
    VertexList image(params.r);
    for_each_embedding(params.n, params.k, params.L, [&](std::span<const Vertex> map) {
        kernels::EmbeddingPattern p;
        std::uint64_t h = 0;
        if (H.num_coords() > 0) {
            VertexList comb(params.r);
            std::iota(comb.begin(), comb.end(), 0U);
            do {
                for (std::uint32_t i = 0; i < params.r; ++i) image[i] = map[comb[i]];
                std::sort(image.begin(), image.end());
                const std::uint64_t bit = std::uint64_t{1} << idx.rank(image);
                p.mask |= bit;
                if (H.present(h)) p.value |= bit;
                ++h;
            } while (next_combination(comb, params.k));
        }
        patterns.push_back(p);
    });
    pmf.weight = exec == Exec::serial ? kernels::serial::planted_weights(patterns, pmf.coords)
                                      : kernels::omp::planted_weights(patterns, pmf.coords);
    pmf.denominator = BigInt(patterns.size()) << static_cast<unsigned>(pmf.coords - H.num_coords());
    return pmf;
}

Rational tv_distance_exact(const Pmf& p, const Pmf& q) {
    if (p.coords != q.coords || p.n != q.n || p.r != q.r) throw ValidationError("tv: shape mismatch");
    BigInt sum = 0;
    for (std::size_t g = 0; g < p.weight.size(); ++g) {
        BigInt a = BigInt(p.weight[g]) * q.denominator;
        BigInt b = BigInt(q.weight[g]) * p.denominator;
        sum += a > b ? BigInt(a - b) : BigInt(b - a);
    }
    return Rational(sum, 2 * p.denominator * q.denominator);
}

double tv_distance(const Pmf& p, const Pmf& q) { return static_cast<double>(tv_distance_exact(p, q)); }

Rational chi_square_exact(const Pmf& p, const Pmf& q) {
    if (p.coords != q.coords || p.n != q.n || p.r != q.r) throw ValidationError("chi-square: shape mismatch");
    std::uint64_t q_level = 0;
    bool uniform_q = true;
    for (std::size_t g = 0; g < q.weight.size(); ++g) {
        if (p.weight[g] > 0 && q.weight[g] == 0) throw ValidationError("chi-square: p not dominated by q");
        if (q.weight[g] == 0) continue;
        if (q_level == 0) q_level = q.weight[g];
        uniform_q = uniform_q && q.weight[g] == q_level;
    }
    if (uniform_q) {
        BigInt sum = 0;
        for (auto w : p.weight) sum += BigInt(w) * w;
        return Rational(sum * q.denominator, BigInt(q_level) * p.denominator * p.denominator) - 1;
    }
    Rational sum = 0;
    for (std::size_t g = 0; g < q.weight.size(); ++g) {
        if (q.weight[g] == 0) continue;
        sum += Rational(BigInt(p.weight[g]) * p.weight[g] * q.denominator,
                        BigInt(q.weight[g]) * p.denominator * p.denominator);
    }
    return sum - 1;
}

Rational ExactDist::total() const {
    BigInt sum = 0;
    for (const auto& [key, w] : weight) sum += w;
    return Rational(sum, denominator);
}

Rational tv_distance_exact(const ExactDist& p, const ExactDist& q) {
    BigInt sum = 0;
    auto diff = [&](const BigInt& wp, const BigInt& wq) {
        BigInt a = wp * q.denominator;
        BigInt b = wq * p.denominator;
        sum += a > b ? BigInt(a - b) : BigInt(b - a);
    };
    for (const auto& [key, wp] : p.weight) {
        auto it = q.weight.find(key);
        diff(wp, it == q.weight.end() ? BigInt(0) : it->second);
    }
    for (const auto& [key, wq] : q.weight)
        if (!p.weight.contains(key)) diff(0, wq);
    return Rational(sum, 2 * p.denominator * q.denominator);
}

bool same_distribution(const ExactDist& p, const ExactDist& q) { return tv_distance_exact(p, q) == 0; }

}  // namespace psub
