#include "psub/lowdegree.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

namespace psub {

namespace {

std::vector<bool> leak_flags(const ModelParams& params) {
    std::vector<bool> leaked(params.n, false);
    for (auto u : params.L) leaked[u] = true;
    return leaked;
}

void guard_embeddings(const ModelParams& params) {
    if (embedding_count(params.n, params.k, params.l()) > kEmbeddingLimit)
        throw GuardExceeded("too many embeddings for exact coefficient enumeration");
}

}  // namespace

VertexList FourierIndex::vertices(std::uint32_t n, std::uint32_t r) const {
    std::set<Vertex> span;
    const auto& idx = SubsetIndexer::get(n, r);
    VertexList e(r);
    for (auto rank : edges) {
        idx.unrank(rank, e);
        span.insert(e.begin(), e.end());
    }
    return {span.begin(), span.end()};
}

void FourierIndex::validate(const ModelParams& params) const {
    if (edges.empty()) throw ValidationError("character must be nonempty");
    const auto& idx = SubsetIndexer::get(params.n, params.r);
    const auto leaked = leak_flags(params);
    std::set<std::uint64_t> seen;
    VertexList e(params.r);
    for (auto rank : edges) {
        if (rank >= idx.size()) throw ValidationError("character edge out of range");
        if (!seen.insert(rank).second) throw ValidationError("character repeats an edge");
        idx.unrank(rank, e);
        if (std::all_of(e.begin(), e.end(), [&](Vertex v) { return leaked[v]; }))
            throw ValidationError("character contains a hyperedge inside L");
    }
}

FreeCoordinates FreeCoordinates::of(const ModelParams& params) {
    FreeCoordinates fc;
    const auto& idx = SubsetIndexer::get(params.n, params.r);
    const auto leaked = leak_flags(params);
    fc.position.assign(idx.size(), -1);
    VertexList e(params.r);
    for (std::uint64_t rank = 0; rank < idx.size(); ++rank) {
        idx.unrank(rank, e);
        if (std::all_of(e.begin(), e.end(), [&](Vertex v) { return leaked[v]; })) continue;
        fc.position[rank] = static_cast<std::int64_t>(fc.ranks.size());
        fc.ranks.push_back(rank);
    }
    return fc;
}

Rational fourier_coefficient(const Hypergraph& H, const ModelParams& params, const FourierIndex& alpha) {
    check_shape(H, params);
    alpha.validate(params);
    guard_embeddings(params);
    const auto& g_idx = SubsetIndexer::get(params.n, params.r);
    std::vector<VertexList> edges;
    for (auto rank : alpha.edges) {
        VertexList e(params.r);
        g_idx.unrank(rank, e);
        edges.push_back(std::move(e));
    }
    std::int64_t sum = 0;
    std::uint64_t count = 0;
    std::vector<std::int64_t> preimage(params.n, -1);
    VertexList pre(params.r);
    for_each_embedding(params.n, params.k, params.L, [&](std::span<const Vertex> map) {
        ++count;
        std::fill(preimage.begin(), preimage.end(), -1);
        for (Vertex u = 0; u < params.k; ++u) preimage[map[u]] = u;
        int product = 1;
        for (const auto& e : edges) {
            for (std::uint32_t i = 0; i < params.r; ++i) {
                if (preimage[e[i]] < 0) return;
                pre[i] = static_cast<Vertex>(preimage[e[i]]);
            }
            std::sort(pre.begin(), pre.end());
            product *= spin_of_bit(H.present(std::span<const Vertex>(pre)));
        }
        sum += product;
    });
    return Rational(sum, count);
}

double fourier_coefficient_value(const Hypergraph& H, const ModelParams& params, const FourierIndex& alpha) {
    return static_cast<double>(fourier_coefficient(H, params, alpha));
}

kernels::CoverTable build_cover_table(const ModelParams& params) {
    params.validate();
    guard_embeddings(params);
    const FreeCoordinates free = FreeCoordinates::of(params);
    const auto& g_idx = SubsetIndexer::get(params.n, params.r);
    const auto leaked = leak_flags(params);

    // H-side r-subsets of [0,k) not inside L, with their H ranks.
    std::vector<std::pair<VertexList, std::uint32_t>> h_edges;
    if (params.k >= params.r) {
        VertexList comb(params.r);
        std::iota(comb.begin(), comb.end(), 0U);
        std::uint32_t h = 0;
        do {
            if (!std::all_of(comb.begin(), comb.end(), [&](Vertex v) { return leaked[v]; })) h_edges.emplace_back(comb, h);
            ++h;
        } while (next_combination(comb, params.k));
    }

    kernels::CoverTable cover;
    cover.width = h_edges.size();
    std::vector<std::pair<std::uint32_t, std::uint32_t>> row(cover.width);
    VertexList image(params.r);
    for_each_embedding(params.n, params.k, params.L, [&](std::span<const Vertex> map) {
        for (std::size_t t = 0; t < h_edges.size(); ++t) {
            for (std::uint32_t i = 0; i < params.r; ++i) image[i] = map[h_edges[t].first[i]];
            std::sort(image.begin(), image.end());
            row[t] = {static_cast<std::uint32_t>(free.position[g_idx.rank(image)]), h_edges[t].second};
        }
        std::sort(row.begin(), row.end());
        for (const auto& [pos, h] : row) {
            cover.free_index.push_back(pos);
            cover.h_rank.push_back(h);
        }
        ++cover.embeddings;
    });
    return cover;
}

std::uint64_t full_degree(const ModelParams& params) {
    return binom_u64(params.n, params.r) - binom_u64(params.l(), params.r);
}

Rational LrReport::coefficient(const FourierIndex& alpha) const {
    std::vector<std::uint32_t> pos;
    for (auto rank : alpha.edges) {
        if (rank >= free.position.size() || free.position[rank] < 0)
            throw ValidationError("character edge is not a free coordinate");
        pos.push_back(static_cast<std::uint32_t>(free.position[rank]));
    }
    std::sort(pos.begin(), pos.end());
    if (pos.empty() || pos.size() > index->max_degree()) throw ValidationError("character outside the report's degree");
    return Rational(sums[index->rank(pos)], embeddings);
}

LrReport lr_squared_exact(const Hypergraph& H, const ModelParams& params, unsigned degree, Exec exec) {
    check_shape(H, params);
    if (degree < 1) throw ValidationError("degree must be at least 1");
    LrReport rep;
    rep.degree = degree;
    rep.free = FreeCoordinates::of(params);
    const auto cover = build_cover_table(params);
    rep.embeddings = cover.embeddings;
    rep.index.emplace(static_cast<unsigned>(rep.free.ranks.size()), degree);
    rep.sums.assign(rep.index->size(), 0);
    if (exec == Exec::serial)
        kernels::serial::lr_accumulate(cover, H, *rep.index, rep.sums);
    else
        kernels::omp::lr_accumulate(cover, H, *rep.index, rep.sums);

    const auto by_degree = kernels::sumsq_by_degree(rep.sums, *rep.index);
    const BigInt denom = BigInt(rep.embeddings) * rep.embeddings;
    BigInt running = 0;
    for (unsigned d = 1; d <= degree; ++d) {
        if (d <= by_degree.size()) running += by_degree[d - 1];
        rep.per_degree_exact.emplace_back(running, denom);
        rep.per_degree.push_back(static_cast<double>(rep.per_degree_exact.back()));
    }
    rep.total_exact = rep.per_degree_exact.back();
    rep.total = rep.per_degree.back();
    return rep;
}

std::vector<BigInt> nvd_table(std::uint32_t n, std::uint32_t r, std::uint32_t l, unsigned D) {
    if (r < 2 || l > n) throw ValidationError("nvd: need r >= 2 and l <= n");
    if (binom_u64(n, r) > kNvdEnumerationLimit)
        throw GuardExceeded("nvd enumeration needs C(n,r) <= " + std::to_string(kNvdEnumerationLimit));
    // L = [0,l); each free coordinate carries the mask of its vertices outside L.
    std::vector<std::uint32_t> outside;
    if (n >= r) {
        VertexList comb(r);
        std::iota(comb.begin(), comb.end(), 0U);
        do {
            std::uint32_t mask = 0;
            for (auto v : comb)
                if (v >= l) mask |= 1U << v;
            if (mask != 0) outside.push_back(mask);
        } while (next_combination(comb, n));
    }
    std::vector<std::uint64_t> count(n - l + 1, 0);
    std::function<void(std::size_t, unsigned, std::uint32_t)> dfs = [&](std::size_t start, unsigned size, std::uint32_t span) {
        for (std::size_t t = start; t < outside.size(); ++t) {
            const std::uint32_t next = span | outside[t];
            ++count[static_cast<std::size_t>(std::popcount(next))];
            if (size + 1 < D) dfs(t + 1, size + 1, next);
        }
    };
    if (D >= 1) dfs(0, 0, 0);
    return {count.begin(), count.end()};
}

BigInt nvd_upper_bound(std::uint64_t n, std::uint32_t r, std::uint32_t l, std::uint32_t v) {
    if (v > n - l) return 0;
    const std::uint64_t exponent = binom_u64(v + l, r) - binom_u64(l, r);
    if (exponent > (1U << 20)) throw GuardExceeded("nvd bound exponent too large for an exact integer");
    return binom(n - l, v) << static_cast<unsigned>(exponent);
}

NvdResult count_nvd(std::uint32_t n, std::uint32_t r, std::uint32_t l, std::uint32_t v, unsigned D, bool force_bound) {
    if (r < 2 || l > n) throw ValidationError("nvd: need r >= 2 and l <= n");
    if (v > n - l) return {0, !force_bound};
    if (!force_bound && binom_u64(n, r) <= kNvdEnumerationLimit) return {nvd_table(n, r, l, D)[v], true};
    return {nvd_upper_bound(n, r, l, v), false};
}

void BoundInputs::validate() const {
    if (r < 2) throw ValidationError("bound: r must be at least 2");
    if (!(l <= k && k <= n)) throw ValidationError("bound: need l <= k <= n");
    if (D < 1) throw ValidationError("bound: D must be at least 1");
    if (p < 1) throw ValidationError("bound: p must be at least 1");
    if (!(epsilon > 0)) throw ValidationError("bound: epsilon must be positive");
    if (delta < 0) throw ValidationError("bound: delta must be non-negative");
}

CombinatorialBound combinatorial_bound(const BoundInputs& in, NMode mode) {
    in.validate();
    CombinatorialBound out;
    out.mode = mode;
    if (in.k == in.l) {
        out.value = 0;
        out.exact = Rational(0);
        return out;
    }
    const std::uint64_t nl = in.n - in.l;
    const std::uint64_t kl = in.k - in.l;
    const std::uint64_t vmax = std::min<std::uint64_t>(static_cast<std::uint64_t>(in.r) * in.D, nl);
    if (mode == NMode::exactN) {
        if (in.n > 64) throw GuardExceeded("exactN needs an enumerable n");
        const auto table = nvd_table(static_cast<std::uint32_t>(in.n), in.r, in.l, in.D);
        Rational sum = 0;
        for (std::uint64_t v = 1; v <= vmax; ++v) {
            const BigInt num = boost::multiprecision::pow(BigInt(v * kl), static_cast<unsigned>(v));
            const BigInt den = boost::multiprecision::pow(BigInt(nl), static_cast<unsigned>(2 * v));
            sum += Rational(table[v] * num, den);
        }
        out.exact = sum;
        out.value = static_cast<double>(sum);
        return out;
    }
    double sum = 0;
    const double lnl = std::log(static_cast<double>(nl));
    for (std::uint64_t v = 1; v <= vmax; ++v) {
        const double exponent = binom_double(v + in.l, in.r) - binom_double(in.l, in.r);
        const double log_n = log_binom(static_cast<double>(nl), static_cast<double>(v)) + exponent * std::log(2.0);
        const double log_base = std::log(static_cast<double>(v)) + std::log(static_cast<double>(kl)) - 2 * lnl;
        sum += std::exp(log_n + static_cast<double>(v) * log_base);
    }
    out.value = sum;
    return out;
}

TheoremBound theorem_bound(const BoundInputs& in) {
    in.validate();
    TheoremBound tb;
    const double n = static_cast<double>(in.n);
    const double ln_n = std::log(n);
    const double r = in.r;
    const double l = in.l;
    const double eps = in.epsilon;
    const double delta = in.effective_delta();
    tb.delta = delta;

    const double lead = binom_double(in.l, in.r - 1);
    const double shrink = std::exp((delta - eps) * ln_n);
    tb.low = shrink >= 1 ? std::numeric_limits<double>::infinity()
                         : std::exp(lead * std::log(2.0) - eps * ln_n - std::log1p(-shrink));

    tb.t = (r - 1) * std::pow(delta * ln_n, 1.0 / (r - 1)) / std::exp(1.0) - l;
    tb.high = 8 * r * std::exp(-eps * tb.t * ln_n + eps * delta * delta * std::pow(ln_n, r / (r - 1)));
    tb.high_vacuous = tb.t <= 0;
    tb.total = tb.low + tb.high;

    const double kk = static_cast<double>(in.k);
    const double p = in.p;
    const double D = in.D;
    tb.cond_k = kk <= (n - l) * std::exp(-eps * ln_n) / (24 * p * p * D * D) + l;
    tb.cond_l = l <= std::min(kk, std::pow(eps, 1.0 / (r - 1)) * r * std::pow(ln_n, 1.0 / (r - 1)) / 40);
    tb.cond_D = ln_n > 1 && D <= eps * eps * eps * std::pow(ln_n, r / (r - 1)) / ((r / (r - 1)) * std::log(ln_n));
    tb.prop_density = n > l && std::exp(1.0) * (kk - l) / (n - l) <= std::exp(-eps * ln_n);
    tb.delta_in_range = delta > 0 && delta < eps && delta < 0.25;
    return tb;
}

double corollary_bound(const BoundInputs& in, double eta) {
    if (!(eta > 0)) throw ValidationError("corollary: eta must be positive");
    const double tb = theorem_bound(in).total;
    const double c = binom_double(in.n, in.l);
    if (std::isfinite(c)) return c * std::pow(tb / eta, static_cast<double>(in.p));
    return std::exp(log_binom(static_cast<double>(in.n), in.l) + in.p * std::log(tb / eta));
}

MomentResult moment_exact(const ModelParams& params, unsigned degree, unsigned p, Exec exec) {
    params.validate();
    if (degree < 1) throw ValidationError("degree must be at least 1");
    if (p < 1) throw ValidationError("moment: p must be at least 1");
    if (binom_u64(params.k, params.r) > kMomentHLimit)
        throw GuardExceeded("moment_exact needs C(k,r) <= " + std::to_string(kMomentHLimit));
    const auto free = FreeCoordinates::of(params);
    const auto cover = build_cover_table(params);
    const kernels::CharacterIndex index(static_cast<unsigned>(free.ranks.size()), degree);
    const auto per_h = exec == Exec::serial ? kernels::serial::lr_sumsq_over_H(cover, index, params.k, params.r)
                                            : kernels::omp::lr_sumsq_over_H(cover, index, params.k, params.r);
    BigInt sum = 0;
    for (const auto& degrees : per_h) {
        BigInt s = 0;
        for (const auto& x : degrees) s += x;
        sum += boost::multiprecision::pow(s, p);
    }
    MomentResult out;
    out.hypergraphs = per_h.size();
    const BigInt e2 = BigInt(cover.embeddings) * cover.embeddings;
    out.mean_power = Rational(sum, BigInt(per_h.size()) * boost::multiprecision::pow(e2, p));
    out.value = std::pow(static_cast<double>(out.mean_power), 1.0 / p);
    return out;
}

}  // namespace psub
