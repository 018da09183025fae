#include "psub/secretshare.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "psub/kernels.hpp"

namespace psub {

namespace {

void check_sorted_parties(std::span<const Vertex> A, std::uint32_t k, const char* what) {
    for (std::size_t i = 0; i < A.size(); ++i) {
        if (A[i] >= k) throw ValidationError(std::string(what) + ": party out of range");
        if (i > 0 && A[i] <= A[i - 1]) throw ValidationError(std::string(what) + ": parties must be sorted and distinct");
    }
}

bool is_subset(std::span<const Vertex> small, std::span<const Vertex> big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

/// Presence mask of the coordinates of R in the k-vertex hypergraph.
std::vector<bool> r_coords(const AccessStructure& access) {
    Hypergraph shape(access.k, access.r);
    std::vector<bool> in(shape.num_coords(), false);
    for (const auto& A : access.R) in[shape.indexer().rank(A)] = true;
    return in;
}

std::uint64_t image_rank(const SubsetIndexer& idx, std::span<const Vertex> A, std::span<const Vertex> map, VertexList& buf) {
    for (std::size_t i = 0; i < A.size(); ++i) buf[i] = map[A[i]];
    std::sort(buf.begin(), buf.end());
    return idx.rank(buf);
}

void for_each_permutation(std::uint32_t n, const std::function<void(std::span<const Vertex>)>& fn) {
    VertexList pi(n);
    std::iota(pi.begin(), pi.end(), 0U);
    do fn(pi);
    while (std::next_permutation(pi.begin(), pi.end()));
}

void guard_desk_scale(std::uint32_t n, std::uint32_t r) {
    if (binom_u64(n, r) > 20) throw GuardExceeded("exact share ensembles need C(n,r) <= 20");
}

}  // namespace

void AccessStructure::validate() const {
    if (r < 2) throw ValidationError("access structure: r must be at least 2");
    if (k < 1) throw ValidationError("access structure: need at least one party");
    for (const auto& A : R) {
        if (A.empty()) throw ValidationError("access structure: empty qualifying set");
        if (A.size() > r) throw ValidationError("access structure: qualifying set larger than r");
        check_sorted_parties(A, k, "access structure");
    }
}

bool AccessStructure::uniform() const {
    return std::all_of(R.begin(), R.end(), [&](const VertexList& A) { return A.size() == r; });
}

bool AccessStructure::qualified(std::span<const Vertex> A) const {
    return std::any_of(R.begin(), R.end(), [&](const VertexList& B) { return is_subset(B, A); });
}

bool AccessStructure::contains(std::span<const Vertex> A) const {
    return std::any_of(R.begin(), R.end(), [&](const VertexList& B) { return std::equal(B.begin(), B.end(), A.begin(), A.end()); });
}

ShareBundle deal(const AccessStructure& access, bool s, std::uint32_t n, Rng& rng, const VertexList& public_parties) {
    access.validate();
    if (!access.uniform()) throw ValidationError("deal: R must be r-uniform (lift it first)");
    if (n < access.k || n < access.r) throw ValidationError("deal: need n >= k and n >= r");
    check_sorted_parties(public_parties, access.k, "deal");
    const ModelParams params{n, access.k, access.r, {}, 0};

    const Hypergraph H = sample_H(access.k, access.r, rng);
    const Embedding phi = sample_embedding(params, rng);
    ShareBundle b;
    b.n = n;
    b.access = access;
    b.public_parties = public_parties;
    b.G = Hypergraph(n, access.r);
    fill_uniform(b.G, rng);
    embed_into(H, phi.map, b.G);
    b.H_s = sample_H(access.k, access.r, rng);
    for (const auto& A : access.R) b.H_s.set_present(b.H_s.indexer().rank(A), H.present(std::span<const Vertex>(A)) != s);
    b.shares = phi.map;
    return b;
}

bool reconstruct(const ShareBundle& bundle, std::span<const Vertex> A) {
    check_sorted_parties(A, bundle.access.k, "reconstruct");
    auto is_public = [&](Vertex v) {
        return std::binary_search(bundle.public_parties.begin(), bundle.public_parties.end(), v);
    };
    VertexList real;
    for (auto v : A)
        if (!is_public(v)) real.push_back(v);
    for (const auto& B : bundle.access.R) {
        VertexList b_real;
        for (auto v : B)
            if (!is_public(v)) b_real.push_back(v);
        if (b_real != real) continue;
        VertexList buf(B.size());
        const auto g = image_rank(bundle.G.indexer(), B, bundle.shares, buf);
        return bundle.H_s.present(std::span<const Vertex>(B)) != bundle.G.present(g);
    }
    throw ValidationError("reconstruct: set is not in R");
}

Lifted lift(const AccessStructure& access) {
    access.validate();
    Lifted out;
    out.access.k = access.k + access.r - 1;
    out.access.r = access.r;
    out.access.l = access.l;
    for (std::uint32_t j = 0; j + 1 < access.r; ++j) out.public_parties.push_back(access.k + j);
    for (const auto& A : access.R) {
        VertexList B = A;
        for (std::uint32_t j = 0; B.size() < access.r; ++j) B.push_back(access.k + j);
        out.access.R.push_back(std::move(B));
    }
    return out;
}

Hypergraph mask_by_secret(const Hypergraph& Hprime, bool s, const AccessStructure& access) {
    access.validate();
    if (Hprime.n() != access.k || Hprime.r() != access.r) throw ValidationError("mask: H' must live on the k parties");
    Hypergraph out = Hprime;
    if (s)
        for (const auto& A : access.R) out.flip(out.indexer().rank(A));
    return out;
}

ReducedInput secrecy_reduction_apply(const Hypergraph& Hprime, const Hypergraph& G, const VertexList& leaked, bool s,
                                     const AccessStructure& access, std::span<const Vertex> pi, std::uint64_t fresh) {
    access.validate();
    if (!access.uniform()) throw ValidationError("reduction: R must be r-uniform");
    if (Hprime.n() != access.k || Hprime.r() != access.r) throw ValidationError("reduction: H' must live on the k parties");
    if (G.r() != access.r || G.n() < access.k) throw ValidationError("reduction: G shape mismatch");
    check_sorted_parties(leaked, access.k, "reduction");
    if (access.qualified(leaked)) throw ValidationError("reduction: leaked set is qualified");
    validate_permutation(pi, G.n());

    ReducedInput out;
    out.H_s = mask_by_secret(Hprime, s, access);
    const auto in_r = r_coords(access);
    unsigned bit = 0;
    for (std::uint64_t c = 0; c < in_r.size(); ++c)
        if (!in_r[c]) out.H_s.set_present(c, (fresh >> bit++) & 1U);
    out.G = relabel(G, pi);
    for (auto v : leaked) out.labels.push_back(pi[v]);
    return out;
}

ReducedInput secrecy_reduction_map(const Hypergraph& Hprime, const Hypergraph& G, const VertexList& leaked, bool s,
                                   const AccessStructure& access, Rng& rng) {
    VertexList pi(G.n());
    std::iota(pi.begin(), pi.end(), 0U);
    std::shuffle(pi.begin(), pi.end(), rng);
    return secrecy_reduction_apply(Hprime, G, leaked, s, access, pi, rng());
}

ExactDist deal_distribution(const AccessStructure& access, bool s, std::uint32_t n, const VertexList& I) {
    access.validate();
    if (!access.uniform()) throw ValidationError("deal: R must be r-uniform");
    check_sorted_parties(I, access.k, "deal distribution");
    guard_desk_scale(n, access.r);
    const Hypergraph shape(n, access.r);
    const std::uint64_t g_coords = shape.num_coords();
    const std::uint64_t h_coords = Hypergraph(access.k, access.r).num_coords();
    const auto in_r = r_coords(access);
    const auto non_r = static_cast<unsigned>(std::count(in_r.begin(), in_r.end(), false));
    const std::uint64_t g_full = (std::uint64_t{1} << g_coords) - 1;

    ExactDist dist;
    dist.denominator = BigInt(embedding_count(n, access.k, 0)) << static_cast<unsigned>(g_coords + non_r);
    VertexList buf(access.r), comb(access.r);
    for_each_embedding(n, access.k, {}, [&](std::span<const Vertex> map) {
        // G coordinate fed by each H coordinate.
        std::vector<std::uint64_t> feed;
        if (h_coords > 0) {
            std::iota(comb.begin(), comb.end(), 0U);
            do feed.push_back(image_rank(shape.indexer(), comb, map, buf));
            while (next_combination(comb, access.k));
        }
        std::uint64_t pinned = 0;
        for (auto g : feed) pinned |= std::uint64_t{1} << g;
        const std::uint64_t free = g_full & ~pinned;
        for (std::uint64_t h = 0; h < (std::uint64_t{1} << h_coords); ++h) {
            std::uint64_t value = 0, hs_r = 0;
            for (std::uint64_t c = 0; c < h_coords; ++c) {
                const bool bit = (h >> c) & 1U;
                if (bit) value |= std::uint64_t{1} << feed[c];
                if (in_r[c] && bit != s) hs_r |= std::uint64_t{1} << c;
            }
            std::uint64_t sub = 0;
            do {
                for (std::uint64_t fresh = 0; fresh < (std::uint64_t{1} << non_r); ++fresh) {
                    std::uint64_t hs = hs_r;
                    unsigned bit = 0;
                    for (std::uint64_t c = 0; c < h_coords; ++c)
                        if (!in_r[c] && ((fresh >> bit++) & 1U)) hs |= std::uint64_t{1} << c;
                    ExactDist::Key key{hs, value | sub};
                    for (auto i : I) key.push_back(map[i]);
                    dist.add(key, 1);
                }
                sub = (sub - free) & free;
            } while (sub != 0);
        }
    });
    return dist;
}

ExactDist reduction_distribution(const AccessStructure& access, bool s, std::uint32_t n, const VertexList& I,
                                 Which which) {
    access.validate();
    guard_desk_scale(n, access.r);
    if (n > 6) throw GuardExceeded("reduction distribution enumerates all n! relabelings (n <= 6)");
    const ModelParams params{n, access.k, access.r, I, 0};
    params.validate();
    const Hypergraph hshape(access.k, access.r);
    const auto in_r = r_coords(access);
    const auto non_r = static_cast<unsigned>(std::count(in_r.begin(), in_r.end(), false));

    ExactDist dist;
    BigInt n_fact = 1;
    for (std::uint32_t i = 2; i <= n; ++i) n_fact *= i;
    bool first = true;
    for (std::uint64_t h = 0; h < (std::uint64_t{1} << hshape.num_coords()); ++h) {
        const Hypergraph Hprime = Hypergraph::from_mask(access.k, access.r, h);
        const Pmf pmf = exact_pmf(Hprime, params, which, Exec::serial);
        if (first) {
            dist.denominator = (pmf.denominator << static_cast<unsigned>(hshape.num_coords() + non_r)) * n_fact;
            first = false;
        }
        for (std::uint64_t g = 0; g < pmf.weight.size(); ++g) {
            if (pmf.weight[g] == 0) continue;
            const Hypergraph G = Hypergraph::from_mask(n, access.r, g);
            for_each_permutation(n, [&](std::span<const Vertex> pi) {
                for (std::uint64_t fresh = 0; fresh < (std::uint64_t{1} << non_r); ++fresh) {
                    const auto out = secrecy_reduction_apply(Hprime, G, I, s, access, pi, fresh);
                    ExactDist::Key key{out.H_s.mask(), out.G.mask()};
                    key.insert(key.end(), out.labels.begin(), out.labels.end());
                    dist.add(key, pmf.weight[g]);
                }
            });
        }
    }
    return dist;
}

SecrecyResult secrecy_tv(const AccessStructure& access, const VertexList& I, std::uint32_t n, Exec exec) {
    access.validate();
    if (!access.uniform()) throw ValidationError("secrecy: R must be r-uniform");
    check_sorted_parties(I, access.k, "secrecy");
    if (n < access.k) throw ValidationError("secrecy: need n >= k");
    const std::uint64_t coords = binom_u64(n, access.r);
    if (coords > kSecrecyCoordLimit) throw GuardExceeded("secrecy_tv needs C(n,r) <= " + std::to_string(kSecrecyCoordLimit));
    if (embedding_count(n, access.k, 0) > kEmbeddingLimit) throw GuardExceeded("too many embeddings for secrecy_tv");

    kernels::SecrecyTable table;
    table.r_edges = access.R.size();
    table.label_tuples = 1;
    for (std::size_t i = 0; i < I.size(); ++i) table.label_tuples *= n;
    if (table.r_edges > 20 || (static_cast<double>(table.label_tuples) * std::ldexp(1.0, static_cast<int>(table.r_edges)) > 1e8))
        throw GuardExceeded("secrecy_tv count table too large");
    const auto& idx = SubsetIndexer::get(n, access.r);
    VertexList buf(access.r);
    for_each_embedding(n, access.k, {}, [&](std::span<const Vertex> map) {
        for (const auto& A : access.R) table.g_rank.push_back(image_rank(idx, A, map, buf));
        std::uint64_t label = 0;
        for (auto it = I.rbegin(); it != I.rend(); ++it) label = label * n + map[*it];
        table.label_index.push_back(static_cast<std::uint32_t>(label));
        ++table.embeddings;
    });
    const BigInt diff = exec == Exec::serial ? kernels::serial::secrecy_abs_diff(table, static_cast<unsigned>(coords))
                                             : kernels::omp::secrecy_abs_diff(table, static_cast<unsigned>(coords));
    SecrecyResult out;
    out.tv_exact = Rational(diff, (BigInt(2) * table.embeddings) << static_cast<unsigned>(coords));
    out.tv = static_cast<double>(out.tv_exact);
    out.unqualified = !access.qualified(I);
    return out;
}

std::int64_t csirmaz_f(std::uint64_t size, std::uint32_t l) {
    std::int64_t sum = 0;
    for (std::uint64_t t = 1; t <= size && t <= l; ++t) sum += static_cast<std::int64_t>(l) - static_cast<std::int64_t>(t) + 1;
    return sum;
}

CsirmazReport csirmaz_check(std::uint32_t ground, const std::vector<VertexList>& R, std::uint32_t l) {
    if (ground > kCsirmazGroundLimit) throw GuardExceeded("csirmaz_check needs ground <= " + std::to_string(kCsirmazGroundLimit));
    std::vector<std::uint32_t> r_masks;
    for (const auto& A : R) {
        check_sorted_parties(A, ground, "csirmaz");
        if (A.empty()) throw ValidationError("csirmaz: empty qualifying set");
        std::uint32_t m = 0;
        for (auto v : A) m |= 1U << v;
        r_masks.push_back(m);
    }
    const std::uint32_t count = 1U << ground;
    std::vector<std::int64_t> f(count);
    std::vector<bool> qualified(count), in_s(count);
    for (std::uint32_t A = 0; A < count; ++A) {
        f[A] = csirmaz_f(static_cast<std::uint64_t>(std::popcount(A)), l);
        qualified[A] = std::any_of(r_masks.begin(), r_masks.end(), [&](std::uint32_t m) { return (A & m) == m; });
        in_s[A] = !qualified[A] && static_cast<std::uint32_t>(std::popcount(A)) <= l;
    }
    CsirmazReport rep;
    auto note = [&](const std::string& what, std::uint32_t A, std::uint32_t B) {
        if (rep.violations.size() < 20) rep.violations.push_back(what + " A=" + std::to_string(A) + " B=" + std::to_string(B));
    };
    for (std::uint32_t A = 0; A < count; ++A)
        for (std::uint32_t v = 0; v < ground; ++v)
            if (!((A >> v) & 1U) && f[A] > f[A | (1U << v)]) {
                rep.monotone = false;
                note("monotone", A, A | (1U << v));
            }
    for (std::uint32_t A = 0; A < count; ++A)
        for (std::uint32_t B = A; B < count; ++B) {
            ++rep.pairs_checked;
            const std::int64_t slack = f[A] + f[B] - f[A | B] - f[A & B];
            if (slack < 0) {
                rep.submodular = false;
                note("submodular", A, B);
            }
            if (in_s[A] && in_s[B] && qualified[A | B]) {
                ++rep.qualifying_pairs;
                if (slack < 1) {
                    rep.extramodular = false;
                    note("extramodular", A, B);
                }
            }
        }
    for (std::uint32_t v = 0; v < ground; ++v)
        if (f[1U << v] > static_cast<std::int64_t>(l)) {
            rep.minimal = false;
            note("minimal", 1U << v, 1U << v);
        }
    return rep;
}

}  // namespace psub
