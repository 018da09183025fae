#include "psub/psm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

namespace psub {

namespace {

std::uint64_t table_mask(const FunctionTable& F) {
    if (F.size() > 64) throw GuardExceeded("exact PSM ensembles need k^r <= 64");
    std::uint64_t m = 0;
    for (std::uint64_t i = 0; i < F.size(); ++i)
        if (F.bits[i]) m |= std::uint64_t{1} << i;
    return m;
}

FunctionTable table_from_mask(std::uint32_t k, std::uint32_t r, std::uint64_t mask) {
    FunctionTable F{k, r, {}};
    F.bits.resize(F.size());
    for (std::uint64_t i = 0; i < F.bits.size(); ++i) F.bits[i] = (mask >> i) & 1U;
    return F;
}

VertexList cross_vertices(const FunctionTable& F, std::span<const std::uint32_t> x) {
    VertexList v(F.r);
    for (std::uint32_t i = 0; i < F.r; ++i) v[i] = part_vertex(F.k, i, x[i]);
    return v;
}

void check_input(const FunctionTable& F, std::span<const std::uint32_t> x) {
    if (x.size() != F.r) throw ValidationError("input must have one entry per party");
    for (auto xi : x)
        if (xi >= F.k) throw ValidationError("input out of range");
}

void guard_exact(std::uint32_t n, std::uint32_t r) {
    if (binom_u64(n, r) > kPsmCoordLimit) throw GuardExceeded("exact PSM ensembles need C(n,r) <= " + std::to_string(kPsmCoordLimit));
}

/// Uniform mixture of distributions, each given over its own denominator.
ExactDist mix(const std::vector<ExactDist>& parts) {
    ExactDist out;
    BigInt common = 1;
    for (const auto& d : parts) common = boost::multiprecision::lcm(common, d.denominator);
    for (const auto& d : parts) {
        const BigInt scale = common / d.denominator;
        for (const auto& [key, w] : d.weight) out.add(key, w * scale);
    }
    out.denominator = common * parts.size();
    return out;
}

void for_each_permutation(std::uint32_t n, const std::function<void(std::span<const Vertex>)>& fn) {
    VertexList pi(n);
    std::iota(pi.begin(), pi.end(), 0U);
    do fn(pi);
    while (std::next_permutation(pi.begin(), pi.end()));
}

}  // namespace

void FunctionTable::validate() const {
    if (r < 2) throw ValidationError("function table: r must be at least 2");
    if (k < 1) throw ValidationError("function table: k must be at least 1");
    if (std::pow(static_cast<double>(k), r) > 16777216.0) throw GuardExceeded("function table too large");
    if (bits.size() != size()) throw ValidationError("function table must list k^r bits");
    for (auto b : bits)
        if (b > 1) throw ValidationError("function table bits must be 0 or 1");
}

std::uint64_t FunctionTable::size() const {
    std::uint64_t s = 1;
    for (std::uint32_t i = 0; i < r; ++i) s *= k;
    return s;
}

std::uint64_t FunctionTable::index(std::span<const std::uint32_t> x) const {
    std::uint64_t idx = 0;
    for (auto xi : x) idx = idx * k + xi;
    return idx;
}

std::vector<std::uint32_t> FunctionTable::input(std::uint64_t idx) const {
    std::vector<std::uint32_t> x(r);
    for (std::uint32_t i = r; i-- > 0;) {
        x[i] = static_cast<std::uint32_t>(idx % k);
        idx /= k;
    }
    return x;
}

Hypergraph embed_function(const FunctionTable& F, Rng& rng) {
    F.validate();
    Hypergraph Fbar(F.r * F.k, F.r);
    fill_uniform(Fbar, rng);
    for (std::uint64_t i = 0; i < F.size(); ++i) {
        const auto v = cross_vertices(F, F.input(i));
        Fbar.set_present(Fbar.indexer().rank(v), F.bits[i] != 0);
    }
    return Fbar;
}

FunctionTable read_function(const Hypergraph& H, std::uint32_t k) {
    if (k == 0 || H.n() != H.r() * k) throw ValidationError("hypergraph must have r*k vertices");
    FunctionTable F{k, H.r(), {}};
    F.bits.resize(F.size());
    for (std::uint64_t i = 0; i < F.size(); ++i) F.bits[i] = H.present(std::span<const Vertex>(cross_vertices(F, F.input(i))));
    return F;
}

PsmInstance psm_setup(const FunctionTable& F, std::uint32_t n, Rng& rng) {
    F.validate();
    if (n < F.r * F.k) throw ValidationError("psm setup: need n >= r*k");
    PsmInstance inst;
    inst.F = F;
    inst.Fbar = embed_function(F, rng);
    const ModelParams params{n, F.r * F.k, F.r, {}, 0};
    inst.G = sample_planted(inst.Fbar, params, rng, inst.phi);
    return inst;
}

Vertex psm_message(const PsmInstance& inst, std::uint32_t party, std::uint32_t x) {
    if (party >= inst.F.r) throw ValidationError("psm message: party out of range");
    if (x >= inst.F.k) throw ValidationError("psm message: input out of range");
    return inst.phi.map[part_vertex(inst.F.k, party, x)];
}

bool psm_evaluate(const Hypergraph& G, std::span<const Vertex> messages) {
    if (messages.size() != G.r()) throw ValidationError("psm evaluate: need exactly r messages");
    VertexList u(messages.begin(), messages.end());
    std::sort(u.begin(), u.end());
    if (std::adjacent_find(u.begin(), u.end()) != u.end()) throw ValidationError("psm evaluate: repeated vertices");
    if (u.back() >= G.n()) throw ValidationError("psm evaluate: vertex out of range");
    return G.present(std::span<const Vertex>(u));
}

Transcript psm_run(const PsmInstance& inst, std::span<const std::uint32_t> inputs) {
    check_input(inst.F, inputs);
    Transcript t;
    for (std::uint32_t i = 0; i < inst.F.r; ++i) t.messages.push_back(psm_message(inst, i, inputs[i]));
    t.output = psm_evaluate(inst.G, t.messages);
    return t;
}

Simulated psm_simulate(const FunctionTable& F, bool y, std::uint32_t n, Rng& rng, bool allow_collisions) {
    F.validate();
    if (n < F.r) throw ValidationError("psm simulate: need n >= r");
    Simulated out;
    if (allow_collisions) {
        for (std::uint32_t i = 0; i < F.r; ++i) out.messages.push_back(static_cast<Vertex>(uniform_below(rng, n)));
    } else {
        VertexList pool(n);
        std::iota(pool.begin(), pool.end(), 0U);
        for (std::uint32_t i = 0; i < F.r; ++i) {
            std::swap(pool[i], pool[i + uniform_below(rng, n - i)]);
            out.messages.push_back(pool[i]);
        }
    }
    out.G = Hypergraph(n, F.r);
    fill_uniform(out.G, rng);
    VertexList u = out.messages;
    std::sort(u.begin(), u.end());
    if (std::adjacent_find(u.begin(), u.end()) == u.end()) out.G.set_present(out.G.indexer().rank(u), y);
    return out;
}

Reduced psm_reduction_apply(const Hypergraph& H, std::uint32_t k, const Hypergraph& G, const VertexList& leaked,
                            std::span<const Vertex> pi) {
    if (G.r() != H.r()) throw ValidationError("psm reduction: uniformity mismatch");
    if (leaked.size() != H.r()) throw ValidationError("psm reduction: need exactly r leaked vertices");
    validate_permutation(pi, G.n());
    Reduced out;
    out.F = read_function(H, k);
    out.G = relabel(G, pi);
    for (auto v : leaked) {
        if (v >= G.n()) throw ValidationError("psm reduction: leaked vertex out of range");
        out.labels.push_back(pi[v]);
    }
    return out;
}

Reduced psm_reduction(const Hypergraph& H, std::uint32_t k, const Hypergraph& G, const VertexList& leaked, Rng& rng) {
    VertexList pi(G.n());
    std::iota(pi.begin(), pi.end(), 0U);
    std::shuffle(pi.begin(), pi.end(), rng);
    return psm_reduction_apply(H, k, G, leaked, pi);
}

InputSelector constant_selector(std::vector<std::uint32_t> x) {
    return {"constant", [x](const FunctionTable& F) {
                check_input(F, x);
                return Selection{{{x, BigInt(1)}}, 1};
            }};
}

InputSelector uniform_selector() {
    return {"uniform", [](const FunctionTable& F) {
                Selection s;
                for (std::uint64_t i = 0; i < F.size(); ++i) s.support.emplace_back(F.input(i), 1);
                s.denominator = F.size();
                return s;
            }};
}

InputSelector preimage_selector(bool target) {
    return {target ? "preimage:1" : "preimage:0", [target](const FunctionTable& F) {
                for (std::uint64_t i = 0; i < F.size(); ++i)
                    if ((F.bits[i] != 0) == target) return Selection{{{F.input(i), BigInt(1)}}, 1};
                return Selection{{{F.input(0), BigInt(1)}}, 1};
            }};
}

InputSelector parse_selector(const std::string& spec, std::uint32_t r) {
    if (spec == "uniform") return uniform_selector();
    if (spec == "preimage:0" || spec == "preimage:1") return preimage_selector(spec.back() == '1');
    if (spec.rfind("constant:", 0) == 0) {
        std::vector<std::uint32_t> x;
        std::stringstream ss(spec.substr(9));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                x.push_back(static_cast<std::uint32_t>(std::stoul(item)));
            } catch (const std::exception&) {
                throw ValidationError("selector: bad input list");
            }
        }
        if (x.size() != r) throw ValidationError("selector: constant input needs r entries");
        return constant_selector(x);
    }
    throw ValidationError("unknown selector: " + spec);
}

ExactDist real_transcript_distribution(const FunctionTable& F, const InputSelector& selector, std::uint32_t n) {
    F.validate();
    const std::uint32_t v = F.r * F.k;
    if (n < v) throw ValidationError("psm: need n >= r*k");
    guard_exact(n, F.r);
    if (embedding_count(n, v, 0) > kEmbeddingLimit) throw GuardExceeded("too many embeddings");
    const std::uint64_t fmask = table_mask(F);
    const Selection sel = selector.select(F);
    const Hypergraph fshape(v, F.r);
    const Hypergraph gshape(n, F.r);

    // Coordinates of Fbar not pinned by F.
    std::vector<bool> cross(fshape.num_coords(), false);
    for (std::uint64_t i = 0; i < F.size(); ++i) cross[fshape.indexer().rank(cross_vertices(F, F.input(i)))] = true;
    std::vector<std::uint64_t> loose;
    for (std::uint64_t c = 0; c < cross.size(); ++c)
        if (!cross[c]) loose.push_back(c);

    ExactDist dist;
    const std::uint64_t g_full = (std::uint64_t{1} << gshape.num_coords()) - 1;
    dist.denominator = sel.denominator * embedding_count(n, v, 0) << static_cast<unsigned>(loose.size() + gshape.num_coords() - fshape.num_coords());
    VertexList comb(F.r), image(F.r);
    for_each_embedding(n, v, {}, [&](std::span<const Vertex> map) {
        std::vector<std::uint64_t> feed;
        std::iota(comb.begin(), comb.end(), 0U);
        do {
            for (std::uint32_t i = 0; i < F.r; ++i) image[i] = map[comb[i]];
            std::sort(image.begin(), image.end());
            feed.push_back(gshape.indexer().rank(image));
        } while (next_combination(comb, v));
        std::uint64_t pinned = 0, base = 0;
        for (auto g : feed) pinned |= std::uint64_t{1} << g;
        for (std::uint64_t i = 0; i < F.size(); ++i)
            if (F.bits[i]) base |= std::uint64_t{1} << feed[fshape.indexer().rank(cross_vertices(F, F.input(i)))];
        const std::uint64_t free = g_full & ~pinned;
        for (std::uint64_t a = 0; a < (std::uint64_t{1} << loose.size()); ++a) {
            std::uint64_t value = base;
            for (std::size_t j = 0; j < loose.size(); ++j)
                if ((a >> j) & 1U) value |= std::uint64_t{1} << feed[loose[j]];
            std::uint64_t sub = 0;
            do {
                for (const auto& [x, w] : sel.support) {
                    ExactDist::Key key{fmask, value | sub};
                    for (std::uint32_t i = 0; i < F.r; ++i) key.push_back(map[part_vertex(F.k, i, x[i])]);
                    dist.add(key, w);
                }
                sub = (sub - free) & free;
            } while (sub != 0);
        }
    });
    return dist;
}

ExactDist simulated_distribution(const FunctionTable& F, const InputSelector& selector, std::uint32_t n,
                                 bool allow_collisions) {
    F.validate();
    if (n < F.r) throw ValidationError("psm: need n >= r");
    guard_exact(n, F.r);
    const std::uint64_t fmask = table_mask(F);
    const Selection sel = selector.select(F);
    const Hypergraph gshape(n, F.r);
    const std::uint64_t coords = gshape.num_coords();

    std::vector<VertexList> tuples;
    VertexList u(F.r, 0);
    std::function<void(std::uint32_t)> build = [&](std::uint32_t i) {
        if (i == F.r) {
            tuples.push_back(u);
            return;
        }
        for (Vertex v = 0; v < n; ++v) {
            if (!allow_collisions && std::find(u.begin(), u.begin() + i, v) != u.begin() + i) continue;
            u[i] = v;
            build(i + 1);
        }
    };
    build(0);

    ExactDist dist;
    dist.denominator = sel.denominator * tuples.size() << static_cast<unsigned>(coords);
    const std::uint64_t g_full = (std::uint64_t{1} << coords) - 1;
    for (const auto& [x, w] : sel.support) {
        const bool y = F.bit(x);
        for (const auto& t : tuples) {
            VertexList s = t;
            std::sort(s.begin(), s.end());
            const bool distinct = std::adjacent_find(s.begin(), s.end()) == s.end();
            std::uint64_t pinned = 0, value = 0;
            if (distinct) {
                pinned = std::uint64_t{1} << gshape.indexer().rank(s);
                if (y) value = pinned;
            }
            const std::uint64_t free = g_full & ~pinned;
            const BigInt weight = distinct ? BigInt(w * 2) : w;
            std::uint64_t sub = 0;
            do {
                ExactDist::Key key{fmask, value | sub};
                key.insert(key.end(), t.begin(), t.end());
                dist.add(key, weight);
                sub = (sub - free) & free;
            } while (sub != 0);
        }
    }
    return dist;
}

ExactDist real_transcript_mixture(std::uint32_t k, std::uint32_t r, const InputSelector& selector, std::uint32_t n) {
    std::vector<ExactDist> parts;
    const FunctionTable shape{k, r, {}};
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << shape.size()); ++m)
        parts.push_back(real_transcript_distribution(table_from_mask(k, r, m), selector, n));
    return mix(parts);
}

ExactDist simulated_mixture(std::uint32_t k, std::uint32_t r, const InputSelector& selector, std::uint32_t n) {
    std::vector<ExactDist> parts;
    const FunctionTable shape{k, r, {}};
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << shape.size()); ++m)
        parts.push_back(simulated_distribution(table_from_mask(k, r, m), selector, n));
    return mix(parts);
}

ExactDist psm_reduction_distribution(std::uint32_t k, std::uint32_t r, const InputSelector& selector, std::uint32_t n,
                                     Which which) {
    guard_exact(n, r);
    if (n > 6) throw GuardExceeded("reduction distribution enumerates all n! relabelings (n <= 6)");
    const std::uint32_t v = r * k;
    if (n < v) throw ValidationError("psm: need n >= r*k");
    const Hypergraph hshape(v, r);
    std::vector<ExactDist> parts;
    for (std::uint64_t h = 0; h < (std::uint64_t{1} << hshape.num_coords()); ++h) {
        const Hypergraph H = Hypergraph::from_mask(v, r, h);
        const FunctionTable F = read_function(H, k);
        const std::uint64_t fmask = table_mask(F);
        const Selection sel = selector.select(F);
        ExactDist part;
        bool first = true;
        for (const auto& [x, w] : sel.support) {
            const VertexList L = cross_vertices(F, x);
            const Pmf pmf = exact_pmf(H, ModelParams{n, v, r, L, 0}, which, Exec::serial);
            if (first) {
                BigInt n_fact = 1;
                for (std::uint32_t i = 2; i <= n; ++i) n_fact *= i;
                part.denominator = sel.denominator * pmf.denominator * n_fact;
                first = false;
            }
            for (std::uint64_t g = 0; g < pmf.weight.size(); ++g) {
                if (pmf.weight[g] == 0) continue;
                const Hypergraph G = Hypergraph::from_mask(n, r, g);
                for_each_permutation(n, [&](std::span<const Vertex> pi) {
                    const Reduced out = psm_reduction_apply(H, k, G, L, pi);
                    ExactDist::Key key{fmask, out.G.mask()};
                    key.insert(key.end(), out.labels.begin(), out.labels.end());
                    part.add(key, w * pmf.weight[g]);
                });
            }
        }
        parts.push_back(std::move(part));
    }
    return mix(parts);
}

Rational real_vs_sim_tv(const FunctionTable& F, const InputSelector& selector, std::uint32_t n, bool allow_collisions) {
    return tv_distance_exact(real_transcript_distribution(F, selector, n),
                             simulated_distribution(F, selector, n, allow_collisions));
}

unsigned message_bits(std::uint32_t n) {
    if (n == 0) throw ValidationError("message_bits: n must be positive");
    return static_cast<unsigned>(std::bit_width(n - 1));
}

}  // namespace psub
