#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "psub/hypercore.hpp"
#include "psub/rng.hpp"

namespace psub {

/// Parameters of the planted / null pair: host size n, planted size k, uniformity r,
/// leakage set L (sorted, inside [0,k)) embedded identically.
struct ModelParams {
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::uint32_t r = 2;
    VertexList L;
    std::uint64_t seed = 0;

    std::uint32_t l() const { return static_cast<std::uint32_t>(L.size()); }
    void validate() const;
};

enum class Which { planted, null };

void fill_uniform(Hypergraph& g, Rng& rng);

Hypergraph sample_H(std::uint32_t k, std::uint32_t r, Rng& rng);
Embedding sample_embedding(const ModelParams& params, Rng& rng);

/// Writes H onto G through `map`; every other coordinate of G is left untouched.
void embed_into(const Hypergraph& H, std::span<const Vertex> map, Hypergraph& G);

/// Draw order: embedding first, then all C(n,r) free bits, then the embedded coordinates
/// are overwritten.
Hypergraph sample_planted(const Hypergraph& H, const ModelParams& params, Rng& rng);
Hypergraph sample_planted(const Hypergraph& H, const ModelParams& params, Rng& rng,
                          Embedding& embedding_out);
Hypergraph sample_null(const Hypergraph& H, const ModelParams& params, Rng& rng);
Hypergraph sample_model(Which which, const Hypergraph& H, const ModelParams& params, Rng& rng);

inline constexpr unsigned kExactCoordLimit = 20;
inline constexpr std::uint64_t kEmbeddingLimit = 10'000'000;

/// Exact distribution over spin vectors: the mass of presence mask g is
/// weight[g] / denominator. Weights are integers, so the distribution is exact.
struct Pmf {
    std::uint32_t n = 0;
    std::uint32_t r = 2;
    unsigned coords = 0;
    std::vector<std::uint64_t> weight;
    BigInt denominator = 1;

    double prob(std::uint64_t g) const;
    Rational exact(std::uint64_t g) const;
    Rational total() const;
};

enum class Exec { serial, parallel };

Pmf exact_pmf(const Hypergraph& H, const ModelParams& params, Which which,
              Exec exec = Exec::parallel);

Rational tv_distance_exact(const Pmf& p, const Pmf& q);
double tv_distance(const Pmf& p, const Pmf& q);

/// chi^2(p || q) = sum p^2/q - 1; throws ValidationError if p is not dominated by q.
Rational chi_square_exact(const Pmf& p, const Pmf& q);

/// Exact discrete distribution over arbitrary keys with integer weights over a shared
/// denominator; used for protocol ensembles (shares, transcripts).
struct ExactDist {
    using Key = std::vector<std::uint64_t>;
    std::map<Key, BigInt> weight;
    BigInt denominator = 1;

    void add(const Key& key, const BigInt& w) { weight[key] += w; }
    Rational total() const;
};

Rational tv_distance_exact(const ExactDist& p, const ExactDist& q);
bool same_distribution(const ExactDist& p, const ExactDist& q);

/// Checks ModelParams/hypergraph shape agreement, throwing ValidationError.
void check_shape(const Hypergraph& H, const ModelParams& params);

}  // namespace psub
