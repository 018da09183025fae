#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psub/hypercore.hpp"
#include "psub/models.hpp"
#include "psub/rng.hpp"

namespace psub {

/// Parties [0,k); qualifying sets R (each sorted, size <= r); secrecy threshold l.
/// The unqualified family S is derived: independent sets of R of size <= l.
struct AccessStructure {
    std::uint32_t k = 0;
    std::uint32_t r = 2;
    std::vector<VertexList> R;
    std::uint32_t l = 0;

    void validate() const;
    bool uniform() const;
    /// A contains some set of R.
    bool qualified(std::span<const Vertex> A) const;
    bool independent(std::span<const Vertex> A) const { return !qualified(A); }
    bool contains(std::span<const Vertex> A) const;
};

struct ShareBundle {
    std::uint32_t n = 0;
    AccessStructure access;
    Hypergraph H_s;
    Hypergraph G;
    VertexList shares;
    /// Parties whose shares are published (auxiliaries added by lift).
    VertexList public_parties;
};

/// Draw order: H, then phi, then the free bits of G, then the bits of H_s outside R.
ShareBundle deal(const AccessStructure& access, bool s, std::uint32_t n, Rng& rng,
                 const VertexList& public_parties = {});

/// H_s(A') xor G(phi(A')) where A' is the set of R whose real parties are A and whose
/// remaining members are public.
bool reconstruct(const ShareBundle& bundle, std::span<const Vertex> A);

struct Lifted {
    AccessStructure access;
    VertexList public_parties;
};

/// Adds auxiliaries k..k+r-2 (public) and pads each A in R with the first r-|A| of them.
Lifted lift(const AccessStructure& access);

/// H xor s on the coordinates of R.
Hypergraph mask_by_secret(const Hypergraph& Hprime, bool s, const AccessStructure& access);

struct ReducedInput {
    Hypergraph H_s;
    Hypergraph G;
    VertexList labels;
};

/// Fully specified reduction: mask by sR, replace the bits of H' outside R by `fresh`
/// (read in rank order, one bit per non-R coordinate), relabel G and the leaked labels by pi.
ReducedInput secrecy_reduction_apply(const Hypergraph& Hprime, const Hypergraph& G, const VertexList& leaked, bool s,
                                     const AccessStructure& access, std::span<const Vertex> pi, std::uint64_t fresh);

/// Same map with pi and the fresh bits drawn from rng.
ReducedInput secrecy_reduction_map(const Hypergraph& Hprime, const Hypergraph& G, const VertexList& leaked, bool s,
                                   const AccessStructure& access, Rng& rng);

/// Exact distribution of (H_s, G, phi(I)) under deal with secret s; keys are
/// [H_s mask, G mask, phi(i) for i in I].
ExactDist deal_distribution(const AccessStructure& access, bool s, std::uint32_t n, const VertexList& I);

/// Exact pushforward of the planted (or null) ensemble with L = I and uniform H' through
/// the reduction map; keys as in deal_distribution.
ExactDist reduction_distribution(const AccessStructure& access, bool s, std::uint32_t n, const VertexList& I,
                                 Which which);

struct SecrecyResult {
    Rational tv_exact = 0;
    double tv = 0;
    bool unqualified = true;
};

inline constexpr unsigned kSecrecyCoordLimit = 24;

/// Exact TV between the (H_s, G, shares of I) views for s = 0 and s = 1.
SecrecyResult secrecy_tv(const AccessStructure& access, const VertexList& I, std::uint32_t n, Exec exec = Exec::parallel);

/// sum_{t=1}^{size} max(l - t + 1, 0).
std::int64_t csirmaz_f(std::uint64_t size, std::uint32_t l);

struct CsirmazReport {
    bool monotone = true;
    bool submodular = true;
    bool extramodular = true;
    bool minimal = true;
    std::uint64_t pairs_checked = 0;
    std::uint64_t qualifying_pairs = 0;
    std::vector<std::string> violations;

    bool ok() const { return monotone && submodular && extramodular && minimal; }
};

inline constexpr std::uint32_t kCsirmazGroundLimit = 12;

/// Exhaustive check of f over all subsets of [0,ground); sets are bitmasks.
CsirmazReport csirmaz_check(std::uint32_t ground, const std::vector<VertexList>& R, std::uint32_t l);

}  // namespace psub
