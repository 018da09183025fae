#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "psub/hypercore.hpp"
#include "psub/models.hpp"
#include "psub/rng.hpp"

namespace psub {

/// F: [0,k)^r -> {0,1}, row-major (the first input is most significant).
struct FunctionTable {
    std::uint32_t k = 1;
    std::uint32_t r = 2;
    std::vector<std::uint8_t> bits;

    void validate() const;
    std::uint64_t size() const;
    std::uint64_t index(std::span<const std::uint32_t> x) const;
    std::vector<std::uint32_t> input(std::uint64_t index) const;
    bool bit(std::span<const std::uint32_t> x) const { return bits[index(x)] != 0; }
    int spin(std::span<const std::uint32_t> x) const { return spin_of_bit(bit(x)); }
};

/// Vertex (x, i) of the r-partite embedding.
inline Vertex part_vertex(std::uint32_t k, std::uint32_t i, std::uint32_t x) { return i * k + x; }

/// Cross-part hyperedges carry F; every other coordinate of the r*k vertex hypergraph is uniform.
Hypergraph embed_function(const FunctionTable& F, Rng& rng);

/// Reads F off a hypergraph on r*k vertices.
FunctionTable read_function(const Hypergraph& H, std::uint32_t k);

struct PsmInstance {
    FunctionTable F;
    Hypergraph Fbar;
    Hypergraph G;
    Embedding phi;
};

PsmInstance psm_setup(const FunctionTable& F, std::uint32_t n, Rng& rng);

Vertex psm_message(const PsmInstance& inst, std::uint32_t party, std::uint32_t x);

/// Presence bit of G at the message set; messages must be distinct.
bool psm_evaluate(const Hypergraph& G, std::span<const Vertex> messages);

struct Transcript {
    VertexList messages;
    bool output = false;
};

/// The three roles in order: each party sends its message, then the evaluator reads G.
Transcript psm_run(const PsmInstance& inst, std::span<const std::uint32_t> inputs);

struct Simulated {
    Hypergraph G;
    VertexList messages;
};

/// Uniform distinct (or, with allow_collisions, unrestricted) u; G(u) = y, all else uniform.
Simulated psm_simulate(const FunctionTable& F, bool y, std::uint32_t n, Rng& rng, bool allow_collisions = false);

struct Reduced {
    FunctionTable F;
    Hypergraph G;
    VertexList labels;
};

Reduced psm_reduction_apply(const Hypergraph& H, std::uint32_t k, const Hypergraph& G, const VertexList& leaked,
                            std::span<const Vertex> pi);
Reduced psm_reduction(const Hypergraph& H, std::uint32_t k, const Hypergraph& G, const VertexList& leaked, Rng& rng);

/// Distribution over inputs x as integer weights over a common denominator.
struct Selection {
    std::vector<std::pair<std::vector<std::uint32_t>, BigInt>> support;
    BigInt denominator = 1;
};

struct InputSelector {
    std::string name;
    std::function<Selection(const FunctionTable&)> select;
};

InputSelector constant_selector(std::vector<std::uint32_t> x);
InputSelector uniform_selector();
/// Table-driven: the first input (row-major) on which F takes `target`, else input 0.
InputSelector preimage_selector(bool target);
/// Parses "uniform", "constant:x1,...,xr", "preimage:b".
InputSelector parse_selector(const std::string& spec, std::uint32_t r);

inline constexpr unsigned kPsmCoordLimit = 20;

/// Keys [F index, G mask, u_1..u_r]; F fixed, x ~ selector(F).
ExactDist real_transcript_distribution(const FunctionTable& F, const InputSelector& selector, std::uint32_t n);
ExactDist simulated_distribution(const FunctionTable& F, const InputSelector& selector, std::uint32_t n,
                                 bool allow_collisions = false);

/// Both ensembles with F uniform over all 2^(k^r) tables; keys lead with the F table index.
ExactDist real_transcript_mixture(std::uint32_t k, std::uint32_t r, const InputSelector& selector, std::uint32_t n);
ExactDist simulated_mixture(std::uint32_t k, std::uint32_t r, const InputSelector& selector, std::uint32_t n);

/// Pushforward of (H uniform on r*k vertices, planted or null G with L = leaked cross vertices)
/// through psm_reduction, enumerating every relabeling.
ExactDist psm_reduction_distribution(std::uint32_t k, std::uint32_t r, const InputSelector& selector, std::uint32_t n,
                                     Which which);

Rational real_vs_sim_tv(const FunctionTable& F, const InputSelector& selector, std::uint32_t n,
                        bool allow_collisions = false);

/// ceil(log2 n) bits per message label.
unsigned message_bits(std::uint32_t n);

}  // namespace psub
