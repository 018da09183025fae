#pragma once

// Data-parallel enumeration kernels. Each kernel has a serial reference (namespace
// serial) and an OpenMP implementation (namespace omp) computing identical results;
// integer accumulation keeps the parallel reduction order-independent.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "psub/hypercore.hpp"

namespace psub::kernels {

int max_threads();
/// Zero restores the thread count in effect at first call.
void set_threads(int threads);

/// Coordinates (presence-mask bits) an embedding pins, and the values it pins them to.
struct EmbeddingPattern {
    std::uint64_t mask = 0;
    std::uint64_t value = 0;
};

/// Per embedding: the covered free coordinates (sorted) and the H coordinate feeding each.
struct CoverTable {
    std::size_t embeddings = 0;
    std::size_t width = 0;
    std::vector<std::uint32_t> free_index;
    std::vector<std::uint32_t> h_rank;
};

/// Ranks nonempty subsets of [0,m) of size <= max_degree: by size, then colex.
class CharacterIndex {
public:
    CharacterIndex(unsigned free_coords, unsigned max_degree);

    unsigned free_coords() const { return m_; }
    unsigned max_degree() const { return d_; }
    std::uint64_t size() const { return offset_.back(); }
    std::uint64_t offset(unsigned degree) const { return offset_[degree - 1]; }
    std::uint64_t c(unsigned a, unsigned b) const { return b > a ? 0 : table_[a * (d_ + 1) + b]; }

    std::uint64_t rank(std::span<const std::uint32_t> sorted) const;
    std::vector<std::uint32_t> unrank(std::uint64_t rank) const;
    unsigned degree_of(std::uint64_t rank) const;

private:
    unsigned m_;
    unsigned d_;
    std::vector<std::uint64_t> offset_;
    std::vector<std::uint64_t> table_;
};

/// Secrecy-TV inputs: per embedding, the G ranks of phi(e) for e in R and the index of
/// the leaked-label tuple.
struct SecrecyTable {
    std::size_t embeddings = 0;
    std::size_t r_edges = 0;
    std::uint64_t label_tuples = 0;
    std::vector<std::uint64_t> g_rank;
    std::vector<std::uint32_t> label_index;
};

namespace serial {

/// Scatter: each embedding adds one to every completion of its pattern.
std::vector<std::uint64_t> planted_weights(std::span<const EmbeddingPattern> patterns,
                                           unsigned coords);

/// Sums of prod_{e in alpha} H(phi^{-1} e) over embeddings, indexed by CharacterIndex.
void lr_accumulate(const CoverTable& cover, const Hypergraph& H, const CharacterIndex& index,
                   std::span<std::int64_t> sums);

/// For every H on (k, r) in mask order: sum over characters of squared sums, per degree.
std::vector<std::vector<BigInt>> lr_sumsq_over_H(const CoverTable& cover, const CharacterIndex& index,
                                                 std::uint32_t k, std::uint32_t r);

/// sum_G sum_{labels, h} |c(G, labels, h) - c(G, labels, h xor 1_R)| over all G on `coords` bits.
BigInt secrecy_abs_diff(const SecrecyTable& table, unsigned coords);

std::vector<double> evaluate_trials(std::uint64_t count, const std::function<double(std::uint64_t)>& fn);

}  // namespace serial

namespace omp {

/// Per-thread scatter over a slice of the patterns, then a summed reduction.
std::vector<std::uint64_t> planted_weights(std::span<const EmbeddingPattern> patterns,
                                           unsigned coords);
void lr_accumulate(const CoverTable& cover, const Hypergraph& H, const CharacterIndex& index,
                   std::span<std::int64_t> sums);
std::vector<std::vector<BigInt>> lr_sumsq_over_H(const CoverTable& cover, const CharacterIndex& index,
                                                 std::uint32_t k, std::uint32_t r);
BigInt secrecy_abs_diff(const SecrecyTable& table, unsigned coords);
std::vector<double> evaluate_trials(std::uint64_t count, const std::function<double(std::uint64_t)>& fn);

}  // namespace omp

/// Per-degree sums of squares of `sums` (index 0 holds degree 1).
std::vector<BigInt> sumsq_by_degree(std::span<const std::int64_t> sums, const CharacterIndex& index);

}  // namespace psub::kernels
