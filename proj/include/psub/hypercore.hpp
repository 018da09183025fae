#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace psub {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using Vertex = std::uint32_t;
using VertexList = std::vector<Vertex>;

/// Contract violation in caller-supplied data (CLI exit code 2).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An exhaustive enumeration would exceed its work or memory guard (CLI exit code 3).
class GuardExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

BigInt binom(std::uint64_t a, std::uint64_t b);

/// C(a,b) as uint64; throws GuardExceeded on overflow.
std::uint64_t binom_u64(std::uint64_t a, std::uint64_t b);

/// C(a,b) as double; +inf when it does not fit.
double binom_double(std::uint64_t a, std::uint64_t b);

/// log C(a,b) via lgamma.
double log_binom(double a, double b);

/// Lexicographic ranking of r-subsets of [0,n).
///
/// Unchecked hot-path helper; rank_subset/unrank_subset are the validating wrappers.
class SubsetIndexer {
public:
    SubsetIndexer(std::uint32_t n, std::uint32_t r);

    std::uint32_t n() const { return n_; }
    std::uint32_t r() const { return r_; }
    std::uint64_t size() const { return size_; }

    std::uint64_t rank(std::span<const Vertex> sorted) const;
    void unrank(std::uint64_t rank, std::span<Vertex> out) const;

    /// Shared instance per (n, r); the returned reference stays valid for the process lifetime.
    static const SubsetIndexer& get(std::uint32_t n, std::uint32_t r);

private:
    std::uint64_t c(std::uint32_t a, std::uint32_t b) const {
        return b > a ? 0 : table_[static_cast<std::size_t>(a) * (r_ + 1) + b];
    }

    std::uint32_t n_;
    std::uint32_t r_;
    std::uint64_t size_;
    std::vector<std::uint64_t> table_;
};

std::uint64_t rank_subset(std::span<const Vertex> vertices, std::uint32_t n);
VertexList unrank_subset(std::uint64_t rank, std::uint32_t n, std::uint32_t r);

/// Advances a sorted r-combination of [0,n) to its lexicographic successor.
/// Returns false (leaving `comb` unspecified) after the last combination.
bool next_combination(std::span<Vertex> comb, std::uint32_t n);

/// Calls `fn` on every r-subset of `ground` (ground must be sorted), in lex order of positions.
void for_each_subset(std::span<const Vertex> ground, std::uint32_t r,
                     const std::function<void(std::span<const Vertex>)>& fn);

struct HyperedgeId {
    VertexList vertices;
    std::uint64_t rank = 0;

    static HyperedgeId from_vertices(VertexList vertices, std::uint32_t n);
    static HyperedgeId from_rank(std::uint64_t rank, std::uint32_t n, std::uint32_t r);
};

/// Presence bit b maps to spin (-1)^b: a present hyperedge has spin -1.
constexpr int spin_of_bit(bool present) { return present ? -1 : 1; }
constexpr bool bit_of_spin(int spin) { return spin < 0; }

/// r-uniform hypergraph on [0,n) stored as a bit-packed presence vector in lex rank order.
class Hypergraph {
public:
    Hypergraph() = default;
    Hypergraph(std::uint32_t n, std::uint32_t r);

    /// Builds from a presence mask; requires C(n,r) <= 64.
    static Hypergraph from_mask(std::uint32_t n, std::uint32_t r, std::uint64_t mask);

    std::uint32_t n() const { return n_; }
    std::uint32_t r() const { return r_; }
    std::uint64_t num_coords() const { return coords_; }
    const SubsetIndexer& indexer() const { return *indexer_; }

    bool present(std::uint64_t rank) const { return (words_[rank >> 6] >> (rank & 63)) & 1U; }
    int spin(std::uint64_t rank) const { return spin_of_bit(present(rank)); }
    void set_present(std::uint64_t rank, bool value) {
        const std::uint64_t bit = std::uint64_t{1} << (rank & 63);
        if (value)
            words_[rank >> 6] |= bit;
        else
            words_[rank >> 6] &= ~bit;
    }
    void flip(std::uint64_t rank) { words_[rank >> 6] ^= std::uint64_t{1} << (rank & 63); }

    bool present(std::span<const Vertex> sorted) const { return present(indexer_->rank(sorted)); }

    std::uint64_t edge_count() const;
    std::uint64_t mask() const;

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }
    /// Clears bits past num_coords() in the last word.
    void trim();

    bool operator==(const Hypergraph& other) const {
        return n_ == other.n_ && r_ == other.r_ && words_ == other.words_;
    }

private:
    std::uint32_t n_ = 0;
    std::uint32_t r_ = 2;
    std::uint64_t coords_ = 0;
    const SubsetIndexer* indexer_ = nullptr;
    std::vector<std::uint64_t> words_;
};

/// Output spin at {pi(u_1),...,pi(u_r)} equals the input spin at {u_1,...,u_r}.
Hypergraph relabel(const Hypergraph& g, std::span<const Vertex> pi);

/// Restriction to `vertices` (sorted), reindexed by position.
Hypergraph induced(const Hypergraph& g, std::span<const Vertex> vertices);

void validate_permutation(std::span<const Vertex> pi, std::uint32_t n);
VertexList inverse_permutation(std::span<const Vertex> pi);
/// (tau o sigma)(u) = tau(sigma(u)).
VertexList compose(std::span<const Vertex> tau, std::span<const Vertex> sigma);

/// Injective map [0,k) -> [0,n) with map(u) = u on `fixed`.
struct Embedding {
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    VertexList map;
    VertexList fixed;

    void validate() const;
};

/// Number of injections [0,k) -> [0,n) fixing the l leaked vertices: (n-l)!/(n-k)!.
BigInt embedding_count(std::uint32_t n, std::uint32_t k, std::uint32_t l);

/// Enumerates every injection [0,k) -> [0,n) fixing `fixed` (sorted subset of [0,k)),
/// in a deterministic order.
void for_each_embedding(std::uint32_t n, std::uint32_t k, std::span<const Vertex> fixed,
                        const std::function<void(std::span<const Vertex>)>& fn);

}  // namespace psub
