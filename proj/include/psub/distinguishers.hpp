#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "psub/hypercore.hpp"
#include "psub/models.hpp"

namespace psub {

/// Thrown when the null variance vanishes and the advantage is undefined.
struct DegenerateError : ValidationError {
    using ValidationError::ValidationError;
};

/// A test polynomial p(G) given the public H and the leakage set.
struct Statistic {
    std::string name;
    std::function<double(const Hypergraph& G, const Hypergraph& H, const ModelParams& params)> evaluate;
    std::uint64_t declared_degree = 1;
};

/// Sum of all C(n,r) spins of G.
double edge_count_stat(const Hypergraph& G);

/// 1 iff some injective map of H's first m vertices into G reproduces induced(H, [0,m)).
double subgraph_presence_stat(const Hypergraph& G, const Hypergraph& H, std::uint32_t m);

/// 1 iff some v outside L has the same adjacencies into L in G as w has in H.
double leakage_match_stat(const Hypergraph& G, const Hypergraph& H, const ModelParams& params, Vertex w);

/// 1 iff sign sum_{v not in L} G(stem + v) equals sign sum_{v in [0,k) minus L} H(stem + v),
/// stem = the first r-1 leaked vertices; sign(0) = +1.
double linear_leakage_stat(const Hypergraph& G, const Hypergraph& H, const ModelParams& params);

std::uint32_t default_subgraph_size(const ModelParams& params);
Vertex default_match_vertex(const ModelParams& params);

inline constexpr double kSubgraphWorkLimit = 1e9;

Statistic edge_count_statistic();
Statistic subgraph_statistic(const ModelParams& params, std::optional<std::uint32_t> m = std::nullopt);
Statistic leakage_match_statistic(const ModelParams& params, std::optional<Vertex> w = std::nullopt);
/// Declared degree n - l: the sign is a polynomial in that many spins.
Statistic linear_statistic(const ModelParams& params);

/// Builds a statistic by name: edgecount, subgraph, leakmatch, linear.
Statistic make_statistic(const std::string& name, const ModelParams& params);
/// Whether `name` can run on `params` (leakage statistics need l >= r-1 and k > l).
bool statistic_applicable(const std::string& name, const ModelParams& params);

enum class AdvantageMode { exact, montecarlo };

struct AdvantageReport {
    std::string statistic;
    double mean_planted = 0;
    double mean_null = 0;
    double var_planted = 0;
    double var_null = 0;
    double advantage = 0;
    double std_error = 0;
    AdvantageMode mode = AdvantageMode::exact;
    std::uint64_t trials = 0;
};

/// Trial i draws its planted graph from derive_seed(seed, 2i) and its null graph from
/// derive_seed(seed, 2i+1).
AdvantageReport estimate_advantage(const Statistic& stat, const Hypergraph& H, const ModelParams& params,
                                   std::uint64_t trials, std::uint64_t seed, Exec exec = Exec::parallel);

AdvantageReport exact_advantage(const Statistic& stat, const Hypergraph& H, const ModelParams& params);

/// Per-(n,k) aggregate of Monte Carlo advantages over independent H replicates.
struct SweepRow {
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    /// Root mean square of the per-H advantages, with Monte Carlo noise subtracted.
    double advantage = 0;
    double std_error = 0;
    double mean_abs = 0;
    std::uint64_t replicates = 0;
};

struct SweepSpec {
    std::string statistic = "edgecount";
    std::uint32_t r = 2;
    std::uint32_t l = 0;
    std::vector<std::uint32_t> ns;
    std::vector<std::uint32_t> ks;
    std::uint64_t replicates = 1;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 0;
};

/// Replicate j draws one H on max(ks) vertices and uses its induced prefix for every k.
std::vector<SweepRow> advantage_sweep(const SweepSpec& spec, Exec exec = Exec::parallel);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace psub
