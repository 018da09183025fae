#include <gtest/gtest.h>

#include <cmath>

#include "psub/distinguishers.hpp"

using namespace psub;

namespace {

Hypergraph full(std::uint32_t n, std::uint32_t r) {
    Hypergraph g(n, r);
    for (std::uint64_t e = 0; e < g.num_coords(); ++e) g.set_present(e, true);
    return g;
}

}  // namespace

TEST(EdgeCount, Extremes) {
    EXPECT_EQ(edge_count_stat(Hypergraph(4, 2)), 6);
    EXPECT_EQ(edge_count_stat(full(4, 2)), -6);
    EXPECT_EQ(edge_count_stat(full(6, 3)), -20);
}

TEST(EdgeCount, ExactAdvantageOnTriangle) {
    const ModelParams p{4, 3, 2, {}, 0};
    const auto rep = exact_advantage(edge_count_statistic(), full(3, 2), p);
    EXPECT_NEAR(rep.advantage, -3 / std::sqrt(6.0), 1e-12);
    EXPECT_NEAR(rep.mean_planted, -3, 1e-12);
    EXPECT_NEAR(rep.var_null, 6, 1e-12);
    EXPECT_EQ(rep.mode, AdvantageMode::exact);
}

TEST(EdgeCount, MonteCarloAgreesWithExact) {
    const ModelParams p{4, 3, 2, {}, 0};
    const auto mc = estimate_advantage(edge_count_statistic(), full(3, 2), p, 20000, 42);
    EXPECT_NEAR(mc.advantage, -3 / std::sqrt(6.0), 4 * mc.std_error);
    EXPECT_EQ(mc.mode, AdvantageMode::montecarlo);
}

TEST(Advantage, SerialMatchesParallel) {
    Rng rng(3);
    const ModelParams p{7, 4, 2, {0}, 0};
    const Hypergraph H = sample_H(4, 2, rng);
    for (const char* name : {"edgecount", "subgraph", "leakmatch"}) {
        const auto s = make_statistic(name, p);
        EXPECT_EQ(estimate_advantage(s, H, p, 500, 9, Exec::serial).advantage,
                  estimate_advantage(s, H, p, 500, 9, Exec::parallel).advantage);
    }
}

TEST(Advantage, FullyLeakedIsZero) {
    Rng rng(4);
    const ModelParams p{5, 3, 2, {0, 1, 2}, 0};
    const Hypergraph H = sample_H(3, 2, rng);
    const auto mc = estimate_advantage(edge_count_statistic(), H, p, 20000, 1);
    EXPECT_NEAR(mc.advantage, 0, 4 * mc.std_error);
    EXPECT_NEAR(exact_advantage(edge_count_statistic(), H, p).advantage, 0, 1e-12);
}

TEST(Advantage, ConstantStatisticIsDegenerate) {
    const ModelParams p{4, 3, 2, {}, 0};
    const Statistic constant{"constant", [](const Hypergraph&, const Hypergraph&, const ModelParams&) { return 1.0; }, 0};
    EXPECT_THROW(estimate_advantage(constant, full(3, 2), p, 100, 1), DegenerateError);
    EXPECT_THROW(exact_advantage(constant, full(3, 2), p), DegenerateError);
}

TEST(Subgraph, PlantedAlwaysMatches) {
    Rng rng(5);
    const ModelParams p{9, 4, 3, {}, 0};
    for (int i = 0; i < 30; ++i) {
        const Hypergraph H = sample_H(4, 3, rng);
        const Hypergraph G = sample_planted(H, p, rng);
        for (std::uint32_t m = 1; m <= 4; ++m) EXPECT_EQ(subgraph_presence_stat(G, H, m), 1);
    }
}

TEST(Subgraph, Examples) {
    Hypergraph H(2, 2);
    H.set_present(0, true);
    EXPECT_EQ(subgraph_presence_stat(Hypergraph(4, 2), H, 2), 0);
    const ModelParams p{4, 2, 2, {}, 0};
    const auto rep = exact_advantage(subgraph_statistic(p, 2), H, p);
    EXPECT_NEAR(rep.mean_null, 63.0 / 64, 1e-15);
    EXPECT_NEAR(rep.mean_planted, 1, 1e-15);
    EXPECT_THROW(subgraph_statistic(p, 3), ValidationError);
}

TEST(LeakageMatch, PlantedAlwaysAccepts) {
    Rng rng(6);
    const ModelParams p{8, 4, 2, {0, 1, 2}, 0};
    EXPECT_EQ(default_match_vertex(p), 3u);
    for (int i = 0; i < 50; ++i) {
        const Hypergraph H = sample_H(4, 2, rng);
        EXPECT_EQ(leakage_match_stat(sample_planted(H, p, rng), H, p, 3), 1);
    }
}

TEST(LeakageMatch, NullRateByEnumeration) {
    Rng rng(7);
    const ModelParams p{8, 4, 2, {0, 1, 2}, 0};
    const Hypergraph H = sample_H(4, 2, rng);
    const auto& idx = SubsetIndexer::get(8, 2);
    std::uint64_t accepted = 0;
    for (std::uint32_t bits = 0; bits < (1U << 15); ++bits) {
        Hypergraph G(8, 2);
        for (Vertex v = 3; v < 8; ++v)
            for (Vertex i = 0; i < 3; ++i) {
                const VertexList e{i, v};
                G.set_present(idx.rank(e), (bits >> ((v - 3) * 3 + i)) & 1U);
            }
        accepted += leakage_match_stat(G, H, p, 3) == 1;
    }
    EXPECT_EQ(accepted, 32768u - 16807u);
}

TEST(LeakageMatch, SingleCandidateIsHalf) {
    Hypergraph H(2, 2);
    H.set_present(0, true);
    const ModelParams p{2, 2, 2, {0}, 0};
    EXPECT_NEAR(exact_advantage(leakage_match_statistic(p), H, p).mean_null, 0.5, 1e-15);
}

TEST(Linear, Examples) {
    Rng rng(8);
    const ModelParams p{5, 5, 2, {0}, 0};
    EXPECT_EQ(linear_statistic(p).declared_degree, 4u);
    for (int i = 0; i < 20; ++i) {
        const Hypergraph H = sample_H(5, 2, rng);
        EXPECT_EQ(linear_leakage_stat(sample_planted(H, p, rng), H, p), 1);
    }
    // both spin sums vanish
    const ModelParams q{5, 3, 2, {0}, 0};
    Hypergraph h3(3, 2), g5(5, 2);
    h3.set_present(rank_subset(VertexList{0, 1}, 3), true);
    g5.set_present(rank_subset(VertexList{0, 1}, 5), true);
    g5.set_present(rank_subset(VertexList{0, 2}, 5), true);
    EXPECT_EQ(linear_leakage_stat(g5, h3, q), 1);
    EXPECT_THROW(linear_statistic(ModelParams{5, 3, 3, {0}, 0}), ValidationError);
}

TEST(Statistics, Factory) {
    const ModelParams p{6, 3, 2, {0}, 0};
    EXPECT_EQ(make_statistic("edgecount", p).name, "edgecount");
    EXPECT_THROW(make_statistic("bogus", p), ValidationError);
    EXPECT_TRUE(statistic_applicable("leakmatch", p));
    EXPECT_FALSE(statistic_applicable("leakmatch", ModelParams{6, 3, 2, {}, 0}));
    EXPECT_EQ(default_subgraph_size(ModelParams{64, 8, 2, {}, 0}), 8u);
}

TEST(Sweep, ShapeAndSlope) {
    SweepSpec spec;
    spec.ns = {20};
    spec.ks = {4, 8};
    spec.replicates = 3;
    spec.trials = 200;
    spec.seed = 1;
    const auto rows = advantage_sweep(spec);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].k, 4u);
    EXPECT_EQ(rows[1].replicates, 3u);
    EXPECT_EQ(advantage_sweep(spec, Exec::serial)[1].advantage, rows[1].advantage);
    EXPECT_NEAR(loglog_slope({1, 2, 4, 8}, {3, 12, 48, 192}), 2, 1e-12);
    EXPECT_THROW(loglog_slope({1}, {1}), ValidationError);
}
