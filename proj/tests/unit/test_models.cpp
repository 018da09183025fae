#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "psub/models.hpp"

using namespace psub;

namespace {

Hypergraph triangle_H() {
    Hypergraph H(3, 2);
    for (std::uint64_t e = 0; e < 3; ++e) H.set_present(e, true);
    return H;
}

}  // namespace

TEST(SampleH, CoordinateCounts) {
    Rng rng(1);
    EXPECT_EQ(sample_H(2, 2, rng).num_coords(), 1u);
    EXPECT_EQ(sample_H(3, 3, rng).num_coords(), 1u);
    EXPECT_EQ(sample_H(2, 3, rng).num_coords(), 0u);
}

TEST(Params, Validation) {
    ModelParams p{4, 5, 2, {}, 0};
    EXPECT_THROW(p.validate(), ValidationError);
    p = {4, 3, 2, {3}, 0};
    EXPECT_THROW(p.validate(), ValidationError);
    p = {4, 3, 2, {1, 0}, 0};
    EXPECT_THROW(p.validate(), ValidationError);
    p = {4, 3, 2, {0, 1}, 0};
    EXPECT_NO_THROW(p.validate());
}

TEST(Embedding, FullyLeakedIsIdentity) {
    Rng rng(7);
    const ModelParams p{6, 3, 2, {0, 1, 2}, 0};
    for (int i = 0; i < 20; ++i) EXPECT_EQ(sample_embedding(p, rng).map, (VertexList{0, 1, 2}));
}

TEST(Embedding, UniformOverInjections) {
    Rng rng(11);
    const ModelParams p{5, 3, 2, {0}, 0};
    std::map<VertexList, int> freq;
    const int draws = 24000;
    for (int i = 0; i < draws; ++i) {
        const auto e = sample_embedding(p, rng);
        ASSERT_EQ(e.map[0], 0u);
        ++freq[e.map];
    }
    ASSERT_EQ(freq.size(), 12u);
    const double expect = draws / 12.0;
    for (const auto& [m, c] : freq) EXPECT_NEAR(c, expect, 5 * std::sqrt(expect));
}

TEST(Planted, FullyLeakedEqualsH) {
    Rng rng(5);
    const ModelParams p{4, 4, 2, {0, 1, 2, 3}, 0};
    const Hypergraph H = sample_H(4, 2, rng);
    EXPECT_EQ(sample_null(H, p, rng), H);
    EXPECT_EQ(sample_planted(H, p, rng), H);
}

TEST(ExactPmf, UniformCases) {
    Rng rng(3);
    const ModelParams small_k{4, 1, 2, {}, 0};
    const Pmf a = exact_pmf(Hypergraph(1, 2), small_k, Which::planted);
    for (std::uint64_t g = 0; g < a.weight.size(); ++g) EXPECT_EQ(a.exact(g), Rational(1, 64));
    const ModelParams few_leaked{4, 3, 2, {0}, 0};
    const Pmf b = exact_pmf(sample_H(3, 2, rng), few_leaked, Which::null);
    for (std::uint64_t g = 0; g < b.weight.size(); ++g) EXPECT_EQ(b.exact(g), Rational(1, 64));
    EXPECT_EQ(a.total(), 1);
}

TEST(ExactPmf, TvExamples) {
    const Hypergraph H = triangle_H();
    const ModelParams p{4, 3, 2, {}, 0};
    const Pmf planted = exact_pmf(H, p, Which::planted);
    EXPECT_EQ(tv_distance_exact(planted, planted), 0);
    const ModelParams leaked{4, 3, 2, {0, 1, 2}, 0};
    EXPECT_EQ(tv_distance_exact(exact_pmf(H, leaked, Which::planted), exact_pmf(H, leaked, Which::null)), 0);

    Pmf x = planted, y = planted;
    std::fill(x.weight.begin(), x.weight.end(), 0);
    std::fill(y.weight.begin(), y.weight.end(), 0);
    x.weight[0] = 1;
    y.weight[1] = 1;
    x.denominator = y.denominator = 1;
    EXPECT_EQ(tv_distance_exact(x, y), 1);
}

TEST(ExactPmf, ChiSquareOnTriangle) {
    const ModelParams p{4, 3, 2, {}, 0};
    const Hypergraph H = triangle_H();
    EXPECT_EQ(chi_square_exact(exact_pmf(H, p, Which::planted), exact_pmf(H, p, Which::null)), Rational(5, 2));
}

TEST(ExactPmf, SerialMatchesParallel) {
    Rng rng(9);
    for (const ModelParams& p : {ModelParams{5, 3, 2, {0}, 0}, ModelParams{5, 4, 3, {}, 0}, ModelParams{6, 4, 2, {0, 1}, 0}}) {
        const Hypergraph H = sample_H(p.k, p.r, rng);
        for (Which w : {Which::planted, Which::null}) {
            const Pmf s = exact_pmf(H, p, w, Exec::serial);
            const Pmf o = exact_pmf(H, p, w, Exec::parallel);
            EXPECT_EQ(s.weight, o.weight);
            EXPECT_EQ(s.denominator, o.denominator);
            EXPECT_EQ(s.total(), 1);
        }
    }
}

TEST(ExactPmf, SamplerAgreesWithEnumeration) {
    Rng rng(21);
    const ModelParams p{4, 3, 2, {0}, 0};
    const Hypergraph H = sample_H(3, 2, rng);
    for (Which w : {Which::planted, Which::null}) {
        const Pmf pmf = exact_pmf(H, p, w);
        std::vector<int> count(pmf.weight.size());
        const int draws = 64000;
        for (int i = 0; i < draws; ++i) ++count[sample_model(w, H, p, rng).mask()];
        for (std::uint64_t g = 0; g < count.size(); ++g) {
            const double q = pmf.prob(g);
            EXPECT_NEAR(count[g], draws * q, 5 * std::sqrt(draws * q * (1 - q)) + 1e-9);
        }
    }
}

TEST(ExactPmf, GuardsLargeInstances) {
    const ModelParams p{8, 3, 2, {}, 0};
    EXPECT_THROW(exact_pmf(Hypergraph(3, 2), p, Which::planted), GuardExceeded);
    const ModelParams q{4, 3, 2, {}, 0};
    EXPECT_THROW(exact_pmf(Hypergraph(4, 2), q, Which::planted), ValidationError);
}

TEST(ExactDist, SameDistribution) {
    ExactDist a, b;
    a.add({1, 2}, 1);
    a.add({3}, 1);
    a.denominator = 2;
    b.add({3}, 2);
    b.add({1, 2}, 2);
    b.denominator = 4;
    EXPECT_TRUE(same_distribution(a, b));
    EXPECT_EQ(tv_distance_exact(a, b), 0);
    b.add({4}, 1);
    b.weight[{3}] = 1;
    EXPECT_FALSE(same_distribution(a, b));
    EXPECT_EQ(tv_distance_exact(a, b), Rational(1, 4));
}

TEST(Marginal, PlantedGraphIsUniformOverRandomH) {
    const ModelParams p{4, 3, 2, {}, 0};
    Rng rng(31);
    std::vector<int> ones(6, 0);
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) {
        const Hypergraph G = sample_planted(sample_H(3, 2, rng), p, rng);
        for (std::uint64_t c = 0; c < 6; ++c) ones[c] += G.present(c);
    }
    for (int c : ones) EXPECT_NEAR(c, draws / 2.0, 3 * std::sqrt(draws / 4.0));

    std::vector<Rational> mix(64, 0);
    for (std::uint64_t h = 0; h < 8; ++h) {
        const Pmf pmf = exact_pmf(Hypergraph::from_mask(3, 2, h), p, Which::planted);
        for (std::uint64_t g = 0; g < 64; ++g) mix[g] += pmf.exact(g) / 8;
    }
    for (const auto& q : mix) EXPECT_EQ(q, Rational(1, 64));
}
