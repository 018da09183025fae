#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "psub/hypercore.hpp"
#include "psub/rng.hpp"

using namespace psub;

TEST(Binom, SmallValues) {
    EXPECT_EQ(binom(5, 2), 10);
    EXPECT_EQ(binom(4, 0), 1);
    EXPECT_EQ(binom(3, 5), 0);
    EXPECT_EQ(binom_u64(64, 32), 1832624140942590534ULL);
    EXPECT_THROW(binom_u64(200, 100), GuardExceeded);
    EXPECT_EQ(binom(200, 100).str(), "90548514656103281165404177077484163874504589675413336841320");
    EXPECT_NEAR(log_binom(10, 3), std::log(120.0), 1e-12);
}

TEST(Rank, LexOrderExamples) {
    const VertexList a{0, 1}, b{2, 3}, c{1, 3};
    EXPECT_EQ(rank_subset(a, 4), 0u);
    EXPECT_EQ(rank_subset(b, 4), 5u);
    EXPECT_EQ(rank_subset(c, 4), 4u);
    EXPECT_EQ(unrank_subset(0, 4, 2), (VertexList{0, 1}));
    EXPECT_EQ(unrank_subset(5, 4, 2), (VertexList{2, 3}));
    EXPECT_EQ(unrank_subset(3, 4, 3), (VertexList{1, 2, 3}));
}

TEST(Rank, RejectsBadInput) {
    const VertexList unsorted{2, 1}, dup{1, 1}, big{0, 4};
    EXPECT_THROW(rank_subset(unsorted, 4), ValidationError);
    EXPECT_THROW(rank_subset(dup, 4), ValidationError);
    EXPECT_THROW(rank_subset(big, 4), ValidationError);
    EXPECT_THROW(unrank_subset(6, 4, 2), ValidationError);
}

TEST(Rank, RoundTripMatchesEnumeration) {
    for (std::uint32_t n = 2; n <= 9; ++n)
        for (std::uint32_t r = 1; r <= n; ++r) {
            VertexList comb(r);
            std::iota(comb.begin(), comb.end(), 0U);
            std::uint64_t expected = 0;
            do {
                ASSERT_EQ(rank_subset(comb, n), expected);
                ASSERT_EQ(unrank_subset(expected, n, r), comb);
                ++expected;
            } while (next_combination(comb, n));
            ASSERT_EQ(expected, binom_u64(n, r));
        }
}

TEST(Hypergraph, SpinConvention) {
    Hypergraph g(4, 2);
    EXPECT_EQ(g.num_coords(), 6u);
    EXPECT_EQ(g.spin(0), 1);
    g.set_present(3, true);
    EXPECT_EQ(g.spin(3), -1);
    EXPECT_EQ(spin_of_bit(true), -1);
    EXPECT_TRUE(bit_of_spin(-1));
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_EQ(Hypergraph::from_mask(4, 2, g.mask()), g);
    EXPECT_EQ(Hypergraph(2, 3).num_coords(), 0u);
}

TEST(Relabel, Examples) {
    Hypergraph g(3, 2);
    g.set_present(rank_subset(VertexList{0, 1}, 3), true);
    const VertexList rot{1, 2, 0};
    const Hypergraph h = relabel(g, rot);
    EXPECT_TRUE(h.present(std::span<const Vertex>(VertexList{1, 2})));
    EXPECT_EQ(h.edge_count(), 1u);
    const VertexList id{0, 1, 2};
    EXPECT_EQ(relabel(g, id), g);
    EXPECT_EQ(relabel(h, inverse_permutation(rot)), g);
    const VertexList bad{0, 0, 1};
    EXPECT_THROW(relabel(g, bad), ValidationError);
}

TEST(Relabel, ComposeAgreesWithSequentialApplication) {
    Rng rng(3);
    Hypergraph g(6, 3);
    for (auto& w : g.words()) w = rng();
    g.trim();
    VertexList s(6), t(6);
    std::iota(s.begin(), s.end(), 0U);
    std::iota(t.begin(), t.end(), 0U);
    std::shuffle(s.begin(), s.end(), rng);
    std::shuffle(t.begin(), t.end(), rng);
    EXPECT_EQ(relabel(relabel(g, s), t), relabel(g, compose(t, s)));
}

TEST(Induced, Restriction) {
    Hypergraph g(4, 2);
    for (const VertexList& e : {VertexList{0, 1}, VertexList{0, 2}, VertexList{1, 2}}) g.set_present(rank_subset(e, 4), true);
    const VertexList tri{0, 1, 2};
    const Hypergraph t = induced(g, tri);
    EXPECT_EQ(t.n(), 3u);
    EXPECT_EQ(t.edge_count(), 3u);
    const VertexList all{0, 1, 2, 3};
    EXPECT_EQ(induced(g, all), g);
}

TEST(Embedding, CountAndEnumeration) {
    EXPECT_EQ(embedding_count(5, 3, 1), 12);
    const VertexList fixed{0};
    std::set<VertexList> seen;
    for_each_embedding(5, 3, fixed, [&](std::span<const Vertex> m) {
        EXPECT_EQ(m[0], 0u);
        seen.insert(VertexList(m.begin(), m.end()));
    });
    EXPECT_EQ(seen.size(), 12u);
    Embedding e{4, 2, {0, 0}, {}};
    EXPECT_THROW(e.validate(), ValidationError);
}

TEST(Rng, DerivedSeedsDiffer) {
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    EXPECT_EQ(derive_seed(9, 4), derive_seed(9, 4));
}
