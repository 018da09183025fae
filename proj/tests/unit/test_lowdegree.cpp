#include <gtest/gtest.h>

#include <cmath>

#include "psub/distinguishers.hpp"
#include "psub/lowdegree.hpp"

using namespace psub;

namespace {

std::uint64_t edge(VertexList v, std::uint32_t n) { return rank_subset(v, n); }

Rational chi_square(const Hypergraph& H, const ModelParams& p) {
    return chi_square_exact(exact_pmf(H, p, Which::planted), exact_pmf(H, p, Which::null));
}

}  // namespace

TEST(Fourier, SingleEdgeCoefficient) {
    const ModelParams p{3, 2, 2, {}, 0};
    for (bool present : {false, true}) {
        Hypergraph H(2, 2);
        H.set_present(0, present);
        const Rational h = spin_of_bit(present);
        EXPECT_EQ(fourier_coefficient(H, p, FourierIndex{{edge({0, 1}, 3)}}), h / 3);
        EXPECT_EQ(fourier_coefficient(H, p, FourierIndex{{edge({0, 1}, 3), edge({1, 2}, 3)}}), 0);
    }
}

TEST(Fourier, VanishesBeyondPlantedSize) {
    Rng rng(2);
    const ModelParams p{5, 3, 2, {0}, 0};
    const Hypergraph H = sample_H(3, 2, rng);
    // spans {1,2,3} outside L, more than k - l = 2
    const FourierIndex alpha{{edge({1, 2}, 5), edge({2, 3}, 5)}};
    EXPECT_EQ(fourier_coefficient(H, p, alpha), 0);
    const FourierIndex inside_L{{edge({0, 1}, 5)}};
    EXPECT_NO_THROW(inside_L.validate(p));
    const ModelParams q{5, 3, 2, {0, 1}, 0};
    EXPECT_THROW(inside_L.validate(q), ValidationError);
}

TEST(LrSquared, SmallInstanceIsOneThird) {
    const ModelParams p{3, 2, 2, {}, 0};
    for (bool present : {false, true}) {
        Hypergraph H(2, 2);
        H.set_present(0, present);
        for (unsigned D = 1; D <= 3; ++D) EXPECT_EQ(lr_squared_exact(H, p, D).total_exact, Rational(1, 3));
    }
}

TEST(LrSquared, FullyLeakedIsZero) {
    Rng rng(1);
    const ModelParams p{5, 3, 2, {0, 1, 2}, 0};
    EXPECT_EQ(lr_squared_exact(sample_H(3, 2, rng), p, 4).total_exact, 0);
}

TEST(LrSquared, ParsevalAgainstChiSquare) {
    Rng rng(17);
    for (const ModelParams& p : {ModelParams{4, 3, 2, {}, 0}, ModelParams{5, 3, 2, {0}, 0}, ModelParams{5, 4, 3, {1}, 0},
                                 ModelParams{5, 4, 2, {0, 2}, 0}}) {
        const Hypergraph H = sample_H(p.k, p.r, rng);
        const auto rep = lr_squared_exact(H, p, static_cast<unsigned>(full_degree(p)));
        EXPECT_EQ(rep.total_exact, chi_square(H, p));
    }
}

TEST(LrSquared, MonotoneInDegreeAndConsistent) {
    Rng rng(5);
    const ModelParams p{5, 4, 2, {0}, 0};
    const Hypergraph H = sample_H(4, 2, rng);
    const auto rep = lr_squared_exact(H, p, 5);
    ASSERT_EQ(rep.per_degree_exact.size(), 5u);
    for (std::size_t d = 1; d < 5; ++d) EXPECT_LE(rep.per_degree_exact[d - 1], rep.per_degree_exact[d]);
    const auto serial = lr_squared_exact(H, p, 5, Exec::serial);
    EXPECT_EQ(serial.per_degree_exact, rep.per_degree_exact);
    const FourierIndex alpha{{edge({0, 1}, 5), edge({1, 2}, 5)}};
    EXPECT_EQ(rep.coefficient(alpha), fourier_coefficient(H, p, alpha));
}

TEST(LrSquared, RelabelingInvariance) {
    Rng rng(6);
    const ModelParams p{5, 4, 2, {0}, 0};
    const Hypergraph H = sample_H(4, 2, rng);
    const VertexList pi{0, 2, 3, 1};
    EXPECT_EQ(lr_squared_exact(H, p, 3).total_exact, lr_squared_exact(relabel(H, pi), p, 3).total_exact);
}

TEST(Nvd, Examples) {
    const auto d2 = nvd_table(3, 2, 0, 2);
    EXPECT_EQ(d2[0], 0);
    EXPECT_EQ(d2[2], 3);
    EXPECT_EQ(d2[3], 3);
    EXPECT_EQ(nvd_table(3, 2, 0, 3)[3], 4);
    EXPECT_EQ(count_nvd(3, 2, 0, 0, 2).value, 0);
    EXPECT_TRUE(count_nvd(3, 2, 0, 2, 2).exact);
    EXPECT_FALSE(count_nvd(3, 2, 0, 2, 2, true).exact);
    EXPECT_FALSE(count_nvd(40, 2, 0, 2, 2).exact);
}

TEST(Nvd, ExactNeverExceedsBound) {
    for (std::uint32_t n = 2; n <= 6; ++n)
        for (std::uint32_t l = 0; l <= 2 && l <= n; ++l)
            for (unsigned D = 1; D <= 3; ++D) {
                const auto table = nvd_table(n, 2, l, D);
                for (std::uint32_t v = 0; v < table.size(); ++v) EXPECT_LE(table[v], nvd_upper_bound(n, 2, l, v));
            }
}

TEST(CombinatorialBound, Examples) {
    BoundInputs in{3, 2, 2, 0, 1, 1, 0.5, 0};
    const auto b = combinatorial_bound(in, NMode::exactN);
    ASSERT_TRUE(b.exact.has_value());
    EXPECT_EQ(*b.exact, Rational(48, 81));
    EXPECT_GE(b.value, moment_exact(ModelParams{3, 2, 2, {}, 0}, 1, 1).value);
    in.k = 0;
    in.l = 0;
    in = BoundInputs{4, 2, 2, 2, 2, 1, 0.5, 0};
    EXPECT_EQ(combinatorial_bound(in, NMode::exactN).value, 0);
    EXPECT_EQ(combinatorial_bound(in, NMode::boundN).value, 0);
    EXPECT_LE(combinatorial_bound(BoundInputs{6, 3, 2, 1, 2, 1, 0.5, 0}, NMode::exactN).value,
              combinatorial_bound(BoundInputs{6, 3, 2, 1, 2, 1, 0.5, 0}, NMode::boundN).value);
}

TEST(TheoremBound, LowPartArithmetic) {
    const BoundInputs in{std::uint64_t{1} << 20, 100, 2, 0, 1, 1, 0.5, 0.125};
    const auto tb = theorem_bound(in);
    EXPECT_NEAR(tb.low, std::pow(2.0, -10) / (1 - std::pow(2.0, -7.5)), 1e-15);
    EXPECT_NEAR(tb.low, 9.820e-4, 1e-6);

    BoundInputs more = in;
    more.l = 1;
    more.r = 3;
    BoundInputs less = more;
    less.l = 0;
    // 2^(C(1,2) - C(0,2)) = 1, then 2^(C(2,2) - C(1,2)) = 2
    EXPECT_NEAR(theorem_bound(more).low / theorem_bound(less).low, 1.0, 1e-12);
    BoundInputs two = more;
    two.l = 2;
    EXPECT_NEAR(theorem_bound(two).low / theorem_bound(more).low, 2.0, 1e-12);
}

TEST(TheoremBound, ReportsInsteadOfThrowing) {
    const BoundInputs in{100, 10, 2, 1, 3, 2, 0.5, 0.6};
    const auto tb = theorem_bound(in);
    EXPECT_FALSE(tb.delta_in_range);
    EXPECT_EQ(BoundInputs({100, 10, 2, 0, 1, 1, 0.5, 0}).effective_delta(), 0.125);
    EXPECT_THROW(theorem_bound(BoundInputs{100, 10, 1, 0, 1, 1, 0.5, 0}), ValidationError);
    EXPECT_THROW(theorem_bound(BoundInputs{100, 10, 2, 0, 1, 1, 0.0, 0}), ValidationError);
}

TEST(TheoremBound, LowPartSlope) {
    std::vector<double> ns, lows;
    for (int e = 20; e <= 40; e += 4) {
        const BoundInputs in{std::uint64_t{1} << e, 100, 2, 0, 1, 1, 0.5, 0};
        ns.push_back(std::ldexp(1.0, e));
        lows.push_back(theorem_bound(in).low);
    }
    EXPECT_NEAR(loglog_slope(ns, lows), -0.5, 0.02 * 0.5);
}

TEST(CorollaryBound, Relations) {
    const BoundInputs in{std::uint64_t{1} << 20, 100, 2, 0, 1, 1, 0.5, 0.125};
    const double tb = theorem_bound(in).total;
    EXPECT_NEAR(corollary_bound(in, 0.1), tb / 0.1, 1e-12 * tb / 0.1);
    EXPECT_NEAR(corollary_bound(in, 0.2), corollary_bound(in, 0.1) / 2, 1e-12 * corollary_bound(in, 0.1));

    const BoundInputs sq{100, 10, 2, 1, 1, 2, 0.5, 0};
    const double t2 = theorem_bound(sq).total;
    EXPECT_NEAR(corollary_bound(sq, 1.0), 100 * t2 * t2, 1e-9 * 100 * t2 * t2);
    EXPECT_THROW(corollary_bound(in, 0.0), ValidationError);
}

TEST(Moment, Examples) {
    const ModelParams p{3, 2, 2, {}, 0};
    EXPECT_EQ(moment_exact(p, 1, 1).mean_power, Rational(1, 3));
    EXPECT_NEAR(moment_exact(p, 1, 2).value, 1.0 / 3, 1e-15);
    EXPECT_EQ(moment_exact(ModelParams{4, 2, 2, {0, 1}, 0}, 2, 1).value, 0);
    EXPECT_EQ(moment_exact(p, 1, 1).hypergraphs, 2u);
    EXPECT_THROW(moment_exact(ModelParams{9, 6, 2, {}, 0}, 1, 1), GuardExceeded);
}
