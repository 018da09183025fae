#include <gtest/gtest.h>

#include "psub/io.hpp"

using namespace psub;

TEST(HypergraphJson, CanonicalRoundTrip) {
    Rng rng(1);
    const Hypergraph g = sample_H(6, 3, rng);
    const json j = to_json(g);
    EXPECT_EQ(hypergraph_from_json(j), g);
    const json shuffled = {{"present", {{1, 2}, {0, 3}}}, {"r", 2}, {"n", 4}};
    EXPECT_EQ(to_json(hypergraph_from_json(shuffled))["present"], json({{0, 3}, {1, 2}}));
}

TEST(HypergraphJson, Rejects) {
    EXPECT_THROW(hypergraph_from_json(json{{"n", 4}, {"r", 2}, {"present", {{2, 1}}}}), ValidationError);
    EXPECT_THROW(hypergraph_from_json(json{{"n", 4}, {"r", 2}, {"present", {{0, 4}}}}), ValidationError);
    EXPECT_THROW(hypergraph_from_json(json{{"n", 4}, {"r", 2}, {"present", {{0, 1}, {0, 1}}}}), ValidationError);
    EXPECT_THROW(hypergraph_from_json(json{{"n", 4}, {"r", 2}, {"present", {{0, 1, 2}}}}), ValidationError);
    EXPECT_THROW(hypergraph_from_json(json{{"n", 4}}), ValidationError);
}

TEST(ParamsJson, RoundTrip) {
    const ModelParams p{8, 4, 2, {0, 1, 2}, 9};
    const ModelParams q = params_from_json(to_json(p));
    EXPECT_EQ(q.n, 8u);
    EXPECT_EQ(q.L, p.L);
    EXPECT_EQ(q.seed, 9u);
    EXPECT_THROW(params_from_json(json{{"n", 3}, {"k", 4}, {"r", 2}}), ValidationError);
}

TEST(Shares, LabelsUseCeilLog2Bits) {
    EXPECT_EQ(encode_label(5, 8), "101");
    EXPECT_EQ(encode_label(0, 5), "000");
    EXPECT_EQ(decode_label("100", 5), 4u);
    EXPECT_THROW(decode_label("101", 5), ValidationError);
    EXPECT_THROW(decode_label("10", 5), ValidationError);
    EXPECT_THROW(decode_label("1x0", 5), ValidationError);
}

TEST(Shares, BundleRoundTrip) {
    Rng rng(2);
    const AccessStructure a{3, 2, {{0, 1}, {1, 2}}, 1};
    const ShareBundle b = deal(a, true, 6, rng);
    const json j = to_json(b);
    EXPECT_EQ(j["share_bits"], 3);
    for (const auto& [party, bits] : j["shares"].items()) EXPECT_EQ(bits.get<std::string>().size(), 3u);
    const ShareBundle back = bundle_from_json(j);
    EXPECT_EQ(back.shares, b.shares);
    EXPECT_EQ(back.G, b.G);
    EXPECT_TRUE(reconstruct(back, VertexList{1, 2}));
}

TEST(Psm, InstanceRoundTripAndPublicOnly) {
    Rng rng(3);
    const FunctionTable F{2, 2, {0, 1, 1, 0}};
    const auto inst = psm_setup(F, 7, rng);
    const auto back = instance_from_json(to_json(inst));
    EXPECT_EQ(back.phi.map, inst.phi.map);
    EXPECT_EQ(back.G, inst.G);
    const json pub = to_json(inst, true);
    EXPECT_FALSE(pub.contains("phi"));
    EXPECT_FALSE(pub.contains("Fbar"));
    EXPECT_EQ(pub["message_bits"], 3);
    EXPECT_THROW(instance_from_json(pub), ValidationError);
    EXPECT_EQ(function_from_json(to_json(F)).bits, F.bits);
    EXPECT_THROW(function_from_json(json{{"k", 2}, {"r", 2}, {"bits", {0, 1, 2, 0}}}), ValidationError);
}

TEST(Access, JsonDefaults) {
    const auto a = access_from_json(json{{"k", 3}, {"r", 2}, {"R", {{0, 1}}}});
    EXPECT_EQ(a.l, 0u);
    EXPECT_EQ(to_json(a)["R"], json({{0, 1}}));
}

TEST(Bounds, InputDefaults) {
    const auto in = bound_inputs_from_json(json{{"n", 100}, {"k", 10}});
    EXPECT_EQ(in.r, 2u);
    EXPECT_EQ(in.D, 1u);
    EXPECT_EQ(in.epsilon, 0.5);
    EXPECT_THROW(bound_inputs_from_json(json{{"n", 100}, {"k", 101}}), ValidationError);
}

TEST(Numbers, BigAndRational) {
    EXPECT_EQ(big_to_json(BigInt(42)), 42);
    EXPECT_TRUE(big_to_json(BigInt(1) << 80).is_string());
    EXPECT_EQ(rational_string(Rational(48, 81)), "16/27");
}

TEST(Files, MissingAndInvalid) {
    EXPECT_THROW(load_json_file("/nonexistent/x.json"), ValidationError);
    EXPECT_EQ(resolve(json{{"a", 1}})["a"], 1);
}
