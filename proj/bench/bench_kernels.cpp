// Serial reference vs OpenMP kernels on the enumeration workloads behind the exact oracles.
#include <benchmark/benchmark.h>

#include "psub/kernels.hpp"
#include "psub/lowdegree.hpp"
#include "psub/models.hpp"

using namespace psub;

namespace {

std::vector<kernels::EmbeddingPattern> patterns_for(const ModelParams& p, const Hypergraph& H) {
    std::vector<kernels::EmbeddingPattern> out;
    const auto& idx = SubsetIndexer::get(p.n, p.r);
    const auto& hidx = H.indexer();
    VertexList e(p.r), img(p.r);
    for_each_embedding(p.n, p.k, p.L, [&](std::span<const Vertex> map) {
        kernels::EmbeddingPattern pat;
        for (std::uint64_t c = 0; c < H.num_coords(); ++c) {
            hidx.unrank(c, e);
            for (std::uint32_t i = 0; i < p.r; ++i) img[i] = map[e[i]];
            std::sort(img.begin(), img.end());
            const auto g = idx.rank(img);
            pat.mask |= std::uint64_t{1} << g;
            if (H.present(c)) pat.value |= std::uint64_t{1} << g;
        }
        out.push_back(pat);
    });
    return out;
}

template <bool Parallel>
void BM_PlantedWeights(benchmark::State& state) {
    const ModelParams p{6, 4, 2, {}, 0};
    Rng rng(1);
    const auto patterns = patterns_for(p, sample_H(4, 2, rng));
    for (auto _ : state) {
        auto w = Parallel ? kernels::omp::planted_weights(patterns, 15) : kernels::serial::planted_weights(patterns, 15);
        benchmark::DoNotOptimize(w.data());
    }
}

template <bool Parallel>
void BM_LrAccumulate(benchmark::State& state) {
    const ModelParams p{9, 5, 2, {0}, 0};
    Rng rng(2);
    const Hypergraph H = sample_H(5, 2, rng);
    const auto cover = build_cover_table(p);
    const auto free = FreeCoordinates::of(p);
    const kernels::CharacterIndex index(static_cast<unsigned>(free.ranks.size()), 3);
    std::vector<std::int64_t> sums(index.size());
    for (auto _ : state) {
        std::fill(sums.begin(), sums.end(), 0);
        if (Parallel)
            kernels::omp::lr_accumulate(cover, H, index, sums);
        else
            kernels::serial::lr_accumulate(cover, H, index, sums);
        benchmark::DoNotOptimize(sums.data());
    }
}

template <bool Parallel>
void BM_SecrecyAbsDiff(benchmark::State& state) {
    Rng rng(3);
    kernels::SecrecyTable t;
    t.embeddings = 120;
    t.r_edges = 2;
    t.label_tuples = 25;
    for (std::size_t e = 0; e < t.embeddings; ++e) {
        for (std::size_t j = 0; j < t.r_edges; ++j) t.g_rank.push_back(uniform_below(rng, 15));
        t.label_index.push_back(static_cast<std::uint32_t>(uniform_below(rng, t.label_tuples)));
    }
    for (auto _ : state) {
        auto d = Parallel ? kernels::omp::secrecy_abs_diff(t, 15) : kernels::serial::secrecy_abs_diff(t, 15);
        benchmark::DoNotOptimize(d);
    }
}

template <bool Parallel>
void BM_Trials(benchmark::State& state) {
    const ModelParams p{64, 16, 2, {}, 0};
    Rng rng(4);
    const Hypergraph H = sample_H(16, 2, rng);
    const auto trial = [&](std::uint64_t i) {
        Rng local(derive_seed(5, i));
        const Hypergraph G = sample_planted(H, p, local);
        return static_cast<double>(G.edge_count());
    };
    for (auto _ : state) {
        auto v = Parallel ? kernels::omp::evaluate_trials(2000, trial) : kernels::serial::evaluate_trials(2000, trial);
        benchmark::DoNotOptimize(v.data());
    }
}

}  // namespace

BENCHMARK(BM_PlantedWeights<false>)->Name("planted_weights/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PlantedWeights<true>)->Name("planted_weights/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LrAccumulate<false>)->Name("lr_accumulate/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LrAccumulate<true>)->Name("lr_accumulate/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SecrecyAbsDiff<false>)->Name("secrecy_abs_diff/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SecrecyAbsDiff<true>)->Name("secrecy_abs_diff/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Trials<false>)->Name("trials/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Trials<true>)->Name("trials/omp")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
