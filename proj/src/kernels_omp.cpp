#include <algorithm>
#include <cmath>

#include <omp.h>

#include "kernels_detail.hpp"
#include "psub/kernels.hpp"

namespace psub::kernels {

int max_threads() { return omp_get_max_threads(); }

void set_threads(int threads) {
    static const int initial = omp_get_max_threads();
    omp_set_num_threads(threads > 0 ? threads : initial);
}

namespace omp {

std::vector<std::uint64_t> planted_weights(std::span<const EmbeddingPattern> patterns, unsigned coords) {
    const int threads = std::min<int>(max_threads(), static_cast<int>(std::max<std::size_t>(patterns.size(), 1)));
    if (threads <= 1) return serial::planted_weights(patterns, coords);
    const std::size_t size = std::size_t{1} << coords;
    if (static_cast<double>(threads) * static_cast<double>(size) > 5e8) throw GuardExceeded("planted pmf scatter exceeds the memory guard");
    std::vector<std::vector<std::uint64_t>> partial(static_cast<std::size_t>(threads));
#pragma omp parallel num_threads(threads)
    {
        const int t = omp_get_thread_num();
        const std::size_t nt = static_cast<std::size_t>(omp_get_num_threads());
        const std::size_t chunk = (patterns.size() + nt - 1) / nt;
        const std::size_t begin = std::min(patterns.size(), chunk * static_cast<std::size_t>(t));
        const std::size_t end = std::min(patterns.size(), begin + chunk);
        partial[static_cast<std::size_t>(t)] = serial::planted_weights(patterns.subspan(begin, end - begin), coords);
    }
    std::vector<std::uint64_t> weight(size, 0);
    const auto total = static_cast<std::int64_t>(size);
#pragma omp parallel for schedule(static)
    for (std::int64_t g = 0; g < total; ++g)
        for (const auto& local : partial)
            if (!local.empty()) weight[static_cast<std::size_t>(g)] += local[static_cast<std::size_t>(g)];
    return weight;
}

void lr_accumulate(const CoverTable& cover, const Hypergraph& H, const CharacterIndex& index,
                   std::span<std::int64_t> sums) {
    const int threads = std::min<int>(max_threads(), static_cast<int>(std::max<std::size_t>(cover.embeddings, 1)));
    if (threads <= 1) {
        detail::lr_accumulate_range(cover, H, index, 0, cover.embeddings, sums.data());
        return;
    }
    std::vector<std::vector<std::int64_t>> partial(static_cast<std::size_t>(threads));
#pragma omp parallel num_threads(threads)
    {
        const int t = omp_get_thread_num();
        const int nt = omp_get_num_threads();
        auto& local = partial[static_cast<std::size_t>(t)];
        local.assign(index.size(), 0);
        const std::size_t chunk = (cover.embeddings + static_cast<std::size_t>(nt) - 1) / static_cast<std::size_t>(nt);
        const std::size_t begin = std::min(cover.embeddings, chunk * static_cast<std::size_t>(t));
        const std::size_t end = std::min(cover.embeddings, begin + chunk);
        detail::lr_accumulate_range(cover, H, index, begin, end, local.data());
    }
    for (const auto& local : partial) {
        if (local.empty()) continue;
        for (std::size_t a = 0; a < local.size(); ++a) sums[a] += local[a];
    }
}

std::vector<std::vector<BigInt>> lr_sumsq_over_H(const CoverTable& cover, const CharacterIndex& index,
                                                 std::uint32_t k, std::uint32_t r) {
    const Hypergraph shape(k, r);
    const auto count = static_cast<std::int64_t>(std::uint64_t{1} << shape.num_coords());
    std::vector<std::vector<BigInt>> out(static_cast<std::size_t>(count));
#pragma omp parallel
    {
        std::vector<std::int64_t> sums(index.size());
#pragma omp for schedule(dynamic)
        for (std::int64_t mask = 0; mask < count; ++mask) {
            const Hypergraph H = Hypergraph::from_mask(k, r, static_cast<std::uint64_t>(mask));
            std::fill(sums.begin(), sums.end(), 0);
            detail::lr_accumulate_range(cover, H, index, 0, cover.embeddings, sums.data());
            out[static_cast<std::size_t>(mask)] = sumsq_by_degree(sums, index);
        }
    }
    return out;
}

BigInt secrecy_abs_diff(const SecrecyTable& table, unsigned coords) {
    const auto total_graphs = static_cast<std::int64_t>(std::uint64_t{1} << coords);
    std::uint64_t total = 0;
#pragma omp parallel reduction(+ : total)
    {
        std::vector<std::uint32_t> counts(table.label_tuples << table.r_edges);
#pragma omp for schedule(static)
        for (std::int64_t g = 0; g < total_graphs; ++g)
            total += detail::secrecy_for_graph(table, static_cast<std::uint64_t>(g), counts);
    }
    return total;
}

std::vector<double> evaluate_trials(std::uint64_t count, const std::function<double(std::uint64_t)>& fn) {
    std::vector<double> out(count);
    const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(static_cast<std::uint64_t>(i));
    return out;
}

}  // namespace omp
}  // namespace psub::kernels
