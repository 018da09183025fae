#include <algorithm>
#include <cstdlib>

#include "kernels_detail.hpp"
#include "psub/kernels.hpp"

namespace psub::kernels {

namespace detail {

void lr_dfs(const std::uint32_t* idx, const std::int8_t* spins, std::size_t width, std::size_t start,
            unsigned depth, std::uint64_t colex, int sign, const CharacterIndex& index,
            std::int64_t* sums) {
    const std::uint64_t base = index.offset(depth + 1);
    for (std::size_t t = start; t < width; ++t) {
        const std::uint64_t next = colex + index.c(idx[t], depth + 1);
        const int s = sign * spins[t];
        sums[base + next] += s;
        if (depth + 1 < index.max_degree()) lr_dfs(idx, spins, width, t + 1, depth + 1, next, s, index, sums);
    }
}

void lr_accumulate_range(const CoverTable& cover, const Hypergraph& H, const CharacterIndex& index,
                         std::size_t begin, std::size_t end, std::int64_t* sums) {
    if (index.max_degree() == 0) return;
    std::vector<std::int8_t> spins(cover.width);
    for (std::size_t e = begin; e < end; ++e) {
        const std::uint32_t* idx = cover.free_index.data() + e * cover.width;
        const std::uint32_t* hr = cover.h_rank.data() + e * cover.width;
        for (std::size_t t = 0; t < cover.width; ++t) spins[t] = static_cast<std::int8_t>(H.spin(hr[t]));
        lr_dfs(idx, spins.data(), cover.width, 0, 0, 0, 1, index, sums);
    }
}

std::uint64_t secrecy_for_graph(const SecrecyTable& table, std::uint64_t g, std::vector<std::uint32_t>& counts) {
    std::fill(counts.begin(), counts.end(), 0U);
    const std::uint64_t h_states = std::uint64_t{1} << table.r_edges;
    for (std::size_t e = 0; e < table.embeddings; ++e) {
        std::uint64_t h = 0;
        const std::uint64_t* ranks = table.g_rank.data() + e * table.r_edges;
        for (std::size_t j = 0; j < table.r_edges; ++j) h |= ((g >> ranks[j]) & 1U) << j;
        ++counts[table.label_index[e] * h_states + h];
    }
    const std::uint64_t flip = h_states - 1;
    std::uint64_t total = 0;
    for (std::uint64_t u = 0; u < table.label_tuples; ++u) {
        const std::uint32_t* row = counts.data() + u * h_states;
        for (std::uint64_t h = 0; h < h_states; ++h) {
            const auto a = static_cast<std::int64_t>(row[h]);
            const auto b = static_cast<std::int64_t>(row[h ^ flip]);
            total += static_cast<std::uint64_t>(a > b ? a - b : b - a);
        }
    }
    return total;
}

}  // namespace detail

namespace serial {

std::vector<std::uint64_t> planted_weights(std::span<const EmbeddingPattern> patterns, unsigned coords) {
    const std::uint64_t full = coords == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << coords) - 1;
    std::vector<std::uint64_t> weight(std::size_t{1} << coords, 0);
    for (const auto& p : patterns) {
        const std::uint64_t free = full & ~p.mask;
        std::uint64_t sub = 0;
        do {
            ++weight[p.value | sub];
            sub = (sub - free) & free;
        } while (sub != 0);
    }
    return weight;
}

void lr_accumulate(const CoverTable& cover, const Hypergraph& H, const CharacterIndex& index,
                   std::span<std::int64_t> sums) {
    detail::lr_accumulate_range(cover, H, index, 0, cover.embeddings, sums.data());
}

std::vector<std::vector<BigInt>> lr_sumsq_over_H(const CoverTable& cover, const CharacterIndex& index,
                                                 std::uint32_t k, std::uint32_t r) {
    const Hypergraph shape(k, r);
    const std::uint64_t count = std::uint64_t{1} << shape.num_coords();
    std::vector<std::vector<BigInt>> out(count);
    std::vector<std::int64_t> sums(index.size());
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        const Hypergraph H = Hypergraph::from_mask(k, r, mask);
        std::fill(sums.begin(), sums.end(), 0);
        lr_accumulate(cover, H, index, sums);
        out[mask] = sumsq_by_degree(sums, index);
    }
    return out;
}

BigInt secrecy_abs_diff(const SecrecyTable& table, unsigned coords) {
    std::vector<std::uint32_t> counts(table.label_tuples << table.r_edges);
    std::uint64_t total = 0;
    for (std::uint64_t g = 0; g < (std::uint64_t{1} << coords); ++g) total += detail::secrecy_for_graph(table, g, counts);
    return total;
}

std::vector<double> evaluate_trials(std::uint64_t count, const std::function<double(std::uint64_t)>& fn) {
    std::vector<double> out(count);
    for (std::uint64_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
}

}  // namespace serial
}  // namespace psub::kernels
