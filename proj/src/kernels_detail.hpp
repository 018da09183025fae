#pragma once

#include <vector>

#include "psub/kernels.hpp"

namespace psub::kernels::detail {

void lr_accumulate_range(const CoverTable& cover, const Hypergraph& H, const CharacterIndex& index,
                         std::size_t begin, std::size_t end, std::int64_t* sums);

std::uint64_t secrecy_for_graph(const SecrecyTable& table, std::uint64_t g, std::vector<std::uint32_t>& counts);

}  // namespace psub::kernels::detail
