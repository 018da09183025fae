#include <algorithm>

#include "psub/kernels.hpp"

namespace psub::kernels {

CharacterIndex::CharacterIndex(unsigned free_coords, unsigned max_degree)
    : m_(free_coords), d_(std::min(free_coords, max_degree)) {
    table_.assign(static_cast<std::size_t>(m_ + 1) * (d_ + 1), 0);
    for (unsigned a = 0; a <= m_; ++a) {
        for (unsigned b = 0; b <= std::min(a, d_); ++b) {
            table_[a * (d_ + 1) + b] =
                (b == 0 || b == a) ? 1 : table_[(a - 1) * (d_ + 1) + b - 1] + (b <= a - 1 ? table_[(a - 1) * (d_ + 1) + b] : 0);
        }
    }
    offset_.assign(d_ + 1, 0);
    for (unsigned j = 1; j <= d_; ++j) {
        offset_[j] = offset_[j - 1] + c(m_, j);
        if (offset_[j] > (std::uint64_t{1} << 27))
            throw GuardExceeded("character table exceeds 2^27 entries; lower the degree");
    }
}

std::uint64_t CharacterIndex::rank(std::span<const std::uint32_t> sorted) const {
    std::uint64_t colex = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) colex += c(sorted[i], static_cast<unsigned>(i + 1));
    return offset(static_cast<unsigned>(sorted.size())) + colex;
}

unsigned CharacterIndex::degree_of(std::uint64_t rank) const {
    unsigned j = 1;
    while (j < d_ && offset_[j] <= rank) ++j;
    return j;
}

std::vector<std::uint32_t> CharacterIndex::unrank(std::uint64_t rank) const {
    const unsigned j = degree_of(rank);
    std::uint64_t rest = rank - offset(j);
    std::vector<std::uint32_t> out(j);
    std::uint32_t hi = m_;
    for (unsigned i = j; i-- > 0;) {
        std::uint32_t v = hi - 1;
        while (c(v, i + 1) > rest) --v;
        out[i] = v;
        rest -= c(v, i + 1);
        hi = v;
    }
    return out;
}

std::vector<BigInt> sumsq_by_degree(std::span<const std::int64_t> sums, const CharacterIndex& index) {
    std::vector<BigInt> out(index.max_degree());
    for (unsigned j = 1; j <= index.max_degree(); ++j) {
        unsigned __int128 acc = 0;
        const std::uint64_t end = j == index.max_degree() ? index.size() : index.offset(j + 1);
        for (std::uint64_t a = index.offset(j); a < end; ++a) {
            const auto s = static_cast<unsigned __int128>(sums[a] < 0 ? -sums[a] : sums[a]);
            acc += s * s;
        }
        // Split to feed cpp_int from two 64-bit halves.
        BigInt big = static_cast<std::uint64_t>(acc >> 64);
        big <<= 64;
        big += static_cast<std::uint64_t>(acc);
        out[j - 1] = big;
    }
    return out;
}

}  // namespace psub::kernels
