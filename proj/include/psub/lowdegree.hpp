#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psub/hypercore.hpp"
#include "psub/kernels.hpp"
#include "psub/models.hpp"

namespace psub {

/// A character alpha: a nonempty set of hyperedges (by rank in [0,C(n,r))), none inside L.
struct FourierIndex {
    std::vector<std::uint64_t> edges;

    /// Vertices spanned by alpha.
    VertexList vertices(std::uint32_t n, std::uint32_t r) const;
    void validate(const ModelParams& params) const;
};

/// Coordinates of G' (r-subsets with at least one vertex outside L), in rank order.
struct FreeCoordinates {
    std::vector<std::uint64_t> ranks;
    std::vector<std::int64_t> position;

    static FreeCoordinates of(const ModelParams& params);
};

/// Exact average of chi_alpha over the planted distribution. Reference path: one
/// enumeration of all embeddings per call.
Rational fourier_coefficient(const Hypergraph& H, const ModelParams& params, const FourierIndex& alpha);
double fourier_coefficient_value(const Hypergraph& H, const ModelParams& params, const FourierIndex& alpha);

struct LrReport {
    unsigned degree = 0;
    /// Cumulative LR_d^2 for d = 1..degree.
    std::vector<double> per_degree;
    std::vector<Rational> per_degree_exact;
    double total = 0;
    Rational total_exact = 0;
    /// Coefficient numerators keyed by character rank; coefficient = sums[a] / embeddings.
    std::vector<std::int64_t> sums;
    std::uint64_t embeddings = 0;
    FreeCoordinates free;
    std::optional<kernels::CharacterIndex> index;

    Rational coefficient(const FourierIndex& alpha) const;
};

kernels::CoverTable build_cover_table(const ModelParams& params);

LrReport lr_squared_exact(const Hypergraph& H, const ModelParams& params, unsigned degree,
                          Exec exec = Exec::parallel);

/// Number of characters that can ever be nonzero: C(n,r) - C(l,r).
std::uint64_t full_degree(const ModelParams& params);

struct NvdResult {
    BigInt value;
    bool exact = true;
};

inline constexpr unsigned kNvdEnumerationLimit = 24;

/// N(v,D) for every v in [0, n-l] by enumeration (requires C(n,r) <= 24).
std::vector<BigInt> nvd_table(std::uint32_t n, std::uint32_t r, std::uint32_t l, unsigned D);
/// C(n-l, v) * 2^(C(v+l,r) - C(l,r)).
BigInt nvd_upper_bound(std::uint64_t n, std::uint32_t r, std::uint32_t l, std::uint32_t v);
/// Exact enumeration when within the guard, otherwise the upper bound (flagged).
NvdResult count_nvd(std::uint32_t n, std::uint32_t r, std::uint32_t l, std::uint32_t v, unsigned D,
                    bool force_bound = false);

struct BoundInputs {
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    std::uint32_t r = 2;
    std::uint32_t l = 0;
    unsigned D = 1;
    unsigned p = 1;
    double epsilon = 0.5;
    /// Zero means epsilon / 4.
    double delta = 0;

    double effective_delta() const { return delta > 0 ? delta : epsilon / 4; }
    void validate() const;
};

enum class NMode { exactN, boundN };

struct CombinatorialBound {
    double value = 0;
    std::optional<Rational> exact;
    NMode mode = NMode::exactN;
};

/// sum_{v=1}^{rD} N(v,D) (v(k-l)/(n-l)^2)^v.
CombinatorialBound combinatorial_bound(const BoundInputs& in, NMode mode);

struct TheoremBound {
    double low = 0;
    double high = 0;
    double total = 0;
    double t = 0;
    double delta = 0;
    bool high_vacuous = false;
    bool cond_k = false;
    bool cond_l = false;
    bool cond_D = false;
    bool prop_density = false;
    bool delta_in_range = false;
};

/// Low part 2^C(l,r-1) n^-eps / (1 - n^(-eps+delta)) plus the explicit high part
/// 8r n^(-eps t) exp(eps delta^2 (ln n)^(r/(r-1))), t = (r-1)(delta ln n)^(1/(r-1))/e - l.
TheoremBound theorem_bound(const BoundInputs& in);

/// C(n,l) eta^-p (theorem_bound)^p.
double corollary_bound(const BoundInputs& in, double eta);

struct MomentResult {
    double value = 0;
    /// Mean of LR_D^(2p) over all H.
    Rational mean_power = 0;
    std::uint64_t hypergraphs = 0;
};

inline constexpr unsigned kMomentHLimit = 12;

/// (E_H LR_D(H,L)^(2p))^(1/p), exhaustively over all 2^C(k,r) hypergraphs H.
MomentResult moment_exact(const ModelParams& params, unsigned degree, unsigned p, Exec exec = Exec::parallel);

}  // namespace psub
