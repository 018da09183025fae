#include "psub/distinguishers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "psub/kernels.hpp"

namespace psub {

double edge_count_stat(const Hypergraph& G) {
    const auto present = static_cast<double>(G.edge_count());
    return static_cast<double>(G.num_coords()) - 2 * present;
}

namespace {

struct SubgraphSearch {
    const Hypergraph& G;
    const Hypergraph& target;
    std::uint32_t m;
    std::uint32_t r;
    VertexList image;
    std::vector<bool> used;
    VertexList comb;
    VertexList sorted;
    double nodes = 0;

    bool consistent(std::uint32_t j) {
        // r-subsets of [0,j] that contain j.
        if (j + 1 < r) return true;
        comb.resize(r - 1);
        std::iota(comb.begin(), comb.end(), 0U);
        VertexList pre(r);
        do {
            for (std::uint32_t i = 0; i + 1 < r; ++i) {
                pre[i] = comb[i];
                sorted[i] = image[comb[i]];
            }
            pre[r - 1] = j;
            sorted[r - 1] = image[j];
            std::sort(sorted.begin(), sorted.end());
            if (G.present(std::span<const Vertex>(sorted)) != target.present(std::span<const Vertex>(pre))) return false;
        } while (next_combination(comb, j));
        return true;
    }

    bool search(std::uint32_t j) {
        if (j == m) return true;
        for (Vertex v = 0; v < G.n(); ++v) {
            if (used[v]) continue;
            if (++nodes > kSubgraphWorkLimit) throw GuardExceeded("subgraph search exceeds the work guard");
            image[j] = v;
            if (!consistent(j)) continue;
            used[v] = true;
            const bool found = search(j + 1);
            used[v] = false;
            if (found) return true;
        }
        return false;
    }
};

void check_leakage_preconditions(const ModelParams& params) {
    params.validate();
    if (params.l() + 1 < params.r) throw ValidationError("leakage statistics need l >= r-1");
    if (params.k <= params.l()) throw ValidationError("leakage statistics need k > l");
}

std::vector<bool> leak_flags(const ModelParams& params, std::uint32_t size) {
    std::vector<bool> leaked(size, false);
    for (auto u : params.L) leaked[u] = true;
    return leaked;
}

}  // namespace

double subgraph_presence_stat(const Hypergraph& G, const Hypergraph& H, std::uint32_t m) {
    if (m > H.n()) throw ValidationError("subgraph: m exceeds k");
    if (m > G.n()) return 0;
    if (m < G.r()) return 1;
    VertexList prefix(m);
    std::iota(prefix.begin(), prefix.end(), 0U);
    const Hypergraph target = induced(H, prefix);
    SubgraphSearch s{G, target, m, G.r(), VertexList(m), std::vector<bool>(G.n(), false), {}, VertexList(G.r())};
    return s.search(0) ? 1.0 : 0.0;
}

double leakage_match_stat(const Hypergraph& G, const Hypergraph& H, const ModelParams& params, Vertex w) {
    check_leakage_preconditions(params);
    const auto leaked = leak_flags(params, params.n);
    if (w >= params.k || leaked[w]) throw ValidationError("leakmatch: w must be a vertex of [0,k) outside L");
    std::vector<VertexList> stems;
    for_each_subset(params.L, params.r - 1, [&](std::span<const Vertex> t) { stems.emplace_back(t.begin(), t.end()); });
    std::vector<bool> want(stems.size());
    VertexList e(params.r);
    auto with = [&](const VertexList& t, Vertex v) {
        std::copy(t.begin(), t.end(), e.begin());
        e.back() = v;
        std::sort(e.begin(), e.end());
        return std::span<const Vertex>(e);
    };
    for (std::size_t i = 0; i < stems.size(); ++i) want[i] = H.present(with(stems[i], w));
    for (Vertex v = 0; v < params.n; ++v) {
        if (leaked[v]) continue;
        bool match = true;
        for (std::size_t i = 0; i < stems.size() && match; ++i) match = G.present(with(stems[i], v)) == want[i];
        if (match) return 1;
    }
    return 0;
}

double linear_leakage_stat(const Hypergraph& G, const Hypergraph& H, const ModelParams& params) {
    params.validate();
    if (params.l() + 1 < params.r) throw ValidationError("linear: needs l >= r-1");
    const auto leaked = leak_flags(params, params.n);
    VertexList e(params.r);
    auto side = [&](const Hypergraph& g, std::uint32_t size) {
        long sum = 0;
        for (Vertex v = 0; v < size; ++v) {
            if (leaked[v]) continue;
            std::copy(params.L.begin(), params.L.begin() + (params.r - 1), e.begin());
            e.back() = v;
            std::sort(e.begin(), e.end());
            sum += g.spin(g.indexer().rank(e));
        }
        return sum >= 0 ? 1 : -1;
    };
    return side(G, params.n) == side(H, params.k) ? 1 : 0;
}

std::uint32_t default_subgraph_size(const ModelParams& params) {
    const double m = std::ceil(3 * std::pow(std::log2(static_cast<double>(params.n)), 1.0 / (params.r - 1)));
    return static_cast<std::uint32_t>(std::min<double>(params.k, m));
}

Vertex default_match_vertex(const ModelParams& params) {
    const auto leaked = leak_flags(params, params.k);
    for (Vertex v = 0; v < params.k; ++v)
        if (!leaked[v]) return v;
    throw ValidationError("leakmatch: no vertex of [0,k) outside L");
}

Statistic edge_count_statistic() {
    return {"edgecount", [](const Hypergraph& G, const Hypergraph&, const ModelParams&) { return edge_count_stat(G); }, 1};
}

Statistic subgraph_statistic(const ModelParams& params, std::optional<std::uint32_t> m) {
    const std::uint32_t size = m.value_or(default_subgraph_size(params));
    if (size > params.k) throw ValidationError("subgraph: m exceeds k");
    return {"subgraph",
            [size](const Hypergraph& G, const Hypergraph& H, const ModelParams&) { return subgraph_presence_stat(G, H, size); },
            binom_u64(size, params.r)};
}

Statistic leakage_match_statistic(const ModelParams& params, std::optional<Vertex> w) {
    check_leakage_preconditions(params);
    const Vertex vertex = w.value_or(default_match_vertex(params));
    return {"leakmatch",
            [vertex](const Hypergraph& G, const Hypergraph& H, const ModelParams& p) { return leakage_match_stat(G, H, p, vertex); },
            binom_u64(params.l(), params.r - 1)};
}

Statistic linear_statistic(const ModelParams& params) {
    params.validate();
    if (params.l() + 1 < params.r) throw ValidationError("linear: needs l >= r-1");
    return {"linear", [](const Hypergraph& G, const Hypergraph& H, const ModelParams& p) { return linear_leakage_stat(G, H, p); },
            params.n - params.l()};
}

Statistic make_statistic(const std::string& name, const ModelParams& params) {
    if (name == "edgecount") return edge_count_statistic();
    if (name == "subgraph") return subgraph_statistic(params);
    if (name == "leakmatch") return leakage_match_statistic(params);
    if (name == "linear") return linear_statistic(params);
    throw ValidationError("unknown statistic: " + name);
}

bool statistic_applicable(const std::string& name, const ModelParams& params) {
    if (name == "edgecount" || name == "subgraph") return true;
    if (name == "leakmatch") return params.l() + 1 >= params.r && params.k > params.l();
    if (name == "linear") return params.l() + 1 >= params.r;
    return false;
}

namespace {

AdvantageReport summarize(const std::string& name, const std::vector<double>& planted, const std::vector<double>& null) {
    const auto T = static_cast<long double>(planted.size());
    auto mean = [](const std::vector<double>& v) {
        long double s = 0;
        for (double x : v) s += x;
        return s / static_cast<long double>(v.size());
    };
    const long double mp = mean(planted);
    const long double mn = mean(null);
    long double vp = 0, vn = 0, m4 = 0;
    for (double x : planted) vp += (x - mp) * (x - mp);
    for (double x : null) {
        const long double d = x - mn;
        vn += d * d;
        m4 += d * d * d * d;
    }
    vp /= T - 1;
    vn /= T - 1;
    m4 /= T;
    if (vn <= 0) throw DegenerateError("null variance is zero; advantage undefined");
    AdvantageReport rep;
    rep.statistic = name;
    rep.mode = AdvantageMode::montecarlo;
    rep.trials = planted.size();
    rep.mean_planted = static_cast<double>(mp);
    rep.mean_null = static_cast<double>(mn);
    rep.var_planted = static_cast<double>(vp);
    rep.var_null = static_cast<double>(vn);
    const long double a = (mp - mn) / std::sqrt(vn);
    rep.advantage = static_cast<double>(a);
    const long double var_a = (vp + vn) / (T * vn) + a * a * (m4 - vn * vn) / (4 * T * vn * vn);
    rep.std_error = static_cast<double>(std::sqrt(std::max<long double>(var_a, 0)));
    return rep;
}

}  // namespace

AdvantageReport estimate_advantage(const Statistic& stat, const Hypergraph& H, const ModelParams& params,
                                   std::uint64_t trials, std::uint64_t seed, Exec exec) {
    check_shape(H, params);
    if (trials < 2) throw ValidationError("estimate_advantage needs at least 2 trials");
    auto trial = [&](std::uint64_t j) {
        Rng rng = make_rng(derive_seed(seed, j));
        const Hypergraph G = sample_model(j % 2 == 0 ? Which::planted : Which::null, H, params, rng);
        return stat.evaluate(G, H, params);
    };
    const auto values = exec == Exec::serial ? kernels::serial::evaluate_trials(2 * trials, trial)
                                             : kernels::omp::evaluate_trials(2 * trials, trial);
    std::vector<double> planted(trials), null(trials);
    for (std::uint64_t i = 0; i < trials; ++i) {
        planted[i] = values[2 * i];
        null[i] = values[2 * i + 1];
    }
    return summarize(stat.name, planted, null);
}

AdvantageReport exact_advantage(const Statistic& stat, const Hypergraph& H, const ModelParams& params) {
    const Pmf p = exact_pmf(H, params, Which::planted);
    const Pmf q = exact_pmf(H, params, Which::null);
    std::vector<double> value(p.weight.size());
    for (std::uint64_t g = 0; g < value.size(); ++g) {
        if (p.weight[g] == 0 && q.weight[g] == 0) continue;
        value[g] = stat.evaluate(Hypergraph::from_mask(params.n, params.r, g), H, params);
    }
    auto moments = [&](const Pmf& d) {
        const auto denom = static_cast<long double>(d.denominator);
        long double s = 0;
        for (std::uint64_t g = 0; g < value.size(); ++g) s += static_cast<long double>(d.weight[g]) * value[g];
        const long double mean = s / denom;
        long double v = 0;
        for (std::uint64_t g = 0; g < value.size(); ++g) {
            const long double x = value[g] - mean;
            v += static_cast<long double>(d.weight[g]) * x * x;
        }
        return std::pair{mean, v / denom};
    };
    const auto [mp, vp] = moments(p);
    const auto [mn, vn] = moments(q);
    if (vn <= 1e-300L) throw DegenerateError("null variance is zero; advantage undefined");
    AdvantageReport rep;
    rep.statistic = stat.name;
    rep.mode = AdvantageMode::exact;
    rep.mean_planted = static_cast<double>(mp);
    rep.mean_null = static_cast<double>(mn);
    rep.var_planted = static_cast<double>(vp);
    rep.var_null = static_cast<double>(vn);
    rep.advantage = static_cast<double>((mp - mn) / std::sqrt(vn));
    return rep;
}

std::vector<SweepRow> advantage_sweep(const SweepSpec& spec, Exec exec) {
    if (spec.ns.empty() || spec.ks.empty()) throw ValidationError("sweep needs at least one n and one k");
    if (spec.replicates < 1) throw ValidationError("sweep needs at least one replicate");
    const std::uint32_t kmax = *std::max_element(spec.ks.begin(), spec.ks.end());
    VertexList L(spec.l);
    std::iota(L.begin(), L.end(), 0U);

    std::vector<SweepRow> rows;
    std::vector<std::vector<double>> squares, absolute;
    for (auto n : spec.ns)
        for (auto k : spec.ks) {
            SweepRow row;
            row.n = n;
            row.k = k;
            row.replicates = spec.replicates;
            rows.push_back(row);
        }
    squares.resize(rows.size());
    absolute.resize(rows.size());

    for (std::uint64_t j = 0; j < spec.replicates; ++j) {
        const std::uint64_t rep_seed = derive_seed(spec.seed, j);
        Rng rng = make_rng(rep_seed);
        const Hypergraph full = sample_H(kmax, spec.r, rng);
        for (std::size_t point = 0; point < rows.size(); ++point) {
            ModelParams params{rows[point].n, rows[point].k, spec.r, L, spec.seed};
            VertexList prefix(params.k);
            std::iota(prefix.begin(), prefix.end(), 0U);
            const Hypergraph H = induced(full, prefix);
            const Statistic stat = make_statistic(spec.statistic, params);
            const auto rep = estimate_advantage(stat, H, params, spec.trials, derive_seed(rep_seed, point + 1), exec);
            squares[point].push_back(rep.advantage * rep.advantage - rep.std_error * rep.std_error);
            absolute[point].push_back(std::abs(rep.advantage));
        }
    }
    for (std::size_t point = 0; point < rows.size(); ++point) {
        const auto& sq = squares[point];
        const double R = static_cast<double>(sq.size());
        const double ms = std::accumulate(sq.begin(), sq.end(), 0.0) / R;
        double var = 0;
        for (double x : sq) var += (x - ms) * (x - ms);
        var = R > 1 ? var / (R - 1) : 0;
        rows[point].advantage = std::sqrt(std::max(ms, 0.0));
        rows[point].std_error = ms > 0 ? std::sqrt(var / R) / (2 * rows[point].advantage) : 0;
        rows[point].mean_abs = std::accumulate(absolute[point].begin(), absolute[point].end(), 0.0) / R;
    }
    return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("slope needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0 && y[i] > 0)) throw ValidationError("slope needs positive values");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace psub
