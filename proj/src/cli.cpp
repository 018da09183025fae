#include "psub/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <type_traits>
#include <sstream>

#include "psub/kernels.hpp"

namespace psub::cli {

namespace {

using Handler = std::function<VerbOutput(const json&)>;

bool has(const json& a, const char* key) { return a.contains(key) && !a.at(key).is_null(); }

template <typename T>
T arg(const json& a, const char* key) {
    if (!has(a, key)) throw ValidationError(std::string("missing argument --") + key);
    const json& v = a.at(key);
    if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
            throw ValidationError(std::string("argument --") + key + " must be a non-negative integer");
    }
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("argument --") + key + " has the wrong type");
    }
}

template <typename T>
T arg_or(const json& a, const char* key, T fallback) {
    return has(a, key) ? arg<T>(a, key) : fallback;
}

bool flag(const json& a, const char* key) { return has(a, key) && arg<bool>(a, key); }

std::vector<std::uint32_t> uint_list(const json& a, const char* key) {
    if (!has(a, key)) throw ValidationError(std::string("missing argument --") + key);
    const json& v = a.at(key);
    std::vector<std::uint32_t> out;
    if (v.is_array()) {
        for (const auto& x : v) {
            if (!x.is_number_integer() || x.get<std::int64_t>() < 0) throw ValidationError(std::string("--") + key + " must list non-negative integers");
            out.push_back(x.get<std::uint32_t>());
        }
        return out;
    }
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return {v.get<std::uint32_t>()};
    if (!v.is_string()) throw ValidationError(std::string("--") + key + " must be a comma-separated list");
    std::stringstream ss(v.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
            throw ValidationError(std::string("--") + key + " must list non-negative integers");
        out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    }
    return out;
}

Exec exec_of(const json& a) {
    const auto e = arg_or<std::string>(a, "exec", "parallel");
    if (e == "parallel") return Exec::parallel;
    if (e == "serial") return Exec::serial;
    throw ValidationError("--exec must be serial or parallel");
}

std::uint64_t seed_of(const json& a, std::uint64_t fallback = 0) { return arg_or<std::uint64_t>(a, "seed", fallback); }

/// H from --H, or a uniform H drawn from the seed's dedicated substream.
Hypergraph hypothesis(const json& a, const ModelParams& params, std::uint64_t seed) {
    if (has(a, "H")) {
        Hypergraph H = hypergraph_from_json(resolve(a.at("H")));
        check_shape(H, params);
        return H;
    }
    Rng rng = make_rng(derive_seed(seed, ~std::uint64_t{0}));
    return sample_H(params.k, params.r, rng);
}

json per_degree_json(const LrReport& rep, bool rational) {
    json out = json::array();
    for (std::size_t d = 0; d < rep.per_degree.size(); ++d) {
        json row = {{"degree", d + 1}, {"value", rep.per_degree[d]}};
        if (rational) row["exact"] = rational_string(rep.per_degree_exact[d]);
        out.push_back(row);
    }
    return out;
}

json theorem_conditions(const TheoremBound& tb) {
    return {{"k_condition", tb.cond_k},
            {"l_condition", tb.cond_l},
            {"D_condition", tb.cond_D},
            {"density_condition", tb.prop_density},
            {"delta_in_range", tb.delta_in_range},
            {"high_part_vacuous", tb.high_vacuous}};
}

VerbOutput verb_sample(const json& a) {
    const ModelParams params = params_from_json(resolve(arg<json>(a, "params")));
    const auto model = arg_or<std::string>(a, "model", "planted");
    if (model != "planted" && model != "null") throw ValidationError("--model must be planted or null");
    const std::uint64_t seed = seed_of(a, params.seed);
    const Hypergraph H = hypothesis(a, params, seed);
    const auto count = arg_or<std::uint64_t>(a, "count", 1);
    VerbOutput out;
    for (std::uint64_t i = 0; i < count; ++i) {
        Rng rng = make_rng(derive_seed(seed, i));
        out.lines.push_back(to_json(sample_model(model == "planted" ? Which::planted : Which::null, H, params, rng)));
    }
    out.result = {{"model", model}, {"count", count}};
    return out;
}

VerbOutput verb_lr_exact(const json& a) {
    const ModelParams params = params_from_json(resolve(arg<json>(a, "params")));
    const Hypergraph H = hypothesis(a, params, seed_of(a, params.seed));
    const auto degree = arg<unsigned>(a, "degree");
    const bool rational = flag(a, "rational");
    const LrReport rep = lr_squared_exact(H, params, degree, exec_of(a));
    json r = {{"quantity", "lr_squared"},
              {"value", rep.total},
              {"degree", degree},
              {"mode", rational ? "rational" : "exact"},
              {"per_degree", per_degree_json(rep, rational)},
              {"conditions",
               {{"embeddings", rep.embeddings}, {"free_coordinates", rep.free.ranks.size()}, {"full_degree", full_degree(params)}}}};
    if (rational) r["exact"] = rational_string(rep.total_exact);
    return {r, {}, {}};
}

VerbOutput verb_lr_bound(const json& a) {
    const BoundInputs in = bound_inputs_from_json(resolve(arg<json>(a, "inputs")));
    const auto mode = arg_or<std::string>(a, "mode", "boundN");
    const TheoremBound tb = theorem_bound(in);
    json r;
    if (mode == "exactN" || mode == "boundN") {
        const auto cb = combinatorial_bound(in, mode == "exactN" ? NMode::exactN : NMode::boundN);
        r = {{"quantity", "combinatorial_bound"}, {"value", cb.value}, {"mode", mode}};
        if (cb.exact) r["exact"] = rational_string(*cb.exact);
    } else if (mode == "theorem") {
        r = {{"quantity", "theorem_bound"}, {"value", tb.total}, {"mode", mode},
             {"low", tb.low},            {"high", tb.high},    {"t", tb.t}, {"delta", tb.delta}};
    } else if (mode == "corollary") {
        const auto eta = arg<double>(a, "eta");
        r = {{"quantity", "corollary_bound"}, {"value", corollary_bound(in, eta)}, {"mode", mode}, {"eta", eta}};
    } else {
        throw ValidationError("--mode must be exactN, boundN, theorem or corollary");
    }
    r["conditions"] = theorem_conditions(tb);
    return {r, {}, {}};
}

VerbOutput verb_lr_nvd(const json& a) {
    const auto res = count_nvd(arg<std::uint32_t>(a, "n"), arg<std::uint32_t>(a, "r"), arg_or<std::uint32_t>(a, "l", 0),
                               arg<std::uint32_t>(a, "v"), arg<unsigned>(a, "D"), flag(a, "bound"));
    json r = {{"quantity", "N(v,D)"}, {"value", big_to_json(res.value)}, {"mode", res.exact ? "exact" : "bound"}};
    r["conditions"] = {{"enumeration_limit", kNvdEnumerationLimit}};
    return {r, {}, {}};
}

VerbOutput verb_lr_moment(const json& a) {
    const ModelParams params = params_from_json(resolve(arg<json>(a, "params")));
    const auto res = moment_exact(params, arg<unsigned>(a, "degree"), arg_or<unsigned>(a, "p", 1), exec_of(a));
    json r = {{"quantity", "moment"},
              {"value", res.value},
              {"mode", "exact"},
              {"mean_power", rational_string(res.mean_power)},
              {"conditions", {{"hypergraphs", res.hypergraphs}}}};
    return {r, {}, {}};
}

Statistic statistic_of(const json& a, const ModelParams& params) {
    const auto name = arg_or<std::string>(a, "stat", "edgecount");
    if (name == "subgraph" && has(a, "m")) return subgraph_statistic(params, arg<std::uint32_t>(a, "m"));
    if (name == "leakmatch" && has(a, "w")) return leakage_match_statistic(params, arg<Vertex>(a, "w"));
    return make_statistic(name, params);
}

VerbOutput verb_distinguish(const json& a) {
    const ModelParams params = params_from_json(resolve(arg<json>(a, "params")));
    const std::uint64_t seed = seed_of(a, params.seed);
    const Hypergraph H = hypothesis(a, params, seed);
    const Statistic stat = statistic_of(a, params);
    const AdvantageReport rep = flag(a, "exact")
                                    ? exact_advantage(stat, H, params)
                                    : estimate_advantage(stat, H, params, arg_or<std::uint64_t>(a, "trials", 1000), seed, exec_of(a));
    json r = to_json(rep);
    r["declared_degree"] = stat.declared_degree;
    return {r, {}, {}};
}

VerbOutput verb_distinguish_sweep(const json& a) {
    SweepSpec spec;
    spec.statistic = arg_or<std::string>(a, "stat", "edgecount");
    spec.r = arg_or<std::uint32_t>(a, "r", 2);
    spec.l = arg_or<std::uint32_t>(a, "l", 0);
    spec.ns = uint_list(a, "n");
    spec.ks = uint_list(a, "k");
    spec.replicates = arg_or<std::uint64_t>(a, "replicates", 20);
    spec.trials = arg_or<std::uint64_t>(a, "trials", 1000);
    spec.seed = seed_of(a);
    const auto rows = advantage_sweep(spec, exec_of(a));
    std::ostringstream csv;
    csv.precision(10);
    csv << "n,k,advantage,stderr\n";
    json out = json::array();
    for (const auto& row : rows) {
        csv << row.n << ',' << row.k << ',' << row.advantage << ',' << row.std_error << '\n';
        out.push_back({{"n", row.n}, {"k", row.k}, {"advantage", row.advantage}, {"stderr", row.std_error},
                       {"mean_abs", row.mean_abs}, {"replicates", row.replicates}});
    }
    json result = {{"rows", out}, {"mode", "montecarlo"}};
    if (rows.size() == 1) {
        result["advantage"] = rows[0].advantage;
        result["stderr"] = rows[0].std_error;
    }
    return {result, {}, csv.str()};
}

VerbOutput verb_ss_deal(const json& a) {
    AccessStructure access = access_from_json(resolve(arg<json>(a, "R")));
    VertexList public_parties;
    if (!access.uniform()) {
        Lifted lifted = lift(access);
        access = lifted.access;
        public_parties = lifted.public_parties;
    }
    const auto s = arg<unsigned>(a, "s");
    if (s > 1) throw ValidationError("--s must be 0 or 1");
    Rng rng = make_rng(seed_of(a));
    return {to_json(deal(access, s == 1, arg<std::uint32_t>(a, "n"), rng, public_parties)), {}, {}};
}

VerbOutput verb_ss_reconstruct(const json& a) {
    const ShareBundle b = bundle_from_json(resolve(arg<json>(a, "bundle")));
    VertexList set = uint_list(a, "set");
    std::sort(set.begin(), set.end());
    return {{{"secret", reconstruct(b, set) ? 1 : 0}, {"set", set}}, {}, {}};
}

VerbOutput verb_ss_secrecy(const json& a) {
    const AccessStructure access = access_from_json(resolve(arg<json>(a, "R")));
    VertexList set = has(a, "set") ? uint_list(a, "set") : VertexList{};
    std::sort(set.begin(), set.end());
    const auto res = secrecy_tv(access, set, arg<std::uint32_t>(a, "n"), exec_of(a));
    return {{{"quantity", "secrecy_tv"},
             {"value", res.tv},
             {"exact", rational_string(res.tv_exact)},
             {"mode", "exact"},
             {"conditions", {{"unqualified", res.unqualified}}}},
            {},
            {}};
}

VerbOutput verb_ss_csirmaz(const json& a) {
    std::vector<VertexList> R;
    if (has(a, "R")) {
        const json j = resolve(a.at("R"));
        const json sets = j.is_object() ? j.at("R") : j;
        for (const auto& s : sets) R.push_back(s.get<VertexList>());
    }
    const auto l = arg<std::uint32_t>(a, "l");
    json r = to_json(csirmaz_check(arg<std::uint32_t>(a, "ground"), R, l));
    json f = json::array();
    for (std::uint32_t size = 0; size <= arg<std::uint32_t>(a, "ground"); ++size) f.push_back(csirmaz_f(size, l));
    r["f_by_size"] = f;
    return {r, {}, {}};
}

VerbOutput verb_psm_setup(const json& a) {
    const FunctionTable F = function_from_json(resolve(arg<json>(a, "F")));
    Rng rng = make_rng(seed_of(a));
    return {to_json(psm_setup(F, arg<std::uint32_t>(a, "n"), rng), flag(a, "public_only")), {}, {}};
}

VerbOutput verb_psm_run(const json& a) {
    const PsmInstance inst = instance_from_json(resolve(arg<json>(a, "instance")));
    const auto inputs = uint_list(a, "inputs");
    const Transcript t = psm_run(inst, inputs);
    json encoded = json::array();
    for (auto u : t.messages) encoded.push_back(encode_label(u, inst.G.n()));
    return {{{"inputs", inputs}, {"messages", t.messages}, {"encoded", encoded}, {"message_bits", message_bits(inst.G.n())},
             {"output", t.output ? 1 : 0}},
            {},
            {}};
}

VerbOutput verb_psm_simulate(const json& a) {
    const FunctionTable F = function_from_json(resolve(arg<json>(a, "F")));
    const auto y = arg<unsigned>(a, "y");
    if (y > 1) throw ValidationError("--y must be 0 or 1");
    Rng rng = make_rng(seed_of(a));
    const Simulated sim = psm_simulate(F, y == 1, arg<std::uint32_t>(a, "n"), rng, flag(a, "allow_collisions"));
    return {{{"G", to_json(sim.G)}, {"messages", sim.messages}, {"y", y}}, {}, {}};
}

VerbOutput verb_psm_tv(const json& a) {
    const FunctionTable F = function_from_json(resolve(arg<json>(a, "F")));
    const auto selector = parse_selector(arg_or<std::string>(a, "selector", "uniform"), F.r);
    const Rational tv = real_vs_sim_tv(F, selector, arg<std::uint32_t>(a, "n"), flag(a, "allow_collisions"));
    return {{{"quantity", "real_vs_sim_tv"},
             {"value", static_cast<double>(tv)},
             {"exact", rational_string(tv)},
             {"mode", "exact"},
             {"selector", selector.name}},
            {},
            {}};
}

VerbOutput verb_experiment_run(const json& a) {
    const json config = resolve(arg<json>(a, "config"));
    const auto out = has(a, "out") ? std::optional<std::string>(arg<std::string>(a, "out")) : std::nullopt;
    const auto s = run_experiment(config, out);
    return {{{"out", s.out}, {"config_hash", s.hash}, {"points", s.points}, {"computed", s.computed}, {"skipped", s.skipped}},
            {},
            {}};
}

VerbOutput verb_experiment_table(const json& a) {
    return {json::object(), {}, emit_table(arg<std::string>(a, "results"), arg<std::string>(a, "x"), arg<std::string>(a, "y"))};
}

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> table = {
        {"sample", verb_sample},
        {"lr exact", verb_lr_exact},
        {"lr bound", verb_lr_bound},
        {"lr nvd", verb_lr_nvd},
        {"lr moment", verb_lr_moment},
        {"distinguish", verb_distinguish},
        {"distinguish sweep", verb_distinguish_sweep},
        {"ss deal", verb_ss_deal},
        {"ss reconstruct", verb_ss_reconstruct},
        {"ss secrecy", verb_ss_secrecy},
        {"ss csirmaz", verb_ss_csirmaz},
        {"psm setup", verb_psm_setup},
        {"psm run", verb_psm_run},
        {"psm simulate", verb_psm_simulate},
        {"psm tv", verb_psm_tv},
        {"experiment run", verb_experiment_run},
        {"experiment table", verb_experiment_table},
    };
    return table;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void set_path(json& target, const std::string& path, const json& value) {
    json* node = &target;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ValidationError("bad grid path: " + path);
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        json& child = (*node)[key];
        if (child.is_string()) child = load_json_file(child.get<std::string>());
        if (child.is_null()) child = json::object();
        if (!child.is_object()) throw ValidationError("grid path does not name an object: " + path);
        node = &child;
        start = dot + 1;
    }
}

const json* lookup(const json& j, const std::string& key) {
    if (j.is_object() && j.contains(key)) return &j.at(key);
    return nullptr;
}

}  // namespace

const std::vector<std::string>& operations() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, h] : handlers()) out.push_back(name);
        return out;
    }();
    return names;
}

VerbOutput run_verb(const std::string& operation, const json& args) {
    const auto it = handlers().find(operation);
    if (it == handlers().end()) throw ValidationError("unknown operation: " + operation);
    if (!args.is_object()) throw ValidationError("arguments must be a JSON object");
    return it->second(args);
}

int exit_code(const std::exception& e) {
    if (dynamic_cast<const ValidationError*>(&e)) return 2;
    if (dynamic_cast<const GuardExceeded*>(&e)) return 3;
    return 1;
}

json error_object(const std::exception& e) {
    const int code = exit_code(e);
    const char* type = code == 2 ? "validation" : code == 3 ? "guard_exceeded" : "internal";
    return {{"error", {{"type", type}, {"message", e.what()}, {"exit_code", code}}}};
}

std::string config_hash(const json& config) {
    json canon = config;
    canon.erase("out");
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canon.dump())));
    return buf;
}

std::vector<json> grid_points(const json& grid) {
    if (!grid.is_object() || grid.empty()) throw ValidationError("experiment grid must be a non-empty object");
    std::vector<json> points{json::object()};
    for (const auto& [key, values] : grid.items()) {
        if (!values.is_array() || values.empty()) throw ValidationError("grid entry " + key + " must be a non-empty list");
        std::vector<json> next;
        for (const auto& p : points)
            for (const auto& v : values) {
                json q = p;
                q[key] = v;
                next.push_back(q);
            }
        points = std::move(next);
    }
    return points;
}

ExperimentSummary run_experiment(const json& config, const std::optional<std::string>& out_override) {
    if (!config.is_object()) throw ValidationError("experiment config must be an object");
    const auto name = arg_or<std::string>(config, "name", "experiment");
    const auto operation = arg<std::string>(config, "operation");
    if (!handlers().contains(operation) || operation.rfind("experiment", 0) == 0)
        throw ValidationError("experiment operation must be a non-experiment verb: " + operation);
    const json base = has(config, "args") ? config.at("args") : json::object();
    if (!base.is_object()) throw ValidationError("experiment args must be an object");
    const auto points = grid_points(arg<json>(config, "grid"));

    ExperimentSummary summary;
    summary.hash = config_hash(config);
    summary.points = points.size();
    summary.out = out_override.value_or(arg_or<std::string>(config, "out", name + ".jsonl"));

    std::vector<std::string> metrics;
    if (has(config, "metrics"))
        metrics = arg<std::vector<std::string>>(config, "metrics");

    std::set<std::string> done;
    if (std::filesystem::exists(summary.out)) {
        std::ifstream in(summary.out);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            try {
                const json rec = json::parse(line);
                if (rec.value("config_hash", "") == summary.hash) done.insert(rec.at("point").dump());
            } catch (const json::exception&) {
                throw ValidationError("results file has a malformed line: " + summary.out);
            }
        }
    }
    std::ofstream out(summary.out, std::ios::app);
    if (!out) throw ValidationError("cannot write " + summary.out);

    for (const auto& point : points) {
        if (done.contains(point.dump())) {
            ++summary.skipped;
            continue;
        }
        json args = base;
        if (has(config, "trials")) args["trials"] = config.at("trials");
        if (has(config, "seed")) args["seed"] = config.at("seed");
        for (const auto& [path, value] : point.items()) set_path(args, path, value);

        const auto t0 = std::chrono::steady_clock::now();
        const VerbOutput res = run_verb(operation, args);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        std::vector<std::string> names = metrics;
        if (names.empty()) {
            if (res.result.contains("advantage")) names.push_back("advantage");
            else if (res.result.contains("value")) names.push_back("value");
            else throw ValidationError("operation result has no default metric; list \"metrics\" in the config");
        }
        for (const auto& metric : names) {
            const json* v = lookup(res.result, metric);
            if (!v) throw ValidationError("operation result has no field " + metric);
            json rec = {{"config_hash", summary.hash},
                        {"name", name},
                        {"operation", operation},
                        {"point", point},
                        {"metric", metric},
                        {"value", *v},
                        {"stderr", nullptr},
                        {"mode", res.result.value("mode", "exact")},
                        {"wall_time", wall}};
            if ((metric == "advantage" || metric == "value") && res.result.contains("stderr")) rec["stderr"] = res.result.at("stderr");
            out << rec.dump() << '\n';
        }
        out.flush();
        ++summary.computed;
    }
    return summary;
}

std::string emit_table(const std::string& results, const std::string& x, const std::string& y) {
    std::ifstream in(results);
    if (!in) throw ValidationError("cannot read " + results);
    struct Row {
        json x;
        json y;
        json err;
    };
    std::vector<Row> rows;
    bool any_err = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception&) {
            throw ValidationError("malformed results line");
        }
        if (rec.value("metric", "") != y) continue;
        const json point = rec.value("point", json::object());
        const json* xv = lookup(point, x);
        if (!xv) xv = lookup(rec, x);
        if (!xv) throw ValidationError("results have no field " + x);
        if (!rec.contains("value")) throw ValidationError("results have no value field");
        Row row{*xv, rec.at("value"), rec.value("stderr", json())};
        any_err = any_err || !row.err.is_null();
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.x < b.x; });
    auto cell = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    std::ostringstream csv;
    csv << x << ',' << y;
    if (any_err) csv << ",stderr";
    csv << '\n';
    for (const auto& row : rows) {
        csv << cell(row.x) << ',' << cell(row.y);
        if (any_err) csv << ',' << (row.err.is_null() ? "" : cell(row.err));
        csv << '\n';
    }
    return csv.str();
}

}  // namespace psub::cli
