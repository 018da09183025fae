#include "psub/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace psub {

namespace {

template <typename T>
T field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("field \"") + key + "\" has the wrong type");
    }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback) {
    return j.is_object() && j.contains(key) && !j.at(key).is_null() ? field<T>(j, key) : fallback;
}

VertexList vertex_list(const json& j, const char* what) {
    try {
        return j.get<VertexList>();
    } catch (const json::exception&) {
        throw ValidationError(std::string(what) + " must be a list of vertex indices");
    }
}

}  // namespace

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("invalid JSON in " + path + ": " + e.what());
    }
}

json resolve(const json& value) {
    if (value.is_string()) return load_json_file(value.get<std::string>());
    return value;
}

json to_json(const Hypergraph& g) {
    json present = json::array();
    if (g.num_coords() > 0) {
        const auto& idx = g.indexer();
        VertexList e(g.r());
        for (std::uint64_t rank = 0; rank < g.num_coords(); ++rank) {
            if (!g.present(rank)) continue;
            idx.unrank(rank, e);
            present.push_back(e);
        }
    }
    return {{"n", g.n()}, {"r", g.r()}, {"present", present}};
}

Hypergraph hypergraph_from_json(const json& j) {
    const auto n = field<std::uint32_t>(j, "n");
    const auto r = field<std::uint32_t>(j, "r");
    Hypergraph g(n, r);
    const json present = field<json>(j, "present");
    if (!present.is_array()) throw ValidationError("\"present\" must be a list");
    for (const auto& e : present) {
        const VertexList v = vertex_list(e, "hyperedge");
        if (v.size() != r) throw ValidationError("hyperedge must have r vertices");
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] >= n) throw ValidationError("hyperedge vertex out of range");
            if (i > 0 && v[i] <= v[i - 1]) throw ValidationError("hyperedge vertices must be sorted and distinct");
        }
        const auto rank = g.indexer().rank(v);
        if (g.present(rank)) throw ValidationError("hyperedge listed twice");
        g.set_present(rank, true);
    }
    return g;
}

json to_json(const ModelParams& p) {
    return {{"n", p.n}, {"k", p.k}, {"r", p.r}, {"L", p.L}, {"seed", p.seed}};
}

ModelParams params_from_json(const json& j) {
    ModelParams p;
    p.n = field<std::uint32_t>(j, "n");
    p.k = field<std::uint32_t>(j, "k");
    p.r = field<std::uint32_t>(j, "r");
    p.L = j.contains("L") ? vertex_list(j.at("L"), "L") : VertexList{};
    p.seed = field_or<std::uint64_t>(j, "seed", 0);
    p.validate();
    return p;
}

json to_json(const AccessStructure& a) {
    return {{"k", a.k}, {"r", a.r}, {"R", a.R}, {"l", a.l}};
}

AccessStructure access_from_json(const json& j) {
    AccessStructure a;
    a.k = field<std::uint32_t>(j, "k");
    a.r = field<std::uint32_t>(j, "r");
    a.l = field_or<std::uint32_t>(j, "l", 0);
    const json sets = field<json>(j, "R");
    if (!sets.is_array()) throw ValidationError("\"R\" must be a list of sets");
    for (const auto& s : sets) a.R.push_back(vertex_list(s, "qualifying set"));
    a.validate();
    return a;
}

json to_json(const FunctionTable& F) {
    json bits = json::array();
    for (auto b : F.bits) bits.push_back(static_cast<int>(b));
    return {{"k", F.k}, {"r", F.r}, {"bits", bits}};
}

FunctionTable function_from_json(const json& j) {
    FunctionTable F;
    F.k = field<std::uint32_t>(j, "k");
    F.r = field<std::uint32_t>(j, "r");
    for (auto b : field<std::vector<int>>(j, "bits")) {
        if (b != 0 && b != 1) throw ValidationError("function table bits must be 0 or 1");
        F.bits.push_back(static_cast<std::uint8_t>(b));
    }
    F.validate();
    return F;
}

std::string encode_label(Vertex v, std::uint32_t n) {
    if (v >= n) throw ValidationError("label out of range");
    const unsigned bits = message_bits(n);
    std::string s(bits, '0');
    for (unsigned i = 0; i < bits; ++i)
        if ((v >> (bits - 1 - i)) & 1U) s[i] = '1';
    return s;
}

Vertex decode_label(const std::string& bits, std::uint32_t n) {
    if (bits.size() != message_bits(n)) throw ValidationError("share must be exactly ceil(log2 n) bits");
    Vertex v = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw ValidationError("share must be a binary string");
        v = (v << 1) | static_cast<Vertex>(c == '1');
    }
    if (v >= n) throw ValidationError("share decodes outside [0,n)");
    return v;
}

json to_json(const ShareBundle& b) {
    json shares = json::object();
    for (std::size_t i = 0; i < b.shares.size(); ++i) shares[std::to_string(i)] = encode_label(b.shares[i], b.n);
    return {{"n", b.n},
            {"access", to_json(b.access)},
            {"H_s", to_json(b.H_s)},
            {"G", to_json(b.G)},
            {"share_bits", message_bits(b.n)},
            {"shares", shares},
            {"public_parties", b.public_parties}};
}

ShareBundle bundle_from_json(const json& j) {
    ShareBundle b;
    b.n = field<std::uint32_t>(j, "n");
    b.access = access_from_json(field<json>(j, "access"));
    b.H_s = hypergraph_from_json(field<json>(j, "H_s"));
    b.G = hypergraph_from_json(field<json>(j, "G"));
    if (b.H_s.n() != b.access.k || b.H_s.r() != b.access.r) throw ValidationError("H_s must live on the parties");
    if (b.G.n() != b.n || b.G.r() != b.access.r) throw ValidationError("G shape mismatch");
    const json shares = field<json>(j, "shares");
    if (!shares.is_object() || shares.size() != b.access.k) throw ValidationError("one share per party required");
    for (std::uint32_t i = 0; i < b.access.k; ++i) {
        const auto key = std::to_string(i);
        if (!shares.contains(key) || !shares[key].is_string()) throw ValidationError("missing share of party " + key);
        b.shares.push_back(decode_label(shares[key].get<std::string>(), b.n));
    }
    VertexList sorted = b.shares;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ValidationError("shares must be distinct");
    b.public_parties = j.contains("public_parties") ? vertex_list(j.at("public_parties"), "public_parties") : VertexList{};
    return b;
}

json to_json(const PsmInstance& inst, bool public_only) {
    json j = {{"F", to_json(inst.F)}, {"G", to_json(inst.G)}, {"message_bits", message_bits(inst.G.n())}};
    if (!public_only) {
        j["Fbar"] = to_json(inst.Fbar);
        j["phi"] = inst.phi.map;
    }
    return j;
}

PsmInstance instance_from_json(const json& j) {
    PsmInstance inst;
    inst.F = function_from_json(field<json>(j, "F"));
    inst.G = hypergraph_from_json(field<json>(j, "G"));
    if (inst.G.r() != inst.F.r) throw ValidationError("G uniformity must match F");
    if (!j.contains("phi")) throw ValidationError("instance has no phi (public-only instances cannot run)");
    inst.phi = Embedding{inst.G.n(), inst.F.r * inst.F.k, vertex_list(j.at("phi"), "phi"), {}};
    inst.phi.validate();
    if (j.contains("Fbar")) inst.Fbar = hypergraph_from_json(j.at("Fbar"));
    return inst;
}

json to_json(const AdvantageReport& rep) {
    return {{"statistic", rep.statistic},
            {"mean_planted", rep.mean_planted},
            {"mean_null", rep.mean_null},
            {"var_planted", rep.var_planted},
            {"var_null", rep.var_null},
            {"advantage", rep.advantage},
            {"stderr", rep.std_error},
            {"mode", rep.mode == AdvantageMode::exact ? "exact" : "montecarlo"},
            {"trials", rep.trials}};
}

json to_json(const CsirmazReport& rep) {
    return {{"monotone", rep.monotone},
            {"submodular", rep.submodular},
            {"extramodular", rep.extramodular},
            {"minimal", rep.minimal},
            {"ok", rep.ok()},
            {"pairs_checked", rep.pairs_checked},
            {"qualifying_pairs", rep.qualifying_pairs},
            {"violations", rep.violations}};
}

BoundInputs bound_inputs_from_json(const json& j) {
    BoundInputs in;
    in.n = field<std::uint64_t>(j, "n");
    in.k = field<std::uint64_t>(j, "k");
    in.r = field_or<std::uint32_t>(j, "r", 2);
    in.l = field_or<std::uint32_t>(j, "l", 0);
    in.D = field_or<unsigned>(j, "D", 1);
    in.p = field_or<unsigned>(j, "p", 1);
    in.epsilon = field_or<double>(j, "epsilon", 0.5);
    in.delta = field_or<double>(j, "delta", 0.0);
    in.validate();
    return in;
}

json big_to_json(const BigInt& x) {
    if (boost::multiprecision::abs(x) < (BigInt(1) << 53)) return static_cast<std::int64_t>(x);
    return x.str();
}

std::string rational_string(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

}  // namespace psub
