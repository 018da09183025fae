#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "psub/cli.hpp"
#include "psub/kernels.hpp"

namespace {

using psub::json;

enum class Kind { text, uint, real, flag };

struct Opt {
    const char* name;
    Kind kind;
    const char* help;
};

const std::map<std::string, std::vector<Opt>>& verb_options() {
    static const std::map<std::string, std::vector<Opt>> table = {
        {"sample",
         {{"model", Kind::text, "planted or null"},
          {"params", Kind::text, "ModelParams JSON file"},
          {"H", Kind::text, "hypergraph JSON file (default: uniform from the seed)"},
          {"count", Kind::uint, "number of samples"}}},
        {"lr exact",
         {{"H", Kind::text, "hypergraph JSON file"},
          {"params", Kind::text, "ModelParams JSON file"},
          {"degree", Kind::uint, "maximum character size D"},
          {"rational", Kind::flag, "also report exact rationals"},
          {"exec", Kind::text, "serial or parallel"}}},
        {"lr bound",
         {{"inputs", Kind::text, "bound inputs JSON file {n,k,r,l,D,p,epsilon,delta}"},
          {"mode", Kind::text, "exactN, boundN, theorem or corollary"},
          {"eta", Kind::real, "corollary failure probability"}}},
        {"lr nvd",
         {{"n", Kind::uint, "vertices"},
          {"r", Kind::uint, "uniformity"},
          {"l", Kind::uint, "leaked vertices"},
          {"v", Kind::uint, "vertices outside L"},
          {"D", Kind::uint, "maximum character size"},
          {"bound", Kind::flag, "report the closed-form upper bound"}}},
        {"lr moment",
         {{"params", Kind::text, "ModelParams JSON file"},
          {"degree", Kind::uint, "maximum character size D"},
          {"p", Kind::uint, "moment order"},
          {"exec", Kind::text, "serial or parallel"}}},
        {"distinguish",
         {{"stat", Kind::text, "edgecount, subgraph, leakmatch or linear"},
          {"params", Kind::text, "ModelParams JSON file"},
          {"H", Kind::text, "hypergraph JSON file (default: uniform from the seed)"},
          {"trials", Kind::uint, "Monte Carlo trials per model"},
          {"exact", Kind::flag, "exact advantage from the enumerated distributions"},
          {"m", Kind::uint, "subgraph size"},
          {"w", Kind::uint, "vertex matched by leakmatch"},
          {"exec", Kind::text, "serial or parallel"}}},
        {"distinguish sweep",
         {{"stat", Kind::text, "statistic"},
          {"r", Kind::uint, "uniformity"},
          {"l", Kind::uint, "leaked vertices"},
          {"n", Kind::text, "comma-separated host sizes"},
          {"k", Kind::text, "comma-separated planted sizes"},
          {"replicates", Kind::uint, "independent H per point"},
          {"trials", Kind::uint, "Monte Carlo trials per model"},
          {"exec", Kind::text, "serial or parallel"}}},
        {"ss deal",
         {{"R", Kind::text, "access structure JSON file"},
          {"s", Kind::uint, "secret bit"},
          {"n", Kind::uint, "host size"}}},
        {"ss reconstruct",
         {{"bundle", Kind::text, "share bundle JSON file"}, {"set", Kind::text, "comma-separated parties"}}},
        {"ss secrecy",
         {{"R", Kind::text, "access structure JSON file"},
          {"set", Kind::text, "comma-separated leaked parties"},
          {"n", Kind::uint, "host size"},
          {"exec", Kind::text, "serial or parallel"}}},
        {"ss csirmaz",
         {{"ground", Kind::uint, "ground set size"},
          {"l", Kind::uint, "secrecy threshold"},
          {"R", Kind::text, "access structure JSON file"}}},
        {"psm setup",
         {{"F", Kind::text, "function table JSON file"},
          {"n", Kind::uint, "host size"},
          {"public_only", Kind::flag, "omit the private embedding"}}},
        {"psm run",
         {{"instance", Kind::text, "instance JSON file"}, {"inputs", Kind::text, "comma-separated inputs"}}},
        {"psm simulate",
         {{"F", Kind::text, "function table JSON file"},
          {"y", Kind::uint, "output bit"},
          {"n", Kind::uint, "host size"},
          {"allow_collisions", Kind::flag, "draw messages with replacement"}}},
        {"psm tv",
         {{"F", Kind::text, "function table JSON file"},
          {"selector", Kind::text, "uniform, constant:x1,..,xr or preimage:b"},
          {"n", Kind::uint, "host size"},
          {"allow_collisions", Kind::flag, "simulator draws messages with replacement"}}},
        {"experiment run", {{"config", Kind::text, "experiment config JSON file"}}},
        {"experiment table",
         {{"results", Kind::text, "JSONL results file"},
          {"x", Kind::text, "point or record field"},
          {"y", Kind::text, "metric name"}}},
    };
    return table;
}

std::string flag_name(const std::string& name) {
    std::string out = "--";
    for (char c : name) out += c == '_' ? '-' : c;
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Planted subgraph workbench"};
    app.require_subcommand(1);
    std::string seed, out;
    int threads = 0;
    app.add_option("--seed", seed, "random seed");
    app.add_option("--threads", threads, "worker threads (0 = default)");
    app.add_option("--out", out, "write output here instead of stdout");

    std::map<std::string, CLI::App*> commands;
    std::map<std::string, std::map<std::string, std::string>> values;
    std::map<std::string, std::map<std::string, bool>> flags;
    for (const auto& [verb, opts] : verb_options()) {
        CLI::App* parent = &app;
        std::string path;
        std::size_t start = 0;
        while (start <= verb.size()) {
            const auto space = verb.find(' ', start);
            const std::string word = verb.substr(start, space == std::string::npos ? std::string::npos : space - start);
            path += (path.empty() ? "" : " ") + word;
            if (!commands.contains(path)) {
                commands[path] = parent->add_subcommand(word);
                commands[path]->fallthrough();
            }
            parent = commands[path];
            if (space == std::string::npos) break;
            start = space + 1;
        }
        for (const auto& o : opts) {
            if (o.kind == Kind::flag)
                parent->add_flag(flag_name(o.name), flags[verb][o.name], o.help);
            else
                parent->add_option(flag_name(o.name), values[verb][o.name], o.help);
        }
    }
    for (const char* group : {"lr", "ss", "psm", "experiment"}) commands[group]->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string verb;
    for (const auto& [path, cmd] : commands)
        if (cmd->parsed() && verb_options().contains(path) && path.size() > verb.size()) verb = path;

    json args = json::object();
    try {
        for (const auto& o : verb_options().at(verb)) {
            if (o.kind == Kind::flag) {
                if (flags[verb][o.name]) args[o.name] = true;
                continue;
            }
            const std::string& v = values[verb][o.name];
            if (v.empty()) continue;
            try {
                if (o.kind == Kind::uint) {
                    if (v.find_first_not_of("0123456789") != std::string::npos) throw std::invalid_argument(v);
                    args[o.name] = std::stoull(v);
                } else if (o.kind == Kind::real) {
                    args[o.name] = std::stod(v);
                } else {
                    args[o.name] = v;
                }
            } catch (const std::logic_error&) {
                throw psub::ValidationError(flag_name(o.name) + " expects a number, got " + v);
            }
        }
        if (!seed.empty()) {
            if (seed.find_first_not_of("0123456789") != std::string::npos) throw psub::ValidationError("--seed expects an integer");
            args["seed"] = std::stoull(seed);
        }
        if (verb == "experiment run" && !out.empty()) {
            args["out"] = out;
            out.clear();
        }
        if (threads < 0) throw psub::ValidationError("--threads must be non-negative");
        psub::kernels::set_threads(threads);

        const auto res = psub::cli::run_verb(verb, args);
        std::ofstream file;
        if (!out.empty()) {
            file.open(out);
            if (!file) throw psub::ValidationError("cannot write " + out);
        }
        std::ostream& os = out.empty() ? std::cout : file;
        if (res.text) {
            os << *res.text;
        } else if (!res.lines.empty()) {
            for (const auto& line : res.lines) os << line.dump() << '\n';
        } else {
            os << res.result.dump() << '\n';
        }
        return 0;
    } catch (const std::exception& e) {
        std::cout << psub::cli::error_object(e).dump() << '\n';
        return psub::cli::exit_code(e);
    }
}
