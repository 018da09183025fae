#pragma once

#include <string>

#include "json.hpp"

#include "psub/distinguishers.hpp"
#include "psub/hypercore.hpp"
#include "psub/lowdegree.hpp"
#include "psub/models.hpp"
#include "psub/psm.hpp"
#include "psub/secretshare.hpp"

namespace psub {

using json = nlohmann::json;

json load_json_file(const std::string& path);
/// An inline object is used as is; a string is read as a path to a JSON file.
json resolve(const json& value);

/// {"n", "r", "present": [[v_1..v_r], ...]} with present edges in rank order.
json to_json(const Hypergraph& g);
Hypergraph hypergraph_from_json(const json& j);

json to_json(const ModelParams& p);
ModelParams params_from_json(const json& j);

json to_json(const AccessStructure& a);
AccessStructure access_from_json(const json& j);

json to_json(const FunctionTable& F);
FunctionTable function_from_json(const json& j);

/// Shares are ceil(log2 n)-bit binary strings keyed by party.
json to_json(const ShareBundle& b);
ShareBundle bundle_from_json(const json& j);
std::string encode_label(Vertex v, std::uint32_t n);
Vertex decode_label(const std::string& bits, std::uint32_t n);

json to_json(const PsmInstance& inst, bool public_only = false);
PsmInstance instance_from_json(const json& j);

json to_json(const AdvantageReport& rep);
json to_json(const CsirmazReport& rep);

BoundInputs bound_inputs_from_json(const json& j);

/// Integers that fit in a double exactly are emitted as numbers, others as decimal strings.
json big_to_json(const BigInt& x);
std::string rational_string(const Rational& q);

}  // namespace psub
