#pragma once

// JSON formats for gap machines, oracle systems, assignments, conditions and
// lowness bundles. Readers throw ParseError on malformed input and leave
// semantic validation to the constructors they call.

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapsim/errors.hpp"
#include "gapsim/gap_tree.hpp"
#include "gapsim/gapp_engine.hpp"
#include "gapsim/oracle_lab.hpp"
#include "gapsim/pp_lowness.hpp"
#include "gapsim/qtm_model.hpp"

namespace gapsim::io {

using nlohmann::json;
using nlohmann::ordered_json;

inline Polynomial read_polynomial(const json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of coefficients");
    std::vector<std::uint64_t> coeffs;
    for (const auto& c : j) {
        if (!c.is_number_unsigned()) throw ParseError(std::string(what) + " coefficients must be nonnegative integers");
        coeffs.push_back(c.get<std::uint64_t>());
    }
    return Polynomial(std::move(coeffs));
}

inline ordered_json write_polynomial(const Polynomial& p) { return p.coefficients(); }

inline std::string read_string(const json& j, const char* what) {
    if (!j.is_string()) throw ParseError(std::string(what) + " must be a string");
    auto s = j.get<std::string>();
    for (char c : s)
        if (c != '0' && c != '1') throw ParseError(std::string(what) + " must be a binary string");
    return s;
}

inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

// ---------------------------------------------------------------------------
// Gap trees: "a", "r", or an array of subtrees

inline TreePtr read_tree(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "a") return TreeNode::accept_leaf();
        if (s == "r") return TreeNode::reject_leaf();
        throw ParseError("tree leaf must be \"a\" or \"r\", got \"" + s + "\"");
    }
    if (!j.is_array() || j.empty()) throw ParseError("tree node must be a leaf or a non-empty array");
    std::vector<TreePtr> kids;
    for (const auto& c : j) kids.push_back(read_tree(c));
    return TreeNode::branch(std::move(kids));
}

inline ordered_json write_tree(const TreePtr& t) {
    switch (t->kind()) {
    case TreeNode::Kind::accept: return "a";
    case TreeNode::Kind::reject: return "r";
    case TreeNode::Kind::branch: break;
    }
    auto out = ordered_json::array();
    for (const auto& c : t->children()) out.push_back(write_tree(c));
    return out;
}

/// Gap file: {"tree": ...} or {"system": "machine.json"} (relative to the
/// gap file). Either way the result is a constant machine.
inline GapMachine read_gap_file(const std::filesystem::path& path, const ModelLimits& limits = {}) {
    const auto j = parse_json_text(read_text_file(path));
    if (j.is_object() && j.contains("system")) {
        const auto ref = j.at("system");
        if (!ref.is_string()) throw ParseError("\"system\" must be a path");
        return system_to_gap_machine(build_system_from_file(path.parent_path() / ref.get<std::string>(), limits));
    }
    return constant_machine(read_tree(field(j, "tree")));
}

// ---------------------------------------------------------------------------
// Oracle query systems: a machine file plus "slots", "p" and "universe"

inline OracleQuerySystem read_oracle_system(const json& j, const ModelLimits& limits = {}) {
    auto base = build_system(j, limits);
    std::vector<std::vector<QuerySlot>> slots(base.t_bound());
    if (j.contains("slots")) {
        if (!j.at("slots").is_array()) throw ParseError("\"slots\" must be an array");
        for (const auto& s : j.at("slots")) {
            if (!s.is_array() || s.size() != 4) throw ParseError("each slot must be [step, config, partner, query]");
            const auto step = detail::json_index(s[0], "slot step");
            if (step >= slots.size()) throw ParseError("slot step beyond the running time");
            slots[step].push_back({detail::json_index(s[1], "slot config"), detail::json_index(s[2], "slot partner"),
                                   read_string(s[3], "slot query")});
        }
    }
    const auto universe = detail::json_index(field(j, "universe"), "universe");
    return OracleQuerySystem::create(std::move(base), std::move(slots), read_polynomial(field(j, "p"), "p"), universe);
}

inline ordered_json write_oracle_system(const OracleQuerySystem& s) {
    auto j = to_json(s.base());
    auto slots = ordered_json::array();
    for (std::size_t step = 0; step < s.all_slots().size(); ++step)
        for (const auto& slot : s.all_slots()[step]) slots.push_back({step, slot.config, slot.partner, slot.query});
    j["slots"] = std::move(slots);
    j["p"] = write_polynomial(s.p());
    j["universe"] = s.universe_length();
    return j;
}

// ---------------------------------------------------------------------------
// Assignments: {"universe": u, "bits": "0110..."} in index order, or "ones"

inline OracleAssignment read_assignment(const json& j) {
    const auto u = detail::json_index(field(j, "universe"), "universe");
    if (j.contains("bits")) {
        if (!j.at("bits").is_string()) throw ParseError("\"bits\" must be a string");
        return OracleAssignment::from_bits(u, j.at("bits").get<std::string>());
    }
    std::set<std::string> ones;
    for (const auto& y : field(j, "ones")) ones.insert(read_string(y, "oracle string"));
    for (const auto& y : ones)
        if (y.size() > u) throw ParseError("string \"" + y + "\" outside the universe");
    return OracleAssignment::with_ones(u, ones);
}

inline ordered_json write_assignment(const OracleAssignment& a) {
    ordered_json j;
    j["universe"] = a.universe_length();
    j["bits"] = a.bits();
    return j;
}

// ---------------------------------------------------------------------------
// Conditions: {"lengths": [...], "chosen": {"2": "01", ...}}

inline TowerCondition read_condition(const json& j) {
    std::set<std::size_t> lengths;
    for (const auto& l : field(j, "lengths")) lengths.insert(detail::json_index(l, "length"));
    std::map<std::size_t, std::string> chosen;
    const auto& c = field(j, "chosen");
    if (!c.is_object()) throw ParseError("\"chosen\" must map lengths to strings");
    for (const auto& [key, value] : c.items()) {
        std::size_t len = 0;
        try {
            len = std::stoul(key);
        } catch (const std::exception&) {
            throw ParseError("chosen length \"" + key + "\" is not a number");
        }
        chosen[len] = read_string(value, "chosen string");
    }
    return TowerCondition::create(std::move(lengths), std::move(chosen));
}

inline ordered_json write_condition(const TowerCondition& c) {
    ordered_json j;
    j["lengths"] = c.domain_lengths();
    ordered_json chosen = ordered_json::object();
    for (const auto& [len, y] : c.chosen()) chosen[std::to_string(len)] = y;
    j["chosen"] = std::move(chosen);
    return j;
}

// ---------------------------------------------------------------------------
// Lowness bundles

inline OracleTreePtr read_oracle_tree(const json& j) {
    if (j.is_object()) {
        return OracleNode::query(read_string(field(j, "query"), "query"), read_oracle_tree(field(j, "yes")),
                                 read_oracle_tree(field(j, "no")));
    }
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "a") return OracleNode::leaf(true);
        if (s == "r") return OracleNode::leaf(false);
        throw ParseError("tree leaf must be \"a\" or \"r\", got \"" + s + "\"");
    }
    if (!j.is_array() || j.empty()) throw ParseError("oracle tree node must be a leaf, a query or a non-empty array");
    std::vector<OracleTreePtr> kids;
    for (const auto& c : j) kids.push_back(read_oracle_tree(c));
    return OracleNode::branch(std::move(kids));
}

inline ordered_json write_oracle_tree(const OracleTreePtr& t) {
    switch (t->kind()) {
    case OracleNode::Kind::accept: return "a";
    case OracleNode::Kind::reject: return "r";
    case OracleNode::Kind::query: {
        ordered_json j;
        j["query"] = t->query_string();
        j["yes"] = write_oracle_tree(t->yes());
        j["no"] = write_oracle_tree(t->no());
        return j;
    }
    case OracleNode::Kind::branch: break;
    }
    auto out = ordered_json::array();
    for (const auto& c : t->children()) out.push_back(write_oracle_tree(c));
    return out;
}

struct LownessBundle {
    LownessInstance instance;
    std::vector<std::string> inputs;
};

/// {"machine": tree, "queries_per_path": k, "oracle_set": [...],
///  "certificate": {"type": "indicator", "q": [...], "slack": s}, "q": [...],
///  "inputs": [...]}
inline LownessBundle read_lowness_bundle(const json& j) {
    const auto tree = read_oracle_tree(field(j, "machine"));
    const auto k = detail::json_index(field(j, "queries_per_path"), "queries_per_path");
    std::set<std::string> oracle;
    for (const auto& y : field(j, "oracle_set")) oracle.insert(read_string(y, "oracle string"));
    const auto& c = field(j, "certificate");
    if (!field(c, "type").is_string() || c.at("type").get<std::string>() != "indicator")
        throw ParseError("certificate type must be \"indicator\"");
    const auto slack = c.contains("slack") ? detail::json_index(c.at("slack"), "slack") : 1;
    auto cert = indicator_certificate(oracle, read_polynomial(field(c, "q"), "certificate q"), slack);
    std::vector<std::string> inputs;
    for (const auto& x : field(j, "inputs")) inputs.push_back(read_string(x, "input"));
    return {{OracleGapMachine{[tree](const std::string&) { return tree; }, k}, std::move(oracle), std::move(cert),
             read_polynomial(field(j, "q"), "q")},
            std::move(inputs)};
}

inline ordered_json write_lowness_bundle(const OracleTreePtr& tree, std::size_t k, const std::set<std::string>& oracle,
                                         const Polynomial& cert_q, std::uint64_t slack, const Polynomial& q,
                                         const std::vector<std::string>& inputs) {
    ordered_json j;
    j["machine"] = write_oracle_tree(tree);
    j["queries_per_path"] = k;
    j["oracle_set"] = oracle;
    ordered_json c;
    c["type"] = "indicator";
    c["q"] = write_polynomial(cert_q);
    c["slack"] = slack;
    j["certificate"] = std::move(c);
    j["q"] = write_polynomial(q);
    j["inputs"] = inputs;
    return j;
}

} // namespace gapsim::io
