#pragma once

// Inlining an AWPP approximator into a PP oracle machine.
//
// An oracle gap machine is a computation tree that may contain query nodes;
// a query node on y continues into its yes-subtree or no-subtree depending on
// whether y is in the oracle. The inlined machine replaces each query by the
// approximator's tree N on (y, 1^|x|): the yes-subtree is weighted by N's gap
// f and the no-subtree by g - f, so that gap(M') / g^k approximates gap(M^A)
// with an error that grows with the number of paths of M.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gapsim/errors.hpp"
#include "gapsim/gap_tree.hpp"
#include "gapsim/gapp_engine.hpp"
#include "gapsim/numeric.hpp"

namespace gapsim {

class OracleNode;
using OracleTreePtr = std::shared_ptr<const OracleNode>;

class OracleNode {
public:
    enum class Kind { accept, reject, branch, query };

    static OracleTreePtr leaf(bool accepting) {
        static const OracleTreePtr acc(new OracleNode(Kind::accept, {}, {}));
        static const OracleTreePtr rej(new OracleNode(Kind::reject, {}, {}));
        return accepting ? acc : rej;
    }

    static OracleTreePtr branch(std::vector<OracleTreePtr> children) {
        if (children.empty()) throw ModelError("a branch node needs at least one child");
        return OracleTreePtr(new OracleNode(Kind::branch, {}, std::move(children)));
    }

    /// children()[0] is the yes-continuation, children()[1] the no-continuation.
    static OracleTreePtr query(std::string y, OracleTreePtr yes, OracleTreePtr no) {
        require_binary(y);
        return OracleTreePtr(new OracleNode(Kind::query, std::move(y), {std::move(yes), std::move(no)}));
    }

    static OracleTreePtr from_tree(const TreePtr& t) {
        if (t->is_leaf()) return leaf(t->kind() == TreeNode::Kind::accept);
        std::vector<OracleTreePtr> kids;
        for (const auto& c : t->children()) kids.push_back(from_tree(c));
        return branch(std::move(kids));
    }

    Kind kind() const { return kind_; }
    const std::string& query_string() const { return query_; }
    const std::vector<OracleTreePtr>& children() const { return children_; }
    const OracleTreePtr& yes() const { return children_.at(0); }
    const OracleTreePtr& no() const { return children_.at(1); }

private:
    OracleNode(Kind kind, std::string q, std::vector<OracleTreePtr> children)
        : kind_(kind), query_(std::move(q)), children_(std::move(children)) {}

    Kind kind_;
    std::string query_;
    std::vector<OracleTreePtr> children_;
};

/// Oracle gap machine normalized so every root-to-leaf path makes exactly
/// `queries_per_path` queries.
struct OracleGapMachine {
    std::function<OracleTreePtr(const std::string&)> evaluator;
    std::size_t queries_per_path = 0;

    /// Tree on x; throws NormalizationError if some path has a different query count.
    OracleTreePtr tree(const std::string& x) const {
        auto root = evaluator(x);
        std::unordered_map<const OracleNode*, std::pair<std::size_t, std::size_t>> memo;
        std::function<std::pair<std::size_t, std::size_t>(const OracleNode*)> range =
            [&](const OracleNode* n) -> std::pair<std::size_t, std::size_t> {
            if (n->kind() == OracleNode::Kind::accept || n->kind() == OracleNode::Kind::reject) return {0, 0};
            if (auto it = memo.find(n); it != memo.end()) return it->second;
            std::size_t lo = SIZE_MAX;
            std::size_t hi = 0;
            for (const auto& c : n->children()) {
                auto [clo, chi] = range(c.get());
                lo = std::min(lo, clo);
                hi = std::max(hi, chi);
            }
            if (n->kind() == OracleNode::Kind::query) {
                ++lo;
                ++hi;
            }
            return memo.emplace(n, std::make_pair(lo, hi)).first->second;
        };
        const auto [lo, hi] = range(root.get());
        if (lo != queries_per_path || hi != queries_per_path)
            throw NormalizationError("on input \"" + x + "\" paths make between " + std::to_string(lo) + " and " +
                                     std::to_string(hi) + " queries, expected exactly " +
                                     std::to_string(queries_per_path));
        return root;
    }
};

/// Machine in adaptive form: the i-th query string depends on x and the
/// first i answers, and after k answers `evaluator` supplies a query-free tree.
inline OracleGapMachine adaptive_oracle_machine(
    std::size_t k, std::function<std::string(const std::string&, const std::vector<bool>&)> query_strings,
    std::function<TreePtr(const std::string&, const std::vector<bool>&)> evaluator) {
    return {[k, query_strings, evaluator](const std::string& x) {
                std::function<OracleTreePtr(std::vector<bool>&)> build = [&](std::vector<bool>& answers) {
                    if (answers.size() == k) return OracleNode::from_tree(evaluator(x, answers));
                    const auto y = query_strings(x, answers);
                    answers.push_back(true);
                    auto yes = build(answers);
                    answers.back() = false;
                    auto no = build(answers);
                    answers.pop_back();
                    return OracleNode::query(y, std::move(yes), std::move(no));
                };
                std::vector<bool> answers;
                return build(answers);
            },
            k};
}

/// Number of leaves of the oracle tree, counting both outcomes of every query.
inline BigInt oracle_path_count(const OracleTreePtr& root) {
    std::unordered_map<const OracleNode*, BigInt> memo;
    std::function<BigInt(const OracleNode*)> count = [&](const OracleNode* n) -> BigInt {
        if (n->kind() == OracleNode::Kind::accept || n->kind() == OracleNode::Kind::reject) return 1;
        if (auto it = memo.find(n); it != memo.end()) return it->second;
        BigInt total = 0;
        for (const auto& c : n->children()) total += count(c.get());
        memo.emplace(n, total);
        return total;
    };
    return count(root.get());
}

inline std::set<std::string> oracle_query_strings(const OracleTreePtr& root) {
    std::set<std::string> out;
    std::set<const OracleNode*> seen;
    std::vector<const OracleNode*> stack{root.get()};
    while (!stack.empty()) {
        const auto* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        if (n->kind() == OracleNode::Kind::query) out.insert(n->query_string());
        for (const auto& c : n->children()) stack.push_back(c.get());
    }
    return out;
}

struct LownessInstance {
    OracleGapMachine machine;
    std::set<std::string> oracle;        // the language A, explicitly
    ClassCertificate approximator;       // AWPP certificate for A
    Polynomial q;
};

/// Gap of M with every query answered from the explicit oracle set.
inline BigInt true_gap(const LownessInstance& inst, const std::string& x) {
    const auto root = inst.machine.tree(x);
    std::unordered_map<const OracleNode*, BigInt> memo;
    std::function<BigInt(const OracleNode*)> gap = [&](const OracleNode* n) -> BigInt {
        switch (n->kind()) {
        case OracleNode::Kind::accept: return 1;
        case OracleNode::Kind::reject: return -1;
        case OracleNode::Kind::query:
            return gap(inst.oracle.contains(n->query_string()) ? n->yes().get() : n->no().get());
        case OracleNode::Kind::branch: break;
        }
        if (auto it = memo.find(n); it != memo.end()) return it->second;
        BigInt total = 0;
        for (const auto& c : n->children()) total += gap(c.get());
        memo.emplace(n, total);
        return total;
    };
    return gap(root.get());
}

/// M' on x: each query on y becomes a branch into N(y,1^|x|) followed by the
/// yes-continuation, and (g - N)(y,1^|x|) followed by the no-continuation.
inline TreePtr inline_tree(const LownessInstance& inst, const std::string& x) {
    const auto root = inst.machine.tree(x);
    const std::uint64_t n = x.size();
    const BigInt g = inst.approximator.g(n);
    if (g < 1) throw DomainError("approximator g(|x|) must be positive");
    const TreePtr g_tree = uniform_tree(g, true);

    std::map<std::string, std::pair<TreePtr, TreePtr>> weights;   // y -> (f tree, g - f tree)
    auto weight_trees = [&](const std::string& y) -> const std::pair<TreePtr, TreePtr>& {
        if (auto it = weights.find(y); it != weights.end()) return it->second;
        const TreePtr f = inst.approximator.f.tree(pad_input(y, n));
        const TreePtr complement = TreeNode::branch({g_tree, negate_tree(f)});
        return weights.emplace(y, std::make_pair(f, complement)).first->second;
    };

    std::unordered_map<const OracleNode*, TreePtr> memo;
    std::function<TreePtr(const OracleNode*)> visit = [&](const OracleNode* node) -> TreePtr {
        switch (node->kind()) {
        case OracleNode::Kind::accept: return TreeNode::accept_leaf();
        case OracleNode::Kind::reject: return TreeNode::reject_leaf();
        default: break;
        }
        if (auto it = memo.find(node); it != memo.end()) return it->second;
        TreePtr out;
        if (node->kind() == OracleNode::Kind::query) {
            const auto& [f, complement] = weight_trees(node->query_string());
            out = TreeNode::branch({compose_trees(f, visit(node->yes().get())),
                                    compose_trees(complement, visit(node->no().get()))});
        } else {
            std::vector<TreePtr> kids;
            for (const auto& c : node->children()) kids.push_back(visit(c.get()));
            out = TreeNode::branch(std::move(kids));
        }
        memo.emplace(node, out);
        return out;
    };
    return visit(root.get());
}

inline GapMachine inline_construction(const LownessInstance& inst) {
    return {[inst](const std::string& x) { return inline_tree(inst, x); }, inst.approximator.f.branch_bound};
}

struct LownessEntry {
    std::string x;
    std::size_t queries = 0;
    BigInt path_count;
    std::uint64_t q = 0;
    BigInt true_gap;
    BigInt inlined_gap;
    BigInt scale;                 // g(|x|)^k
    Fraction error_mass;          // |inlined - scale * true| / scale
    Fraction error_bound;         // k * paths * 2^-q
    bool path_bound_ok = false;   // paths < 2^(q/2)
    bool approximator_ok = false; // AWPP promise holds on every reachable query
    bool pp_promise_ok = false;   // true gap nonzero
    bool sign_preserved = false;

    bool invariants_hold() const { return path_bound_ok && approximator_ok && pp_promise_ok; }
};

struct LownessReport {
    std::vector<LownessEntry> entries;

    bool invariants_hold() const {
        return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.invariants_hold(); });
    }
    bool all_preserved() const {
        return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.sign_preserved; });
    }
    std::size_t sign_flips() const {
        return static_cast<std::size_t>(
            std::count_if(entries.begin(), entries.end(), [](const auto& e) { return !e.sign_preserved; }));
    }
};

inline int sign_of(const BigInt& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

/// Evaluates M^A and M' on every input and records sign agreement together
/// with the achieved error mass and the accounting bound. Never throws on a
/// broken instance; the invariant flags say whether the guarantee applies.
inline LownessReport verify_sign_preservation(const LownessInstance& inst, const std::vector<std::string>& inputs) {
    LownessReport report;
    const GapMachine inlined = inline_construction(inst);
    for (const auto& x : inputs) {
        LownessEntry e;
        e.x = x;
        const auto root = inst.machine.tree(x);
        e.queries = inst.machine.queries_per_path;
        e.path_count = oracle_path_count(root);
        e.q = inst.q(x.size());
        e.true_gap = true_gap(inst, x);
        e.inlined_gap = gap_of(inlined, x);
        e.scale = boost::multiprecision::pow(inst.approximator.g(x.size()), static_cast<unsigned>(e.queries));

        const BigInt target = e.scale * e.true_gap;
        e.error_mass = abs_difference(e.inlined_gap, target, e.scale);
        e.error_bound = Fraction(BigInt(e.queries) * e.path_count, pow2(e.q));
        e.path_bound_ok = e.path_count * e.path_count < pow2(e.q);
        e.pp_promise_ok = e.true_gap != 0;

        std::vector<LabeledInput> queried;
        for (const auto& y : oracle_query_strings(root)) queried.push_back({y, inst.oracle.contains(y)});
        ClassCertificate at_q = inst.approximator;
        at_q.q = inst.q;
        e.approximator_ok = check_awpp(at_q, queried, x.size()).pass();

        e.sign_preserved = sign_of(e.inlined_gap) == sign_of(e.true_gap);
        report.entries.push_back(std::move(e));
    }
    return report;
}

/// AWPP certificate for an explicit finite language with error exactly 2^-q(m):
/// g(m) = 2^q(m), f = g - slack on members and slack on non-members.
inline ClassCertificate indicator_certificate(std::set<std::string> language, const Polynomial& q,
                                              std::uint64_t slack = 1) {
    GapMachine f{[language, q, slack](const std::string& code) {
        const auto [y, m] = unpad_input(code);
        const BigInt g = pow2(q(m));
        const BigInt value = language.contains(y) ? BigInt(g - slack) : BigInt(slack);
        return tree_with_gap(value);
    }};
    return {ClassKind::awpp, std::move(f), [q](std::uint64_t m) { return pow2(q(m)); }, q,
            slack == 0 ? Sandwich::inclusive : Sandwich::strict};
}

} // namespace gapsim
