#pragma once

// Nondeterministic computation trees with accept/reject leaves.
//
// Trees are immutable and share subtrees: a node may be reachable along many
// paths, and each occurrence counts as a separate branch of the computation.
// Leaf counts and gaps are computed per distinct node and reused, which gives
// exactly the totals of the fully unfolded tree.

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gapsim/errors.hpp"
#include "gapsim/numeric.hpp"

namespace gapsim {

class TreeNode;
using TreePtr = std::shared_ptr<const TreeNode>;

class TreeNode {
public:
    enum class Kind { accept, reject, branch };

    static TreePtr accept_leaf() {
        static const TreePtr node(new TreeNode(Kind::accept, {}));
        return node;
    }
    static TreePtr reject_leaf() {
        static const TreePtr node(new TreeNode(Kind::reject, {}));
        return node;
    }
    static TreePtr leaf(bool accepting) { return accepting ? accept_leaf() : reject_leaf(); }

    static TreePtr branch(std::vector<TreePtr> children) {
        if (children.empty()) throw ModelError("a branch node needs at least one child");
        return TreePtr(new TreeNode(Kind::branch, std::move(children)));
    }

    Kind kind() const { return kind_; }
    bool is_leaf() const { return kind_ != Kind::branch; }
    const std::vector<TreePtr>& children() const { return children_; }

private:
    TreeNode(Kind kind, std::vector<TreePtr> children) : kind_(kind), children_(std::move(children)) {}

    Kind kind_;
    std::vector<TreePtr> children_;
};

struct TreeStats {
    BigInt accepting{0};
    BigInt rejecting{0};

    BigInt leaves() const { return accepting + rejecting; }
    BigInt gap() const { return accepting - rejecting; }
};

inline TreeStats tree_stats(const TreePtr& root) {
    std::unordered_map<const TreeNode*, TreeStats> memo;
    std::function<const TreeStats&(const TreeNode*)> visit = [&](const TreeNode* n) -> const TreeStats& {
        if (auto it = memo.find(n); it != memo.end()) return it->second;
        TreeStats s;
        switch (n->kind()) {
        case TreeNode::Kind::accept: s.accepting = 1; break;
        case TreeNode::Kind::reject: s.rejecting = 1; break;
        case TreeNode::Kind::branch:
            for (const auto& c : n->children()) {
                const auto& cs = visit(c.get());
                s.accepting += cs.accepting;
                s.rejecting += cs.rejecting;
            }
            break;
        }
        return memo.emplace(n, std::move(s)).first->second;
    };
    return visit(root.get());
}

/// Literal leaf-by-leaf walk of the unfolded tree. Only for small trees;
/// tests use it to pin tree_stats to the definition.
inline BigInt unfolded_gap(const TreePtr& root, std::uint64_t max_leaves = 1'000'000) {
    BigInt gap = 0;
    std::uint64_t seen = 0;
    std::vector<const TreeNode*> stack{root.get()};
    while (!stack.empty()) {
        const TreeNode* n = stack.back();
        stack.pop_back();
        if (n->is_leaf()) {
            if (++seen > max_leaves) throw ResourceError("unfolded walk exceeded its leaf budget");
            gap += n->kind() == TreeNode::Kind::accept ? 1 : -1;
            continue;
        }
        for (const auto& c : n->children()) stack.push_back(c.get());
    }
    return gap;
}

/// Swap every leaf label.
inline TreePtr negate_tree(const TreePtr& root) {
    std::unordered_map<const TreeNode*, TreePtr> memo;
    std::function<TreePtr(const TreePtr&)> visit = [&](const TreePtr& n) -> TreePtr {
        switch (n->kind()) {
        case TreeNode::Kind::accept: return TreeNode::reject_leaf();
        case TreeNode::Kind::reject: return TreeNode::accept_leaf();
        case TreeNode::Kind::branch: break;
        }
        if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
        std::vector<TreePtr> kids;
        kids.reserve(n->children().size());
        for (const auto& c : n->children()) kids.push_back(visit(c));
        auto out = TreeNode::branch(std::move(kids));
        memo.emplace(n.get(), out);
        return out;
    };
    return visit(root);
}

/// Sequential composition: at each leaf of `first`, run `second`; the final
/// label is accept iff both labels agree. gap(result) = gap(first) * gap(second).
inline TreePtr compose_trees(const TreePtr& first, const TreePtr& second) {
    const TreePtr second_negated = negate_tree(second);
    std::unordered_map<const TreeNode*, TreePtr> memo;
    std::function<TreePtr(const TreePtr&)> visit = [&](const TreePtr& n) -> TreePtr {
        switch (n->kind()) {
        case TreeNode::Kind::accept: return second;
        case TreeNode::Kind::reject: return second_negated;
        case TreeNode::Kind::branch: break;
        }
        if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
        std::vector<TreePtr> kids;
        kids.reserve(n->children().size());
        for (const auto& c : n->children()) kids.push_back(visit(c));
        auto out = TreeNode::branch(std::move(kids));
        memo.emplace(n.get(), out);
        return out;
    };
    return visit(first);
}

/// A tree with exactly `count` leaves, all labeled `accepting`, built by
/// binary doubling so it has O(log count) distinct nodes.
inline TreePtr uniform_tree(const BigInt& count, bool accepting) {
    if (count < 1) throw DomainError("uniform_tree needs a positive leaf count");
    const TreePtr leaf = TreeNode::leaf(accepting);
    if (count == 1) return leaf;
    TreePtr half = uniform_tree(count / 2, accepting);
    std::vector<TreePtr> kids{half, half};
    if (count % 2 == 1) kids.push_back(leaf);
    return TreeNode::branch(std::move(kids));
}

/// Smallest tree whose gap is `value`: |value| leaves of the right sign, or an
/// accept/reject pair for zero.
inline TreePtr tree_with_gap(const BigInt& value) {
    if (value == 0) return TreeNode::branch({TreeNode::accept_leaf(), TreeNode::reject_leaf()});
    return value > 0 ? uniform_tree(value, true) : uniform_tree(BigInt(-value), false);
}

/// Structural equality of the unfolded trees.
inline bool trees_equal(const TreePtr& a, const TreePtr& b) {
    std::set<std::pair<const TreeNode*, const TreeNode*>> known_equal;
    std::function<bool(const TreeNode*, const TreeNode*)> eq = [&](const TreeNode* x, const TreeNode* y) {
        if (x == y) return true;
        if (x->kind() != y->kind()) return false;
        if (x->is_leaf()) return true;
        if (x->children().size() != y->children().size()) return false;
        if (known_equal.contains({x, y})) return true;
        for (std::size_t i = 0; i < x->children().size(); ++i)
            if (!eq(x->children()[i].get(), y->children()[i].get())) return false;
        known_equal.insert({x, y});
        return true;
    };
    return eq(a.get(), b.get());
}

} // namespace gapsim
