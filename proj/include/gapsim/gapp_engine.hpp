#pragma once

// Gap machines, their closure combinators, and promise-class checkers.
//
// A GapMachine maps an input string to a computation tree; its value on x is
// (#accepting leaves) - (#rejecting leaves). Every combinator here transforms
// trees, never gap values, so a combinator's output is again a machine whose
// value can be checked against arithmetic on the operands' values.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gapsim/errors.hpp"
#include "gapsim/exact_evolve.hpp"
#include "gapsim/gap_tree.hpp"
#include "gapsim/numeric.hpp"
#include "gapsim/qtm_model.hpp"
#include "gapsim/strings.hpp"

namespace gapsim {

/// Default cap on the number of leaves of an (unfolded) computation tree.
inline const BigInt& default_branch_bound() {
    static const BigInt bound = pow2(512);
    return bound;
}

struct GapMachine {
    std::function<TreePtr(const std::string&)> evaluator;
    BigInt branch_bound = default_branch_bound();

    TreePtr tree(const std::string& x) const { return evaluator(x); }
};

inline TreeStats checked_stats(const GapMachine& m, const TreePtr& tree) {
    auto stats = tree_stats(tree);
    if (stats.leaves() > m.branch_bound)
        throw ResourceError("computation tree has " + stats.leaves().str() + " leaves, above the branch bound");
    return stats;
}

/// #accept - #reject over the whole tree of m on x.
inline BigInt gap_of(const GapMachine& m, const std::string& x) { return checked_stats(m, m.tree(x)).gap(); }

/// Machine with a fixed tree on every input.
inline GapMachine constant_machine(TreePtr tree) {
    return {[tree = std::move(tree)](const std::string&) { return tree; }};
}

inline GapMachine negate(const GapMachine& m) {
    return {[m](const std::string& x) { return negate_tree(m.tree(x)); }, m.branch_bound};
}

/// gap(a) - gap(b): branch once, run a on the left and negated b on the right.
inline GapMachine subtract(const GapMachine& a, const GapMachine& b) {
    return {[a, b](const std::string& x) { return TreeNode::branch({a.tree(x), negate_tree(b.tree(x))}); },
            a.branch_bound};
}

namespace detail {

inline std::uint64_t checked_length_bound(const Polynomial& q, std::size_t n) {
    const auto bound = q(n);
    if (bound >= 28) throw ResourceError("q(|x|) = " + std::to_string(bound) + " is too large to branch on");
    return bound;
}

} // namespace detail

/// sum over |y| <= q(|x|) of gap(m, <x,y>): guess y, then run m on <x,y>.
inline GapMachine exp_sum(const GapMachine& m, const Polynomial& q) {
    return {[m, q](const std::string& x) {
                const auto len = detail::checked_length_bound(q, x.size());
                std::vector<TreePtr> kids;
                for (const auto& y : strings_up_to(len)) kids.push_back(m.tree(pair_strings(x, y)));
                return TreeNode::branch(std::move(kids));
            },
            m.branch_bound};
}

/// product over y = 0..q(|x|) of gap(m, <x,y>), with y read through the
/// string/number isomorphism. Factors run one after another; the final leaf
/// label is the parity of the reject labels met along the way.
inline GapMachine poly_product(const GapMachine& m, const Polynomial& q) {
    return {[m, q](const std::string& x) {
                const auto last = q(x.size());
                if (last > 64) throw ResourceError("too many factors in poly_product");
                TreePtr acc = m.tree(pair_strings(x, index_string(0)));
                for (std::uint64_t y = 1; y <= last; ++y)
                    acc = compose_trees(acc, m.tree(pair_strings(x, index_string(y))));
                return acc;
            },
            m.branch_bound};
}

// ---------------------------------------------------------------------------
// Quantum systems as gap machines

/// Tree whose gap is the scaled amplitude (V^t alpha)_target: guess a path
/// edge by edge, branch |w| ways on an edge of weight w and flip the labels
/// below a negative edge. Paths ending away from the target contribute an
/// accept/reject pair.
inline TreePtr amplitude_tree(const UnitarySystem& system, std::size_t target, std::uint64_t t) {
    const auto& v = system.matrix();
    const TreePtr zero = TreeNode::branch({TreeNode::accept_leaf(), TreeNode::reject_leaf()});
    std::map<std::tuple<std::size_t, std::uint64_t, bool>, TreePtr> memo;
    std::function<TreePtr(std::size_t, std::uint64_t, bool)> build = [&](std::size_t config, std::uint64_t remaining,
                                                                          bool negated) -> TreePtr {
        if (remaining == 0) return config == target ? TreeNode::leaf(!negated) : zero;
        const auto key = std::make_tuple(config, remaining, negated);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        std::vector<TreePtr> kids;
        for (const auto& e : v.column(config)) {
            const auto sub = build(e.row, remaining - 1, negated != (e.value < 0));
            const auto copies = e.value < 0 ? -e.value : e.value;
            for (long long c = 0; c < copies; ++c) kids.push_back(sub);
        }
        auto node = TreeNode::branch(std::move(kids));
        memo.emplace(key, node);
        return node;
    };
    return build(system.start(), t, false);
}

/// Tree with gap beta_accept^2: two amplitude trees composed in sequence.
inline TreePtr acceptance_tree(const UnitarySystem& system) {
    const auto beta = amplitude_tree(system, system.accept(), system.t_bound());
    return compose_trees(beta, beta);
}

inline GapMachine system_to_gap_machine(const UnitarySystem& system) {
    return constant_machine(acceptance_tree(system));
}

/// Splits a padded input <x, 1^m> into (x, m).
inline std::pair<std::string, std::uint64_t> unpad_input(const std::string& code) {
    auto [x, pad] = unpair_string(code);
    for (char c : pad)
        if (c != '1') throw DecodeError("padding component is not of the form 1^m");
    return {x, pad.size()};
}

inline std::string pad_input(const std::string& x, std::uint64_t m) { return pair_strings(x, unary(m)); }

/// f(<x,1^m>) = 5^(2t(m)) * Pr[family(x,m) accepts].
inline GapMachine family_to_gap_machine(const MachineFamily& family) {
    return {[family](const std::string& code) {
        const auto [x, m] = unpad_input(code);
        return acceptance_tree(family.instantiate(x, m));
    }};
}

// ---------------------------------------------------------------------------
// Certificates and checkers

enum class ClassKind { pp, lwpp, awpp, ceqp };

inline const char* to_string(ClassKind k) {
    switch (k) {
    case ClassKind::pp: return "PP";
    case ClassKind::lwpp: return "LWPP";
    case ClassKind::awpp: return "AWPP";
    case ClassKind::ceqp: return "C=P";
    }
    return "?";
}

/// How check_awpp treats the outer bound on f: strictly inside (0, g), or in [0, g].
enum class Sandwich { strict, inclusive };

/// (f, g, q) witnessing membership in one of the gap-defined classes. For
/// AWPP the machine f reads padded inputs <x, 1^m>; for the others plain x.
struct ClassCertificate {
    ClassKind kind = ClassKind::pp;
    GapMachine f;
    std::function<BigInt(std::uint64_t)> g;
    Polynomial q;
    Sandwich sandwich = Sandwich::strict;
};

struct LabeledInput {
    std::string x;
    bool member = false;
};

struct CheckEntry {
    std::string x;
    bool member = false;
    BigInt value;
    bool pass = false;
    std::string reason;
};

struct CheckReport {
    std::vector<CheckEntry> entries;

    bool pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
    std::size_t violations() const {
        std::size_t n = 0;
        for (const auto& e : entries) n += e.pass ? 0 : 1;
        return n;
    }
};

inline CheckReport check_pp(const ClassCertificate& cert, const std::vector<LabeledInput>& inputs) {
    CheckReport report;
    for (const auto& in : inputs) {
        CheckEntry e{in.x, in.member, gap_of(cert.f, in.x), false, {}};
        if (e.value == 0)
            e.reason = "gap is zero";
        else if (in.member != (e.value > 0))
            e.reason = in.member ? "member with negative gap" : "non-member with positive gap";
        else
            e.pass = true;
        report.entries.push_back(std::move(e));
    }
    return report;
}

inline CheckReport check_lwpp(const ClassCertificate& cert, const std::vector<LabeledInput>& inputs) {
    CheckReport report;
    for (const auto& in : inputs) {
        const BigInt g = cert.g(in.x.size());
        CheckEntry e{in.x, in.member, gap_of(cert.f, in.x), false, {}};
        if (g <= 0)
            e.reason = "g(|x|) is not positive";
        else if (in.member && e.value != g)
            e.reason = "member gap " + e.value.str() + " differs from g = " + g.str();
        else if (!in.member && e.value != 0)
            e.reason = "non-member gap " + e.value.str() + " is not zero";
        else
            e.pass = true;
        report.entries.push_back(std::move(e));
    }
    return report;
}

/// Checks the AWPP conditions at padding length m with integer comparisons:
/// member: f * 2^q >= (2^q - 1) * g; non-member: f * 2^q <= g; plus the outer
/// bound on f selected by the certificate's sandwich mode.
inline CheckReport check_awpp(const ClassCertificate& cert, const std::vector<LabeledInput>& inputs,
                              std::uint64_t m) {
    CheckReport report;
    const BigInt g = cert.g(m);
    const BigInt two_q = pow2(cert.q(m));
    for (const auto& in : inputs) {
        CheckEntry e{in.x, in.member, 0, false, {}};
        if (m < in.x.size()) {
            e.reason = "padding length below |x|";
            report.entries.push_back(std::move(e));
            continue;
        }
        e.value = gap_of(cert.f, pad_input(in.x, m));
        const BigInt& f = e.value;
        const bool outer_ok = cert.sandwich == Sandwich::strict ? (f > 0 && f < g) : (f >= 0 && f <= g);
        if (g <= 0)
            e.reason = "g(m) is not positive";
        else if (!outer_ok)
            e.reason = cert.sandwich == Sandwich::strict ? "f outside (0, g)" : "f outside [0, g]";
        else if (in.member && f * two_q < (two_q - 1) * g)
            e.reason = "member below (1 - 2^-q) g";
        else if (!in.member && f * two_q > g)
            e.reason = "non-member above 2^-q g";
        else
            e.pass = true;
        report.entries.push_back(std::move(e));
    }
    return report;
}

/// x is in the language exactly when the gap is zero.
inline CheckReport check_ceqp(const GapMachine& m, const std::vector<LabeledInput>& inputs) {
    CheckReport report;
    for (const auto& in : inputs) {
        CheckEntry e{in.x, in.member, gap_of(m, in.x), false, {}};
        e.pass = (e.value == 0) == in.member;
        if (!e.pass) e.reason = in.member ? "member with nonzero gap" : "non-member with zero gap";
        report.entries.push_back(std::move(e));
    }
    return report;
}

/// Same, read off exact acceptance probabilities (padding m = |x|); the
/// reported value is the probability numerator.
inline CheckReport check_ceqp(const MachineFamily& family, const std::vector<LabeledInput>& inputs) {
    CheckReport report;
    for (const auto& in : inputs) {
        const auto p = accept_probability(family.instantiate(in.x, in.x.size()));
        CheckEntry e{in.x, in.member, p.numerator, false, {}};
        e.pass = p.is_zero() == in.member;
        if (!e.pass) e.reason = in.member ? "member with nonzero probability" : "non-member with zero probability";
        report.entries.push_back(std::move(e));
    }
    return report;
}

/// Certificate with f = acceptance gap of family(x, m) and g(m) = 5^(2t(m)).
/// The family's amplified promise is checked on every labeled input and every
/// padding |x| <= m <= max_m; the first failure is thrown as a witness.
inline ClassCertificate bqp_to_awpp(const MachineFamily& family, const Polynomial& q,
                                    const std::vector<LabeledInput>& universe, std::uint64_t max_m) {
    for (const auto& in : universe) {
        for (std::uint64_t m = in.x.size(); m <= max_m; ++m) {
            const auto p = accept_probability(family.instantiate(in.x, m));
            const BigInt two_q = pow2(q(m));
            const BigInt den = p.denominator();
            const bool ok = in.member ? p.numerator * two_q >= (two_q - 1) * den : p.numerator * two_q <= den;
            if (!ok)
                throw PromiseViolation("error exceeds 2^-q(m)", "x=\"" + in.x + "\" m=" + std::to_string(m) +
                                                                    " member=" + (in.member ? "1" : "0") +
                                                                    " probability=" + describe_probability(p));
        }
    }
    const auto t_poly = family.t_poly;
    return {ClassKind::awpp, family_to_gap_machine(family),
            [t_poly](std::uint64_t m) { return pow5(2 * t_poly(m)); }, q, Sandwich::inclusive};
}

/// Certificate with f(x) = acceptance gap of family(x, |x|) and g(n) = 5^(2t(n)).
/// Refuses any input whose acceptance probability is strictly between 0 and 1.
inline ClassCertificate eqp_to_lwpp(const MachineFamily& family, const std::vector<LabeledInput>& universe) {
    for (const auto& in : universe) {
        const auto p = accept_probability(family.instantiate(in.x, in.x.size()));
        if (!p.is_zero() && !p.is_one())
            throw PromiseViolation("acceptance probability is neither 0 nor 1",
                                   "x=\"" + in.x + "\" probability=" + describe_probability(p));
    }
    const auto t_poly = family.t_poly;
    GapMachine f{[family](const std::string& x) { return acceptance_tree(family.instantiate(x, x.size())); }};
    return {ClassKind::lwpp, std::move(f), [t_poly](std::uint64_t n) { return pow5(2 * t_poly(n)); }, {},
            Sandwich::strict};
}

} // namespace gapsim
