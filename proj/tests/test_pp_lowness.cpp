#include <gtest/gtest.h>

#include "gapsim/families.hpp"
#include "gapsim/pp_lowness.hpp"

using namespace gapsim;
namespace F = gapsim::families;

namespace {

OracleTreePtr yes_leaf() { return OracleNode::leaf(true); }
OracleTreePtr no_leaf() { return OracleNode::leaf(false); }
OracleTreePtr ask(const std::string& y) { return OracleNode::query(y, yes_leaf(), no_leaf()); }

const std::set<std::string> kOracle{"0", "11", "010"};

LownessInstance fixed(OracleTreePtr tree, std::size_t k, std::uint64_t q, std::uint64_t slack = 1) {
    return {{[tree](const std::string&) { return tree; }, k},
            kOracle,
            indicator_certificate(kOracle, Polynomial::constant(q), slack),
            Polynomial::constant(q)};
}

// The inlined gap computed on values: a query node on y contributes
// f(y) * E(yes) + (g - f(y)) * E(no).
BigInt value_level_inline(const LownessInstance& inst, const std::string& x) {
    const BigInt g = inst.approximator.g(x.size());
    std::function<BigInt(const OracleNode*)> eval = [&](const OracleNode* n) -> BigInt {
        switch (n->kind()) {
        case OracleNode::Kind::accept: return 1;
        case OracleNode::Kind::reject: return -1;
        case OracleNode::Kind::query: {
            const BigInt f = gap_of(inst.approximator.f, pad_input(n->query_string(), x.size()));
            return f * eval(n->yes().get()) + (g - f) * eval(n->no().get());
        }
        case OracleNode::Kind::branch: break;
        }
        BigInt total = 0;
        for (const auto& c : n->children()) total += eval(c.get());
        return total;
    };
    return eval(inst.machine.tree(x).get());
}

} // namespace

TEST(TrueGap, SingleQueryMemberAndNonMember) {
    EXPECT_EQ(true_gap(fixed(ask("0"), 1, 3), "000"), 1);
    EXPECT_EQ(true_gap(fixed(ask("1"), 1, 3), "000"), -1);
}

TEST(TrueGap, NoQueriesIndependentOfOracle) {
    auto inst = fixed(OracleNode::branch({yes_leaf(), no_leaf(), no_leaf()}), 0, 4);
    EXPECT_EQ(true_gap(inst, "01"), -1);
    inst.oracle = {};
    EXPECT_EQ(true_gap(inst, "01"), -1);
}

TEST(OracleGapMachine, UnequalQueryCountsAreNormalizationError) {
    const auto inst = fixed(OracleNode::branch({ask("0"), yes_leaf()}), 1, 3);
    EXPECT_THROW(true_gap(inst, "000"), NormalizationError);
    const auto wrong_k = fixed(ask("0"), 2, 3);
    EXPECT_THROW(inst.machine.tree("0"), NormalizationError);
    EXPECT_THROW(verify_sign_preservation(wrong_k, {"000"}), NormalizationError);
}

TEST(OracleGapMachine, PathCountIncludesBothAnswers) {
    EXPECT_EQ(oracle_path_count(ask("0")), 2);
    EXPECT_EQ(oracle_path_count(OracleNode::query("0", ask("1"), ask("11"))), 4);
    EXPECT_EQ(oracle_path_count(OracleNode::branch({yes_leaf(), yes_leaf(), no_leaf()})), 3);
}

TEST(InlineConstruction, NoQueriesIsStructurallyUnchanged) {
    const auto t = TreeNode::branch({TreeNode::accept_leaf(), TreeNode::branch({TreeNode::reject_leaf(),
                                                                                TreeNode::accept_leaf()})});
    const auto inst = fixed(OracleNode::from_tree(t), 0, 4);
    EXPECT_TRUE(trees_equal(inline_tree(inst, "0"), t));
}

TEST(InlineConstruction, ExactApproximatorSingleQuery) {
    for (const auto* y : {"0", "1"}) {
        const auto inst = fixed(ask(y), 1, 3, 0);
        const auto report = verify_sign_preservation(inst, {"000", "0101"});
        EXPECT_TRUE(report.all_preserved());
        for (const auto& e : report.entries) EXPECT_EQ(e.inlined_gap, e.scale * e.true_gap);
    }
}

TEST(InlineConstruction, TwoPathOneQuery) {
    const auto inst = fixed(OracleNode::branch({ask("11"), OracleNode::query("1", no_leaf(), yes_leaf())}), 1, 5);
    const auto report = verify_sign_preservation(inst, {"000", "1111"});
    EXPECT_TRUE(report.invariants_hold());
    EXPECT_TRUE(report.all_preserved());
}

TEST(InlineConstruction, MatchesValueLevelEvaluation) {
    for (const auto& nl : F::lowness_instances())
        for (const auto& x : nl.inputs)
            EXPECT_EQ(gap_of(inline_construction(nl.instance), x), value_level_inline(nl.instance, x)) << nl.name;
    for (const auto& nl : F::adversarial_lowness_instances())
        for (const auto& x : nl.inputs)
            EXPECT_EQ(gap_of(inline_construction(nl.instance), x), value_level_inline(nl.instance, x)) << nl.name;
}

TEST(InlineConstruction, ConsumableByGapCheckers) {
    const auto inst = fixed(ask("11"), 1, 3);
    const auto m = inline_construction(inst);
    const ClassCertificate cert{ClassKind::pp, m, [](std::uint64_t) { return BigInt(1); }, {}, Sandwich::strict};
    EXPECT_TRUE(check_pp(cert, {{"00", true}, {"101", true}}).pass());
}

TEST(VerifySignPreservation, ValidInstanceCorpus) {
    const auto instances = F::lowness_instances();
    ASSERT_GE(instances.size(), 10U);
    for (const auto& nl : instances) {
        const auto report = verify_sign_preservation(nl.instance, nl.inputs);
        EXPECT_TRUE(report.invariants_hold()) << nl.name;
        EXPECT_TRUE(report.all_preserved()) << nl.name;
        for (const auto& e : report.entries) EXPECT_LE(e.error_mass, e.error_bound) << nl.name << " x=" << e.x;
    }
}

TEST(VerifySignPreservation, AdversarialCorpusFlips) {
    std::size_t flips = 0;
    for (const auto& nl : F::adversarial_lowness_instances()) {
        const auto report = verify_sign_preservation(nl.instance, nl.inputs);
        EXPECT_FALSE(report.entries.front().path_bound_ok) << nl.name;
        flips += report.sign_flips();
    }
    EXPECT_GE(flips, 1U);
}

TEST(VerifySignPreservation, LargeGapPassesTrivially) {
    // both answers lead to gap 3, so any approximator error leaves the sign alone
    const auto three = OracleNode::branch({yes_leaf(), yes_leaf(), yes_leaf()});
    const auto report = verify_sign_preservation(fixed(OracleNode::query("1", three, three), 1, 2), {"00"});
    EXPECT_TRUE(report.all_preserved());
    EXPECT_EQ(report.entries.front().true_gap, 3);
}

TEST(IndicatorCertificate, MeetsItsOwnPromise) {
    const auto cert = indicator_certificate(kOracle, Polynomial{3, 1});
    std::vector<LabeledInput> universe;
    for (const auto& y : strings_up_to(3)) universe.push_back({y, kOracle.contains(y)});
    for (std::uint64_t m = 3; m <= 6; ++m) EXPECT_TRUE(check_awpp(cert, universe, m).pass()) << m;
}
