#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "gapsim/families.hpp"
#include "gapsim/io.hpp"

using namespace gapsim;
namespace F = gapsim::families;
using nlohmann::json;

namespace {

const std::filesystem::path kCorpus(GAPSIM_CORPUS_DIR);

json load(const std::filesystem::path& p) { return parse_json_text(read_text_file(p)); }

json reparse(const nlohmann::ordered_json& j) { return json::parse(j.dump()); }

} // namespace

TEST(Tree, RoundTrip) {
    const auto a = TreeNode::accept_leaf();
    const auto r = TreeNode::reject_leaf();
    const auto t = TreeNode::branch({a, TreeNode::branch({r, r, a}), r});
    EXPECT_TRUE(trees_equal(io::read_tree(reparse(io::write_tree(t))), t));
    EXPECT_EQ(io::write_tree(t).dump(), R"(["a",["r","r","a"],"r"])");
}

TEST(Tree, ParseErrors) {
    EXPECT_THROW(io::read_tree(json::parse(R"("x")")), ParseError);
    EXPECT_THROW(io::read_tree(json::parse("[]")), ParseError);
    EXPECT_THROW(io::read_tree(json::parse("3")), ParseError);
}

TEST(GapFile, CorpusExpectedGaps) {
    std::size_t checked = 0;
    for (const auto& e : std::filesystem::directory_iterator(kCorpus / "gap")) {
        const auto j = load(e.path());
        const auto m = io::read_gap_file(e.path());
        if (j.contains("expected_gap")) {
            EXPECT_EQ(gap_of(m, ""), BigInt(j.at("expected_gap").get<long long>())) << e.path();
        } else {
            const auto s = build_system_from_file(e.path().parent_path() / j.at("system").get<std::string>());
            EXPECT_EQ(gap_of(m, ""), accept_probability(s).numerator) << e.path();
        }
        ++checked;
    }
    EXPECT_GE(checked, 8U);
}

TEST(OracleSystem, RoundTripAllShipped) {
    for (const auto& ns : F::bbbv_systems())
        EXPECT_EQ(io::read_oracle_system(reparse(io::write_oracle_system(ns.system))), ns.system) << ns.name;
    for (const auto& fam : F::decider_families())
        for (const auto& x : strings_up_to(2))
            EXPECT_EQ(io::read_oracle_system(reparse(io::write_oracle_system(fam.build(x)))), fam.build(x)) << fam.name;
}

TEST(OracleSystem, ParseErrors) {
    auto j = reparse(io::write_oracle_system(F::single_query_system("01", 3)));
    auto bad = j;
    bad["slots"] = json::array({json::array({0, 0, 1})});
    EXPECT_THROW(io::read_oracle_system(bad), ParseError);
    bad = j;
    bad["slots"] = json::array({json::array({5, 0, 1, "01"})});
    EXPECT_THROW(io::read_oracle_system(bad), ParseError);
    bad = j;
    bad.erase("universe");
    EXPECT_THROW(io::read_oracle_system(bad), ParseError);
    bad = j;
    bad["p"] = json::array({-1});
    EXPECT_THROW(io::read_oracle_system(bad), ParseError);
    bad = j;
    bad["slots"] = json::array({json::array({0, 0, 1, "0a"})});
    EXPECT_THROW(io::read_oracle_system(bad), ParseError);
}

TEST(Assignment, RoundTripAndOnes) {
    const auto a = OracleAssignment::with_ones(3, {"", "01", "111"});
    EXPECT_EQ(io::read_assignment(reparse(io::write_assignment(a))), a);
    EXPECT_EQ(io::read_assignment(json::parse(R"({"universe": 3, "ones": ["", "01", "111"]})")), a);
    EXPECT_EQ(a.bits(), "100010000000001");
}

TEST(Assignment, ParseErrors) {
    EXPECT_THROW(io::read_assignment(json::parse(R"({"universe": 1, "bits": "01"})")), ParseError);
    EXPECT_THROW(io::read_assignment(json::parse(R"({"universe": 1, "bits": "012"})")), ParseError);
    EXPECT_THROW(io::read_assignment(json::parse(R"({"universe": 1, "ones": ["00"]})")), ParseError);
    EXPECT_THROW(io::read_assignment(json::parse(R"({"bits": "0"})")), ParseError);
}

TEST(Condition, RoundTrip) {
    const auto c = F::decider_condition(13, F::long_probe("01", 1));
    const auto back = io::read_condition(reparse(io::write_condition(c)));
    EXPECT_EQ(back.domain_lengths(), c.domain_lengths());
    EXPECT_EQ(back.chosen(), c.chosen());
}

TEST(Condition, ParseAndDomainErrors) {
    EXPECT_THROW(io::read_condition(json::parse(R"({"lengths": [2], "chosen": {"two": "01"}})")), ParseError);
    EXPECT_THROW(io::read_condition(json::parse(R"({"lengths": [2], "chosen": []})")), ParseError);
    EXPECT_THROW(io::read_condition(json::parse(R"({"lengths": [2], "chosen": {}})")), DomainError);
    EXPECT_THROW(io::read_condition(json::parse(R"({"lengths": [2, 3], "chosen": {"2": "01", "3": "011"}})")),
                 DomainError);
}

TEST(OracleTree, RoundTrip) {
    const auto t = F::adversarial_tree("11", "00");
    const auto j = io::write_oracle_tree(t);
    EXPECT_EQ(io::write_oracle_tree(io::read_oracle_tree(reparse(j))).dump(), j.dump());
    EXPECT_THROW(io::read_oracle_tree(json::parse(R"({"query": "1", "yes": "a"})")), ParseError);
}

TEST(LownessBundle, CorpusMatchesExpectation) {
    std::size_t bundles = 0;
    for (const auto& e : std::filesystem::directory_iterator(kCorpus / "lowness")) {
        const auto j = load(e.path());
        const auto bundle = io::read_lowness_bundle(j);
        const auto report = verify_sign_preservation(bundle.instance, bundle.inputs);
        if (j.at("expect_flip").get<bool>())
            EXPECT_GE(report.sign_flips(), 1U) << e.path();
        else
            EXPECT_TRUE(report.invariants_hold() && report.all_preserved()) << e.path();
        ++bundles;
    }
    EXPECT_GE(bundles, 10U);
}

TEST(LownessBundle, CertificateTypeChecked) {
    auto j = load(kCorpus / "lowness" / "single-member.json");
    j["certificate"]["type"] = "bqp";
    EXPECT_THROW(io::read_lowness_bundle(j), ParseError);
}

TEST(Corpus, RegenerationIsByteIdentical) {
    const auto fresh = std::filesystem::temp_directory_path() / "gapsim_corpus_check";
    std::filesystem::remove_all(fresh);
    const auto cmd = std::string(GAPSIM_MAKE_CORPUS_PATH) + " " + fresh.string();
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    std::size_t compared = 0;
    for (const auto& e : std::filesystem::recursive_directory_iterator(fresh)) {
        if (!e.is_regular_file()) continue;
        const auto rel = std::filesystem::relative(e.path(), fresh);
        EXPECT_EQ(read_text_file(e.path()), read_text_file(kCorpus / rel)) << rel;
        ++compared;
    }
    EXPECT_GE(compared, 80U);
    std::filesystem::remove_all(fresh);
}
