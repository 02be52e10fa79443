// Regenerates the shipped corpus deterministically.
//
//   make_corpus OUTPUT_DIR

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "gapsim/families.hpp"
#include "gapsim/io.hpp"

namespace fs = std::filesystem;
using namespace gapsim;
using nlohmann::ordered_json;

namespace {

void write(const fs::path& path, const ordered_json& j) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << j.dump(2) << "\n";
}

void machines(const fs::path& dir) {
    write(dir / "rotation.json", to_json(families::rotation(1)));
    write(dir / "rotation_t2.json", to_json(families::rotation(2)));
    write(dir / "identity_t3.json", to_json(families::identity(1, 3)));
    write(dir / "identity_reject.json", to_json(families::identity(3, 4, 0, 2)));
    write(dir / "swap_accept.json", to_json(families::swap(1, 1)));
    write(dir / "swap_t2.json", to_json(families::swap(2, 1)));
    write(dir / "amplified_m3_member.json", to_json(families::amplified_family().instantiate("00", 3)));
    write(dir / "amplified_m2_nonmember.json", to_json(families::amplified_family().instantiate("1", 2)));
    write(dir / "interference_zero_d3.json", to_json(families::interference_zero(3)));
    write(dir / "interference_zero_d5.json", to_json(families::interference_zero(5)));

    std::mt19937_64 rng(71);
    std::uniform_int_distribution<std::size_t> size(2, 64);
    std::uniform_int_distribution<std::uint64_t> steps(1, 10);
    for (int i = 0; i < 20; ++i) {
        const auto n = i == 0 ? 64 : size(rng);
        const auto t = i == 1 ? 10 : steps(rng);
        char name[32];
        std::snprintf(name, sizeof name, "random_%02d.json", i);
        write(dir / name, to_json(families::random_system(n, t, rng)));
    }
}

void gap_files(const fs::path& dir) {
    auto tree = [](const TreePtr& t, long long expected) {
        ordered_json j;
        j["tree"] = io::write_tree(t);
        j["expected_gap"] = expected;
        return j;
    };
    const auto a = TreeNode::accept_leaf();
    const auto r = TreeNode::reject_leaf();
    write(dir / "three_accept_one_reject.json", tree(TreeNode::branch({a, a, r, a}), 2));
    write(dir / "all_reject.json", tree(TreeNode::branch({r, r, r, r}), -4));
    write(dir / "single_accept.json", tree(a, 1));
    write(dir / "nested.json", tree(TreeNode::branch({TreeNode::branch({a, r}), TreeNode::branch({a, a, a}), r}), 2));
    for (const auto* name : {"rotation", "rotation_t2", "identity_t3", "amplified_m3_member"}) {
        ordered_json j;
        j["system"] = std::string("../machines/") + name + ".json";
        write(dir / (std::string("system_") + name + ".json"), j);
    }
}

void oracle_files(const fs::path& dir) {
    ordered_json cases = ordered_json::array();
    const std::vector<std::set<std::string>> oracles{{}, {"01", "1"}, {"", "00", "11", "110"}, {"0", "10", "111"}};
    for (const auto& ns : families::bbbv_systems()) {
        write(dir / "systems" / (ns.name + ".json"), io::write_oracle_system(ns.system));
        for (std::size_t i = 0; i < oracles.size(); ++i) {
            ordered_json c;
            c["system"] = "systems/" + ns.name + ".json";
            c["assignment"] = "assignments/oracle_" + std::to_string(i) + ".json";
            c["input"] = ns.input;
            cases.push_back(std::move(c));
        }
    }
    for (std::size_t i = 0; i < oracles.size(); ++i)
        write(dir / "assignments" / ("oracle_" + std::to_string(i) + ".json"),
              io::write_assignment(OracleAssignment::with_ones(3, oracles[i])));
    write(dir / "cases.json", cases);
}

void decider_files(const fs::path& dir) {
    ordered_json cases = ordered_json::array();
    const std::vector<std::string> inputs{"", "1", "01", "110"};
    for (const auto& fam : families::decider_families()) {
        for (const auto& x : inputs) {
            const auto name = fam.name + "_" + (x.empty() ? std::string("e") : x);
            write(dir / "systems" / (name + ".json"), io::write_oracle_system(fam.build(x)));
            ordered_json c;
            c["system"] = "systems/" + name + ".json";
            c["condition"] = "conditions/condition_" + std::to_string(x.size()) + ".json";
            c["input"] = x;
            cases.push_back(std::move(c));
        }
    }
    for (std::size_t i = 0; i < 4; ++i)
        write(dir / "conditions" / ("condition_" + std::to_string(i) + ".json"),
              io::write_condition(families::decider_condition(5 * i + 3, families::long_probe("1", i % 2))));
    write(dir / "cases.json", cases);
}

void lowness_files(const fs::path& dir) {
    auto emit = [&](const families::NamedLowness& nl, bool expect_flip) {
        const auto& inst = nl.instance;
        const auto tree = inst.machine.tree(nl.inputs.front());
        auto j = io::write_lowness_bundle(tree, inst.machine.queries_per_path, inst.oracle, inst.approximator.q, 1,
                                          inst.q, nl.inputs);
        j["expect_flip"] = expect_flip;
        write(dir / (nl.name + ".json"), j);
    };
    for (const auto& nl : families::lowness_instances())
        if (nl.name != "input-dependent" && nl.name != "bqp-approximator") emit(nl, false);
    for (const auto& nl : families::adversarial_lowness_instances()) emit(nl, true);
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_corpus OUTPUT_DIR\n";
        return 2;
    }
    const fs::path root = argv[1];
    machines(root / "machines");
    gap_files(root / "gap");
    oracle_files(root / "bbbv");
    decider_files(root / "decider");
    lowness_files(root / "lowness");
    return 0;
}
