#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kCorpus(GAPSIM_CORPUS_DIR);

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const auto cmd = env + " " + std::string(GAPSIM_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string corpus(const std::string& rel) { return (kCorpus / rel).string(); }

fs::path temp_file(const std::string& name, const std::string& text) {
    const auto p = fs::temp_directory_path() / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

} // namespace

TEST(Cli, SimulateRotation) {
    const auto r = run("simulate " + corpus("machines/rotation.json"));
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["command"], "simulate");
    EXPECT_EQ(j["results"]["probability"]["numerator"], "16");
    EXPECT_EQ(j["results"]["probability"]["log5_denominator"], 2);
    EXPECT_EQ(j["inputs"][0]["sha256"].get<std::string>().size(), 64U);
    for (const auto& [k, v] : j["pass_fail"].items()) EXPECT_TRUE(v.get<bool>()) << k;
}

TEST(Cli, SimulateIdentityUnreduced) {
    const auto j = json::parse(run("simulate " + corpus("machines/identity_t3.json")).out);
    EXPECT_EQ(j["results"]["probability"]["numerator"], "15625");
    EXPECT_EQ(j["results"]["probability"]["denominator"], "15625");
}

TEST(Cli, ReportKeyOrderIsFixed) {
    const auto out = run("simulate " + corpus("machines/rotation.json")).out;
    const auto c = out.find("\"command\"");
    const auto i = out.find("\"inputs\"");
    const auto r = out.find("\"results\"");
    const auto p = out.find("\"pass_fail\"");
    EXPECT_LT(c, i);
    EXPECT_LT(i, r);
    EXPECT_LT(r, p);
}

TEST(Cli, MalformedJsonIsExitTwo) {
    const auto bad = temp_file("gapsim_bad.json", "{\"n_configs\": 2,");
    EXPECT_EQ(run("simulate " + bad.string()).code, 2);
    const auto nonunitary = temp_file(
        "gapsim_nonunitary.json",
        R"({"n_configs": 2, "entries": [[0,0,3],[0,1,4],[1,0,4],[1,1,3]], "start": 0, "accept": 1, "t": 1})");
    EXPECT_EQ(run("simulate " + nonunitary.string()).code, 2);
    EXPECT_EQ(run("simulate /nonexistent/file.json").code, 2);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("verify foo").code, 2);
    EXPECT_EQ(run("no-such-command").code, 2);
    EXPECT_EQ(run("simulate").code, 2);
    EXPECT_EQ(run("--epsilon 1/5 verify bbbv").code, 2);
    EXPECT_EQ(run("--epsilon seven verify bbbv").code, 2);
}

TEST(Cli, ConfigurationLimit) {
    EXPECT_EQ(run("--max-configs 8 simulate " + corpus("machines/random_00.json")).code, 2);
}

TEST(Cli, PathCapFromEnvironment) {
    EXPECT_EQ(run("simulate " + corpus("machines/rotation_t2.json"), "GAPSIM_MAX_PATHS=1").code, 2);
    EXPECT_EQ(run("simulate " + corpus("machines/rotation_t2.json"), "GAPSIM_MAX_PATHS=100").code, 0);
}

TEST(Cli, ByteIdenticalReports) {
    for (const auto* args : {"simulate machines/random_03.json", "lowness lowness/adaptive-two.json",
                             "bbbv bbbv/systems/superposed-query.json bbbv/assignments/oracle_2.json"}) {
        std::string a = args;
        const auto space = a.find(' ');
        a = a.substr(0, space + 1) + corpus(a.substr(space + 1));
        for (std::size_t pos = a.find(" bbbv/"); pos != std::string::npos; pos = a.find(" bbbv/"))
            a.replace(pos + 1, 0, kCorpus.string() + "/");
        const auto first = run(a);
        const auto second = run(a);
        EXPECT_EQ(first.code, 0) << a;
        EXPECT_EQ(first.out, second.out) << a;
    }
}

TEST(Cli, JsonOutMatchesStdout) {
    const auto path = fs::temp_directory_path() / "gapsim_report.json";
    fs::remove(path);
    const auto r = run("--json-out " + path.string() + " simulate " + corpus("machines/rotation.json"));
    ASSERT_EQ(r.code, 0);
    std::ifstream in(path, std::ios::binary);
    const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(written, r.out);
}

TEST(Cli, GapEvalExpectedGap) {
    const auto r = run("gap-eval " + corpus("gap/nested.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out)["results"]["values"][0]["gap"], "2");
    EXPECT_EQ(json::parse(run("gap-eval " + corpus("gap/system_rotation.json")).out)["results"]["values"][0]["gap"],
              "16");
}

TEST(Cli, AwppRotationRefusedWithWitness) {
    const auto r = run("awpp-cert " + corpus("machines/rotation.json") + " --member 1 --q 2");
    EXPECT_EQ(r.code, 1);
    const auto j = json::parse(r.out);
    EXPECT_FALSE(j["pass_fail"]["awpp.certificate_issued"].get<bool>());
    EXPECT_NE(j["results"]["awpp"]["witness"].get<std::string>().find("16/5^2"), std::string::npos);
}

TEST(Cli, AwppAmplifiedFamily) {
    const auto r = run("awpp-cert --family amplified --q 0,1 --max-m 8 --max-length 3");
    EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, LwppRefusesRotation) {
    EXPECT_EQ(run("lwpp-cert --family rotation").code, 1);
    EXPECT_EQ(run("lwpp-cert --family zero-error").code, 0);
}

TEST(Cli, LownessAdversarialBundleShowsFlip) {
    EXPECT_EQ(run("lowness " + corpus("lowness/single-member.json")).code, 0);
    // the bundle is marked expect_flip, so the check is that a flip shows up
    const auto r = run("lowness " + corpus("lowness/undersized-q1.json"));
    EXPECT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j["pass_fail"]["undersized-q1.flip_exhibited"].get<bool>()) << r.out;
    EXPECT_GE(j["results"]["undersized-q1"]["sign_flips"].get<int>(), 1);
}

TEST(Cli, RerelativizeCase) {
    const auto r = run("rerelativize " + corpus("decider/systems/mixed-length_01.json") + " " +
                       corpus("decider/conditions/condition_2.json") + " --input 01");
    EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, VerifySuitesPass) {
    for (const auto* suite : {"unitarity", "gaplem", "closure", "awpp", "lwpp", "lowness", "bbbv", "rerelativize"}) {
        const auto r = run(std::string("verify ") + suite);
        EXPECT_EQ(r.code, 0) << suite;
        EXPECT_EQ(json::parse(r.out)["command"], std::string("verify ") + suite);
    }
}
