// gapsim: exact simulation and verification front end.
//
// Every subcommand prints one canonical JSON report on stdout. Exit status is
// 0 when every check passes, 1 on a verification failure and 2 on usage,
// parse or validation errors.

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gapsim/families.hpp"
#include "gapsim/io.hpp"
#include "gapsim/suites.hpp"

namespace fs = std::filesystem;
using namespace gapsim;
using nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return out.str();
}

ordered_json fraction_json(const Fraction& f) {
    ordered_json j;
    j["num"] = f.num.str();
    j["den"] = f.den.str();
    return j;
}

ordered_json probability_json(const ExactProbability& p) {
    ordered_json j;
    j["numerator"] = p.numerator.str();
    j["log5_denominator"] = p.log5_denominator;
    j["denominator"] = p.denominator().str();
    return j;
}

double twelve_digits(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

class Report {
public:
    explicit Report(std::string command) { j_["command"] = std::move(command); j_["inputs"] = ordered_json::array(); }

    /// Reads a file and records its digest.
    std::string read(const fs::path& path) {
        auto text = read_text_file(path);
        ordered_json in;
        in["path"] = path.lexically_normal().generic_string();
        in["sha256"] = sha256_hex(text);
        j_["inputs"].push_back(std::move(in));
        return text;
    }

    ordered_json& results() { return j_["results"]; }

    void check(const std::string& name, bool ok) {
        j_["pass_fail"][name] = ok;
        all_ &= ok;
    }

    int emit(const std::string& json_out) {
        if (!j_.contains("results")) j_["results"] = ordered_json::object();
        if (!j_.contains("pass_fail")) j_["pass_fail"] = ordered_json::object();
        // fixed key order regardless of insertion order above
        ordered_json out;
        for (const auto* key : {"command", "inputs", "results", "pass_fail"}) out[key] = j_[key];
        const auto text = out.dump(2) + "\n";
        std::cout << text;
        if (!json_out.empty()) {
            std::ofstream f(json_out, std::ios::binary);
            if (!f) throw UsageError("cannot write " + json_out);
            f << text;
        }
        return all_ ? 0 : 1;
    }

private:
    ordered_json j_;
    bool all_ = true;
};

struct Options {
    std::string corpus = GAPSIM_CORPUS_DIR;
    std::string epsilon = "1/7";
    std::size_t max_configs = 4096;
    std::string json_out;
};

ModelLimits limits(const Options& o) { return {o.max_configs}; }

Fraction epsilon_of(const Options& o) {
    try {
        return parse_fraction(o.epsilon);
    } catch (const Error& e) {
        throw UsageError(std::string("bad --epsilon: ") + e.what());
    }
}

std::vector<fs::path> json_files(const fs::path& dir) {
    std::vector<fs::path> out;
    if (!fs::is_directory(dir)) throw UsageError("corpus directory " + dir.string() + " not found");
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".json") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Single-file commands

ordered_json simulate_json(const UnitarySystem& s, const suites::GaplemCheck& c) {
    ordered_json r;
    r["n_configs"] = s.n_configs();
    r["t"] = s.t_bound();
    r["probability"] = probability_json(c.probability);
    r["path_sum_square"] = c.path_sum_square.str();
    r["gap"] = c.gap.str();
    r["float_check"] = twelve_digits(c.float_value);
    return r;
}

int cmd_simulate(const std::string& file, const Options& o) {
    Report report("simulate");
    const auto system = build_system_from_text(report.read(file), limits(o));
    const auto c = suites::gaplem_check(system);
    report.results() = simulate_json(system, c);
    report.check("unitary", true);
    report.check("norm_conserved", c.norm_conserved);
    report.check("path_sum_agrees", c.path_sum_matches);
    report.check("gap_agrees", c.gap_matches);
    report.check("float_agrees", c.float_matches);
    return report.emit(o.json_out);
}

int cmd_gap_eval(const std::string& file, const std::vector<std::string>& inputs, const Options& o) {
    Report report("gap-eval");
    const auto j = parse_json_text(report.read(file));
    const auto machine = io::read_gap_file(file, limits(o));
    auto& values = report.results()["values"] = ordered_json::array();
    for (const auto& x : inputs.empty() ? std::vector<std::string>{""} : inputs) {
        require_binary(x);
        const auto stats = checked_stats(machine, machine.tree(x));
        ordered_json v;
        v["input"] = x;
        v["gap"] = stats.gap().str();
        v["accepting"] = stats.accepting.str();
        v["rejecting"] = stats.rejecting.str();
        if (j.contains("expected_gap")) {
            const BigInt expected = j.at("expected_gap").get<long long>();
            report.check("expected_gap[" + x + "]", stats.gap() == expected);
        }
        values.push_back(std::move(v));
    }
    return report.emit(o.json_out);
}

void closure_into(Report& report, const Options& o, std::size_t max_length) {
    auto machines = families::base_machines();
    for (const auto& path : json_files(fs::path(o.corpus) / "gap")) {
        report.read(path);
        machines.push_back({"corpus:" + path.filename().string(), io::read_gap_file(path, limits(o))});
    }
    auto& rows = report.results()["closure"] = ordered_json::array();
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < machines.size(); ++i) {
        for (const auto& c : suites::closure_check(machines[i], machines[(i + 1) % machines.size()], max_length)) {
            ordered_json r;
            r["machine"] = c.machine;
            r["combinator"] = c.combinator;
            r["inputs"] = c.inputs;
            r["mismatches"] = c.mismatches;
            if (c.mismatches) r["first_mismatch"] = c.first_mismatch;
            mismatches += c.mismatches;
            rows.push_back(std::move(r));
        }
    }
    report.results()["base_machines"] = machines.size();
    report.results()["max_length"] = max_length;
    report.check("closure_sound", mismatches == 0);
}

int cmd_closure(std::size_t max_length, const Options& o) {
    Report report("closure-test");
    closure_into(report, o, max_length);
    return report.emit(o.json_out);
}

MachineFamily family_by_name(const std::string& name) {
    if (name == "zero-error") return families::zero_error_family();
    if (name == "amplified") return families::amplified_family();
    if (name == "rotation") return families::rotation_family();
    throw UsageError("unknown family \"" + name + "\" (zero-error, amplified, rotation)");
}

/// Either a named family (labels: even number of ones) or a machine file used
/// as a constant family with every input labeled `member`.
std::pair<MachineFamily, std::vector<LabeledInput>> family_and_universe(Report& report, const std::string& family,
                                                                        const std::string& file, bool member,
                                                                        std::size_t max_length, const Options& o) {
    if (!file.empty()) {
        auto f = MachineFamily::constant(build_system_from_text(report.read(file), limits(o)));
        return {f, families::labeled_universe(max_length, [member](std::string_view) { return member; })};
    }
    return {family_by_name(family), families::labeled_universe(max_length)};
}

ordered_json check_rows(const CheckReport& r) {
    auto rows = ordered_json::array();
    for (const auto& e : r.entries) {
        ordered_json row;
        row["input"] = e.x;
        row["member"] = e.member;
        row["value"] = e.value.str();
        row["pass"] = e.pass;
        if (!e.pass) row["reason"] = e.reason;
        rows.push_back(std::move(row));
    }
    return rows;
}

void awpp_into(Report& report, const MachineFamily& family, const std::vector<LabeledInput>& universe,
               const Polynomial& q, std::uint64_t max_m, const std::string& prefix) {
    auto& r = report.results()[prefix];
    try {
        const auto cert = bqp_to_awpp(family, q, universe, max_m);
        r["issued"] = true;
        auto& per_m = r["checks"] = ordered_json::array();
        bool all = true;
        for (std::uint64_t m = 0; m <= max_m; ++m) {
            std::vector<LabeledInput> eligible;
            for (const auto& in : universe)
                if (in.x.size() <= m) eligible.push_back(in);
            const auto check = check_awpp(cert, eligible, m);
            ordered_json row;
            row["m"] = m;
            row["g"] = cert.g(m).str();
            row["q"] = cert.q(m);
            row["pass"] = check.pass();
            row["violations"] = check.violations();
            all &= check.pass();
            per_m.push_back(std::move(row));
        }
        report.check(prefix + ".certificate_issued", true);
        report.check(prefix + ".check_awpp", all);
    } catch (const PromiseViolation& e) {
        r["issued"] = false;
        r["refusal"] = e.what();
        r["witness"] = e.witness();
        report.check(prefix + ".certificate_issued", false);
    }
}

int cmd_awpp(const std::string& family, const std::string& file, bool member, const std::string& q_text,
             std::uint64_t max_m, std::size_t max_length, const Options& o) {
    Report report("awpp-cert");
    const auto [f, universe] = family_and_universe(report, family, file, member, max_length, o);
    std::vector<std::uint64_t> coeffs;
    std::stringstream ss(q_text);
    for (std::string part; std::getline(ss, part, ',');) {
        try {
            coeffs.push_back(std::stoull(part));
        } catch (const std::exception&) {
            throw UsageError("bad --q coefficient \"" + part + "\"");
        }
    }
    awpp_into(report, f, universe, Polynomial(coeffs), max_m, "awpp");
    return report.emit(o.json_out);
}

void lwpp_into(Report& report, const MachineFamily& family, const std::vector<LabeledInput>& universe,
               const std::string& prefix) {
    auto& r = report.results()[prefix];
    try {
        const auto cert = eqp_to_lwpp(family, universe);
        const auto check = check_lwpp(cert, universe);
        r["issued"] = true;
        r["entries"] = check_rows(check);
        report.check(prefix + ".certificate_issued", true);
        report.check(prefix + ".check_lwpp", check.pass());
    } catch (const PromiseViolation& e) {
        r["issued"] = false;
        r["refusal"] = e.what();
        r["witness"] = e.witness();
        report.check(prefix + ".certificate_issued", false);
    }
}

int cmd_lwpp(const std::string& family, const std::string& file, bool member, std::size_t max_length,
             const Options& o) {
    Report report("lwpp-cert");
    const auto [f, universe] = family_and_universe(report, family, file, member, max_length, o);
    lwpp_into(report, f, universe, "lwpp");
    return report.emit(o.json_out);
}

ordered_json lowness_json(const LownessReport& r) {
    auto rows = ordered_json::array();
    for (const auto& e : r.entries) {
        ordered_json row;
        row["input"] = e.x;
        row["queries"] = e.queries;
        row["path_count"] = e.path_count.str();
        row["q"] = e.q;
        row["true_gap"] = e.true_gap.str();
        row["inlined_gap"] = e.inlined_gap.str();
        row["scale"] = e.scale.str();
        row["error_mass"] = fraction_json(e.error_mass);
        row["error_bound"] = fraction_json(e.error_bound);
        row["path_bound_ok"] = e.path_bound_ok;
        row["approximator_ok"] = e.approximator_ok;
        row["pp_promise_ok"] = e.pp_promise_ok;
        row["sign_preserved"] = e.sign_preserved;
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Instances meeting the invariants must preserve every sign; instances
/// marked expect_flip must show at least one flip.
void lowness_bundle_into(Report& report, const fs::path& file, const std::string& key) {
    const auto j = parse_json_text(report.read(file));
    const auto bundle = io::read_lowness_bundle(j);
    const auto r = verify_sign_preservation(bundle.instance, bundle.inputs);
    auto& out = report.results()[key];
    out["invariants_hold"] = r.invariants_hold();
    out["sign_flips"] = r.sign_flips();
    out["entries"] = lowness_json(r);
    const bool expect_flip = j.value("expect_flip", false);
    if (expect_flip)
        report.check(key + ".flip_exhibited", r.sign_flips() > 0);
    else {
        report.check(key + ".invariants_hold", r.invariants_hold());
        report.check(key + ".sign_preserved", r.all_preserved());
    }
}

int cmd_lowness(const std::string& file, const Options& o) {
    Report report("lowness");
    lowness_bundle_into(report, file, fs::path(file).stem().string());
    return report.emit(o.json_out);
}

ordered_json bbbv_json(const BbbvReport& r) {
    ordered_json j;
    j["sensitive_set"] = r.sensitive;
    j["bound"] = r.bound.str();
    j["base_probability"] = probability_json(r.base_probability);
    j["max_deviation_outside"] = fraction_json(r.max_deviation_outside);
    j["max_deviation_overall"] = fraction_json(r.max_deviation_overall);
    auto flips = ordered_json::array();
    for (const auto& f : r.flips) {
        ordered_json row;
        row["string"] = f.y;
        row["sensitive"] = f.sensitive;
        row["deviation"] = fraction_json(f.deviation);
        flips.push_back(std::move(row));
    }
    j["flips"] = std::move(flips);
    return j;
}

void bbbv_into(Report& report, const fs::path& system_file, const fs::path& assignment_file, const std::string& x,
               const Fraction& eps, const Options& o, const std::string& key) {
    const auto system = io::read_oracle_system(parse_json_text(report.read(system_file)), limits(o));
    const auto oracle = io::read_assignment(parse_json_text(report.read(assignment_file)));
    require_binary(x);
    const auto params = SensitivityParams::create(eps, system.p()(x.size()));
    const auto r = verify_bbbv(system, oracle, x, params);
    auto j = bbbv_json(r);
    j["input"] = x;
    j["epsilon"] = fraction_json(eps);
    report.results()[key] = std::move(j);
    report.check(key + ".size_bound", r.size_ok);
    report.check(key + ".outside_within_epsilon", r.pass());
}

int cmd_bbbv(const std::string& system, const std::string& assignment, const std::string& x, const Options& o) {
    Report report("bbbv");
    bbbv_into(report, system, assignment, x, epsilon_of(o), o, "bbbv");
    return report.emit(o.json_out);
}

ordered_json decider_json(const DeciderResult& r) {
    ordered_json j;
    j["accept"] = r.accept;
    j["query_log"] = r.query_log;
    j["helper_set"] = r.helper_set;
    j["long_length"] = r.long_length ? ordered_json(*r.long_length) : ordered_json(nullptr);
    j["found"] = r.found ? ordered_json(*r.found) : ordered_json(nullptr);
    j["probe_budget"] = r.probe_budget.str();
    j["simulated"] = probability_json(r.simulated);
    return j;
}

/// Runs the decider on the condition as given, and with --all-placements on
/// every choice of the string at each long length.
void rerelativize_into(Report& report, const fs::path& system_file, const fs::path& condition_file,
                       const std::string& x, const Fraction& eps, bool all_placements, const Options& o,
                       const std::string& key) {
    const auto system = io::read_oracle_system(parse_json_text(report.read(system_file)), limits(o));
    const auto condition = io::read_condition(parse_json_text(report.read(condition_file)));
    require_binary(x);
    const auto params = SensitivityParams::create(eps, system.p()(x.size()));
    auto& out = report.results()[key];
    out["input"] = x;
    try {
        RerelativizedDecider decider(certify_categorical(system, x), params);
        const auto r = decider.decide(condition, x);
        const auto truth = acceptance_prob_rel(system, condition, x);
        out["decision"] = decider_json(r);
        out["exact"] = probability_json(truth);
        report.check(key + ".agrees", r.accept == truth.at_least(Fraction(2, 3)));
        report.check(key + ".within_budget", BigInt(r.query_log.size()) <= r.probe_budget);
        if (all_placements && r.long_length) {
            const auto ell = *r.long_length;
            if (ell > 24) throw UsageError("long length too large to sweep");
            std::size_t disagreements = 0;
            std::size_t max_log = 0;
            for (std::uint64_t rank = 0; rank < (std::uint64_t{1} << ell); ++rank) {
                const auto placed = condition.with_choice(ell, string_of_rank(rank, ell));
                const auto d = decider.decide(placed, x);
                if (d.accept != acceptance_prob_rel(system, placed, x).at_least(Fraction(2, 3))) ++disagreements;
                max_log = std::max(max_log, d.query_log.size());
            }
            out["placements"] = std::uint64_t{1} << ell;
            out["disagreements"] = disagreements;
            out["max_query_log"] = max_log;
            report.check(key + ".all_placements_agree", disagreements == 0);
            report.check(key + ".all_placements_within_budget", BigInt(max_log) <= r.probe_budget);
        }
    } catch (const CategoricalError& e) {
        out["categorical"] = false;
        out["witness"] = e.witness();
        report.check(key + ".categorical", false);
    }
}

int cmd_rerelativize(const std::string& system, const std::string& condition, const std::string& x,
                     bool all_placements, const Options& o) {
    Report report("rerelativize");
    rerelativize_into(report, system, condition, x, epsilon_of(o), all_placements, o, "decider");
    return report.emit(o.json_out);
}

// ---------------------------------------------------------------------------
// verify SUITE

int cmd_verify(const std::string& suite, const Options& o) {
    Report report("verify " + suite);
    const fs::path corpus = o.corpus;
    if (suite == "unitarity" || suite == "gaplem") {
        auto& rows = report.results()["systems"] = ordered_json::array();
        for (const auto& path : json_files(corpus / "machines")) {
            const auto system = build_system_from_text(report.read(path), limits(o));
            const auto name = path.filename().string();
            ordered_json row;
            row["file"] = name;
            if (suite == "unitarity") {
                const auto v = validate_unitary(system.matrix());
                row["n_configs"] = system.n_configs();
                row["unitary"] = v.pass;
                report.check(name, v.pass);
            } else {
                const auto c = suites::gaplem_check(system);
                row["result"] = simulate_json(system, c);
                report.check(name, c.pass());
            }
            rows.push_back(std::move(row));
        }
    } else if (suite == "closure") {
        closure_into(report, o, 6);
    } else if (suite == "awpp") {
        const auto universe = families::labeled_universe(3);
        awpp_into(report, families::zero_error_family(), universe, Polynomial{0, 1}, 8, "zero-error");
        awpp_into(report, families::amplified_family(), universe, Polynomial{0, 1}, 8, "amplified");
        Report probe("probe");
        awpp_into(probe, families::rotation_family(), universe, Polynomial{0, 1}, 8, "rotation");
        report.results()["rotation"] = probe.results()["rotation"];
        report.check("rotation.refused", !probe.results()["rotation"]["issued"].get<bool>());
    } else if (suite == "lwpp") {
        lwpp_into(report, families::zero_error_family(), families::labeled_universe(4), "zero-error");
        for (const auto& path : json_files(corpus / "machines")) {
            const auto system = build_system_from_text(report.read(path), limits(o));
            const auto p = accept_probability(system);
            if (!p.is_zero() && !p.is_one()) continue;
            const bool member = p.is_one();
            lwpp_into(report, MachineFamily::constant(system),
                      families::labeled_universe(3, [member](std::string_view) { return member; }),
                      path.filename().string());
        }
        Report probe("probe");
        lwpp_into(probe, families::rotation_family(), families::labeled_universe(2), "rotation");
        report.results()["rotation"] = probe.results()["rotation"];
        report.check("rotation.refused", !probe.results()["rotation"]["issued"].get<bool>());
    } else if (suite == "lowness") {
        for (const auto& path : json_files(corpus / "lowness")) lowness_bundle_into(report, path, path.stem().string());
    } else if (suite == "bbbv" || suite == "rerelativize") {
        const fs::path dir = corpus / (suite == "bbbv" ? "bbbv" : "decider");
        const auto cases = parse_json_text(report.read(dir / "cases.json"));
        std::size_t i = 0;
        for (const auto& c : cases) {
            const auto key = "case" + std::to_string(i++);
            const auto x = io::read_string(io::field(c, "input"), "input");
            if (suite == "bbbv") {
                for (const auto& eps : {Fraction(1, 7), Fraction(1, 10)})
                    bbbv_into(report, dir / io::field(c, "system").get<std::string>(),
                              dir / io::field(c, "assignment").get<std::string>(), x, eps, o,
                              key + "@" + eps.str());
            } else {
                rerelativize_into(report, dir / io::field(c, "system").get<std::string>(),
                                  dir / io::field(c, "condition").get<std::string>(), x, epsilon_of(o), true, o, key);
            }
        }
    } else {
        throw UsageError("unknown suite \"" + suite +
                         "\" (unitarity, closure, gaplem, awpp, lwpp, lowness, bbbv, rerelativize)");
    }
    return report.emit(o.json_out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact simulator and verifier for fifth-amplitude unitary systems and gap machines"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--corpus", o.corpus, "Corpus directory");
    app.add_option("--epsilon", o.epsilon, "Sensitivity epsilon as NUM/DEN");
    app.add_option("--max-configs", o.max_configs, "Configuration limit");
    app.add_option("--json-out", o.json_out, "Also write the report to this path");

    std::string file;
    std::string second;
    std::string input;
    std::vector<std::string> inputs;
    std::string family = "amplified";
    std::string lwpp_family = "zero-error";
    std::string q_text = "0,1";
    std::string suite;
    bool member = true;
    bool all_placements = false;
    std::uint64_t max_m = 8;
    std::size_t max_length = 3;
    std::size_t closure_length = 6;

    auto* simulate = app.add_subcommand("simulate", "Exact acceptance probability of a machine file");
    simulate->add_option("machine", file)->required();

    auto* gap_eval = app.add_subcommand("gap-eval", "Gap of a gap-machine file");
    gap_eval->add_option("file", file)->required();
    gap_eval->add_option("--input", inputs, "Input strings");

    auto* closure = app.add_subcommand("closure-test", "Combinator soundness over all short strings");
    closure->add_option("--max-length", closure_length, "Longest input string");

    auto* awpp = app.add_subcommand("awpp-cert", "AWPP certificate for a bounded-error family");
    awpp->add_option("machine", file, "Machine file used as a constant family");
    awpp->add_option("--family", family, "zero-error, amplified or rotation");
    awpp->add_option("--member", member, "Label for constant-family inputs");
    awpp->add_option("--q", q_text, "Coefficients of q, lowest first");
    awpp->add_option("--max-m", max_m, "Largest padding length");
    awpp->add_option("--max-length", max_length, "Longest input string");

    auto* lwpp = app.add_subcommand("lwpp-cert", "LWPP certificate for a zero-error family");
    lwpp->add_option("machine", file, "Machine file used as a constant family");
    lwpp->add_option("--family", lwpp_family, "zero-error or rotation");
    lwpp->add_option("--member", member, "Label for constant-family inputs");
    lwpp->add_option("--max-length", max_length, "Longest input string");

    auto* lowness = app.add_subcommand("lowness", "Sign preservation of an inlined lowness bundle");
    lowness->add_option("bundle", file)->required();

    auto* bbbv = app.add_subcommand("bbbv", "Sensitive set and exhaustive single-string flips");
    bbbv->add_option("system", file)->required();
    bbbv->add_option("assignment", second)->required();
    bbbv->add_option("--input", input, "Input string");

    auto* rerel = app.add_subcommand("rerelativize", "Deterministic decider against exact simulation");
    rerel->add_option("system", file)->required();
    rerel->add_option("condition", second)->required();
    rerel->add_option("--input", input, "Input string");
    rerel->add_flag("--all-placements", all_placements, "Sweep every string at the long length");

    auto* verify = app.add_subcommand("verify", "Run a verification suite over the corpus");
    verify->add_option("suite", suite)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        SensitivityParams::create(epsilon_of(o), 1);
        if (simulate->parsed()) return cmd_simulate(file, o);
        if (gap_eval->parsed()) return cmd_gap_eval(file, inputs, o);
        if (closure->parsed()) return cmd_closure(closure_length, o);
        if (awpp->parsed()) return cmd_awpp(family, file, member, q_text, max_m, max_length, o);
        if (lwpp->parsed()) return cmd_lwpp(lwpp_family, file, member, max_length, o);
        if (lowness->parsed()) return cmd_lowness(file, o);
        if (bbbv->parsed()) return cmd_bbbv(file, second, input, o);
        if (rerel->parsed()) return cmd_rerelativize(file, second, input, all_placements, o);
        if (verify->parsed()) return cmd_verify(suite, o);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
