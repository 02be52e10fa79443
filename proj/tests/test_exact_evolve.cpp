#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <random>

#include "gapsim/exact_evolve.hpp"
#include "gapsim/families.hpp"

using namespace gapsim;
namespace F = gapsim::families;

namespace {

std::vector<BigInt> big(std::initializer_list<long long> v) {
    std::vector<BigInt> out;
    for (auto x : v) out.emplace_back(x);
    return out;
}

std::vector<UnitarySystem> corpus_systems() {
    std::vector<UnitarySystem> out;
    for (const auto& e : std::filesystem::directory_iterator(std::filesystem::path(GAPSIM_CORPUS_DIR) / "machines"))
        out.push_back(build_system_from_file(e.path()));
    return out;
}

// Dense V^t e_start with plain loops, as a reference for evolve.
std::vector<BigInt> dense_power_column(const UnitarySystem& s, std::uint64_t t) {
    const std::size_t n = s.n_configs();
    std::vector<BigInt> a(n, 0);
    a[s.start()] = 1;
    for (std::uint64_t step = 0; step < t; ++step) {
        std::vector<BigInt> next(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) next[i] += BigInt(s.matrix().at(i, j)) * a[j];
        a = std::move(next);
    }
    return a;
}

} // namespace

TEST(Evolve, RotationOneStep) {
    const auto a = evolve(F::rotation(2), 1);
    EXPECT_EQ(a.entries, big({3, 4}));
    EXPECT_EQ(a.steps, 1U);
}

TEST(Evolve, RotationTwoStepsIsScaledIdentity) {
    const auto a = evolve(F::rotation(2), 2);
    EXPECT_EQ(a.entries, big({25, 0}));
    EXPECT_EQ(a.steps, 2U);
}

TEST(Evolve, ZeroStepsIsUnitVectorAtStart) {
    const auto s = F::identity(4, 3, 2, 0);
    const auto a = evolve(s, 0);
    EXPECT_EQ(a.entries, big({0, 0, 1, 0}));
    EXPECT_EQ(a.steps, 0U);
}

TEST(Evolve, BeyondRunningTimeIsBoundsError) { EXPECT_THROW(evolve(F::rotation(1), 2), BoundsError); }

TEST(Evolve, MatchesDenseReferenceOnCorpus) {
    for (const auto& s : corpus_systems())
        for (std::uint64_t t = 0; t <= s.t_bound(); ++t) EXPECT_EQ(evolve(s, t).entries, dense_power_column(s, t));
}

TEST(Evolve, NormConservedAtEveryStep) {
    std::mt19937_64 rng(3);
    auto systems = corpus_systems();
    for (int i = 0; i < 20; ++i) systems.push_back(F::random_system(2 + i * 3, 10, rng));
    for (const auto& s : systems) {
        std::uint64_t seen = 0;
        evolve(s, s.t_bound(), [&](const AmplitudeVector& a) {
            EXPECT_EQ(a.squared_norm(), pow5(2 * a.steps));
            ++seen;
        });
        EXPECT_EQ(seen, s.t_bound() + 1);
    }
}

TEST(AcceptProbability, RotationSixteenOverTwentyFive) {
    const auto p = accept_probability(F::rotation(1));
    EXPECT_EQ(p.numerator, 16);
    EXPECT_EQ(p.log5_denominator, 2U);
    EXPECT_EQ(p.as_fraction(), Fraction(16, 25));
}

TEST(AcceptProbability, RotationTwoStepsIsZero) {
    const auto p = accept_probability(F::rotation(2));
    EXPECT_TRUE(p.is_zero());
    EXPECT_EQ(p.log5_denominator, 4U);
}

TEST(AcceptProbability, DeterministicIdentityIsOneUnreduced) {
    const auto p = accept_probability(F::identity(1, 3));
    EXPECT_EQ(p.numerator, 15625);
    EXPECT_EQ(p.denominator(), 15625);
    EXPECT_TRUE(p.is_one());
}

TEST(PathSum, RotationTwoStepsTargetZero) {
    const auto a = path_sum(F::rotation(2), 2);
    EXPECT_EQ(a.entries[0], 25);  // 3*3 + 4*4
    EXPECT_EQ(a.entries[1], 0);   // 3*4 + 4*(-3)
}

TEST(PathSum, ZeroAndOneStep) {
    const auto s = F::rotation(1);
    EXPECT_EQ(path_sum(s, 0).entries, big({1, 0}));
    EXPECT_EQ(path_sum(s, 1).entries, big({3, 4}));
}

TEST(PathSum, AgreesWithEvolveOnCorpus) {
    for (const auto& s : corpus_systems())
        for (std::uint64_t t = 0; t <= s.t_bound(); ++t) EXPECT_EQ(path_sum(s, t).entries, evolve(s, t).entries);
}

TEST(PathSum, CapExceededIsResourceError) {
    EXPECT_THROW(path_sum(F::rotation(2), 2, 1), ResourceError);
    EXPECT_NO_THROW(path_sum(F::rotation(2), 2, 4));
}

TEST(PathSum, EnvironmentOverridesCap) {
    ::setenv("GAPSIM_MAX_PATHS", "3", 1);
    EXPECT_EQ(default_path_cap(), 3U);
    EXPECT_THROW(path_sum(F::rotation(3), 3), ResourceError);  // 8 paths
    ::setenv("GAPSIM_MAX_PATHS", "junk", 1);
    EXPECT_EQ(default_path_cap(), kDefaultPathCap);
    ::unsetenv("GAPSIM_MAX_PATHS");
    EXPECT_EQ(default_path_cap(), kDefaultPathCap);
}

TEST(FloatCheck, Examples) {
    EXPECT_NEAR(float_check(F::rotation(1)), 0.64, 1e-12);
    EXPECT_NEAR(float_check(F::identity(2, 5)), 1.0, 1e-12);
    EXPECT_NEAR(float_check(F::rotation(2)), 0.0, 1e-12);
}

TEST(FloatCheck, AgreesWithExactOnCorpus) {
    for (const auto& s : corpus_systems())
        EXPECT_NEAR(float_check(s), accept_probability(s).to_double(), 1e-9);
}

TEST(ClassifyBqp, SixteenTwentyFifthsIsPromiseViolation) {
    const auto report = classify_bqp(F::rotation_family(), {"0"}, [](const std::string&) { return true; });
    ASSERT_EQ(report.entries.size(), 1U);
    EXPECT_EQ(report.entries[0].verdict, BqpVerdict::promise_violation);  // 48/75 < 50/75
    EXPECT_FALSE(report.all_consistent());
}

TEST(ClassifyBqp, ExtremeProbabilitiesAreConsistent) {
    std::vector<std::string> inputs;
    for (const auto& x : strings_up_to(4)) inputs.push_back(x);
    const auto report =
        classify_bqp(F::zero_error_family(), inputs, [](const std::string& x) { return F::even_ones(x); });
    EXPECT_TRUE(report.all_consistent());
    for (const auto& e : report.entries)
        EXPECT_EQ(e.verdict, e.in_language ? BqpVerdict::accept : BqpVerdict::reject);
}

TEST(ClassifyBqp, ExactThresholds) {
    // amplified family at m = |x| >= 2 has error at most 1/4
    std::vector<std::string> inputs{"00", "01", "110", "1011"};
    const auto report =
        classify_bqp(F::amplified_family(), inputs, [](const std::string& x) { return F::even_ones(x); });
    EXPECT_TRUE(report.all_consistent());
}
