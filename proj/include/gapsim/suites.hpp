#pragma once

// Verification routines shared by the command-line tool and the acceptance run.

#include <cmath>
#include <string>
#include <vector>

#include "gapsim/exact_evolve.hpp"
#include "gapsim/families.hpp"
#include "gapsim/gapp_engine.hpp"

namespace gapsim::suites {

struct GaplemCheck {
    ExactProbability probability;
    BigInt gap;
    BigInt path_sum_square;
    double float_value = 0.0;
    bool norm_conserved = false;
    bool gap_matches = false;
    bool path_sum_matches = false;
    bool float_matches = false;

    bool pass() const { return norm_conserved && gap_matches && path_sum_matches && float_matches; }
};

/// Exact probability against the gap machine, the path enumeration and the
/// double-precision run; norm conservation is checked at every step.
inline GaplemCheck gaplem_check(const UnitarySystem& system, double tolerance = 1e-9) {
    GaplemCheck c;
    bool norm_ok = true;
    evolve(system, system.t_bound(), [&](const AmplitudeVector& a) {
        if (a.squared_norm() != pow5(2 * a.steps)) norm_ok = false;
    });
    c.norm_conserved = norm_ok;
    c.probability = accept_probability(system);
    c.gap = gap_of(system_to_gap_machine(system), "");
    const auto paths = path_sum(system, system.t_bound());
    const auto& beta = paths.entries[system.accept()];
    c.path_sum_square = beta * beta;
    c.float_value = float_check(system);
    c.gap_matches = c.gap == c.probability.numerator;
    c.path_sum_matches = c.path_sum_square == c.probability.numerator;
    c.float_matches = std::abs(c.float_value - c.probability.to_double()) <= tolerance;
    return c;
}

struct ClosureCheck {
    std::string machine;
    std::string combinator;
    std::size_t inputs = 0;
    std::size_t mismatches = 0;
    std::string first_mismatch;
};

/// Every combinator applied to `m` against value arithmetic on gap_of(m) over
/// all strings up to `max_length`. The second machine feeds subtract.
inline std::vector<ClosureCheck> closure_check(const families::NamedMachine& m, const families::NamedMachine& other,
                                               std::size_t max_length) {
    const Polynomial q_sum{0, 1};      // |y| <= |x|
    const Polynomial q_product{0, 1};  // y = 0 .. |x|
    const auto neg = negate(m.machine);
    const auto sum = exp_sum(m.machine, q_sum);
    const auto product = poly_product(m.machine, q_product);
    const auto diff = subtract(m.machine, other.machine);

    std::vector<ClosureCheck> out{{m.name, "negate"}, {m.name, "exp_sum"}, {m.name, "poly_product"},
                                  {m.name, "subtract:" + other.name}};
    auto record = [](ClosureCheck& c, const std::string& x, const BigInt& built, const BigInt& expected) {
        ++c.inputs;
        if (built == expected) return;
        if (c.mismatches++ == 0)
            c.first_mismatch = "x=\"" + x + "\" built=" + built.str() + " expected=" + expected.str();
    };
    for (const auto& x : strings_up_to(max_length)) {
        const BigInt base = gap_of(m.machine, x);
        record(out[0], x, gap_of(neg, x), -base);

        BigInt expected_sum = 0;
        for (const auto& y : strings_up_to(q_sum(x.size()))) expected_sum += gap_of(m.machine, pair_strings(x, y));
        record(out[1], x, gap_of(sum, x), expected_sum);

        BigInt expected_product = 1;
        for (std::uint64_t y = 0; y <= q_product(x.size()); ++y)
            expected_product *= gap_of(m.machine, pair_strings(x, index_string(y)));
        record(out[2], x, gap_of(product, x), expected_product);

        record(out[3], x, gap_of(diff, x), base - gap_of(other.machine, x));
    }
    return out;
}

} // namespace gapsim::suites
