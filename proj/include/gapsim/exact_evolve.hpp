#pragma once

// Exact evolution of scaled amplitude vectors.
//
// After s applications of V the vector holds 5^s times the true amplitudes,
// so every entry is an integer and the squared norm is exactly 25^s. The
// acceptance probability after t steps is beta_accept^2 / 5^(2t), and the
// numerator beta_accept^2 is the counting function the gap machines reproduce.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gapsim/errors.hpp"
#include "gapsim/numeric.hpp"
#include "gapsim/qtm_model.hpp"

namespace gapsim {

struct AmplitudeVector {
    std::vector<BigInt> entries;
    std::uint64_t steps = 0;

    BigInt squared_norm() const {
        BigInt sum = 0;
        for (const auto& e : entries) sum += e * e;
        return sum;
    }
};

/// numerator / 5^log5_denominator, deliberately left unreduced.
struct ExactProbability {
    BigInt numerator{0};
    std::uint64_t log5_denominator = 0;

    BigInt denominator() const { return pow5(log5_denominator); }
    Fraction as_fraction() const { return Fraction(numerator, denominator()); }

    bool is_zero() const { return numerator == 0; }
    bool is_one() const { return numerator == denominator(); }

    bool at_least(const Fraction& bound) const { return as_fraction() >= bound; }
    bool at_most(const Fraction& bound) const { return as_fraction() <= bound; }

    double to_double() const { return static_cast<double>(numerator) / static_cast<double>(denominator()); }
};

inline std::string describe_probability(const ExactProbability& p) {
    return p.numerator.str() + "/5^" + std::to_string(p.log5_denominator);
}

/// One application of V to a scaled vector: out[i] = sum_j V(i,j) in[j].
template <class Int>
std::vector<Int> apply_transition(const SparseIntMatrix& v, std::span<const Int> in) {
    std::vector<Int> out(v.rows(), Int(0));
    for (std::size_t j = 0; j < v.cols(); ++j) {
        if (in[j] == 0) continue;
        for (const auto& e : v.column(j)) out[e.row] += Int(e.value) * in[j];
    }
    return out;
}

inline AmplitudeVector initial_vector(const UnitarySystem& system) {
    AmplitudeVector a;
    a.entries.assign(system.n_configs(), BigInt(0));
    a.entries[system.start()] = 1;
    return a;
}

/// V^t alpha by repeated sparse products. An optional observer sees every
/// intermediate vector, which is how norm conservation is checked per step.
inline AmplitudeVector evolve(const UnitarySystem& system, std::uint64_t t,
                              const std::function<void(const AmplitudeVector&)>& observer = {}) {
    if (t > system.t_bound())
        throw BoundsError("requested " + std::to_string(t) + " steps but the system runs for " +
                          std::to_string(system.t_bound()));
    AmplitudeVector a = initial_vector(system);
    if (observer) observer(a);
    for (std::uint64_t s = 0; s < t; ++s) {
        a.entries = apply_transition<BigInt>(system.matrix(), a.entries);
        a.steps = s + 1;
        if (observer) observer(a);
    }
    return a;
}

inline ExactProbability accept_probability(const UnitarySystem& system) {
    const auto beta = evolve(system, system.t_bound());
    const auto& amp = beta.entries[system.accept()];
    return {amp * amp, 2 * system.t_bound()};
}

inline constexpr std::uint64_t kDefaultPathCap = std::uint64_t{1} << 20;

/// Enumeration cap for path_sum and path-based constructions; GAPSIM_MAX_PATHS overrides.
inline std::uint64_t default_path_cap() {
    if (const char* env = std::getenv("GAPSIM_MAX_PATHS")) {
        char* end = nullptr;
        const auto value = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) return value;
    }
    return kDefaultPathCap;
}

/// Sum over all length-t paths from start of the product of edge weights,
/// one configuration at a time. Independent of evolve: no vector is ever
/// formed, every nonzero-weight path is visited individually.
inline AmplitudeVector path_sum(const UnitarySystem& system, std::uint64_t t,
                                std::uint64_t cap = default_path_cap()) {
    AmplitudeVector result;
    result.entries.assign(system.n_configs(), BigInt(0));
    result.steps = t;

    struct Frame {
        std::size_t config;
        std::uint64_t depth;
        BigInt weight;
    };
    std::vector<Frame> stack{{system.start(), 0, BigInt(1)}};
    std::uint64_t completed = 0;
    const auto& v = system.matrix();
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (f.depth == t) {
            if (++completed > cap)
                throw ResourceError("path enumeration exceeded the cap of " + std::to_string(cap) + " paths");
            result.entries[f.config] += f.weight;
            continue;
        }
        const auto& col = v.column(f.config);
        for (auto it = col.rbegin(); it != col.rend(); ++it)
            stack.push_back({it->row, f.depth + 1, f.weight * it->value});
    }
    return result;
}

/// Double-precision simulation with U = V/5; returns the accept probability.
inline double float_check(const UnitarySystem& system) {
    std::vector<double> a(system.n_configs(), 0.0);
    a[system.start()] = 1.0;
    const auto& v = system.matrix();
    for (std::uint64_t s = 0; s < system.t_bound(); ++s) {
        std::vector<double> next(a.size(), 0.0);
        for (std::size_t j = 0; j < v.cols(); ++j) {
            if (a[j] == 0.0) continue;
            for (const auto& e : v.column(j)) next[e.row] += (static_cast<double>(e.value) / 5.0) * a[j];
        }
        a = std::move(next);
    }
    const double amp = a[system.accept()];
    return amp * amp;
}

enum class BqpVerdict { accept, reject, promise_violation };

inline const char* to_string(BqpVerdict v) {
    switch (v) {
    case BqpVerdict::accept: return "accept";
    case BqpVerdict::reject: return "reject";
    case BqpVerdict::promise_violation: return "promise_violation";
    }
    return "?";
}

struct BqpEntry {
    std::string x;
    ExactProbability probability;
    BqpVerdict verdict;
    bool in_language;
    bool consistent;
};

struct BqpReport {
    std::vector<BqpEntry> entries;

    bool all_consistent() const {
        for (const auto& e : entries)
            if (!e.consistent) return false;
        return true;
    }
};

/// Bounded-error classification with exact thresholds 2/3 and 1/3, using
/// padding m = |x|.
inline BqpReport classify_bqp(const MachineFamily& family, const std::vector<std::string>& inputs,
                              const std::function<bool(const std::string&)>& in_language) {
    const Fraction two_thirds(2, 3);
    const Fraction one_third(1, 3);
    BqpReport report;
    for (const auto& x : inputs) {
        const auto p = accept_probability(family.instantiate(x, x.size()));
        BqpVerdict verdict = BqpVerdict::promise_violation;
        if (p.at_least(two_thirds))
            verdict = BqpVerdict::accept;
        else if (p.at_most(one_third))
            verdict = BqpVerdict::reject;
        const bool member = in_language(x);
        const bool consistent = verdict == (member ? BqpVerdict::accept : BqpVerdict::reject);
        report.entries.push_back({x, p, verdict, member, consistent});
    }
    return report;
}

} // namespace gapsim
