#pragma once

// Oracle-dependent unitary systems.
//
// A step of an oracle system first applies the query operator and then V.
// The query operator is a signed permutation fixed by the oracle: a slot
// (c, p, y) with p != c swaps configurations c and p when y is in the oracle
// (p carries the mirrored slot), and a slot with p == c flips the sign of c.
// For every oracle the induced step matrix V * Q is again a scaled unitary.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gapsim/errors.hpp"
#include "gapsim/exact_evolve.hpp"
#include "gapsim/numeric.hpp"
#include "gapsim/qtm_model.hpp"
#include "gapsim/strings.hpp"

namespace gapsim {

template <class O>
concept OracleView = requires(const O& o, const std::string& s) {
    { o.lookup(s) } -> std::same_as<std::optional<bool>>;
};

/// Total 0/1 assignment on every string of length <= universe_length.
class OracleAssignment {
public:
    explicit OracleAssignment(std::size_t universe_length) : universe_length_(universe_length) {
        if (universe_length > 20) throw ResourceError("oracle universe too large to tabulate");
        bits_.assign((std::size_t{2} << universe_length) - 1, false);
    }

    static OracleAssignment with_ones(std::size_t universe_length, const std::set<std::string>& ones) {
        OracleAssignment a(universe_length);
        for (const auto& y : ones) a.set(y, true);
        return a;
    }

    /// Bit string in index order ("" first, then "0", "1", "00", ...).
    static OracleAssignment from_bits(std::size_t universe_length, std::string_view bits) {
        OracleAssignment a(universe_length);
        if (bits.size() != a.bits_.size())
            throw ParseError("bit map has " + std::to_string(bits.size()) + " entries, universe has " +
                             std::to_string(a.bits_.size()));
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] != '0' && bits[i] != '1') throw ParseError("bit map must consist of 0 and 1");
            a.bits_[i] = bits[i] == '1';
        }
        return a;
    }

    std::optional<bool> lookup(const std::string& y) const {
        if (y.size() > universe_length_) return std::nullopt;
        return static_cast<bool>(bits_[index(y)]);
    }

    void set(const std::string& y, bool value) {
        if (y.size() > universe_length_) throw OracleError("string \"" + y + "\" outside the oracle universe");
        bits_[index(y)] = value;
    }

    OracleAssignment flipped(const std::string& y) const {
        OracleAssignment copy = *this;
        copy.set(y, !*lookup(y));
        return copy;
    }

    std::size_t universe_length() const { return universe_length_; }
    std::vector<std::string> universe() const { return strings_up_to(universe_length_); }

    std::string bits() const {
        std::string out;
        for (bool b : bits_) out.push_back(b ? '1' : '0');
        return out;
    }

    friend bool operator==(const OracleAssignment&, const OracleAssignment&) = default;

private:
    static std::size_t index(const std::string& y) { return static_cast<std::size_t>(string_index(y)); }

    std::size_t universe_length_;
    std::vector<bool> bits_;
};

/// Oracle given by its finite set of ones; defined (as 0) everywhere else.
struct SetOracle {
    std::set<std::string> ones;

    std::optional<bool> lookup(const std::string& y) const { return ones.contains(y); }
};

// ---------------------------------------------------------------------------
// Tower function and UP-intersect-coUP conditions

/// tower(0) = 2, tower(n+1) = 2^tower(n).
inline BigInt tower(std::uint64_t n) {
    if (n > 4) throw ResourceError("tower(" + std::to_string(n) + ") is beyond the big-integer budget");
    BigInt v = 2;
    for (std::uint64_t i = 0; i < n; ++i) v = pow2(static_cast<std::uint64_t>(v));
    return v;
}

/// Lengths in the range of tower: 2, 4, 16, 65536, ...
inline bool is_acceptable_length(std::uint64_t len) {
    std::uint64_t v = 2;
    while (v < len) {
        if (v >= 64) return false;
        v = std::uint64_t{1} << v;
    }
    return v == len;
}

/// Finite partial assignment that is 0 off acceptable lengths and has exactly
/// one 1 at each acceptable length of its domain. The domain is a set of whole
/// lengths; the chosen string per acceptable length is stored, not the block.
class TowerCondition {
public:
    static TowerCondition create(std::set<std::size_t> domain_lengths, std::map<std::size_t, std::string> chosen) {
        for (const auto& [len, y] : chosen) {
            require_binary(y);
            if (y.size() != len) throw DomainError("chosen string \"" + y + "\" filed under length " + std::to_string(len));
            if (!domain_lengths.contains(len)) throw DomainError("chosen length " + std::to_string(len) + " outside the domain");
            if (!is_acceptable_length(len))
                throw DomainError("length " + std::to_string(len) + " is not acceptable but holds a string");
        }
        for (auto len : domain_lengths)
            if (is_acceptable_length(len) && !chosen.contains(len))
                throw DomainError("acceptable length " + std::to_string(len) + " has no string");
        return TowerCondition(std::move(domain_lengths), std::move(chosen));
    }

    /// Validates an explicit partial assignment: domain closed by length,
    /// zeros off acceptable lengths, exactly one 1 per acceptable length.
    static TowerCondition from_assignment(const std::map<std::string, bool>& assignment) {
        std::map<std::size_t, std::size_t> defined_per_length;
        std::map<std::size_t, std::vector<std::string>> ones;
        for (const auto& [y, bit] : assignment) {
            require_binary(y);
            ++defined_per_length[y.size()];
            if (bit) ones[y.size()].push_back(y);
        }
        std::set<std::size_t> domain;
        std::map<std::size_t, std::string> chosen;
        for (const auto& [len, count] : defined_per_length) {
            if (len >= 32 || count != (std::size_t{1} << len))
                throw DomainError("condition defines only part of length " + std::to_string(len));
            domain.insert(len);
            const auto& here = ones[len];
            if (!is_acceptable_length(len)) {
                if (!here.empty()) throw DomainError("length " + std::to_string(len) + " is not acceptable but holds a 1");
                continue;
            }
            if (here.size() != 1)
                throw DomainError("acceptable length " + std::to_string(len) + " holds " + std::to_string(here.size()) +
                                  " strings, needs exactly one");
            chosen[len] = here.front();
        }
        return TowerCondition(std::move(domain), std::move(chosen));
    }

    std::optional<bool> lookup(const std::string& y) const {
        if (!domain_.contains(y.size())) return std::nullopt;
        auto it = chosen_.find(y.size());
        return it != chosen_.end() && it->second == y;
    }

    bool defines_length(std::size_t len) const { return domain_.contains(len); }
    const std::set<std::size_t>& domain_lengths() const { return domain_; }
    const std::map<std::size_t, std::string>& chosen() const { return chosen_; }

    TowerCondition with_choice(std::size_t len, std::string y) const {
        auto next = chosen_;
        next[len] = std::move(y);
        return create(domain_, std::move(next));
    }

private:
    TowerCondition(std::set<std::size_t> domain, std::map<std::size_t, std::string> chosen)
        : domain_(std::move(domain)), chosen_(std::move(chosen)) {}

    std::set<std::size_t> domain_;
    std::map<std::size_t, std::string> chosen_;
};

/// 0^n is in L^X iff some x of length n-1 has x0 in X.
template <OracleView O>
bool l_member(const O& oracle, std::size_t n) {
    if (n == 0) return false;
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << (n - 1)); ++r) {
        const auto probe = string_of_rank(r, n - 1) + "0";
        const auto bit = oracle.lookup(probe);
        if (!bit) throw DomainError("oracle undefined at length " + std::to_string(n));
        if (*bit) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Oracle query systems

struct QuerySlot {
    std::size_t config;
    std::size_t partner;
    std::string query;

    friend bool operator==(const QuerySlot&, const QuerySlot&) = default;
};

class OracleQuerySystem {
public:
    /// `slots[s]` lists the queries made at step s (missing steps make none).
    static OracleQuerySystem create(UnitarySystem base, std::vector<std::vector<QuerySlot>> slots, Polynomial p,
                                    std::size_t universe_length) {
        if (slots.size() > base.t_bound()) throw ModelError("more query steps than running time");
        slots.resize(base.t_bound());
        for (std::size_t s = 0; s < slots.size(); ++s) {
            std::map<std::size_t, const QuerySlot*> by_config;
            for (const auto& slot : slots[s]) {
                require_binary(slot.query);
                if (slot.config >= base.n_configs() || slot.partner >= base.n_configs())
                    throw StructuralError("query slot configuration out of range at step " + std::to_string(s));
                if (slot.query.size() > universe_length)
                    throw ModelError("query \"" + slot.query + "\" longer than the oracle universe");
                if (!by_config.emplace(slot.config, &slot).second)
                    throw ModelError("configuration " + std::to_string(slot.config) + " queries twice at step " +
                                     std::to_string(s));
            }
            for (const auto& [c, slot] : by_config) {
                if (slot->partner == c) continue;
                auto it = by_config.find(slot->partner);
                if (it == by_config.end() || it->second->partner != c || it->second->query != slot->query)
                    throw ModelError("query slot of configuration " + std::to_string(c) +
                                     " has no mirrored partner slot at step " + std::to_string(s));
            }
        }
        return OracleQuerySystem(std::move(base), std::move(slots), std::move(p), universe_length);
    }

    /// Oracle-independent system: no queries at all.
    static OracleQuerySystem without_queries(UnitarySystem base, Polynomial p, std::size_t universe_length) {
        return create(std::move(base), {}, std::move(p), universe_length);
    }

    const UnitarySystem& base() const { return base_; }
    std::uint64_t steps() const { return base_.t_bound(); }
    const std::vector<QuerySlot>& slots(std::size_t step) const { return slots_.at(step); }
    const std::vector<std::vector<QuerySlot>>& all_slots() const { return slots_; }
    const Polynomial& p() const { return p_; }
    std::size_t universe_length() const { return universe_length_; }

    std::set<std::string> queried_strings() const {
        std::set<std::string> out;
        for (const auto& step : slots_)
            for (const auto& slot : step) out.insert(slot.query);
        return out;
    }

    /// The step matrix V * Q(oracle) at one step, for inspection.
    template <OracleView O>
    SparseIntMatrix induced_matrix(std::size_t step, const O& oracle) const {
        // column c of V*Q is +-column perm(c) of V
        std::vector<MatrixEntry> entries;
        const auto& v = base_.matrix();
        std::vector<std::pair<std::size_t, long long>> image(base_.n_configs());
        for (std::size_t c = 0; c < image.size(); ++c) image[c] = {c, 1};
        for (const auto& slot : slots_.at(step)) {
            const auto bit = oracle.lookup(slot.query);
            if (!bit) throw OracleError("oracle undefined on \"" + slot.query + "\"");
            if (!*bit) continue;
            image[slot.config] = slot.partner == slot.config ? std::make_pair(slot.config, -1LL)
                                                             : std::make_pair(slot.partner, 1LL);
        }
        for (std::size_t c = 0; c < image.size(); ++c)
            for (const auto& e : v.column(image[c].first)) entries.push_back({e.row, c, e.value * image[c].second});
        return SparseIntMatrix(v.rows(), v.cols(), std::move(entries));
    }

    friend bool operator==(const OracleQuerySystem&, const OracleQuerySystem&) = default;

private:
    OracleQuerySystem(UnitarySystem base, std::vector<std::vector<QuerySlot>> slots, Polynomial p, std::size_t u)
        : base_(std::move(base)), slots_(std::move(slots)), p_(std::move(p)), universe_length_(u) {}

    UnitarySystem base_;
    std::vector<std::vector<QuerySlot>> slots_;
    Polynomial p_;
    std::size_t universe_length_;
};

/// Final scaled amplitudes and, optionally, per-string query magnitudes
/// sum_s (amplitude at querying configurations)^2 kept as numerators over 25^t.
template <class Int>
struct RelativizedRun {
    std::vector<Int> state;
    std::map<std::string, BigInt> magnitude;
};

template <class Int, OracleView O>
RelativizedRun<Int> run_relativized(const OracleQuerySystem& system, const O& oracle, bool track_magnitudes) {
    const auto& base = system.base();
    const auto t = system.steps();
    RelativizedRun<Int> run;
    run.state.assign(base.n_configs(), Int(0));
    run.state[base.start()] = 1;
    for (std::uint64_t s = 0; s < t; ++s) {
        const auto& slots = system.slots(s);
        if (!slots.empty()) {
            if (track_magnitudes) {
                const BigInt rescale = pow5(2 * (t - s));
                for (const auto& slot : slots) {
                    const BigInt a(run.state[slot.config]);
                    auto& m = run.magnitude[slot.query];
                    m += a * a * rescale;
                }
            }
            // Swaps read from the pre-query state so mirrored slots do not interfere.
            const std::vector<Int> before = run.state;
            for (const auto& slot : slots) {
                const auto bit = oracle.lookup(slot.query);
                if (!bit) throw OracleError("oracle undefined on queried string \"" + slot.query + "\"");
                if (!*bit) continue;
                if (slot.partner == slot.config)
                    run.state[slot.config] = -before[slot.config];
                else
                    run.state[slot.partner] = before[slot.config];
            }
        }
        run.state = apply_transition<Int>(base.matrix(), run.state);
    }
    return run;
}

/// Largest running time whose scaled amplitudes stay inside 64-bit range.
inline constexpr std::uint64_t kInt64StepLimit = 13;

template <OracleView O>
ExactProbability acceptance_prob_rel(const OracleQuerySystem& system, const O& oracle, const std::string& x) {
    if (system.steps() > system.p()(x.size()))
        throw BoundsError("system runs " + std::to_string(system.steps()) + " steps, over p(|x|) = " +
                          std::to_string(system.p()(x.size())));
    const auto accept = system.base().accept();
    ExactProbability p{0, 2 * system.steps()};
    if (system.steps() <= kInt64StepLimit) {
        const auto run = run_relativized<long long>(system, oracle, false);
        const BigInt amp = run.state[accept];
        p.numerator = amp * amp;
    } else {
        const auto run = run_relativized<BigInt>(system, oracle, false);
        p.numerator = run.state[accept] * run.state[accept];
    }
    return p;
}

// ---------------------------------------------------------------------------
// Sensitive sets

/// epsilon in (0, 1/6) and running-time bound p; `bound` = ceil(4 p^2 / eps^2).
class SensitivityParams {
public:
    static SensitivityParams create(Fraction epsilon, std::uint64_t p) {
        if (!(epsilon > Fraction(0, 1)) || !(epsilon < Fraction(1, 6)))
            throw DomainError("epsilon must lie strictly between 0 and 1/6, got " + epsilon.str());
        if (p == 0) throw DomainError("running-time bound p must be positive");
        const BigInt num = 4 * BigInt(p) * BigInt(p) * epsilon.den * epsilon.den;
        const BigInt den = epsilon.num * epsilon.num;
        return SensitivityParams(std::move(epsilon), p, (num + den - 1) / den);
    }

    const Fraction& epsilon() const { return epsilon_; }
    std::uint64_t p() const { return p_; }
    const BigInt& bound() const { return bound_; }

    /// magnitude / 25^t > eps^2 / (4 p^2)
    bool above_threshold(const BigInt& magnitude_numerator, std::uint64_t t) const {
        return magnitude_numerator * epsilon_.den * epsilon_.den * 4 * BigInt(p_) * BigInt(p_) >
               epsilon_.num * epsilon_.num * pow5(2 * t);
    }

private:
    SensitivityParams(Fraction e, std::uint64_t p, BigInt bound) : epsilon_(std::move(e)), p_(p), bound_(std::move(bound)) {}

    Fraction epsilon_;
    std::uint64_t p_;
    BigInt bound_;
};

/// Strings whose total query magnitude over the run exceeds eps^2 / (4 p^2).
template <OracleView O>
std::set<std::string> sensitive_set(const OracleQuerySystem& system, const O& oracle, const std::string& x,
                                    const SensitivityParams& params) {
    if (system.steps() > system.p()(x.size())) throw BoundsError("system runs longer than p(|x|)");
    const auto run = run_relativized<BigInt>(system, oracle, true);
    std::set<std::string> out;
    for (const auto& [y, m] : run.magnitude)
        if (params.above_threshold(m, system.steps())) out.insert(y);
    return out;
}

struct BbbvFlip {
    std::string y;
    bool sensitive = false;
    Fraction deviation;
    bool within_epsilon = false;
};

struct BbbvReport {
    std::set<std::string> sensitive;
    BigInt bound;
    bool size_ok = false;
    ExactProbability base_probability;
    std::vector<BbbvFlip> flips;
    Fraction max_deviation_outside;
    Fraction max_deviation_overall;

    bool pass() const {
        if (!size_ok) return false;
        return std::all_of(flips.begin(), flips.end(), [](const auto& f) { return f.sensitive || f.within_epsilon; });
    }
};

/// Flips every universe string one at a time and compares exact acceptance
/// probabilities against the sensitive set's guarantee.
inline BbbvReport verify_bbbv(const OracleQuerySystem& system, const OracleAssignment& oracle, const std::string& x,
                              const SensitivityParams& params, std::size_t exhaustive_limit = 65536) {
    const auto universe = oracle.universe();
    if (universe.size() > exhaustive_limit)
        throw ResourceError("universe of " + std::to_string(universe.size()) + " strings exceeds the exhaustive limit");
    BbbvReport report;
    report.sensitive = sensitive_set(system, oracle, x, params);
    report.bound = params.bound();
    report.size_ok = BigInt(report.sensitive.size()) <= report.bound;
    report.base_probability = acceptance_prob_rel(system, oracle, x);
    const BigInt den = report.base_probability.denominator();
    for (const auto& y : universe) {
        const auto flipped = acceptance_prob_rel(system, oracle.flipped(y), x);
        BbbvFlip f{y, report.sensitive.contains(y), abs_difference(flipped.numerator, report.base_probability.numerator, den),
                   false};
        f.within_epsilon = f.deviation <= params.epsilon();
        if (f.deviation > report.max_deviation_overall) report.max_deviation_overall = f.deviation;
        if (!f.sensitive && f.deviation > report.max_deviation_outside) report.max_deviation_outside = f.deviation;
        report.flips.push_back(std::move(f));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Categorical machines and the re-relativized decider

/// An oracle system checked to accept with probability >= 2/3 or <= 1/3 under
/// every assignment to the strings it queries. Only certify_categorical makes one.
class CategoricalSystem {
public:
    const OracleQuerySystem& system() const { return system_; }

private:
    explicit CategoricalSystem(OracleQuerySystem s) : system_(std::move(s)) {}
    friend CategoricalSystem certify_categorical(OracleQuerySystem, const std::string&, std::size_t);

    OracleQuerySystem system_;
};

inline std::string describe_oracle(const std::set<std::string>& ones) {
    std::string out = "{";
    for (const auto& y : ones) out += (out.size() > 1 ? ",\"" : "\"") + y + "\"";
    return out + "}";
}

/// Exhaustive over all 2^|Q| assignments of the queried strings Q.
inline CategoricalSystem certify_categorical(OracleQuerySystem system, const std::string& x,
                                             std::size_t max_queried = 20) {
    const auto queried = system.queried_strings();
    if (queried.size() > max_queried)
        throw ResourceError(std::to_string(queried.size()) + " queried strings are too many to check categorically");
    const std::vector<std::string> q(queried.begin(), queried.end());
    const Fraction two_thirds(2, 3);
    const Fraction one_third(1, 3);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << q.size()); ++mask) {
        SetOracle oracle;
        for (std::size_t i = 0; i < q.size(); ++i)
            if ((mask >> i) & 1U) oracle.ones.insert(q[i]);
        const auto p = acceptance_prob_rel(system, oracle, x);
        if (!p.at_least(two_thirds) && !p.at_most(one_third))
            throw CategoricalError("acceptance probability " + describe_probability(p) + " is strictly between 1/3 and 2/3",
                                   describe_oracle(oracle.ones));
    }
    return CategoricalSystem(std::move(system));
}

struct DeciderOptions {
    /// Length l is enumerated exhaustively when 2^l <= short_budget(|x|).
    Polynomial short_budget{16, 16};
};

struct DeciderResult {
    bool accept = false;
    std::vector<std::string> query_log;
    std::vector<std::string> helper_set;
    std::optional<std::size_t> long_length;
    std::optional<std::string> found;
    BigInt probe_budget;
    ExactProbability simulated;
};

/// Deterministic decider relative to a condition G. Reads every string at
/// short acceptable lengths, asks the helper for the sensitive strings at the
/// single long length under the assumption that G is empty there, probes only
/// those, and simulates. Helper answers are cached per short-length knowledge
/// and cost no probes.
class RerelativizedDecider {
public:
    RerelativizedDecider(CategoricalSystem machine, SensitivityParams params, DeciderOptions options = {})
        : machine_(std::move(machine)), params_(std::move(params)), options_(std::move(options)) {}

    DeciderResult decide(const TowerCondition& condition, const std::string& x) {
        const auto& system = machine_.system();
        DeciderResult result;

        std::set<std::size_t> lengths;
        for (const auto& y : system.queried_strings()) lengths.insert(y.size());

        SetOracle known;
        std::vector<std::size_t> long_lengths;
        BigInt short_total = 0;
        auto probe = [&](const std::string& y) {
            const auto bit = condition.lookup(y);
            if (!bit) throw DomainError("condition undefined on \"" + y + "\"");
            result.query_log.push_back(y);
            return *bit;
        };
        for (auto len : lengths) {
            if (!condition.defines_length(len))
                throw DomainError("condition does not fix length " + std::to_string(len));
            if (!is_acceptable_length(len)) continue;
            const bool is_short = len < 63 && (std::uint64_t{1} << len) <= options_.short_budget(x.size());
            if (!is_short) {
                long_lengths.push_back(len);
                continue;
            }
            short_total += pow2(len);
            for (std::uint64_t r = 0; r < (std::uint64_t{1} << len); ++r) {
                auto y = string_of_rank(r, len);
                if (probe(y)) known.ones.insert(std::move(y));
            }
        }
        if (long_lengths.size() > 1) throw DomainError("more than one long acceptable length is queryable");
        result.probe_budget = params_.bound() + short_total;

        if (!long_lengths.empty()) {
            const auto ell = long_lengths.front();
            result.long_length = ell;
            const auto& helper = helper_answer(known, ell, x);
            result.helper_set = helper.sensitive;
            for (const auto& y : helper.sensitive) {
                if (probe(y)) {
                    result.found = y;
                    known.ones.insert(y);
                    break;
                }
            }
            if (!result.found) {
                result.simulated = helper.assume_empty;
                result.accept = helper.assume_empty.at_least(Fraction(2, 3));
                check_budget(result);
                return result;
            }
        }
        result.simulated = acceptance_prob_rel(system, known, x);
        result.accept = result.simulated.at_least(Fraction(2, 3));
        check_budget(result);
        return result;
    }

private:
    struct HelperAnswer {
        std::vector<std::string> sensitive;
        ExactProbability assume_empty;
    };

    const HelperAnswer& helper_answer(const SetOracle& known, std::size_t ell, const std::string& x) {
        auto key = std::make_tuple(known.ones, ell, x);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        HelperAnswer answer;
        for (const auto& y : sensitive_set(machine_.system(), known, x, params_))
            if (y.size() == ell) answer.sensitive.push_back(y);
        answer.assume_empty = acceptance_prob_rel(machine_.system(), known, x);
        return cache_.emplace(std::move(key), std::move(answer)).first->second;
    }

    static void check_budget(const DeciderResult& r) {
        if (BigInt(r.query_log.size()) > r.probe_budget)
            throw ResourceError("decider exceeded its probe budget");
    }

    CategoricalSystem machine_;
    SensitivityParams params_;
    DeciderOptions options_;
    std::map<std::tuple<std::set<std::string>, std::size_t, std::string>, HelperAnswer> cache_;
};

inline DeciderResult decider_N(const CategoricalSystem& machine, const TowerCondition& condition, const std::string& x,
                               const SensitivityParams& params, const DeciderOptions& options = {}) {
    RerelativizedDecider decider(machine, params, options);
    return decider.decide(condition, x);
}

} // namespace gapsim
