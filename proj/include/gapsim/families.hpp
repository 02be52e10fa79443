#pragma once

// Concrete systems, families and instances shared by the tests, the corpus
// generator and the command-line tool.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gapsim/errors.hpp"
#include "gapsim/exact_evolve.hpp"
#include "gapsim/gap_tree.hpp"
#include "gapsim/gapp_engine.hpp"
#include "gapsim/numeric.hpp"
#include "gapsim/oracle_lab.hpp"
#include "gapsim/pp_lowness.hpp"
#include "gapsim/qtm_model.hpp"
#include "gapsim/strings.hpp"

namespace gapsim::families {

// ---------------------------------------------------------------------------
// Small named systems

/// V = [[3,4],[4,-3]], start 0, accept 1; probability 16/25 at t = 1.
inline UnitarySystem rotation(std::uint64_t t = 1) {
    return UnitarySystem::create(SparseIntMatrix::from_dense({{3, 4}, {4, -3}}), 0, 1, t);
}

inline UnitarySystem identity(std::size_t n, std::uint64_t t, std::size_t start = 0, std::size_t accept = 0) {
    return UnitarySystem::create(SparseIntMatrix::scaled_identity(n, 5), start, accept, t);
}

inline UnitarySystem swap(std::uint64_t t, std::size_t accept) {
    return UnitarySystem::create(SparseIntMatrix::from_dense({{0, 5}, {5, 0}}), 0, accept, t);
}

/// R = [[3,-4],[4,3]] rotates by atan(4/3); its transpose undoes it.
inline SparseIntMatrix rotation_block() { return SparseIntMatrix::from_dense({{3, -4}, {4, 3}}); }
inline SparseIntMatrix rotation_block_inverse() { return SparseIntMatrix::from_dense({{3, 4}, {-4, 3}}); }

/// Operator acting as `op` on bit `bit` of a register of `bits` bits and as
/// the identity elsewhere.
inline SparseIntMatrix on_bit(const SparseIntMatrix& op, std::size_t bit, std::size_t bits) {
    const std::size_t d = std::size_t{1} << bits;
    std::vector<MatrixEntry> out;
    for (std::size_t col = 0; col < d; ++col) {
        const std::size_t b = (col >> bit) & 1U;
        for (const auto& e : op.column(b)) {
            const std::size_t row = (col & ~(std::size_t{1} << bit)) | (e.row << bit);
            out.push_back({row, col, e.value});
        }
    }
    return SparseIntMatrix(d, d, std::move(out));
}

// ---------------------------------------------------------------------------
// Clocked systems: a register of `d` inner states plus a step counter, so a
// single time-independent V applies a different operator at every step.

struct ClockedLayout {
    std::size_t inner = 0;
    std::size_t steps = 0;

    std::size_t config(std::size_t step, std::size_t inner_state) const { return step * inner + inner_state; }
    std::size_t n_configs() const { return (steps + 1) * inner; }
};

inline UnitarySystem clocked_system(const std::vector<SparseIntMatrix>& ops, std::size_t start_inner,
                                    std::size_t accept_inner, const ModelLimits& limits = {}) {
    if (ops.empty()) throw ModelError("a clocked system needs at least one step");
    const std::size_t d = ops.front().rows();
    const ClockedLayout layout{d, ops.size()};
    std::vector<MatrixEntry> entries;
    for (std::size_t s = 0; s < ops.size(); ++s) {
        if (ops[s].rows() != d || ops[s].cols() != d) throw StructuralError("clocked steps must share one dimension");
        for (const auto& e : ops[s].entries())
            entries.push_back({layout.config(s + 1, e.row), layout.config(s, e.col), e.value});
    }
    for (std::size_t i = 0; i < d; ++i) entries.push_back({layout.config(0, i), layout.config(ops.size(), i), 5});
    return UnitarySystem::create(SparseIntMatrix(layout.n_configs(), layout.n_configs(), std::move(entries)),
                                 layout.config(0, start_inner), layout.config(ops.size(), accept_inner), ops.size(),
                                 limits);
}

// ---------------------------------------------------------------------------
// Random fifth-unitary matrices

/// Signed permutation combined with 2x2 blocks built from the 3-4-5 triple.
/// Every column of a valid V has either one entry +-5 or one +-3 and one +-4.
inline SparseIntMatrix random_fifth_unitary(std::size_t n, std::mt19937_64& rng) {
    std::vector<std::size_t> rows(n);
    std::vector<std::size_t> cols(n);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng);
    std::shuffle(cols.begin(), cols.end(), rng);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> pick(0, 2);

    auto sign = [&] { return coin(rng) ? 1LL : -1LL; };
    std::vector<MatrixEntry> entries;
    std::size_t i = 0;
    while (i < n) {
        if (i + 1 < n && pick(rng) != 0) {
            long long a = 3;
            long long b = 4;
            if (coin(rng)) std::swap(a, b);
            const long long r0 = sign();
            const long long r1 = sign();
            const long long c0 = sign();
            const long long c1 = sign();
            // [[a, b], [b, -a]] with independent row and column signs
            entries.push_back({rows[i], cols[i], a * r0 * c0});
            entries.push_back({rows[i], cols[i + 1], b * r0 * c1});
            entries.push_back({rows[i + 1], cols[i], b * r1 * c0});
            entries.push_back({rows[i + 1], cols[i + 1], -a * r1 * c1});
            i += 2;
        } else {
            entries.push_back({rows[i], cols[i], 5 * sign()});
            ++i;
        }
    }
    return SparseIntMatrix(n, n, std::move(entries));
}

/// Random system whose accept configuration is drawn from the support of the
/// final amplitude vector, so the acceptance probability is never trivially 0.
inline UnitarySystem random_system(std::size_t n, std::uint64_t t, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> config(0, n - 1);
    auto v = random_fifth_unitary(n, rng);
    const auto start = config(rng);
    const auto probe = UnitarySystem::create(std::move(v), start, start, t);
    const auto final = evolve(probe, t);
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < n; ++i)
        if (final.entries[i] != 0) support.push_back(i);
    std::uniform_int_distribution<std::size_t> pick(0, support.size() - 1);
    return probe.with_accept(support[pick(rng)]);
}

/// Rotations that are undone again: the amplitude at the other arm cancels
/// exactly, while double arithmetic may leave a residue.
inline UnitarySystem interference_zero(std::size_t depth) {
    std::vector<SparseIntMatrix> ops;
    for (std::size_t i = 0; i < depth; ++i) ops.push_back(rotation_block());
    for (std::size_t i = 0; i < depth; ++i) ops.push_back(rotation_block_inverse());
    return clocked_system(ops, 0, 1);
}

// ---------------------------------------------------------------------------
// Families for the BQP and EQP certificates

/// Membership used by the shipped families: an even number of ones.
inline bool even_ones(std::string_view x) { return std::count(x.begin(), x.end(), '1') % 2 == 0; }

inline std::vector<LabeledInput> labeled_universe(std::size_t max_length,
                                                  const std::function<bool(std::string_view)>& member = even_ones) {
    std::vector<LabeledInput> out;
    for (auto& x : strings_up_to(max_length)) {
        const bool in = member(x);
        out.push_back({std::move(x), in});
    }
    return out;
}

/// Zero error: V swaps two configurations once; members accept the image of
/// start, non-members accept start itself.
inline MachineFamily zero_error_family() {
    return {[](std::string_view x, std::uint64_t) { return swap(1, even_ones(x) ? 1 : 0); }, Polynomial::constant(1)};
}

/// Fewest rotations by R with sin^2(k theta) <= 2^-r, searched up to `limit`.
inline std::optional<std::uint64_t> rotations_for_error(std::uint64_t r, std::uint64_t limit) {
    BigInt a = 1;
    BigInt b = 0;
    const BigInt two_r = pow2(r);
    for (std::uint64_t k = 0; k <= limit; ++k) {
        if (k > 0 && b * b * two_r <= pow5(2 * k)) return k;
        BigInt na = 3 * a - 4 * b;
        BigInt nb = 4 * a + 3 * b;
        a = std::move(na);
        b = std::move(nb);
    }
    return std::nullopt;
}

/// Bounded error with error at most 2^-r(m) at padding m: rotate by R for the
/// fewest k steps that bring the state within 2^-r(m) of its start, then idle
/// until t(m). Members accept the start state, non-members the other one.
inline MachineFamily amplified_family(Polynomial r, Polynomial t) {
    return {[r, t](std::string_view x, std::uint64_t m) {
                const auto steps = t(m);
                const auto k = rotations_for_error(r(m), steps);
                if (!k) throw ModelError("no rotation count within t(m) reaches error 2^-r(m)");
                std::vector<SparseIntMatrix> ops;
                for (std::uint64_t s = 0; s < steps; ++s)
                    ops.push_back(s < *k ? rotation_block() : SparseIntMatrix::scaled_identity(2, 5));
                return clocked_system(ops, 0, even_ones(x) ? 0 : 1);
            },
            t};
}

/// Error 2^-m at padding m, for m up to 8, with t(m) = 3m + 1.
inline MachineFamily amplified_family() { return amplified_family(Polynomial{0, 1}, Polynomial{1, 3}); }

/// Every input accepted with probability 16/25 (members and non-members alike).
inline MachineFamily rotation_family() { return MachineFamily::constant(rotation(1)); }

// ---------------------------------------------------------------------------
// Base gap machines for the closure checks

struct NamedMachine {
    std::string name;
    GapMachine machine;
};

inline TreePtr zero_tree() { return TreeNode::branch({TreeNode::accept_leaf(), TreeNode::reject_leaf()}); }

inline std::vector<NamedMachine> base_machines() {
    std::vector<NamedMachine> out;
    out.push_back({"accept", {[](const std::string&) { return TreeNode::accept_leaf(); }}});
    out.push_back({"zero", {[](const std::string&) { return zero_tree(); }}});
    out.push_back({"parity", {[](const std::string& x) {
                       return TreeNode::leaf(std::count(x.begin(), x.end(), '1') % 2 == 0);
                   }}});
    // one branch per symbol, accepting on 1 and rejecting on 0
    out.push_back({"ones-minus-zeros", {[](const std::string& x) {
                       if (x.empty()) return zero_tree();
                       std::vector<TreePtr> kids;
                       for (char c : x) kids.push_back(TreeNode::leaf(c == '1'));
                       return TreeNode::branch(std::move(kids));
                   }}});
    out.push_back({"length-mod-3", {[](const std::string& x) {
                       return tree_with_gap(BigInt(static_cast<long long>(x.size() % 3)) - 1);
                   }}});
    out.push_back({"first-bit", {[](const std::string& x) {
                       if (x.empty()) return zero_tree();
                       return x.front() == '1' ? tree_with_gap(2) : tree_with_gap(-3);
                   }}});
    out.push_back({"last-two", {[](const std::string& x) {
                       if (x.size() < 2) return TreeNode::accept_leaf();
                       const auto tail = x.substr(x.size() - 2);
                       if (tail == "00") return tree_with_gap(-2);
                       if (tail == "11") return tree_with_gap(3);
                       return tree_with_gap(tail == "01" ? 1 : -1);
                   }}});
    // guesses a position and accepts iff an "01" starts there
    out.push_back({"count-01", {[](const std::string& x) {
                       std::vector<TreePtr> kids{TreeNode::reject_leaf()};
                       for (std::size_t i = 0; i + 1 < x.size(); ++i)
                           if (x[i] == '0' && x[i + 1] == '1') kids.push_back(TreeNode::accept_leaf());
                       return TreeNode::branch(std::move(kids));
                   }}});
    out.push_back({"rotation-squared", system_to_gap_machine(rotation(1))});
    out.push_back({"rotation-by-length", {[](const std::string& x) {
                       return acceptance_tree(rotation(1 + x.size() % 2));
                   }}});
    out.push_back({"alternating-ones", {[](const std::string& x) {
                       std::vector<TreePtr> kids{TreeNode::accept_leaf()};
                       for (std::size_t i = 0; i < x.size(); ++i)
                           if (x[i] == '1') kids.push_back(TreeNode::leaf(i % 2 == 0));
                       return TreeNode::branch(std::move(kids));
                   }}});
    return out;
}

// ---------------------------------------------------------------------------
// Oracle query systems

namespace detail {

inline std::string bits_to_string(std::uint64_t value, std::size_t len) {
    std::string out(len, '0');
    for (std::size_t i = 0; i < len; ++i)
        if ((value >> (len - 1 - i)) & 1U) out[i] = '1';
    return out;
}

/// Query slots of a clocked system at `step`, translated from inner states.
inline std::vector<QuerySlot> at_step(const ClockedLayout& layout, std::size_t step,
                                      const std::vector<QuerySlot>& inner_slots) {
    std::vector<QuerySlot> out;
    for (const auto& s : inner_slots)
        out.push_back({layout.config(step, s.config), layout.config(step, s.partner), s.query});
    return out;
}

/// Classical query: swap the flag bit of every register value.
inline std::vector<QuerySlot> flag_swap(std::size_t d, std::size_t flag_bit, const std::string& y) {
    std::vector<QuerySlot> out;
    for (std::size_t i = 0; i < d; ++i) out.push_back({i, i ^ (std::size_t{1} << flag_bit), y});
    return out;
}

} // namespace detail

struct NamedOracleSystem {
    std::string name;
    OracleQuerySystem system;
    std::string input;
};

/// Builds an oracle system from clocked steps and per-step inner slots.
inline OracleQuerySystem clocked_oracle_system(const std::vector<SparseIntMatrix>& ops,
                                               const std::map<std::size_t, std::vector<QuerySlot>>& inner_slots,
                                               std::size_t start_inner, std::size_t accept_inner, Polynomial p,
                                               std::size_t universe_length) {
    const auto base = clocked_system(ops, start_inner, accept_inner);
    const ClockedLayout layout{ops.front().rows(), ops.size()};
    std::vector<std::vector<QuerySlot>> slots(ops.size());
    for (const auto& [step, list] : inner_slots) slots.at(step) = detail::at_step(layout, step, list);
    return OracleQuerySystem::create(base, std::move(slots), std::move(p), universe_length);
}

/// Reads one oracle bit into a flag and accepts on flag 1.
inline OracleQuerySystem single_query_system(const std::string& y, std::size_t universe_length) {
    const auto id = SparseIntMatrix::scaled_identity(2, 5);
    return clocked_oracle_system({id}, {{0, detail::flag_swap(2, 0, y)}}, 0, 1, Polynomial::constant(1),
                                 universe_length);
}

/// Two address bits put in superposition by two rotations (amplitudes
/// 9,12,12,16 over 25), one flag query per address, then the rotations undone.
/// Inner state: bit 0 flag, bits 1-2 address.
inline OracleQuerySystem superposed_query_system(const std::vector<std::string>& addresses,
                                                 std::size_t universe_length, std::size_t accept_inner = 1) {
    if (addresses.size() != 4) throw DomainError("superposed query system needs four address strings");
    const std::size_t d = 8;
    const std::vector<SparseIntMatrix> ops{on_bit(rotation_block(), 2, 3), on_bit(rotation_block(), 1, 3),
                                           SparseIntMatrix::scaled_identity(d, 5),
                                           on_bit(rotation_block_inverse(), 1, 3),
                                           on_bit(rotation_block_inverse(), 2, 3)};
    std::vector<QuerySlot> query;
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t f = 0; f < 2; ++f) query.push_back({(a << 1) | f, (a << 1) | (f ^ 1U), addresses[a]});
    return clocked_oracle_system(ops, {{2, query}}, 0, accept_inner, Polynomial::constant(5), universe_length);
}

/// Phase query inside an interferometer: R, sign flip on the branch of
/// weight 16/25 when y is set, then R^T. Accepts the start state.
inline OracleQuerySystem phase_query_system(const std::string& y, std::size_t universe_length) {
    return clocked_oracle_system(
        {rotation_block(), SparseIntMatrix::scaled_identity(2, 5), rotation_block_inverse()}, {{1, {{1, 1, y}}}}, 0,
        0, Polynomial::constant(3), universe_length);
}

/// Two classical queries combined by parity on one flag.
inline OracleQuerySystem parity_query_system(const std::string& a, const std::string& b,
                                             std::size_t universe_length) {
    const auto id = SparseIntMatrix::scaled_identity(2, 5);
    return clocked_oracle_system({id, id}, {{0, detail::flag_swap(2, 0, a)}, {1, detail::flag_swap(2, 0, b)}}, 0, 1,
                                 Polynomial{2, 1}, universe_length);
}

/// State 1 leaks 4/5 of its amplitude into a fresh state on each of 11 steps,
/// so the phase query on `faint` sees amplitude (3/5)^11 and falls below the
/// sensitivity threshold while still moving the acceptance probability. The
/// first leaked state queries `loud` and interferes with state 1 at the end.
inline OracleQuerySystem leaky_query_system(const std::string& faint, const std::string& loud,
                                            std::size_t universe_length) {
    constexpr std::size_t leaks = 11;
    const std::size_t d = leaks + 2;
    auto pair_rotation = [d](std::size_t a, std::size_t b) {
        std::vector<MatrixEntry> e;
        for (std::size_t i = 0; i < d; ++i)
            if (i != a && i != b) e.push_back({i, i, 5});
        e.push_back({a, a, 3});
        e.push_back({a, b, -4});
        e.push_back({b, a, 4});
        e.push_back({b, b, 3});
        return SparseIntMatrix(d, d, std::move(e));
    };
    std::vector<SparseIntMatrix> ops;
    for (std::size_t s = 0; s < leaks; ++s) ops.push_back(pair_rotation(1, 2 + s));
    ops.push_back(SparseIntMatrix::scaled_identity(d, 5));
    ops.push_back(pair_rotation(1, 2));
    return clocked_oracle_system(ops, {{leaks, {{1, 1, faint}, {2, 2, loud}}}}, 1, 1,
                                 Polynomial::constant(leaks + 2), universe_length);
}

/// Oracle-independent system for comparison with the unrelativized run.
inline OracleQuerySystem oracle_free_system(std::size_t universe_length) {
    return OracleQuerySystem::without_queries(rotation(1), Polynomial::constant(1), universe_length);
}

/// Clocked system with random inner operators and random query slots on a
/// universe of strings of length <= universe_length.
inline OracleQuerySystem random_query_system(std::mt19937_64& rng, std::size_t universe_length) {
    std::uniform_int_distribution<std::size_t> bits_dist(1, 3);
    std::uniform_int_distribution<std::size_t> steps_dist(2, 5);
    const std::size_t bits = bits_dist(rng);
    const std::size_t d = std::size_t{1} << bits;
    const std::size_t steps = steps_dist(rng);
    const auto universe = strings_up_to(universe_length);
    std::uniform_int_distribution<std::size_t> pick_string(0, universe.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_state(0, d - 1);
    std::uniform_int_distribution<int> coin(0, 1);

    std::vector<SparseIntMatrix> ops;
    std::map<std::size_t, std::vector<QuerySlot>> slots;
    for (std::size_t s = 0; s < steps; ++s) {
        ops.push_back(random_fifth_unitary(d, rng));
        if (s + 1 == steps) break;
        std::set<std::size_t> used;
        const std::size_t n_queries = 1 + pick_state(rng) % 2;
        for (std::size_t k = 0; k < n_queries; ++k) {
            const auto c = pick_state(rng);
            if (used.contains(c)) continue;
            const auto y = universe[pick_string(rng)];
            const std::size_t partner = c ^ 1U;
            if (coin(rng) == 0 || d == 1 || used.contains(partner)) {
                slots[s + 1].push_back({c, c, y});
                used.insert(c);
            } else {
                slots[s + 1].push_back({c, partner, y});
                slots[s + 1].push_back({partner, c, y});
                used.insert(c);
                used.insert(partner);
            }
        }
    }
    return clocked_oracle_system(ops, slots, pick_state(rng), pick_state(rng), Polynomial::constant(steps),
                                 universe_length);
}

/// The shipped query systems on the universe of strings of length <= 3 (15 strings).
inline std::vector<NamedOracleSystem> bbbv_systems() {
    constexpr std::size_t u = 3;
    std::vector<NamedOracleSystem> out;
    out.push_back({"oracle-free", oracle_free_system(u), ""});
    out.push_back({"single-query", single_query_system("01", u), ""});
    out.push_back({"single-query-empty-string", single_query_system("", u), "1"});
    out.push_back({"phase-query", phase_query_system("110", u), "0"});
    out.push_back({"parity-query", parity_query_system("0", "111", u), "10"});
    out.push_back({"superposed-query", superposed_query_system({"00", "01", "10", "11"}, u), ""});
    out.push_back({"superposed-query-mixed", superposed_query_system({"", "1", "010", "111"}, u, 3), "1"});
    out.push_back({"leaky-query", leaky_query_system("011", "10", u), "01"});
    std::mt19937_64 rng(20240611);
    for (int i = 0; i < 5; ++i)
        out.push_back({"random-" + std::to_string(i), random_query_system(rng, u), std::string(i % 3, '0')});
    return out;
}

// ---------------------------------------------------------------------------
// Machines for the re-relativized decider

/// Strings used by the decider machines; each depends on the input.
inline std::string short_probe(const std::string& x, std::size_t len) {
    std::uint64_t v = 0;
    for (char c : x) v = v * 3 + (c == '1' ? 2 : 1);
    return detail::bits_to_string(v % (std::uint64_t{1} << len), len);
}

inline std::string long_probe(const std::string& x, std::size_t variant) {
    std::uint64_t v = 0x9e37;
    for (char c : x) v = (v * 131 + static_cast<unsigned char>(c) + variant * 7) & 0xffffU;
    v ^= variant * 0x5a5aU;
    return detail::bits_to_string(v & 0xffffU, 16);
}

/// Decides membership of 0^2 in L^X by XOR of the two candidate strings, then
/// the same for 0^4 when the input has odd length.
inline OracleQuerySystem l_member_system(const std::string& x) {
    std::vector<std::string> probes{"00", "10"};
    if (x.size() % 2 == 1)
        for (std::uint64_t r = 0; r < 8; ++r) probes.push_back(string_of_rank(r, 3) + "0");
    const auto id = SparseIntMatrix::scaled_identity(2, 5);
    std::vector<SparseIntMatrix> ops(probes.size(), id);
    std::map<std::size_t, std::vector<QuerySlot>> slots;
    for (std::size_t s = 0; s < probes.size(); ++s) slots[s] = detail::flag_swap(2, 0, probes[s]);
    return clocked_oracle_system(ops, slots, 0, 1, Polynomial{12, 1}, 16);
}

/// Classical parity of one string at length 2 and one at length 4, then an
/// interferometer with phase queries at length 16 on both arms. Inner state:
/// bit 0 flag, bit 1 arm. Accepts flag 1 on arm 0.
inline OracleQuerySystem mixed_length_system(const std::string& x) {
    const std::size_t d = 4;
    const auto id = SparseIntMatrix::scaled_identity(d, 5);
    const std::vector<SparseIntMatrix> ops{id, id, on_bit(rotation_block(), 1, 2), id,
                                           on_bit(rotation_block_inverse(), 1, 2)};
    const auto z0 = long_probe(x, 0);
    const auto z1 = long_probe(x, 1);
    std::map<std::size_t, std::vector<QuerySlot>> slots{
        {0, detail::flag_swap(d, 0, short_probe(x, 2))},
        {1, detail::flag_swap(d, 0, short_probe(x, 4))},
        {3, {{0b01, 0b01, z0}, {0b11, 0b11, z1}}},
    };
    return clocked_oracle_system(ops, slots, 0, 0b01, Polynomial{12, 1}, 16);
}

/// Ignores the oracle entirely.
inline OracleQuerySystem oracle_free_decider_system(const std::string& x) {
    return OracleQuerySystem::without_queries(swap(1, x.size() % 2), Polynomial{12, 1}, 16);
}

struct NamedDeciderFamily {
    std::string name;
    std::function<OracleQuerySystem(const std::string&)> build;
};

inline std::vector<NamedDeciderFamily> decider_families() {
    return {{"oracle-free", oracle_free_decider_system},
            {"l-member", l_member_system},
            {"mixed-length", mixed_length_system}};
}

/// Condition on lengths 2, 4 and 16 whose short strings depend on `seed`.
inline TowerCondition decider_condition(std::uint64_t seed, const std::string& long_string) {
    return TowerCondition::create({2, 4, 16}, {{2, detail::bits_to_string(seed % 4, 2)},
                                               {4, detail::bits_to_string((seed / 4) % 16, 4)},
                                               {16, long_string}});
}

// ---------------------------------------------------------------------------
// Lowness instances

struct NamedLowness {
    std::string name;
    LownessInstance instance;
    std::vector<std::string> inputs;
};

namespace detail {

inline OracleTreePtr acc() { return OracleNode::leaf(true); }
inline OracleTreePtr rej() { return OracleNode::leaf(false); }

/// yes -> accept, no -> reject
inline OracleTreePtr ask(const std::string& y) { return OracleNode::query(y, acc(), rej()); }

inline std::vector<std::string> inputs_of_length(std::size_t from, std::size_t to) {
    std::vector<std::string> out;
    for (std::size_t n = from; n <= to; ++n)
        for (auto& s : strings_of_length(n)) out.push_back(std::move(s));
    return out;
}

/// Fixed oracle tree on every input of length >= the longest query.
inline OracleGapMachine fixed_machine(OracleTreePtr tree, std::size_t k) {
    return {[tree](const std::string&) { return tree; }, k};
}

} // namespace detail

/// Three paths asking a member y and two asking a non-member z that reject on
/// both answers: true gap +1, while the inlined gap is g - 6 * slack.
inline OracleTreePtr adversarial_tree(const std::string& y, const std::string& z) {
    using namespace detail;
    const auto both_reject = OracleNode::query(z, rej(), rej());
    return OracleNode::branch({ask(y), ask(y), ask(y), both_reject, both_reject});
}

inline std::vector<NamedLowness> lowness_instances() {
    using namespace detail;
    std::vector<NamedLowness> out;
    const std::set<std::string> a{"0", "11", "010"};
    const auto inputs = inputs_of_length(3, 4);

    auto add = [&](std::string name, OracleTreePtr tree, std::size_t k, std::uint64_t q) {
        out.push_back({std::move(name),
                       {fixed_machine(std::move(tree), k), a, indicator_certificate(a, Polynomial::constant(q)),
                        Polynomial::constant(q)},
                       inputs});
    };

    add("no-queries", OracleNode::branch({acc(), acc(), rej()}), 0, 4);
    add("single-member", ask("0"), 1, 3);
    add("single-non-member", ask("1"), 1, 3);
    add("two-path-one-query", OracleNode::branch({ask("11"), OracleNode::query("1", rej(), acc())}), 1, 5);
    add("adaptive-two", OracleNode::query("0", ask("11"), ask("010")), 2, 5);
    add("adaptive-mixed", OracleNode::query("00", OracleNode::query("11", acc(), rej()), OracleNode::query("010", rej(), rej())),
        2, 5);
    add("majority-three", OracleNode::query("0", OracleNode::query("11", ask("010"), ask("010")),
                                            OracleNode::query("11", ask("010"), OracleNode::query("010", rej(), rej()))),
        3, 7);
    add("wide-branch", OracleNode::branch({ask("0"), ask("1"), ask("11"), ask("00"), ask("010")}), 1, 8);
    add("adversarial-shape", adversarial_tree("11", "00"), 1, 7);
    add("deep-chain", OracleNode::query("0", OracleNode::query("010", ask("11"), ask("1")),
                                        OracleNode::query("1", ask("00"), ask("11"))),
        3, 9);

    // adaptive machine whose queries depend on x: ask the prefix of x and then x itself
    out.push_back({"input-dependent",
                   {adaptive_oracle_machine(
                        2,
                        [](const std::string& x, const std::vector<bool>& answers) {
                            return answers.empty() ? x.substr(0, 1) : x.substr(0, answers.front() ? 2 : 3);
                        },
                        [](const std::string&, const std::vector<bool>& answers) {
                            return TreeNode::leaf(answers[0] == answers[1]);
                        }),
                    a, indicator_certificate(a, Polynomial::constant(5)), Polynomial::constant(5)},
                   inputs});

    // approximator obtained from a bounded-error family via the AWPP certificate
    {
        const std::set<std::string> even{"", "0", "00", "11", "000", "011", "101", "110"};
        const Polynomial r{4, 1};
        const auto family = amplified_family(r, Polynomial{40, 1});
        std::vector<LabeledInput> universe;
        for (const auto& y : strings_up_to(3)) universe.push_back({y, even_ones(y)});
        auto cert = bqp_to_awpp(family, r, universe, 3);
        out.push_back({"bqp-approximator",
                       {fixed_machine(OracleNode::branch({ask("11"), ask("11"), ask("10")}), 1), even, std::move(cert), r},
                       inputs_of_length(2, 3)});
    }
    return out;
}

/// Same shape as a valid instance but with q too small for the path count.
inline std::vector<NamedLowness> adversarial_lowness_instances() {
    std::vector<NamedLowness> out;
    const std::set<std::string> a{"0", "11", "010"};
    const auto inputs = detail::inputs_of_length(2, 3);
    for (std::uint64_t q : {1, 2}) {
        out.push_back({"undersized-q" + std::to_string(q),
                       {detail::fixed_machine(adversarial_tree("11", "00"), 1), a,
                        indicator_certificate(a, Polynomial::constant(q)), Polynomial::constant(q)},
                       inputs});
    }
    return out;
}

} // namespace gapsim::families
