#pragma once

// Finite configuration systems with transition matrix V = 5U.
//
// A system is given directly by its configuration matrix: entry V(i,j) is
// five times the amplitude of moving from configuration j to configuration i,
// so one step maps a column vector a to V*a. Entries are restricted to
// {-5,-4,-3,0,3,4,5} and V^T V must equal 25*I exactly.

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gapsim/errors.hpp"
#include "gapsim/numeric.hpp"

namespace gapsim {

/// A transition amplitude stored as its numerator over 5.
class Amplitude {
public:
    static constexpr std::array<int, 7> allowed{-5, -4, -3, 0, 3, 4, 5};

    static constexpr bool is_valid(long long numerator) {
        return std::find(allowed.begin(), allowed.end(), numerator) != allowed.end();
    }

    constexpr explicit Amplitude(long long numerator) : numerator_(static_cast<int>(numerator)) {
        if (!is_valid(numerator))
            throw AmplitudeError("amplitude numerator " + std::to_string(numerator) +
                                 " is not in {-5,-4,-3,0,3,4,5}");
    }

    constexpr int numerator() const { return numerator_; }
    constexpr double value() const { return numerator_ / 5.0; }

    friend constexpr bool operator==(Amplitude, Amplitude) = default;

private:
    int numerator_;
};

struct MatrixEntry {
    std::size_t row;
    std::size_t col;
    long long value;

    friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

/// Sparse integer matrix in coordinate form, canonically sorted by (row, col),
/// zeros dropped, with a per-column index for path enumeration.
class SparseIntMatrix {
public:
    struct ColumnEntry {
        std::size_t row;
        long long value;
    };

    SparseIntMatrix() = default;

    SparseIntMatrix(std::size_t rows, std::size_t cols, std::vector<MatrixEntry> entries)
        : rows_(rows), cols_(cols) {
        std::sort(entries.begin(), entries.end(), [](const MatrixEntry& a, const MatrixEntry& b) {
            return std::tie(a.row, a.col) < std::tie(b.row, b.col);
        });
        for (std::size_t k = 0; k < entries.size(); ++k) {
            const auto& e = entries[k];
            if (e.row >= rows || e.col >= cols)
                throw StructuralError("entry (" + std::to_string(e.row) + "," + std::to_string(e.col) +
                                      ") outside a " + std::to_string(rows) + "x" + std::to_string(cols) +
                                      " matrix");
            if (k > 0 && entries[k - 1].row == e.row && entries[k - 1].col == e.col)
                throw StructuralError("duplicate entry (" + std::to_string(e.row) + "," +
                                      std::to_string(e.col) + ")");
            if (e.value != 0) entries_.push_back(e);
        }
        columns_.assign(cols_, {});
        for (const auto& e : entries_) columns_[e.col].push_back({e.row, e.value});
    }

    static SparseIntMatrix from_dense(const std::vector<std::vector<long long>>& dense) {
        const std::size_t rows = dense.size();
        const std::size_t cols = rows == 0 ? 0 : dense.front().size();
        std::vector<MatrixEntry> entries;
        for (std::size_t i = 0; i < rows; ++i) {
            if (dense[i].size() != cols) throw StructuralError("ragged dense matrix");
            for (std::size_t j = 0; j < cols; ++j)
                if (dense[i][j] != 0) entries.push_back({i, j, dense[i][j]});
        }
        return SparseIntMatrix(rows, cols, std::move(entries));
    }

    /// s * I_n.
    static SparseIntMatrix scaled_identity(std::size_t n, long long s) {
        std::vector<MatrixEntry> entries;
        for (std::size_t i = 0; i < n; ++i) entries.push_back({i, i, s});
        return SparseIntMatrix(n, n, std::move(entries));
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    const std::vector<MatrixEntry>& entries() const { return entries_; }
    const std::vector<ColumnEntry>& column(std::size_t j) const { return columns_.at(j); }

    long long at(std::size_t i, std::size_t j) const {
        for (const auto& c : columns_.at(j))
            if (c.row == i) return c.value;
        return 0;
    }

    /// Copy with one entry replaced (zero removes it).
    SparseIntMatrix with_entry(std::size_t i, std::size_t j, long long value) const {
        std::vector<MatrixEntry> next;
        for (const auto& e : entries_)
            if (e.row != i || e.col != j) next.push_back(e);
        if (value != 0) next.push_back({i, j, value});
        return SparseIntMatrix(rows_, cols_, std::move(next));
    }

    friend bool operator==(const SparseIntMatrix& a, const SparseIntMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<MatrixEntry> entries_;
    std::vector<std::vector<ColumnEntry>> columns_;
};

struct UnitarityViolation {
    std::size_t i;
    std::size_t j;
    long long inner_product;
    long long expected;
};

struct UnitarityReport {
    bool pass = true;
    std::optional<UnitarityViolation> first_violation;
};

/// Checks V^T V = 25 I exactly. On failure reports the smallest (i,j), i <= j,
/// whose column inner product is wrong.
inline UnitarityReport validate_unitary(const SparseIntMatrix& v) {
    if (!v.is_square())
        throw StructuralError("unitarity check needs a square matrix, got " + std::to_string(v.rows()) + "x" +
                              std::to_string(v.cols()));

    // Gram entries accumulate row by row: (V^T V)(i,j) = sum_r V(r,i) V(r,j).
    std::map<std::pair<std::size_t, std::size_t>, long long> gram;
    const auto& entries = v.entries();
    std::size_t begin = 0;
    while (begin < entries.size()) {
        std::size_t end = begin;
        while (end < entries.size() && entries[end].row == entries[begin].row) ++end;
        for (std::size_t a = begin; a < end; ++a)
            for (std::size_t b = a; b < end; ++b)
                gram[{entries[a].col, entries[b].col}] += entries[a].value * entries[b].value;
        begin = end;
    }

    std::optional<UnitarityViolation> first;
    auto consider = [&](std::size_t i, std::size_t j, long long got, long long want) {
        if (got == want) return;
        if (!first || std::tie(i, j) < std::tie(first->i, first->j)) first = UnitarityViolation{i, j, got, want};
    };
    for (const auto& [ij, value] : gram) consider(ij.first, ij.second, value, ij.first == ij.second ? 25 : 0);
    for (std::size_t i = 0; i < v.cols(); ++i)
        if (!gram.contains({i, i})) consider(i, i, 0, 25);

    return {!first.has_value(), first};
}

inline UnitarityReport validate_unitary(const std::vector<std::vector<long long>>& dense) {
    for (const auto& row : dense)
        if (row.size() != dense.size()) throw StructuralError("unitarity check needs a square matrix");
    return validate_unitary(SparseIntMatrix::from_dense(dense));
}

struct ModelLimits {
    std::size_t max_configs = 4096;
};

/// Validated finite configuration system. Immutable once built.
class UnitarySystem {
public:
    static UnitarySystem create(SparseIntMatrix v, std::size_t start, std::size_t accept, std::uint64_t t_bound,
                                const ModelLimits& limits = {}) {
        if (!v.is_square()) throw StructuralError("transition matrix must be square");
        const std::size_t n = v.rows();
        if (n == 0) throw ModelError("a system needs at least one configuration");
        if (n > limits.max_configs)
            throw ResourceError(std::to_string(n) + " configurations exceed the limit of " +
                                std::to_string(limits.max_configs));
        if (start >= n || accept >= n) throw ModelError("start/accept configuration out of range");
        for (const auto& e : v.entries())
            if (!Amplitude::is_valid(e.value))
                throw AmplitudeError("entry (" + std::to_string(e.row) + "," + std::to_string(e.col) + ") = " +
                                     std::to_string(e.value) + " is not in {-5,-4,-3,0,3,4,5}");
        const auto report = validate_unitary(v);
        if (!report.pass) {
            const auto& f = *report.first_violation;
            throw ModelError("not unitary: column inner product (" + std::to_string(f.i) + "," +
                             std::to_string(f.j) + ") = " + std::to_string(f.inner_product) + ", expected " +
                             std::to_string(f.expected));
        }
        return UnitarySystem(std::move(v), start, accept, t_bound);
    }

    std::size_t n_configs() const { return v_.rows(); }
    const SparseIntMatrix& matrix() const { return v_; }
    std::size_t start() const { return start_; }
    std::size_t accept() const { return accept_; }
    std::uint64_t t_bound() const { return t_bound_; }

    UnitarySystem with_accept(std::size_t accept) const { return create(v_, start_, accept, t_bound_); }
    UnitarySystem with_t_bound(std::uint64_t t) const { return UnitarySystem(v_, start_, accept_, t); }

    friend bool operator==(const UnitarySystem&, const UnitarySystem&) = default;

private:
    UnitarySystem(SparseIntMatrix v, std::size_t start, std::size_t accept, std::uint64_t t)
        : v_(std::move(v)), start_(start), accept_(accept), t_bound_(t) {}

    SparseIntMatrix v_;
    std::size_t start_;
    std::size_t accept_;
    std::uint64_t t_bound_;
};

/// Uniform family of systems indexed by input x and padding length m >= |x|.
struct MachineFamily {
    std::function<UnitarySystem(std::string_view x, std::uint64_t m)> builder;
    Polynomial t_poly;

    UnitarySystem instantiate(std::string_view x, std::uint64_t m) const {
        if (m < x.size())
            throw DomainError("padding length " + std::to_string(m) + " is shorter than |x| = " +
                              std::to_string(x.size()));
        auto system = builder(x, m);
        if (system.t_bound() != t_poly(m))
            throw ModelError("family produced running time " + std::to_string(system.t_bound()) +
                             " but t(" + std::to_string(m) + ") = " + std::to_string(t_poly(m)));
        return system;
    }

    /// Every input gets the same system; t(m) is that system's running time.
    static MachineFamily constant(UnitarySystem system) {
        const auto t = system.t_bound();
        return {[system](std::string_view, std::uint64_t) { return system; }, Polynomial::constant(t)};
    }
};

// ---------------------------------------------------------------------------
// Machine file format

inline nlohmann::ordered_json to_json(const UnitarySystem& s) {
    nlohmann::ordered_json j;
    j["n_configs"] = s.n_configs();
    auto entries = nlohmann::ordered_json::array();
    for (const auto& e : s.matrix().entries()) entries.push_back({e.row, e.col, e.value});
    j["entries"] = std::move(entries);
    j["start"] = s.start();
    j["accept"] = s.accept();
    j["t"] = s.t_bound();
    return j;
}

namespace detail {

template <class T>
T json_field(const nlohmann::json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError(std::string("field \"") + key + "\" has the wrong type");
    }
}

inline std::size_t json_index(const nlohmann::json& v, const char* what) {
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ParseError(std::string(what) + " must be a nonnegative integer");
    return v.get<std::size_t>();
}

} // namespace detail

/// Builds a validated system from a parsed machine description.
inline UnitarySystem build_system(const nlohmann::json& j, const ModelLimits& limits = {}) {
    const auto n = detail::json_index(j.contains("n_configs") ? j.at("n_configs") : nlohmann::json(), "n_configs");
    if (n > limits.max_configs)
        throw ResourceError(std::to_string(n) + " configurations exceed the limit of " +
                            std::to_string(limits.max_configs));
    if (!j.contains("entries") || !j.at("entries").is_array()) throw ParseError("\"entries\" must be an array");

    std::vector<MatrixEntry> entries;
    for (const auto& triple : j.at("entries")) {
        if (!triple.is_array() || triple.size() != 3) throw ParseError("each entry must be [row, col, numerator]");
        const auto row = detail::json_index(triple[0], "row");
        const auto col = detail::json_index(triple[1], "col");
        if (!triple[2].is_number_integer()) throw ParseError("numerator must be an integer");
        const auto value = triple[2].get<long long>();
        if (!Amplitude::is_valid(value))
            throw AmplitudeError("entry (" + std::to_string(row) + "," + std::to_string(col) + ") = " +
                                 std::to_string(value) + " is not in {-5,-4,-3,0,3,4,5}");
        entries.push_back({row, col, value});
    }
    SparseIntMatrix v(n, n, std::move(entries));
    const auto start = detail::json_index(j.contains("start") ? j.at("start") : nlohmann::json(), "start");
    const auto accept = detail::json_index(j.contains("accept") ? j.at("accept") : nlohmann::json(), "accept");
    const auto t = detail::json_index(j.contains("t") ? j.at("t") : nlohmann::json(), "t");
    return UnitarySystem::create(std::move(v), start, accept, t, limits);
}

inline nlohmann::json parse_json_text(std::string_view text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline UnitarySystem build_system_from_text(std::string_view text, const ModelLimits& limits = {}) {
    return build_system(parse_json_text(text), limits);
}

inline UnitarySystem build_system_from_file(const std::filesystem::path& path, const ModelLimits& limits = {}) {
    return build_system_from_text(read_text_file(path), limits);
}

} // namespace gapsim
