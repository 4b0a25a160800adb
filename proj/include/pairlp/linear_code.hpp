#pragma once

// Binary linear codes as sparse parity-check matrices, Gallager-ensemble
// generation, GF(2) rank / codeword enumeration, and alist file I/O.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pairlp/pair_metric.hpp"

namespace pairlp {

/// Parity-check matrix H (m x n over GF(2)), stored as the sorted support
/// N(j) of each check row. Immutable after construction.
class BinaryCode {
  public:
    BinaryCode(int n, std::vector<std::vector<int>> rows) : n_(n), rows_(std::move(rows)) {
        if (n_ < 2) throw std::invalid_argument("BinaryCode: n must be >= 2");
        if (rows_.empty()) throw std::invalid_argument("BinaryCode: need at least one check");
        for (auto& r : rows_) {
            if (r.empty()) throw std::invalid_argument("BinaryCode: empty check row");
            std::sort(r.begin(), r.end());
            if (std::adjacent_find(r.begin(), r.end()) != r.end())
                throw std::invalid_argument("BinaryCode: duplicate index in check row");
            if (r.front() < 0 || r.back() >= n_)
                throw std::invalid_argument("BinaryCode: check index out of range");
        }
    }

    int length() const { return n_; }
    int num_checks() const { return static_cast<int>(rows_.size()); }
    const std::vector<int>& check(int j) const { return rows_.at(j); }
    int check_weight(int j) const { return static_cast<int>(rows_.at(j).size()); }
    const std::vector<std::vector<int>>& checks() const { return rows_; }

    friend bool operator==(const BinaryCode& x, const BinaryCode& y) {
        return x.n_ == y.n_ && x.rows_ == y.rows_;
    }

  private:
    int n_;
    std::vector<std::vector<int>> rows_;
};

/// H*x over GF(2); component j is the parity of x restricted to N(j).
inline Bits syndrome(const BinaryCode& code, std::span<const std::uint8_t> x) {
    if (static_cast<int>(x.size()) != code.length())
        throw std::invalid_argument("syndrome: length mismatch");
    Bits s(code.num_checks(), 0);
    for (int j = 0; j < code.num_checks(); ++j) {
        std::uint8_t acc = 0;
        for (int i : code.check(j)) acc ^= (x[i] & 1);
        s[j] = acc;
    }
    return s;
}

inline Bits syndrome(const BinaryCode& code, const Bits& x) {
    return syndrome(code, std::span<const std::uint8_t>(x));
}

inline bool is_codeword(const BinaryCode& code, std::span<const std::uint8_t> x) {
    const Bits s = syndrome(code, x);
    return std::all_of(s.begin(), s.end(), [](std::uint8_t b) { return b == 0; });
}

inline bool is_codeword(const BinaryCode& code, const Bits& x) {
    return is_codeword(code, std::span<const std::uint8_t>(x));
}

namespace detail {

/// Rows of a GF(2) matrix packed into 64-bit words.
class BitMatrix {
  public:
    BitMatrix(int rows, int cols)
        : cols_(cols), words_((cols + 63) / 64), data_(rows * words_, 0) {}

    int rows() const { return static_cast<int>(data_.size() / words_); }
    int cols() const { return cols_; }

    bool get(int r, int c) const { return (word(r)[c >> 6] >> (c & 63)) & 1u; }
    void set(int r, int c) { word(r)[c >> 6] |= std::uint64_t(1) << (c & 63); }

    void xor_rows(int dst, int src) {
        std::uint64_t* d = word(dst);
        const std::uint64_t* s = word(src);
        for (int w = 0; w < words_; ++w) d[w] ^= s[w];
    }

    void swap_rows(int a, int b) {
        if (a == b) return;
        std::uint64_t* pa = word(a);
        std::uint64_t* pb = word(b);
        for (int w = 0; w < words_; ++w) std::swap(pa[w], pb[w]);
    }

    /// In-place reduced row-echelon form. Returns the pivot column of each
    /// pivot row (rank = number of pivots).
    std::vector<int> rref() {
        std::vector<int> pivots;
        int r = 0;
        for (int c = 0; c < cols_ && r < rows(); ++c) {
            int sel = -1;
            for (int i = r; i < rows(); ++i)
                if (get(i, c)) { sel = i; break; }
            if (sel < 0) continue;
            swap_rows(r, sel);
            for (int i = 0; i < rows(); ++i)
                if (i != r && get(i, c)) xor_rows(i, r);
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

  private:
    std::uint64_t* word(int r) { return data_.data() + std::size_t(r) * words_; }
    const std::uint64_t* word(int r) const { return data_.data() + std::size_t(r) * words_; }

    int cols_;
    int words_;
    std::vector<std::uint64_t> data_;
};

inline BitMatrix to_bitmatrix(const BinaryCode& code) {
    BitMatrix m(code.num_checks(), code.length());
    for (int j = 0; j < code.num_checks(); ++j)
        for (int i : code.check(j)) m.set(j, i);
    return m;
}

/// splitmix64 mixing step; the documented seed-derivation primitive used by
/// the experiment harness (derive_seed below).
constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Rank of H over GF(2). Exact (no tolerances).
inline int gf2_rank(const BinaryCode& code) {
    auto m = detail::to_bitmatrix(code);
    return static_cast<int>(m.rref().size());
}

/// Basis of the null space of H: k = n - rank(H) generator rows, one per free
/// column of the RREF, in ascending free-column order.
inline std::vector<Bits> codeword_basis(const BinaryCode& code) {
    const int n = code.length();
    auto m = detail::to_bitmatrix(code);
    const std::vector<int> pivots = m.rref();
    std::vector<bool> is_pivot(n, false);
    for (int c : pivots) is_pivot[c] = true;

    std::vector<Bits> basis;
    for (int f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        Bits v(n, 0);
        v[f] = 1;
        // pivot row r constrains column pivots[r]: x_p = sum of free entries
        for (std::size_t r = 0; r < pivots.size(); ++r)
            if (m.get(static_cast<int>(r), f)) v[pivots[r]] = 1;
        basis.push_back(std::move(v));
    }
    return basis;
}

inline int code_dimension(const BinaryCode& code) {
    return code.length() - gf2_rank(code);
}

/// All 2^k codewords, lexicographically sorted. Guarded to k <= 24.
inline std::vector<Bits> enumerate_codewords(const BinaryCode& code) {
    const auto basis = codeword_basis(code);
    const int k = static_cast<int>(basis.size());
    if (k > 24) throw std::length_error("enumerate_codewords: dimension exceeds guard (24)");
    const int n = code.length();

    std::vector<Bits> words;
    words.reserve(std::size_t(1) << k);
    Bits cur(n, 0);
    words.push_back(cur);
    // Gray-code walk: one basis XOR per step.
    for (std::uint32_t g = 1; g < (std::uint32_t(1) << k); ++g) {
        const int bit = std::countr_zero(g);
        for (int i = 0; i < n; ++i) cur[i] ^= basis[bit][i];
        words.push_back(cur);
    }
    std::sort(words.begin(), words.end());
    return words;
}

/// Random (var_degree, chk_degree)-regular code from the Gallager ensemble:
/// var_degree stacked blocks, each block partitioning a random permutation of
/// the n columns into rows of chk_degree. Deterministic given the seed
/// (mt19937_64, Fisher-Yates with modulo draws).
inline BinaryCode gallager_ensemble(int n, int var_degree, int chk_degree, std::uint64_t seed) {
    if (n < 2 || var_degree < 1 || chk_degree < 1)
        throw std::invalid_argument("gallager_ensemble: bad parameters");
    if ((static_cast<long long>(n) * var_degree) % chk_degree != 0)
        throw std::invalid_argument("gallager_ensemble: n*var_degree not divisible by chk_degree");
    if (n % chk_degree != 0)
        throw std::invalid_argument("gallager_ensemble: block construction needs chk_degree | n");

    const int rows_per_block = n / chk_degree;
    std::mt19937_64 rng(seed);
    std::vector<int> perm(n);
    std::vector<std::vector<int>> rows;
    rows.reserve(std::size_t(var_degree) * rows_per_block);

    for (int b = 0; b < var_degree; ++b) {
        for (int i = 0; i < n; ++i) perm[i] = i;
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(rng() % std::uint64_t(i + 1));
            std::swap(perm[i], perm[j]);
        }
        for (int g = 0; g < rows_per_block; ++g) {
            std::vector<int> row(perm.begin() + std::size_t(g) * chk_degree,
                                 perm.begin() + std::size_t(g + 1) * chk_degree);
            std::sort(row.begin(), row.end());
            row.erase(std::unique(row.begin(), row.end()), row.end());
            rows.push_back(std::move(row));
        }
    }
    return BinaryCode(n, std::move(rows));
}

// ---------------------------------------------------------------------------
// alist I/O (MacKay's sparse-matrix text format, 1-based indices).
// Layout: "n m" / "max_col_deg max_row_deg" / column degrees / row degrees /
// n column adjacency lines / m row adjacency lines. Zero entries (padding in
// the strict variant) are ignored on read; we write the unpadded variant.

inline void write_alist(const BinaryCode& code, std::ostream& os) {
    const int n = code.length();
    const int m = code.num_checks();
    std::vector<std::vector<int>> cols(n);
    for (int j = 0; j < m; ++j)
        for (int i : code.check(j)) cols[i].push_back(j);

    std::size_t max_col = 0, max_row = 0;
    for (const auto& c : cols) max_col = std::max(max_col, c.size());
    for (int j = 0; j < m; ++j) max_row = std::max(max_row, code.check(j).size());

    os << n << ' ' << m << '\n';
    os << max_col << ' ' << max_row << '\n';
    for (int i = 0; i < n; ++i) os << cols[i].size() << (i + 1 < n ? ' ' : '\n');
    for (int j = 0; j < m; ++j) os << code.check(j).size() << (j + 1 < m ? ' ' : '\n');
    for (int i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < cols[i].size(); ++t)
            os << cols[i][t] + 1 << (t + 1 < cols[i].size() ? ' ' : '\n');
        if (cols[i].empty()) os << '\n';
    }
    for (int j = 0; j < m; ++j) {
        const auto& r = code.check(j);
        for (std::size_t t = 0; t < r.size(); ++t)
            os << r[t] + 1 << (t + 1 < r.size() ? ' ' : '\n');
    }
}

inline void write_alist_file(const BinaryCode& code, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_alist_file: cannot open " + path);
    write_alist(code, f);
}

inline BinaryCode read_alist(std::istream& is) {
    auto next_int = [&is](const char* what) {
        long long v;
        if (!(is >> v)) throw std::runtime_error(std::string("read_alist: missing ") + what);
        return v;
    };
    const int n = static_cast<int>(next_int("n"));
    const int m = static_cast<int>(next_int("m"));
    if (n < 2 || m < 1) throw std::runtime_error("read_alist: bad dimensions");
    next_int("max col degree");
    next_int("max row degree");

    std::vector<int> col_deg(n), row_deg(m);
    for (int i = 0; i < n; ++i) col_deg[i] = static_cast<int>(next_int("col degree"));
    for (int j = 0; j < m; ++j) row_deg[j] = static_cast<int>(next_int("row degree"));

    // Column adjacency (consumed and cross-checked against the row lists).
    std::vector<std::vector<int>> cols(n);
    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < col_deg[i]; ++t) {
            const long long v = next_int("col entry");
            if (v == 0) { --t; continue; }  // strict-format padding
            if (v < 1 || v > m) throw std::runtime_error("read_alist: column entry out of range");
            cols[i].push_back(static_cast<int>(v - 1));
        }
    }
    std::vector<std::vector<int>> rows(m);
    for (int j = 0; j < m; ++j) {
        for (int t = 0; t < row_deg[j]; ++t) {
            const long long v = next_int("row entry");
            if (v == 0) { --t; continue; }
            if (v < 1 || v > n) throw std::runtime_error("read_alist: row entry out of range");
            rows[j].push_back(static_cast<int>(v - 1));
        }
    }

    BinaryCode code(n, std::move(rows));
    std::vector<std::vector<int>> cols_check(n);
    for (int j = 0; j < m; ++j)
        for (int i : code.check(j)) cols_check[i].push_back(j);
    for (int i = 0; i < n; ++i) {
        std::sort(cols[i].begin(), cols[i].end());
        if (cols[i] != cols_check[i])
            throw std::runtime_error("read_alist: row/column adjacency lists disagree");
    }
    return code;
}

inline BinaryCode read_alist_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_alist_file: cannot open " + path);
    return read_alist(f);
}

}  // namespace pairlp
