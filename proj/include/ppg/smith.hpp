#pragma once

#include <limits>
#include <vector>

#include "ppg/numbers.hpp"

namespace ppg {

// Dense matrix over Z with arbitrary-precision entries.
struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Integer> a;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), a(r * c, 0) {}

    Integer& at(int i, int j) { return a[i * cols + j]; }
    const Integer& at(int i, int j) const { return a[i * cols + j]; }
};

struct SmithIntResult {
    std::vector<Integer> divisors;  // nonzero elementary divisors, d1 | d2 | ...
    int rank = 0;                   // number of nonzero divisors
    // Row transform: left.row(i) gives the combination of input rows that
    // produced diagonal entry i (L * A * R = D).
    IntMatrix left;
};

namespace detail {

inline bool smith_find_pivot(const IntMatrix& m, int s, int& pi, int& pj) {
    bool found = false;
    Integer best = 0;
    for (int i = s; i < m.rows; ++i)
        for (int j = s; j < m.cols; ++j) {
            const Integer& v = m.at(i, j);
            if (v == 0) continue;
            Integer av = abs(v);
            if (!found || av < best) {
                found = true;
                best = av;
                pi = i;
                pj = j;
            }
        }
    return found;
}

}  // namespace detail

// Smith normal form over Z by repeated pivoting on the smallest nonzero
// entry. Divisors are positive and form a divisibility chain.
inline SmithIntResult smith_int(IntMatrix m) {
    const int n = std::min(m.rows, m.cols);
    IntMatrix left(m.rows, m.rows);
    for (int i = 0; i < m.rows; ++i) left.at(i, i) = 1;

    auto row_op = [&](int dst, int src, const Integer& f) {
        for (int j = 0; j < m.cols; ++j) m.at(dst, j) += f * m.at(src, j);
        for (int j = 0; j < m.rows; ++j) left.at(dst, j) += f * left.at(src, j);
    };
    auto row_swap = [&](int i, int k) {
        for (int j = 0; j < m.cols; ++j) std::swap(m.at(i, j), m.at(k, j));
        for (int j = 0; j < m.rows; ++j) std::swap(left.at(i, j), left.at(k, j));
    };
    auto col_swap = [&](int i, int k) {
        for (int r = 0; r < m.rows; ++r) std::swap(m.at(r, i), m.at(r, k));
    };
    auto col_op = [&](int dst, int src, const Integer& f) {
        for (int r = 0; r < m.rows; ++r) m.at(r, dst) += f * m.at(r, src);
    };

    int s = 0;
    for (; s < n; ++s) {
        int pi, pj;
        if (!detail::smith_find_pivot(m, s, pi, pj)) break;
        row_swap(s, pi);
        col_swap(s, pj);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (int i = s + 1; i < m.rows; ++i) {
                if (m.at(i, s) == 0) continue;
                Integer q = m.at(i, s) / m.at(s, s);
                row_op(i, s, -q);
                if (m.at(i, s) != 0) {  // remainder smaller than pivot: swap up
                    row_swap(s, i);
                    clean = false;
                }
            }
            for (int j = s + 1; j < m.cols; ++j) {
                if (m.at(s, j) == 0) continue;
                Integer q = m.at(s, j) / m.at(s, s);
                col_op(j, s, -q);
                if (m.at(s, j) != 0) {
                    col_swap(s, j);
                    clean = false;
                }
            }
        }
        // Enforce the divisibility chain: if some remaining entry is not
        // divisible by the pivot, fold its row in and redo this step.
        bool redo = false;
        for (int i = s + 1; i < m.rows && !redo; ++i)
            for (int j = s + 1; j < m.cols && !redo; ++j)
                if (m.at(i, j) % m.at(s, s) != 0) {
                    row_op(s, i, 1);
                    redo = true;
                }
        if (redo) {
            --s;
            continue;
        }
        if (m.at(s, s) < 0) {
            for (int j = 0; j < m.cols; ++j) m.at(s, j) = -m.at(s, j);
            for (int j = 0; j < m.rows; ++j) left.at(s, j) = -left.at(s, j);
        }
    }

    SmithIntResult res;
    res.rank = s;
    res.left = std::move(left);
    for (int i = 0; i < s; ++i) res.divisors.push_back(m.at(i, i));
    return res;
}

// ---- Smith normal form over Z/p^N ------------------------------------------

constexpr unsigned kValuationInfinity = std::numeric_limits<unsigned>::max();

struct SmithResult {
    // p-valuations of the diagonal, nondecreasing; kValuationInfinity marks
    // entries congruent to 0 mod p^N (indistinguishable from exact zero).
    std::vector<unsigned> valuations;
    int rank = 0;  // number of diagonal entries with valuation < N
    bool saturated = false;
};

// Diagonalization over Z/p^N by unimodular operations with minimal-valuation
// pivoting (ties broken by smallest row, then column index). Saturation is
// reported, never silently treated as an exact zero.
inline SmithResult smith_mod_pN(IntMatrix m, int p, unsigned N) {
    if (N < 1) throw std::invalid_argument("smith_mod_pN: N must be >= 1");
    const Integer P = p;
    const Integer modulus = int_pow(P, N);
    for (auto& v : m.a) v = mod_floor(v, modulus);

    auto val = [&](const Integer& x) -> unsigned {
        if (x == 0) return kValuationInfinity;
        unsigned v = valuation(x, P);
        return v >= N ? kValuationInfinity : v;
    };

    SmithResult res;
    const int n = std::min(m.rows, m.cols);
    int s = 0;
    for (; s < n; ++s) {
        int pi = -1, pj = -1;
        unsigned best = kValuationInfinity;
        for (int i = s; i < m.rows; ++i)
            for (int j = s; j < m.cols; ++j) {
                unsigned v = val(m.at(i, j));
                if (v < best) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;  // all remaining entries are 0 mod p^N
        for (int j = s; j < m.cols; ++j) std::swap(m.at(pi, j), m.at(s, j));
        for (int i = s; i < m.rows; ++i) std::swap(m.at(i, pj), m.at(i, s));

        // pivot = p^v * u with u a unit; normalize the pivot row by u^{-1}.
        unsigned v = best;
        Integer unit = m.at(s, s) / int_pow(P, v);
        Integer uinv = inv_mod(unit, modulus);
        for (int j = s; j < m.cols; ++j) m.at(s, j) = mod_floor(m.at(s, j) * uinv, modulus);

        for (int i = s + 1; i < m.rows; ++i) {
            if (m.at(i, s) == 0) continue;
            Integer f = m.at(i, s) / int_pow(P, v);  // exact: pivot has minimal valuation
            for (int j = s; j < m.cols; ++j)
                m.at(i, j) = mod_floor(m.at(i, j) - f * m.at(s, j), modulus);
        }
        for (int j = s + 1; j < m.cols; ++j) {
            if (m.at(s, j) == 0) continue;
            Integer f = m.at(s, j) / int_pow(P, v);
            for (int i = s; i < m.rows; ++i)
                m.at(i, j) = mod_floor(m.at(i, j) - f * m.at(i, s), modulus);
        }
        res.valuations.push_back(v);
        ++res.rank;
    }
    for (int i = s; i < n; ++i) {
        res.valuations.push_back(kValuationInfinity);
        res.saturated = true;
    }
    return res;
}

}  // namespace ppg
