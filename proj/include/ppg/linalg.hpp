#pragma once

#include <optional>
#include <vector>

#include "ppg/numbers.hpp"

namespace ppg {

// Dense matrix over F_p, entries reduced mod p.
struct FpMatrix {
    int p = 2;
    int rows = 0;
    int cols = 0;
    std::vector<int> a;  // row-major

    FpMatrix() = default;
    FpMatrix(int p_, int rows_, int cols_) : p(p_), rows(rows_), cols(cols_), a(rows_ * cols_, 0) {}

    int& at(int i, int j) { return a[i * cols + j]; }
    int at(int i, int j) const { return a[i * cols + j]; }

    void set(int i, int j, long long v) { at(i, j) = fp_norm(v, p); }

    std::vector<int> row(int i) const {
        return std::vector<int>(a.begin() + i * cols, a.begin() + (i + 1) * cols);
    }

    bool operator==(const FpMatrix& o) const {
        return p == o.p && rows == o.rows && cols == o.cols && a == o.a;
    }
};

struct RrefResult {
    FpMatrix reduced;
    std::vector<int> pivot_cols;
    int rank = 0;
};

inline RrefResult rref(FpMatrix m) {
    const int p = m.p;
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int pr = -1;
        for (int i = r; i < m.rows; ++i)
            if (m.at(i, c) != 0) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        for (int j = 0; j < m.cols; ++j) std::swap(m.at(pr, j), m.at(r, j));
        int inv = fp_inv(m.at(r, c), p);
        for (int j = 0; j < m.cols; ++j) m.at(r, j) = fp_mul(m.at(r, j), inv, p);
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || m.at(i, c) == 0) continue;
            int f = m.at(i, c);
            for (int j = 0; j < m.cols; ++j)
                m.at(i, j) = fp_sub(m.at(i, j), fp_mul(f, m.at(r, j), p), p);
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), std::move(pivots), r};
}

inline int rank(const FpMatrix& m) { return rref(m).rank; }

struct AffineSolution {
    std::vector<int> particular;
    std::vector<std::vector<int>> kernel;  // basis of the solution space of Mx=0
};

// Solves M x = b. Returns nullopt when inconsistent.
inline std::optional<AffineSolution> solve_affine(const FpMatrix& m, const std::vector<int>& b) {
    if ((int)b.size() != m.rows) throw std::invalid_argument("solve_affine: dimension mismatch");
    const int p = m.p;
    FpMatrix aug(p, m.rows, m.cols + 1);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.set(i, m.cols, b[i]);
    }
    RrefResult rr = rref(std::move(aug));
    for (int i = 0; i < rr.rank; ++i)
        if (rr.pivot_cols[i] == m.cols) return std::nullopt;  // row (0..0|1): inconsistent

    AffineSolution sol;
    sol.particular.assign(m.cols, 0);
    std::vector<bool> is_pivot(m.cols, false);
    for (int i = 0; i < rr.rank; ++i) {
        is_pivot[rr.pivot_cols[i]] = true;
        sol.particular[rr.pivot_cols[i]] = rr.reduced.at(i, m.cols);
    }
    for (int c = 0; c < m.cols; ++c) {
        if (is_pivot[c]) continue;
        std::vector<int> k(m.cols, 0);
        k[c] = 1;
        for (int i = 0; i < rr.rank; ++i)
            k[rr.pivot_cols[i]] = fp_sub(0, rr.reduced.at(i, c), p);
        sol.kernel.push_back(std::move(k));
    }
    return sol;
}

}  // namespace ppg
