#pragma once

#include <map>
#include <vector>

#include "ppg/numbers.hpp"
#include "ppg/words.hpp"

namespace ppg {

// Element of the free associative F_p-algebra on noncommuting variables
// X_0..X_{n-1}, truncated above degree N. Monomials are index sequences.
class TruncatedSeries {
  public:
    using Monomial = std::vector<int>;

    TruncatedSeries(int p, int cutoff) : p_(p), cutoff_(cutoff) {}

    static TruncatedSeries one(int p, int cutoff) {
        TruncatedSeries s(p, cutoff);
        s.coeff_[{}] = 1;
        return s;
    }

    // Image of a generator: 1 + X_g.
    static TruncatedSeries of_generator(int g, int p, int cutoff) {
        TruncatedSeries s = one(p, cutoff);
        if (cutoff >= 1) s.coeff_[{g}] = 1;
        return s;
    }

    int p() const { return p_; }
    int cutoff() const { return cutoff_; }
    const std::map<Monomial, int>& coefficients() const { return coeff_; }

    int coeff(const Monomial& m) const {
        auto it = coeff_.find(m);
        return it == coeff_.end() ? 0 : it->second;
    }

    void set(Monomial m, int c) {
        c = fp_norm((long long)c, p_);
        if (c == 0)
            coeff_.erase(m);
        else
            coeff_[std::move(m)] = c;
    }

    TruncatedSeries operator+(const TruncatedSeries& o) const {
        TruncatedSeries r = *this;
        for (auto& [m, c] : o.coeff_) r.set(m, r.coeff(m) + c);
        return r;
    }

    TruncatedSeries operator-(const TruncatedSeries& o) const {
        TruncatedSeries r = *this;
        for (auto& [m, c] : o.coeff_) r.set(m, r.coeff(m) - c);
        return r;
    }

    TruncatedSeries operator*(const TruncatedSeries& o) const {
        TruncatedSeries r(p_, cutoff_);
        for (auto& [m1, c1] : coeff_) {
            for (auto& [m2, c2] : o.coeff_) {
                if ((int)(m1.size() + m2.size()) > cutoff_) continue;
                Monomial m = m1;
                m.insert(m.end(), m2.begin(), m2.end());
                r.set(m, r.coeff(m) + fp_mul(c1, c2, p_));
            }
        }
        return r;
    }

    // Inverse of a series with constant term 1, via the geometric series
    // (1+A)^{-1} = sum (-A)^k truncated at the cutoff.
    TruncatedSeries inverse() const {
        if (coeff(Monomial{}) != 1)
            throw std::domain_error("TruncatedSeries::inverse: constant term must be 1");
        TruncatedSeries a = *this;
        a.set({}, 0);  // A = s - 1, no constant term
        TruncatedSeries r = one(p_, cutoff_);
        TruncatedSeries term = one(p_, cutoff_);
        for (int k = 1; k <= cutoff_; ++k) {
            term = term * a;
            if (term.coeff_.empty()) break;
            if (k % 2 == 1)
                r = r - term;
            else
                r = r + term;
        }
        return r;
    }

    TruncatedSeries pow(const Integer& e) const {
        if (e < 0) return inverse().pow(-e);
        TruncatedSeries r = one(p_, cutoff_);
        TruncatedSeries b = *this;
        Integer n = e;
        while (n > 0) {
            if ((n & 1) != 0) r = r * b;
            b = b * b;
            n >>= 1;
        }
        return r;
    }

    bool operator==(const TruncatedSeries& o) const { return coeff_ == o.coeff_; }

    // Degree-1 coefficients as a vector indexed by generators.
    std::vector<int> degree1(int n_gens) const {
        std::vector<int> v(n_gens, 0);
        for (auto& [m, c] : coeff_)
            if (m.size() == 1) v[m[0]] = c;
        return v;
    }

    // Degree-2 coefficients as an n x n row-major matrix (entry (i,j) is the
    // coefficient of X_i X_j).
    std::vector<int> degree2(int n_gens) const {
        std::vector<int> v(n_gens * n_gens, 0);
        for (auto& [m, c] : coeff_)
            if (m.size() == 2) v[m[0] * n_gens + m[1]] = c;
        return v;
    }

  private:
    int p_;
    int cutoff_;
    std::map<Monomial, int> coeff_;  // only nonzero entries
};

// Magnus expansion g -> 1 + X_g, g^{-1} -> 1 - X_g + X_g^2 - ..., truncated
// above degree N, evaluated on a reduced word.
inline TruncatedSeries magnus_truncated(const Word& w, int p, int cutoff) {
    if (cutoff < 1) throw std::invalid_argument("magnus_truncated: cutoff must be >= 1");
    TruncatedSeries r = TruncatedSeries::one(p, cutoff);
    for (auto& [gen, exp] : w.syllables()) {
        TruncatedSeries g = TruncatedSeries::of_generator(gen, p, cutoff);
        r = r * g.pow(exp);
    }
    return r;
}

}  // namespace ppg
