#pragma once

#include "ppg/numbers.hpp"

namespace ppg {

// Residue arithmetic in Z/p^N with N tracked per value.
class PadicScalar {
  public:
    PadicScalar(int p, unsigned N, Integer residue = 0)
        : p_(p), N_(N), mod_(int_pow(Integer(p), N)), r_(mod_floor(residue, mod_)) {}

    static PadicScalar from_rational(const Rational& q, int p, unsigned N) {
        PadicScalar s(p, N);
        Integer num = boost::multiprecision::numerator(q);
        Integer den = boost::multiprecision::denominator(q);
        if (den % p == 0) throw std::domain_error("PadicScalar: denominator not prime to p");
        s.r_ = mod_floor(num * inv_mod(den, s.mod_), s.mod_);
        return s;
    }

    int p() const { return p_; }
    unsigned precision() const { return N_; }
    const Integer& residue() const { return r_; }
    const Integer& modulus() const { return mod_; }

    bool is_unit() const { return r_ % p_ != 0; }

    PadicScalar operator+(const PadicScalar& o) const { return with(r_ + o.check(*this).r_); }
    PadicScalar operator-(const PadicScalar& o) const { return with(r_ - o.check(*this).r_); }
    PadicScalar operator*(const PadicScalar& o) const { return with(r_ * o.check(*this).r_); }
    PadicScalar operator-() const { return with(-r_); }

    PadicScalar inv() const {
        if (!is_unit()) throw std::domain_error("PadicScalar::inv: not a unit");
        return with(inv_mod(r_, mod_));
    }

    // s^e for an arbitrary integer exponent (negative exponents need a unit).
    PadicScalar pow(const Integer& e) const {
        if (e < 0) return inv().pow(-e);
        Integer result = 1, base = r_, n = e;
        while (n > 0) {
            if ((n & 1) != 0) result = mod_floor(result * base, mod_);
            base = mod_floor(base * base, mod_);
            n >>= 1;
        }
        return with(result);
    }

    bool operator==(const PadicScalar& o) const {
        return p_ == o.p_ && N_ == o.N_ && r_ == o.r_;
    }

  private:
    PadicScalar with(Integer v) const { return PadicScalar(p_, N_, std::move(v)); }
    const PadicScalar& check(const PadicScalar& other) const {
        if (p_ != other.p_ || N_ != other.N_)
            throw std::invalid_argument("PadicScalar: mixed precision or prime");
        return *this;
    }

    int p_;
    unsigned N_;
    Integer mod_;
    Integer r_;
};

inline PadicScalar padic_inv(const Rational& a, int p, unsigned N) {
    return PadicScalar::from_rational(a, p, N).inv();
}

inline PadicScalar padic_pow(const PadicScalar& s, const Integer& e) { return s.pow(e); }

}  // namespace ppg
