#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ppg {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer int_pow(const Integer& base, unsigned e) {
    Integer r = 1, b = base;
    while (e) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

// Smallest nonnegative representative of a mod m (m > 0).
inline Integer mod_floor(const Integer& a, const Integer& m) {
    Integer r = a % m;
    if (r < 0) r += m;
    return r;
}

inline int mod_floor(long long a, int m) {
    long long r = a % m;
    if (r < 0) r += m;
    return static_cast<int>(r);
}

// Extended gcd: returns g = gcd(a,b) and x,y with a*x + b*y = g.
inline Integer ext_gcd(const Integer& a, const Integer& b, Integer& x, Integer& y) {
    if (b == 0) {
        x = (a < 0) ? -1 : 1;
        y = 0;
        return a < 0 ? Integer(-a) : a;
    }
    Integer x1, y1;
    Integer g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// Inverse of a modulo m; throws if gcd(a,m) != 1.
inline Integer inv_mod(const Integer& a, const Integer& m) {
    Integer x, y;
    Integer g = ext_gcd(mod_floor(a, m), m, x, y);
    if (g != 1) throw std::domain_error("inv_mod: element not invertible");
    return mod_floor(x, m);
}

// p-adic valuation of a nonzero integer; ~0u would be wrong for 0, so callers
// must handle a == 0 separately (conventionally +infinity).
inline unsigned valuation(Integer a, const Integer& p) {
    if (a == 0) throw std::domain_error("valuation of zero");
    unsigned v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    return v;
}

inline unsigned valuation(const Rational& r, const Integer& p) {
    return valuation(boost::multiprecision::numerator(r), p) -
           valuation(boost::multiprecision::denominator(r), p);
}

inline bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; (long long)d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// ---- arithmetic in F_p for small p ----------------------------------------

inline int fp_norm(long long a, int p) { return mod_floor(a, p); }

inline int fp_norm(const Integer& a, int p) {
    return static_cast<int>(mod_floor(a, Integer(p)));
}

inline int fp_add(int a, int b, int p) { return (a + b) % p; }
inline int fp_sub(int a, int b, int p) { return mod_floor((long long)a - b, p); }
inline int fp_mul(int a, int b, int p) { return (int)(((long long)a * b) % p); }

inline int fp_inv(int a, int p) {
    a = fp_norm((long long)a, p);
    if (a == 0) throw std::domain_error("fp_inv(0)");
    int r = 1, b = a, e = p - 2;
    while (e) {
        if (e & 1) r = fp_mul(r, b, p);
        b = fp_mul(b, b, p);
        e >>= 1;
    }
    return r;
}

inline int fp_of_rational(const Rational& q, int p) {
    Integer num = boost::multiprecision::numerator(q);
    Integer den = boost::multiprecision::denominator(q);
    if (den % p == 0) throw std::domain_error("rational not p-integral");
    int n = fp_norm(num, p);
    int d = fp_norm(den, p);
    return fp_mul(n, fp_inv(d, p), p);
}

}  // namespace ppg
