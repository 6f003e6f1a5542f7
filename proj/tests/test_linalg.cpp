#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <functional>
#include <random>

#include "ppg/linalg.hpp"
#include "ppg/padic.hpp"
#include "ppg/smith.hpp"

using namespace ppg;

namespace {

// Independent Smith oracle: d_k = gcd(k x k minors) / gcd((k-1) x (k-1) minors).
// Exponential in the matrix size, fine for the small matrices used here.
Integer minor_gcd(const IntMatrix& m, int k) {
    std::vector<int> rows(k), cols(k);
    Integer g = 0;
    std::vector<int> ridx, cidx;
    std::function<void(int, int)> pick_cols = [&](int start, int depth) {
        if (depth == k) {
            // determinant by Laplace on the picked submatrix
            std::function<Integer(std::vector<int>, std::vector<int>)> det =
                [&](std::vector<int> r, std::vector<int> c) -> Integer {
                if (r.size() == 1) return m.at(r[0], c[0]);
                Integer d = 0;
                for (size_t i = 0; i < r.size(); ++i) {
                    std::vector<int> r2;
                    for (size_t t = 0; t < r.size(); ++t)
                        if (t != i) r2.push_back(r[t]);
                    std::vector<int> c2(c.begin() + 1, c.end());
                    Integer term = m.at(r[i], c[0]) * det(r2, c2);
                    d += (i % 2 == 0) ? term : -term;
                }
                return d;
            };
            g = boost::multiprecision::gcd(g, abs(det(ridx, cidx)));
            return;
        }
        for (int c = start; c < m.cols; ++c) {
            cidx.push_back(c);
            pick_cols(c + 1, depth + 1);
            cidx.pop_back();
        }
    };
    std::function<void(int, int)> pick_rows = [&](int start, int depth) {
        if (depth == k) {
            pick_cols(0, 0);
            return;
        }
        for (int r = start; r < m.rows; ++r) {
            ridx.push_back(r);
            pick_rows(r + 1, depth + 1);
            ridx.pop_back();
        }
    };
    pick_rows(0, 0);
    return g;
}

std::vector<Integer> smith_oracle(const IntMatrix& m) {
    std::vector<Integer> divisors;
    Integer prev = 1;
    for (int k = 1; k <= std::min(m.rows, m.cols); ++k) {
        Integer g = minor_gcd(m, k);
        if (g == 0) break;
        divisors.push_back(g / prev);
        prev = g;
    }
    return divisors;
}

}  // namespace

TEST_CASE("rref and solve_affine basics") {
    FpMatrix id(3, 2, 2);
    id.set(0, 0, 1);
    id.set(1, 1, 1);
    auto sol = solve_affine(id, {0, 0});
    REQUIRE(sol.has_value());
    REQUIRE(sol->particular == std::vector<int>{0, 0});
    REQUIRE(sol->kernel.empty());

    // x + y = 1 over F_3
    FpMatrix m(3, 1, 2);
    m.set(0, 0, 1);
    m.set(0, 1, 1);
    auto s = solve_affine(m, {1});
    REQUIRE(s.has_value());
    REQUIRE(s->particular == std::vector<int>{1, 0});
    REQUIRE(s->kernel.size() == 1);
    REQUIRE(s->kernel[0] == std::vector<int>{2, 1});  // (-1, 1)

    // inconsistent system
    FpMatrix z(3, 1, 2);
    REQUIRE_FALSE(solve_affine(z, {1}).has_value());
}

TEST_CASE("solve_affine verifies by substitution on random systems") {
    std::mt19937 rng(1234);
    std::uniform_int_distribution<int> entry(0, 2);
    for (int it = 0; it < 50; ++it) {
        FpMatrix m(3, 5, 5);
        for (auto& v : m.a) v = entry(rng);
        std::vector<int> b(5);
        for (auto& v : b) v = entry(rng);
        auto s = solve_affine(m, b);
        if (!s) continue;
        auto check = [&](const std::vector<int>& x, const std::vector<int>& rhs) {
            for (int i = 0; i < m.rows; ++i) {
                long long acc = 0;
                for (int j = 0; j < m.cols; ++j) acc += m.at(i, j) * x[j];
                REQUIRE(fp_norm(acc, 3) == rhs[i]);
            }
        };
        check(s->particular, b);
        for (auto& k : s->kernel) check(k, std::vector<int>(5, 0));
    }
}

TEST_CASE("smith_int on diagonal and family matrices") {
    IntMatrix d(3, 3);
    d.at(0, 0) = 3;
    d.at(1, 1) = 3;
    d.at(2, 2) = 3;
    auto r = smith_int(d);
    REQUIRE(r.divisors == std::vector<Integer>{3, 3, 3});
    REQUIRE(r.rank == 3);
}

TEST_CASE("smith_int divisibility chain and oracle agreement on random matrices") {
    std::mt19937 rng(555);
    std::uniform_int_distribution<int> entry(-6, 6);
    for (int it = 0; it < 60; ++it) {
        IntMatrix m(4, 4);
        for (auto& v : m.a) v = entry(rng);
        IntMatrix copy = m;
        auto r = smith_int(std::move(copy));
        for (size_t i = 1; i < r.divisors.size(); ++i)
            REQUIRE(r.divisors[i] % r.divisors[i - 1] == 0);
        REQUIRE(r.divisors == smith_oracle(m));
    }
}

TEST_CASE("smith_mod_pN examples") {
    // diag(p*u) with u a unit
    IntMatrix m(1, 1);
    m.at(0, 0) = 3 * 7;
    auto r = smith_mod_pN(m, 3, 10);
    REQUIRE(r.valuations == std::vector<unsigned>{1});
    REQUIRE_FALSE(r.saturated);

    // the V-bar relation coefficient p((1-q)^p - 1) for p = 3, q = 3:
    // 3 * ((-2)^3 - 1) = -27, valuation 3
    IntMatrix v(1, 1);
    v.at(0, 0) = 3 * (Integer(-8) - 1);
    REQUIRE(v.at(0, 0) == -27);
    auto rv = smith_mod_pN(v, 3, 10);
    REQUIRE(rv.valuations == std::vector<unsigned>{3});

    IntMatrix z(2, 3);
    auto rz = smith_mod_pN(z, 3, 10);
    REQUIRE(rz.valuations == std::vector<unsigned>{kValuationInfinity, kValuationInfinity});
    REQUIRE(rz.saturated);
    REQUIRE(rz.rank == 0);
}

TEST_CASE("smith_mod_pN matches p-parts of integer Smith divisors") {
    std::mt19937 rng(808);
    std::uniform_int_distribution<int> entry(-20, 20);
    for (int it = 0; it < 40; ++it) {
        IntMatrix m(4, 5);
        for (auto& v : m.a) v = entry(rng);
        IntMatrix copy = m;
        auto zi = smith_int(std::move(copy));
        auto zp = smith_mod_pN(m, 3, 20);
        if (zp.saturated) continue;  // valuations >= N are indistinguishable
        std::vector<unsigned> expected;
        for (auto& d : zi.divisors) expected.push_back(valuation(d, 3));
        std::sort(expected.begin(), expected.end());
        std::vector<unsigned> got = zp.valuations;
        std::sort(got.begin(), got.end());
        // zero divisors in the p-adic picture come from integer divisors only
        REQUIRE(got == expected);
    }
}

TEST_CASE("padic scalar arithmetic") {
    // inv(1-3) mod 3^5 = residue of -1/2 = 121
    auto s = padic_inv(Rational(1) - Rational(3), 3, 5);
    REQUIRE(s.residue() == 121);
    REQUIRE(mod_floor(Integer(-2) * 121, int_pow(Integer(3), 5)) == 1);

    REQUIRE(padic_inv(Rational(1), 3, 5).residue() == 1);

    // pow(1-q, p) - 1 for p=3, q=3, N=6: residue of -9
    auto t = PadicScalar::from_rational(Rational(1 - 3), 3, 6).pow(3) - PadicScalar(3, 6, 1);
    REQUIRE(t.residue() == mod_floor(Integer(-9), int_pow(Integer(3), 6)));

    REQUIRE_THROWS_AS(padic_inv(Rational(3), 3, 5), std::domain_error);
}
