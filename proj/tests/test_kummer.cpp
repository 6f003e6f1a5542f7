#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "ppg/kummer.hpp"

using namespace ppg;

namespace {

// Letter-by-letter cocycle evaluation, independent of the affine-pair
// fast path: D(w g) = D(w) + theta(w) e_g, D(w g^{-1}) = D(w) - theta(w g^{-1}) e_g.
std::vector<Rational> cocycle_oracle(const Word& w, const Orientation& theta) {
    int n = (int)theta.values.size();
    std::vector<Rational> d(n, 0);
    Rational t = 1;
    for (auto& [g, e] : w.syllables()) {
        long long cnt = (long long)abs(e);
        for (long long i = 0; i < cnt; ++i) {
            if (e > 0) {
                d[g] += t;
                t *= theta.values[g];
            } else {
                t /= theta.values[g];
                d[g] -= t;
            }
        }
    }
    return d;
}

Character indicator(int n, int g) { return Character::dual(g, n); }

}  // namespace

TEST_CASE("twisted derivative of the Demushkin relator vanishes under the canonical theta") {
    for (auto params : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {5, 1}, {2, 2}}) {
        auto [dem, theta] = make_demushkin(params.first, params.second, 2);
        auto d = twisted_derivative_exact(dem.relators[0], theta);
        for (auto& q : d) REQUIRE(q == 0);
    }
}

TEST_CASE("twisted derivative basics") {
    auto [dem, theta] = make_demushkin(3, 1, 2);
    REQUIRE(twisted_derivative_exact(Word(), theta).size() == 4);
    for (auto& q : twisted_derivative_exact(Word(), theta)) REQUIRE(q == 0);

    // theta trivial: D(w) = exponent sums
    Orientation one = Orientation::trivial(dem);
    Word w = dem.word("x1^2 y1^-1 x2 y1 x1^-5");
    auto d = twisted_derivative_exact(w, one);
    auto sums = w.exponent_sums(4);
    for (int g = 0; g < 4; ++g) REQUIRE(d[g] == Rational(sums[g]));
}

TEST_CASE("cocycle identity on random words") {
    auto [dem, theta] = make_demushkin(3, 1, 2);
    std::mt19937 rng(31337);
    std::uniform_int_distribution<int> gen(0, 3), exp(-3, 3);
    auto rand_word = [&]() {
        Word w;
        for (int i = 0; i < 6; ++i) {
            int e = exp(rng);
            if (e == 0) e = 1;
            w.push(gen(rng), e);
        }
        return w;
    };
    for (int it = 0; it < 100; ++it) {
        Word u = rand_word(), v = rand_word();
        auto du = twisted_derivative_exact(u, theta);
        auto dv = twisted_derivative_exact(v, theta);
        auto duv = twisted_derivative_exact(u * v, theta);
        Rational tu = theta.eval(u);
        for (int g = 0; g < 4; ++g) REQUIRE(duv[g] == du[g] + tu * dv[g]);
        REQUIRE(twisted_derivative_exact(u, theta) == cocycle_oracle(u, theta));

        auto dinv = twisted_derivative_exact(u.inverse(), theta);
        Rational ti = 1 / tu;
        for (int g = 0; g < 4; ++g) REQUIRE(dinv[g] == -ti * du[g]);
    }
}

TEST_CASE("twisted_derivative mod p^N matches the exact values") {
    auto [dem, theta] = make_demushkin(3, 1, 2);
    Word w = dem.word("y1 x1 y1^-1 x2^3");
    auto exact = twisted_derivative_exact(w, theta);
    auto modded = twisted_derivative(w, theta, 8);
    Integer pN = int_pow(Integer(3), 8);
    for (int g = 0; g < 4; ++g) {
        Integer num = boost::multiprecision::numerator(exact[g]);
        Integer den = boost::multiprecision::denominator(exact[g]);
        REQUIRE(modded.d[g] == mod_floor(num * inv_mod(den, pN), pN));
    }
}

TEST_CASE("ktheta_module structure") {
    auto [dem, theta] = make_demushkin(3, 1, 2);
    auto mod = ktheta_module(dem, theta, 20);
    REQUIRE(mod.g0.has_value());
    REQUIRE(*mod.g0 == 1);  // y1 is the only generator with theta != 1
    REQUIRE(mod.m0.size() == 3);
    REQUIRE(mod.w.size() == 1);
    for (auto& x : mod.w[0]) REQUIRE(x == 0);  // D(relator) = 0

    // trivial theta: M0 is the full space, W the exponent-sum rows
    Presentation f1 = make_f1(3, 1, 2);
    auto mod1 = ktheta_module(f1, Orientation::trivial(f1), 10);
    REQUIRE_FALSE(mod1.g0.has_value());
    REQUIRE(mod1.m0.size() == 4);
}

TEST_CASE("Kummerian verdicts on the paper's positive controls") {
    // (Demushkin, canonical theta) is Kummerian via exact D(r) = 0
    auto [dem, theta] = make_demushkin(3, 1, 2);
    auto v = is_kummerian(dem, theta, 20);
    REQUIRE(v.status == KummerStatus::Kummerian);
    REQUIRE(v.exact);

    // the F2 subgroup U = ker(z2 -> 1) with the restricted candidate
    Presentation f2 = make_f2(3, 1, 2, "x1", "x2");
    auto cand = candidate_orientation(f2);
    REQUIRE(cand.theta.has_value());
    auto u = rewrite_index_p(f2, indicator(4, 2));
    auto vu = is_kummerian(u.sub, restrict_orientation(*cand.theta, u), 20);
    REQUIRE(vu.status == KummerStatus::Kummerian);
}

TEST_CASE("trivial theta agrees with abelianization torsion") {
    std::mt19937 rng(2025);
    std::uniform_int_distribution<int> ngen(2, 4), nrel(1, 2), len(1, 6), exp(-2, 2);
    int checked = 0;
    for (int it = 0; it < 200; ++it) {
        int p = (it % 2) ? 3 : 5;
        Presentation pres;
        pres.p = p;
        int n = ngen(rng);
        for (int i = 0; i < n; ++i) pres.gens.push_back({"g" + std::to_string(i + 1), i});
        int r = nrel(rng);
        std::uniform_int_distribution<int> gen(0, n - 1);
        for (int i = 0; i < r; ++i) {
            Word w;
            int L = len(rng);
            for (int j = 0; j < L; ++j) {
                int e = exp(rng);
                if (e == 0) e = 1;
                w.push(gen(rng), e);
            }
            if (w.is_identity()) w = Word::generator(0, p);
            pres.relators.push_back(w);
        }
        auto verdict = is_kummerian(pres, Orientation::trivial(pres), 20);
        REQUIRE(verdict.exact);
        bool p_torsion = false;
        for (auto& d : abelianization(pres).torsion)
            if (d % p == 0) p_torsion = true;
        REQUIRE((verdict.status == KummerStatus::NotKummerian) == p_torsion);
        ++checked;
    }
    REQUIRE(checked == 200);
}

TEST_CASE("F1 with trivial theta: the y1 kernel is a torsion witness") {
    Presentation f1 = make_f1(3, 1, 2);
    auto u = rewrite_index_p(f1, indicator(4, 1));
    auto v = is_kummerian(u.sub, Orientation::trivial(u.sub), 20);
    REQUIRE(v.status == KummerStatus::NotKummerian);
    REQUIRE(v.witness_valuation == 1);  // torsion (Z/3)^2
    REQUIRE(v.torsion_valuations == std::vector<unsigned>{1, 1});
    REQUIRE_FALSE(v.witness_combination.empty());
}

TEST_CASE("candidate orientations per family") {
    Presentation f1 = make_f1(3, 1, 2);
    auto c1 = candidate_orientation(f1);
    REQUIRE(c1.theta.has_value());
    REQUIRE(c1.theta->is_trivial());

    Presentation f2 = make_f2(3, 1, 2, "x1", "x2");
    auto c2 = candidate_orientation(f2);
    REQUIRE(c2.theta.has_value());
    REQUIRE(c2.theta->values[1] == Rational(-1, 2));

    Presentation f2bad = make_f2(3, 1, 2, "y1", "x2");
    auto cbad = candidate_orientation(f2bad);
    REQUIRE_FALSE(cbad.theta.has_value());

    Presentation chain = make_chain_amalgam(3, 3);
    REQUIRE_FALSE(candidate_orientation(chain).theta.has_value());

    Presentation untagged;
    untagged.p = 3;
    untagged.gens = xy_alphabet(1);
    REQUIRE_THROWS_AS(candidate_orientation(untagged), std::invalid_argument);
}

TEST_CASE("F2 paper chain: U then V is not Kummerian") {
    Presentation f2 = make_f2(3, 1, 2, "x1", "x2");
    auto cand = candidate_orientation(f2);
    auto u = rewrite_index_p(f2, indicator(4, 2));  // z2 = x2 -> 1
    Orientation thetaU = restrict_orientation(*cand.theta, u);

    Character phiV;
    phiV.v.assign(10, 0);
    for (int i = 0; i < 10; ++i)
        if (u.sub.gens[i].name.rfind("y1_", 0) == 0) phiV.v[i] = 1;  // t1(h) -> 1
    auto v = rewrite_index_p(u.sub, phiV);
    Orientation thetaV = restrict_orientation(thetaU, v);

    // exactly one generator of V has theta != 1 beyond the wrap copies
    int nontrivial = 0;
    for (auto& val : thetaV.values)
        if (val != 1) ++nontrivial;
    REQUIRE(nontrivial >= 1);

    auto verdict = is_kummerian(v.sub, thetaV, 20);
    REQUIRE(verdict.status == KummerStatus::NotKummerian);
    REQUIRE(verdict.exact);
    // z1 = x1 here, so the cyclic relations are dependent and the torsion is
    // (Z/3)^2: witness valuation 1.
    REQUIRE(verdict.torsion_valuations == std::vector<unsigned>{1, 1});
    REQUIRE(verdict.witness_valuation == 1);
}

TEST_CASE("F2 with z1 != x1 (d = 3) reproduces the p((1-q)^p - 1) witness valuation") {
    // z1 = x2 pairs outside the x1^q factor: the V-bar relation collapses to
    // z1^{p((1-q)^p-1)} and the largest torsion divisor has valuation
    // v_3(3((1-3)^3-1)) = 3.
    Presentation f2 = make_f2(3, 1, 3, "x2", "x3");
    auto cand = candidate_orientation(f2);
    REQUIRE(cand.theta.has_value());
    auto u = rewrite_index_p(f2, indicator(6, 4));  // z2 = x3 -> 1
    Orientation thetaU = restrict_orientation(*cand.theta, u);

    Character phiV;
    phiV.v.assign(u.sub.n_gens(), 0);
    for (int i = 0; i < u.sub.n_gens(); ++i)
        if (u.sub.gens[i].name.rfind("y2_", 0) == 0) phiV.v[i] = 1;  // t1 = y2
    REQUIRE(character_valid(u.sub, phiV));
    auto v = rewrite_index_p(u.sub, phiV);
    Orientation thetaV = restrict_orientation(thetaU, v);

    auto verdict = is_kummerian(v.sub, thetaV, 20);
    REQUIRE(verdict.status == KummerStatus::NotKummerian);
    REQUIRE(verdict.witness_valuation == 3);
}

TEST_CASE("cyclotomicity search refutes F1 at depth 1") {
    Presentation f1 = make_f1(3, 1, 2);
    auto report = cyclotomicity_search(f1, Orientation::trivial(f1), 1, 20, 2);
    REQUIRE(report.status == CycloStatus::NotCyclotomic);
    REQUIRE(report.witness.has_value());
    REQUIRE(report.witness->chain.size() == 1);
    REQUIRE(report.witness->verdict.witness_valuation >= 1);
}

TEST_CASE("cyclotomicity search refutes F2 at depth 2") {
    Presentation f2 = make_f2(3, 1, 2, "x1", "x2");
    auto cand = candidate_orientation(f2);
    auto report = cyclotomicity_search(f2, *cand.theta, 2, 20, 2);
    REQUIRE(report.status == CycloStatus::NotCyclotomic);
    REQUIRE(report.witness.has_value());
    REQUIRE(report.witness->chain.size() == 2);
}

TEST_CASE("monotonicity in precision for a p-adic-path verdict") {
    // Force the mod-p^N fallback with a tiny bit budget.
    Presentation f2 = make_f2(3, 1, 3, "x2", "x3");
    auto cand = candidate_orientation(f2);
    auto u = rewrite_index_p(f2, indicator(6, 4));
    Orientation thetaU = restrict_orientation(*cand.theta, u);
    Character phiV;
    phiV.v.assign(u.sub.n_gens(), 0);
    for (int i = 0; i < u.sub.n_gens(); ++i)
        if (u.sub.gens[i].name.rfind("y2_", 0) == 0) phiV.v[i] = 1;
    auto v = rewrite_index_p(u.sub, phiV);
    Orientation thetaV = restrict_orientation(thetaU, v);

    auto v10 = is_kummerian(v.sub, thetaV, 10, 1);  // bit budget 1: p-adic path
    auto v20 = is_kummerian(v.sub, thetaV, 20, 1);
    REQUIRE_FALSE(v10.exact);
    REQUIRE(v10.status == KummerStatus::NotKummerian);
    REQUIRE(v20.status == KummerStatus::NotKummerian);
    REQUIRE(v10.witness_valuation == v20.witness_valuation);
}
