#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ppg/padic.hpp"
#include "ppg/parallel.hpp"
#include "ppg/presentations.hpp"
#include "ppg/smith.hpp"
#include "ppg/subgroups.hpp"

namespace ppg {

// ---- theta-twisted derivative ----------------------------------------------
//
// The affine model of F/K_theta(F): a generator g maps to the pair
// (theta(g), e_g) with composition (u,a)(v,b) = (uv, a + u*b). The second
// component D satisfies D(x_i) = e_i, D(uv) = D(u) + theta(u) D(v) and
// D(u^{-1}) = -theta(u)^{-1} D(u).

class BitBudgetExceeded : public std::runtime_error {
  public:
    BitBudgetExceeded() : std::runtime_error("exact derivative exceeded the bit budget") {}
};

namespace detail {

struct RatAffine {
    Rational t;
    std::vector<Rational> d;

    static RatAffine identity(int n) { return {Rational(1), std::vector<Rational>(n, 0)}; }

    RatAffine compose(const RatAffine& o) const {
        RatAffine r;
        r.t = t * o.t;
        r.d.resize(d.size());
        for (size_t i = 0; i < d.size(); ++i) r.d[i] = d[i] + t * o.d[i];
        return r;
    }

    RatAffine inverse() const {
        RatAffine r;
        r.t = 1 / t;
        r.d.resize(d.size());
        for (size_t i = 0; i < d.size(); ++i) r.d[i] = -r.t * d[i];
        return r;
    }

    RatAffine pow(Integer e) const {
        if (e < 0) return inverse().pow(-e);
        RatAffine acc = identity((int)d.size());
        RatAffine base = *this;
        while (e > 0) {
            if ((e & 1) != 0) acc = acc.compose(base);
            base = base.compose(base);
            e >>= 1;
        }
        return acc;
    }

    size_t bits() const {
        size_t b = boost::multiprecision::msb(abs(boost::multiprecision::numerator(t)) + 1) +
                   boost::multiprecision::msb(boost::multiprecision::denominator(t));
        for (auto& x : d)
            if (x != 0)
                b = std::max(b, (size_t)(boost::multiprecision::msb(
                                             abs(boost::multiprecision::numerator(x)) + 1) +
                                         boost::multiprecision::msb(
                                             boost::multiprecision::denominator(x))));
        return b;
    }
};

inline constexpr size_t kDefaultBitBudget = 1u << 20;

}  // namespace detail

// Exact rational affine pair (theta(w), D(w)); throws BitBudgetExceeded when
// intermediate rationals grow past the budget.
inline detail::RatAffine twisted_pair_exact(const Word& w, const Orientation& theta,
                                            size_t bit_budget = detail::kDefaultBitBudget) {
    int n = (int)theta.values.size();
    detail::RatAffine acc = detail::RatAffine::identity(n);
    for (auto& [g, e] : w.syllables()) {
        detail::RatAffine gen;
        gen.t = theta.values.at(g);
        gen.d.assign(n, 0);
        gen.d[g] = 1;
        acc = acc.compose(gen.pow(e));
        if (acc.bits() > bit_budget) throw BitBudgetExceeded();
    }
    return acc;
}

inline std::vector<Rational> twisted_derivative_exact(const Word& w, const Orientation& theta,
                                                      size_t bit_budget =
                                                          detail::kDefaultBitBudget) {
    return twisted_pair_exact(w, theta, bit_budget).d;
}

// Spec-facing form: the derivative computed in (Z/p^N)^n with residue
// arithmetic throughout (no intermediate rational growth).
struct TwistedDerivative {
    int p = 3;
    unsigned N = 20;
    std::vector<Integer> d;  // residues mod p^N
};

namespace detail {

struct ModAffine {
    Integer t;
    std::vector<Integer> d;

    static ModAffine identity(int n) { return {Integer(1), std::vector<Integer>(n, 0)}; }

    ModAffine compose(const ModAffine& o, const Integer& mod) const {
        ModAffine r;
        r.t = mod_floor(t * o.t, mod);
        r.d.resize(d.size());
        for (size_t i = 0; i < d.size(); ++i) r.d[i] = mod_floor(d[i] + t * o.d[i], mod);
        return r;
    }

    ModAffine inverse(const Integer& mod) const {
        ModAffine r;
        r.t = inv_mod(t, mod);
        r.d.resize(d.size());
        for (size_t i = 0; i < d.size(); ++i) r.d[i] = mod_floor(-r.t * d[i], mod);
        return r;
    }

    ModAffine pow(Integer e, const Integer& mod) const {
        if (e < 0) return inverse(mod).pow(-e, mod);
        ModAffine acc = identity((int)d.size());
        ModAffine base = *this;
        while (e > 0) {
            if ((e & 1) != 0) acc = acc.compose(base, mod);
            base = base.compose(base, mod);
            e >>= 1;
        }
        return acc;
    }
};

}  // namespace detail

inline TwistedDerivative twisted_derivative(const Word& w, const Orientation& theta, unsigned N) {
    TwistedDerivative out;
    out.p = theta.p;
    out.N = N;
    int n = (int)theta.values.size();
    Integer mod = int_pow(Integer(theta.p), N);
    std::vector<Integer> tvals;
    for (auto& q : theta.values) {
        Integer num = boost::multiprecision::numerator(q);
        Integer den = boost::multiprecision::denominator(q);
        tvals.push_back(mod_floor(num * inv_mod(den, mod), mod));
    }
    detail::ModAffine acc = detail::ModAffine::identity(n);
    for (auto& [g, e] : w.syllables()) {
        detail::ModAffine gen;
        gen.t = tvals.at(g);
        gen.d.assign(n, 0);
        gen.d[g] = 1;
        acc = acc.compose(gen.pow(e, mod), mod);
    }
    out.d = std::move(acc.d);
    return out;
}

// ---- K_theta module model ----------------------------------------------------

// Generators of M_0 = D-image of ker(theta) inside (Z/p^N)^n, and the rows W
// spanned by the relator derivatives. Ker(theta)/K_theta(G) is modeled by
// M_0 / W. The distinguished generator g0 minimizes v_p(theta(g) - 1); when
// theta is trivial there is no g0 and M_0 is the full space.
struct KThetaModule {
    std::optional<int> g0;
    std::vector<Integer> c;                  // c_i with theta(g_i) = theta(g0)^{c_i} mod p^N
    std::vector<std::vector<Integer>> m0;    // D(h_i) rows, h_i = g_i g0^{-c_i}
    std::vector<std::vector<Integer>> w;     // D(r) rows
};

namespace detail {

// Discrete log in 1 + p^v Z / p^N: c with base^c = x mod p^N.
inline Integer padic_dlog(const Integer& base, const Integer& x, int p, unsigned N) {
    Integer mod = int_pow(Integer(p), N);
    if (mod_floor(base - 1, Integer(p == 2 ? 4 : p)) != 0)
        throw std::domain_error("padic_dlog: base not a principal unit");
    unsigned v0 = (base == 1) ? N : valuation(Integer(base - 1), Integer(p));
    if (v0 >= N) {
        if (mod_floor(x - 1, mod) != 0) throw std::domain_error("padic_dlog: unsolvable");
        return 0;
    }
    Integer u0 = (base - 1) / int_pow(Integer(p), v0);
    Integer c = 0;
    for (int guard = 0; guard < (int)N + 2; ++guard) {
        // err = x * base^{-c}
        Integer bc = 1, bb = mod_floor(base, mod), e = c;
        bool neg = e < 0;
        if (neg) e = -e;
        while (e > 0) {
            if ((e & 1) != 0) bc = mod_floor(bc * bb, mod);
            bb = mod_floor(bb * bb, mod);
            e >>= 1;
        }
        if (neg) bc = inv_mod(bc, mod);
        Integer err = mod_floor(x * inv_mod(bc, mod), mod);
        if (err == 1) return c;
        unsigned v = valuation(Integer(err - 1), Integer(p));
        if (v >= N) return c;
        if (v < v0) throw std::domain_error("padic_dlog: unsolvable at this precision");
        Integer w = mod_floor((err - 1) / int_pow(Integer(p), v), Integer(p));
        Integer digit = mod_floor(w * inv_mod(u0, Integer(p)), Integer(p));
        c += digit * int_pow(Integer(p), v - v0);
    }
    throw std::logic_error("padic_dlog: no convergence");
}

}  // namespace detail

inline KThetaModule ktheta_module(const Presentation& pres, const Orientation& theta,
                                  unsigned N) {
    int n = pres.n_gens();
    KThetaModule mod;
    Integer pN = int_pow(Integer(pres.p), N);

    unsigned best = kValuationInfinity;
    for (int g = 0; g < n; ++g) {
        Rational diff = theta.values[g] - 1;
        if (diff == 0) continue;
        unsigned v = valuation(diff, Integer(pres.p));
        if (v < best) {
            best = v;
            mod.g0 = g;
        }
    }

    if (mod.g0) {
        unsigned v0 = valuation(theta.values[*mod.g0] - 1, Integer(pres.p));
        unsigned Next = N + v0;  // extended precision so lambda is good mod p^N
        Integer pNext = int_pow(Integer(pres.p), Next);
        auto reduce_ext = [&](const Rational& q) {
            Integer num = boost::multiprecision::numerator(q);
            Integer den = boost::multiprecision::denominator(q);
            return mod_floor(num * inv_mod(den, pNext), pNext);
        };
        Integer t0 = reduce_ext(theta.values[*mod.g0]);
        Integer unit = (t0 - 1) / int_pow(Integer(pres.p), v0);
        for (int g = 0; g < n; ++g) {
            if (g == *mod.g0) {
                mod.c.push_back(1);
                continue;
            }
            Integer ci = detail::padic_dlog(t0, reduce_ext(theta.values[g]), pres.p, Next);
            mod.c.push_back(mod_floor(ci, pN));
            // lambda_i = (t0^{c_i} - 1)/(t0 - 1) = ((t0^{c_i} - 1)/p^{v0}) * unit^{-1}
            Integer powc = 1, bb = t0, e = ci;
            while (e > 0) {
                if ((e & 1) != 0) powc = mod_floor(powc * bb, pNext);
                bb = mod_floor(bb * bb, pNext);
                e >>= 1;
            }
            Integer lambda =
                mod_floor(((powc - 1) / int_pow(Integer(pres.p), v0)) * inv_mod(unit, pN), pN);
            std::vector<Integer> row(n, 0);
            row[g] = 1;
            row[*mod.g0] = mod_floor(-lambda, pN);
            mod.m0.push_back(std::move(row));
        }
    } else {
        for (int g = 0; g < n; ++g) {
            std::vector<Integer> row(n, 0);
            row[g] = 1;
            mod.m0.push_back(std::move(row));
        }
    }

    for (auto& r : pres.relators) {
        // theta(r) = prod theta(g)^{s_g} must be 1; checked at precision p^N.
        auto sums = r.exponent_sums(n);
        Integer tr = 1;
        for (int g = 0; g < n; ++g) {
            Integer num = boost::multiprecision::numerator(theta.values[g]);
            Integer den = boost::multiprecision::denominator(theta.values[g]);
            Integer base = mod_floor(num * inv_mod(den, pN), pN);
            Integer e = sums[g];
            if (e < 0) {
                base = inv_mod(base, pN);
                e = -e;
            }
            while (e > 0) {
                if ((e & 1) != 0) tr = mod_floor(tr * base, pN);
                base = mod_floor(base * base, pN);
                e >>= 1;
            }
        }
        if (tr != 1)
            throw std::domain_error("ktheta_module: theta does not kill relator (" +
                                    r.str(pres.gens) + ")");
        auto d = twisted_derivative(r, theta, N);
        mod.w.push_back(d.d);
    }
    return mod;
}

// ---- Kummerian verdicts ------------------------------------------------------

enum class KummerStatus { Kummerian, NotKummerian, Inconclusive };

inline const char* to_string(KummerStatus s) {
    switch (s) {
        case KummerStatus::Kummerian: return "KUMMERIAN";
        case KummerStatus::NotKummerian: return "NOT_KUMMERIAN";
        case KummerStatus::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

struct KummerVerdict {
    KummerStatus status = KummerStatus::Inconclusive;
    // Finite torsion valuations of Ker(theta)/K_theta (ascending); the
    // witness valuation is the largest one (torsion exponent p^e).
    std::vector<unsigned> torsion_valuations;
    unsigned witness_valuation = 0;
    // For NOT_KUMMERIAN: the combination of relators producing the witness
    // divisor (relator index, integer coefficient).
    std::vector<std::pair<int, Integer>> witness_combination;
    std::string reason;
    bool exact = false;  // true when no precision ceiling applies
};

namespace detail {

// Exact verdict path: relator derivatives as exact rationals, g0 column
// dropped (the projection of M_0 onto the remaining coordinates is an
// isomorphism), rows scaled by p-unit denominators, then integer Smith.
inline KummerVerdict kummer_exact(const Presentation& pres, const Orientation& theta,
                                  size_t bit_budget) {
    int n = pres.n_gens();
    std::optional<int> g0;
    unsigned best = kValuationInfinity;
    for (int g = 0; g < n; ++g) {
        Rational diff = theta.values[g] - 1;
        if (diff == 0) continue;
        unsigned v = valuation(diff, Integer(pres.p));
        if (v < best) {
            best = v;
            g0 = g;
        }
    }

    std::vector<std::vector<Rational>> rows;
    bool all_zero = true;
    for (auto& r : pres.relators) {
        if (theta.eval(r) != 1)
            throw std::domain_error("is_kummerian: theta does not kill relator (" +
                                    r.str(pres.gens) + ")");
        auto d = twisted_derivative_exact(r, theta, bit_budget);
        for (auto& q : d)
            if (q != 0) all_zero = false;
        rows.push_back(std::move(d));
    }

    KummerVerdict verdict;
    verdict.exact = true;
    if (all_zero) {
        verdict.status = KummerStatus::Kummerian;
        verdict.reason = "all relator derivatives vanish exactly";
        return verdict;
    }

    int cols = g0 ? n - 1 : n;
    IntMatrix m((int)rows.size(), cols);
    for (size_t i = 0; i < rows.size(); ++i) {
        Integer lcm = 1;
        for (int g = 0; g < n; ++g) {
            if (g0 && g == *g0) continue;
            lcm = boost::multiprecision::lcm(lcm,
                                             boost::multiprecision::denominator(rows[i][g]));
        }
        int j = 0;
        for (int g = 0; g < n; ++g) {
            if (g0 && g == *g0) continue;
            Rational scaled = rows[i][g] * lcm;
            m.at((int)i, j++) = boost::multiprecision::numerator(scaled);
        }
    }
    auto smith = smith_int(std::move(m));
    std::vector<unsigned> vals;
    int witness_row = -1;
    for (int i = 0; i < smith.rank; ++i) {
        unsigned v = valuation(smith.divisors[i], Integer(pres.p));
        if (v > 0) {
            vals.push_back(v);
            witness_row = i;
        }
    }
    if (vals.empty()) {
        verdict.status = KummerStatus::Kummerian;
        verdict.reason = "quotient module is torsion-free (exact Smith divisors are units)";
        return verdict;
    }
    verdict.status = KummerStatus::NotKummerian;
    verdict.torsion_valuations = vals;
    verdict.witness_valuation = vals.back();
    for (int j = 0; j < smith.left.cols; ++j)
        if (smith.left.at(witness_row, j) != 0)
            verdict.witness_combination.emplace_back(j, smith.left.at(witness_row, j));
    verdict.reason = "torsion divisor of valuation " + std::to_string(verdict.witness_valuation);
    return verdict;
}

// Precision-limited fallback; saturation downgrades to INCONCLUSIVE.
inline KummerVerdict kummer_mod_pN(const Presentation& pres, const Orientation& theta,
                                   unsigned N) {
    KThetaModule mod = ktheta_module(pres, theta, N);
    int n = pres.n_gens();
    int cols = mod.g0 ? n - 1 : n;
    IntMatrix m((int)mod.w.size(), cols);
    for (size_t i = 0; i < mod.w.size(); ++i) {
        int j = 0;
        for (int g = 0; g < n; ++g) {
            if (mod.g0 && g == *mod.g0) continue;
            m.at((int)i, j++) = mod.w[i][g];
        }
    }
    auto smith = smith_mod_pN(std::move(m), pres.p, N);
    KummerVerdict verdict;
    std::vector<unsigned> vals;
    for (unsigned v : smith.valuations)
        if (v != kValuationInfinity && v > 0) vals.push_back(v);
    if (!vals.empty()) {
        verdict.status = KummerStatus::NotKummerian;
        verdict.torsion_valuations = vals;
        verdict.witness_valuation = vals.back();
        verdict.reason = "torsion divisor of valuation " +
                         std::to_string(verdict.witness_valuation) + " at precision " +
                         std::to_string(N);
        return verdict;
    }
    if (smith.saturated) {
        verdict.status = KummerStatus::Inconclusive;
        verdict.reason = "saturated pivot at precision p^" + std::to_string(N) +
                         ": torsion of exponent >= p^N is indistinguishable from 0";
        return verdict;
    }
    verdict.status = KummerStatus::Kummerian;
    verdict.reason = "quotient module torsion-free at precision p^" + std::to_string(N);
    return verdict;
}

}  // namespace detail

inline KummerVerdict is_kummerian(const Presentation& pres, const Orientation& theta,
                                  unsigned N = 20,
                                  size_t bit_budget = detail::kDefaultBitBudget) {
    try {
        return detail::kummer_exact(pres, theta, bit_budget);
    } catch (const BitBudgetExceeded&) {
        return detail::kummer_mod_pN(pres, theta, N);
    }
}

// ---- candidate orientations -----------------------------------------------

struct CandidateOrientation {
    std::optional<Orientation> theta;
    std::string note;
};

// The only orientation that could make the tagged family 1-cyclotomic:
// trivial for F1, the canonical Demushkin orientation (pulled back for F2,
// provided z1, z2 != y1), canonical for Demushkin itself.
inline CandidateOrientation candidate_orientation(const Presentation& pres) {
    if (!pres.family) throw std::invalid_argument("candidate_orientation: untagged presentation");
    const FamilyTag& tag = *pres.family;
    CandidateOrientation out;
    switch (tag.kind) {
        case FamilyKind::F1:
            out.theta = Orientation::trivial(pres);
            out.note = "orientation must be constantly 1";
            return out;
        case FamilyKind::Demushkin: {
            out.theta = Orientation::trivial(pres);
            Integer q = family_q(pres.p, tag.k);
            if (q != 0) out.theta->values[1] = Rational(1) / Rational(1 - q);
            out.note = "canonical orientation theta(y1) = (1-q)^{-1}";
            return out;
        }
        case FamilyKind::F2: {
            if (tag.z1 == 1 || tag.z2 == 1) {
                out.note = "no candidate: z1, z2 = y1 is impossible for a 1-cyclotomic "
                           "completion";
                return out;
            }
            out.theta = Orientation::trivial(pres);
            Integer q = family_q(pres.p, tag.k);
            if (q != 0) out.theta->values[1] = Rational(1) / Rational(1 - q);
            out.note = "pullback of the canonical orientation of the Demushkin cover";
            return out;
        }
        case FamilyKind::ChainAmalgam:
            out.note = "no distinguished candidate known for the chain amalgam";
            return out;
    }
    return out;
}

// ---- bounded-depth 1-cyclotomicity refuter ---------------------------------

enum class CycloStatus { NotCyclotomic, NoWitnessToDepth, Partial };

inline const char* to_string(CycloStatus s) {
    switch (s) {
        case CycloStatus::NotCyclotomic: return "NOT_1-CYCLOTOMIC";
        case CycloStatus::NoWitnessToDepth: return "NO-WITNESS-TO-DEPTH";
        case CycloStatus::Partial: return "PARTIAL";
    }
    return "?";
}

struct WitnessChain {
    std::vector<Character> chain;  // characters along the subgroup chain (may be empty)
    KummerVerdict verdict;
};

struct CyclotomicityReport {
    CycloStatus status = CycloStatus::NoWitnessToDepth;
    std::optional<WitnessChain> witness;
    size_t subgroups_checked = 0;
    size_t inconclusive = 0;
    std::vector<std::string> inconclusive_chains;
    bool capped = false;
};

// Breadth-first scan of all subgroup chains of index p^m, m <= depth. Returns
// the first NOT_KUMMERIAN witness in deterministic (depth, index) order; a
// clean sweep is reported as NO-WITNESS-TO-DEPTH, never as a positive
// certificate. max_nodes caps the total number of Kummer tests.
inline CyclotomicityReport cyclotomicity_search(const Presentation& pres,
                                                const Orientation& theta, int depth,
                                                unsigned N = 20, int jobs = 1,
                                                size_t max_nodes = 5000000) {
    CyclotomicityReport report;

    auto note_verdict = [&](const KummerVerdict& v, const std::vector<Character>& chain)
        -> bool {
        ++report.subgroups_checked;
        if (v.status == KummerStatus::NotKummerian) {
            report.status = CycloStatus::NotCyclotomic;
            report.witness = WitnessChain{chain, v};
            return true;
        }
        if (v.status == KummerStatus::Inconclusive) {
            ++report.inconclusive;
            std::string desc;
            for (auto& c : chain) desc += "[" + c.str() + "]";
            report.inconclusive_chains.push_back(desc.empty() ? "(root)" : desc);
        }
        return false;
    };

    if (note_verdict(is_kummerian(pres, theta, N), {})) return report;
    if (depth < 1) return report;

    auto level1 = enumerate_index_p(pres);
    std::vector<SubgroupPresentation> subs(level1.size());
    std::vector<Orientation> thetas(level1.size());
    std::vector<KummerVerdict> verdicts(level1.size());
    parallel_for(level1.size(), jobs, [&](size_t i) {
        subs[i] = rewrite_index_p(pres, level1[i]);
        thetas[i] = restrict_orientation(theta, subs[i]);
        verdicts[i] = is_kummerian(subs[i].sub, thetas[i], N);
    });
    for (size_t i = 0; i < level1.size(); ++i)
        if (note_verdict(verdicts[i], {level1[i]})) return report;
    if (depth < 2) return report;

    size_t nodes = report.subgroups_checked;
    for (size_t i = 0; i < level1.size(); ++i) {
        auto level2 = enumerate_index_p(subs[i].sub);
        if (nodes + level2.size() > max_nodes) {
            report.capped = true;
            report.status = CycloStatus::Partial;
            return report;
        }
        nodes += level2.size();
        std::vector<KummerVerdict> v2(level2.size());
        parallel_for(level2.size(), jobs, [&](size_t j) {
            auto sub2 = rewrite_index_p(subs[i].sub, level2[j]);
            Orientation th2 = restrict_orientation(thetas[i], sub2);
            v2[j] = is_kummerian(sub2.sub, th2, N);
        });
        for (size_t j = 0; j < level2.size(); ++j)
            if (note_verdict(v2[j], {level1[i], level2[j]})) return report;
    }
    return report;
}

}  // namespace ppg
