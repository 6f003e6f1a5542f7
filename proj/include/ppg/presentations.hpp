#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ppg/numbers.hpp"
#include "ppg/words.hpp"

namespace ppg {

enum class FamilyKind { Demushkin, F1, F2, ChainAmalgam };

inline const char* family_name(FamilyKind k) {
    switch (k) {
        case FamilyKind::Demushkin: return "demushkin";
        case FamilyKind::F1: return "f1";
        case FamilyKind::F2: return "f2";
        case FamilyKind::ChainAmalgam: return "chain";
    }
    return "?";
}

struct FamilyTag {
    FamilyKind kind;
    std::optional<int> k;  // nullopt encodes k = infinity (q = 0)
    int d = 0;
    int z1 = -1, z2 = -1;  // generator indices, F2 only
};

struct Presentation {
    int p = 3;
    std::vector<Generator> gens;
    std::vector<Word> relators;
    std::optional<FamilyTag> family;
    std::string name = "G";

    int n_gens() const { return (int)gens.size(); }

    int gen_index(const std::string& gname) const {
        for (auto& g : gens)
            if (g.name == gname) return g.index;
        throw std::invalid_argument("unknown generator '" + gname + "'");
    }

    Word word(const std::string& text) const { return parse_word(text, gens); }
};

// q = p^k, with the convention p^infinity = 0.
inline Integer family_q(int p, std::optional<int> k) {
    if (!k) return 0;
    if (*k < 1) throw std::invalid_argument("k must be >= 1 (or infinity)");
    return int_pow(Integer(p), (unsigned)*k);
}

// Orientation: map generator -> p-adic unit in 1+pZ_p (1+4Z_2 when p = 2),
// stored as exact rationals with p-unit denominator.
struct Orientation {
    int p = 3;
    std::vector<Rational> values;  // indexed by generator

    static void validate_value(const Rational& v, int p) {
        Integer num = boost::multiprecision::numerator(v);
        Integer den = boost::multiprecision::denominator(v);
        if (den % p == 0) throw std::domain_error("orientation value has p in denominator");
        int m = p == 2 ? 4 : p;
        if (mod_floor(num - den, Integer(m)) != 0)
            throw std::domain_error("orientation value not in 1+" + std::to_string(m == 4 ? 4 : p) +
                                    "Z_p");
    }

    static Orientation trivial(const Presentation& pres) {
        Orientation o;
        o.p = pres.p;
        o.values.assign(pres.gens.size(), Rational(1));
        return o;
    }

    Orientation(int p_ = 3) : p(p_) {}
    Orientation(int p_, std::vector<Rational> vals) : p(p_), values(std::move(vals)) {
        for (auto& v : values) validate_value(v, p);
    }

    bool is_trivial() const {
        for (auto& v : values)
            if (v != 1) return false;
        return true;
    }

    // theta evaluated on a word, as an exact rational.
    Rational eval(const Word& w) const {
        Rational r = 1;
        for (auto& [g, e] : w.syllables()) {
            Rational base = values.at(g);
            Integer n = abs(e);
            if (e < 0) base = 1 / base;
            Rational acc = 1;
            while (n > 0) {
                if ((n & 1) != 0) acc *= base;
                base *= base;
                n >>= 1;
            }
            r *= acc;
        }
        return r;
    }
};

inline void check_prime(int p) {
    if (!is_prime(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
}

// Interleaved alphabet x1,y1,...,xd,yd.
inline std::vector<Generator> xy_alphabet(int d) {
    std::vector<Generator> gens;
    for (int i = 1; i <= d; ++i) {
        gens.push_back({"x" + std::to_string(i), (int)gens.size()});
        gens.push_back({"y" + std::to_string(i), (int)gens.size()});
    }
    return gens;
}

namespace detail {

inline Word demushkin_relator(const Presentation& pres, const Integer& q, int d) {
    Word r;
    if (q != 0) r = Word::generator(0, q);  // x1^q
    for (int i = 0; i < d; ++i)
        r.append(commutator(Word::generator(2 * i), Word::generator(2 * i + 1)));
    return r;
}

}  // namespace detail

// x1^q [x1,y1]...[xd,yd] = 1 with the canonical orientation
// theta(y1) = (1-q)^{-1}, all other generators -> 1.
inline std::pair<Presentation, Orientation> make_demushkin(int p, std::optional<int> k, int d) {
    check_prime(p);
    if (d < 1) throw std::invalid_argument("demushkin: d >= 1 required");
    if (p == 2 && k && *k < 2)
        throw std::invalid_argument("demushkin: k >= 2 required when p = 2");
    Integer q = family_q(p, k);
    Presentation pres;
    pres.p = p;
    pres.gens = xy_alphabet(d);
    pres.relators.push_back(detail::demushkin_relator(pres, q, d));
    pres.family = FamilyTag{FamilyKind::Demushkin, k, d};
    pres.name = "demushkin";

    Orientation theta(p);
    theta.values.assign(pres.gens.size(), Rational(1));
    if (q != 0) theta.values[1] = Rational(1) / Rational(1 - q);  // y1 -> (1-q)^{-1}
    Orientation::validate_value(theta.values[1], p);
    return {pres, theta};
}

// [x1^q,y1][x2,y2]...[xd,yd] = 1, d >= 2, q = p^k finite (k >= 2 if p = 2).
inline Presentation make_f1(int p, int k, int d) {
    check_prime(p);
    if (d < 2) throw std::invalid_argument("f1: d >= 2 required");
    if (k < 1) throw std::invalid_argument("f1: finite k >= 1 required (q != 0)");
    if (p == 2 && k < 2) throw std::invalid_argument("f1: k >= 2 required when p = 2");
    Integer q = family_q(p, k);
    Presentation pres;
    pres.p = p;
    pres.gens = xy_alphabet(d);
    Word r = commutator(Word::generator(0, q), Word::generator(1));
    for (int i = 1; i < d; ++i)
        r.append(commutator(Word::generator(2 * i), Word::generator(2 * i + 1)));
    pres.relators.push_back(r);
    pres.family = FamilyTag{FamilyKind::F1, k, d};
    pres.name = "f1";
    return pres;
}

// Demushkin relator plus [z1,z2] = 1, with z1,z2 distinct generators not
// paired in a commutator of the first relator.
inline Presentation make_f2(int p, std::optional<int> k, int d, const std::string& z1name,
                            const std::string& z2name) {
    check_prime(p);
    if (d < 2) throw std::invalid_argument("f2: d >= 2 required");
    if (p == 2 && k && *k < 2) throw std::invalid_argument("f2: k >= 2 required when p = 2");
    Integer q = family_q(p, k);
    Presentation pres;
    pres.p = p;
    pres.gens = xy_alphabet(d);
    int z1 = pres.gen_index(z1name);
    int z2 = pres.gen_index(z2name);
    if (z1 == z2) throw std::invalid_argument("f2: z1 and z2 must be distinct");
    if (z1 / 2 == z2 / 2)
        throw std::invalid_argument("f2: {z1,z2} = {x_i,y_i} is excluded (paired generators)");
    pres.relators.push_back(detail::demushkin_relator(pres, q, d));
    pres.relators.push_back(commutator(Word::generator(z1), Word::generator(z2)));
    pres.family = FamilyTag{FamilyKind::F2, k, d, z1, z2};
    pres.name = "f2";
    return pres;
}

// [x1,y1] = [x2,y2] = ... = [xd,yd], d >= 3, each equality normalized to the
// relator [x1,y1][x_{i+1},y_{i+1}]^{-1}.
inline Presentation make_chain_amalgam(int p, int d) {
    check_prime(p);
    if (d < 3) throw std::invalid_argument("chain amalgam: d >= 3 required");
    Presentation pres;
    pres.p = p;
    pres.gens = xy_alphabet(d);
    Word c1 = commutator(Word::generator(0), Word::generator(1));
    for (int i = 1; i < d; ++i) {
        Word ci = commutator(Word::generator(2 * i), Word::generator(2 * i + 1));
        pres.relators.push_back(c1 * ci.inverse());
    }
    pres.family = FamilyTag{FamilyKind::ChainAmalgam, std::nullopt, d};
    pres.name = "chain";
    return pres;
}

struct MinimalityReport {
    bool minimal = true;
    std::string diagnostics;
};

// A presentation is minimal iff every relator lies in the Frattini subgroup
// of the free group, i.e. all exponent sums vanish mod p.
inline MinimalityReport validate_minimal(const Presentation& pres) {
    MinimalityReport rep;
    for (size_t r = 0; r < pres.relators.size(); ++r) {
        auto sums = pres.relators[r].exponent_sums(pres.n_gens());
        for (int g = 0; g < pres.n_gens(); ++g) {
            if (mod_floor(sums[g], Integer(pres.p)) != 0) {
                rep.minimal = false;
                std::ostringstream os;
                os << "relator " << r + 1 << " has exponent sum " << sums[g] << " on generator "
                   << pres.gens[g].name << " (not 0 mod " << pres.p << ")";
                if (!rep.diagnostics.empty()) rep.diagnostics += "; ";
                rep.diagnostics += os.str();
            }
        }
    }
    return rep;
}

}  // namespace ppg
