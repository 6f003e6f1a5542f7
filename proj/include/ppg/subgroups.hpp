#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ppg/cohomology.hpp"
#include "ppg/presentations.hpp"
#include "ppg/smith.hpp"

namespace ppg {

// Index-p subgroup presentation from Reidemeister-Schreier rewriting along
// the transversal 1, t, ..., t^{p-1} for the first generator t with
// phi(t) != 0 (phi rescaled so phi(t) = 1). The Schreier generator for
// (coset h, generator g) is t^h g t^{-((h + phi(g)) mod p)}; the power
// generator is u = t^p.
struct SubgroupPresentation {
    Presentation parent;
    Character phi;  // rescaled
    int transversal_gen = 0;
    Presentation sub;
    std::vector<Word> parent_words;  // per subgroup generator, in the parent alphabet
};

// phi must be a homomorphism G -> F_p: it has to kill every relator.
inline bool character_valid(const Presentation& pres, const Character& phi) {
    for (auto& r : pres.relators) {
        auto sums = r.exponent_sums(pres.n_gens());
        long long acc = 0;
        for (int g = 0; g < pres.n_gens(); ++g)
            acc += (long long)phi.v[g] * fp_norm(sums[g], pres.p);
        if (fp_norm(acc, pres.p) != 0) return false;
    }
    return true;
}

// All index-p subgroups, one character per subgroup (first nonzero value
// normalized to 1), in lexicographic order with the first generator most
// significant. For a minimal presentation this is (p^n - 1)/(p - 1) entries.
inline std::vector<Character> enumerate_index_p(const Presentation& pres) {
    const int p = pres.p;
    const int n = pres.n_gens();
    std::vector<Character> out;
    Character c;
    c.v.assign(n, 0);
    while (true) {
        int i = n - 1;
        while (i >= 0 && c.v[i] == p - 1) c.v[i--] = 0;
        if (i < 0) break;
        ++c.v[i];
        int first = 0;
        while (first < n && c.v[first] == 0) ++first;
        if (c.v[first] != 1) continue;  // one representative per scalar class
        if (character_valid(pres, c)) out.push_back(c);
    }
    return out;
}

namespace detail {

inline std::string fresh_power_name(const std::vector<Generator>& gens) {
    auto taken = [&](const std::string& s) {
        for (auto& g : gens)
            if (g.name == s) return true;
        return false;
    };
    for (const char* cand : {"u", "v", "w", "s"})
        if (!taken(cand)) return cand;
    for (int i = 2;; ++i)
        if (!taken("u" + std::to_string(i))) return "u" + std::to_string(i);
    return "u";
}

}  // namespace detail

inline SubgroupPresentation rewrite_index_p(const Presentation& pres, Character phi) {
    const int p = pres.p;
    const int n = pres.n_gens();
    if ((int)phi.v.size() != n) throw std::invalid_argument("rewrite_index_p: bad character size");
    if (phi.is_zero()) throw std::invalid_argument("rewrite_index_p: phi must be nonzero");
    if (!character_valid(pres, phi))
        throw std::invalid_argument("rewrite_index_p: phi does not kill every relator");

    int t = 0;
    while (phi.v[t] == 0) ++t;
    int scale = fp_inv(phi.v[t], p);
    for (auto& x : phi.v) x = fp_mul(x, scale, p);

    SubgroupPresentation out;
    out.parent = pres;
    out.phi = phi;
    out.transversal_gen = t;
    out.sub.p = p;
    out.sub.name = pres.name + "_sub";

    // generator 0: u = t^p; then (g, h) for g != t in parent order, h = 0..p-1
    std::string uname = detail::fresh_power_name(pres.gens);
    out.sub.gens.push_back({uname, 0});
    out.parent_words.push_back(Word::generator(t, p));
    std::vector<std::vector<int>> table(n, std::vector<int>(p, -1));  // (g,h) -> sub index
    for (int g = 0; g < n; ++g) {
        if (g == t) continue;
        for (int h = 0; h < p; ++h) {
            int idx = (int)out.sub.gens.size();
            table[g][h] = idx;
            out.sub.gens.push_back({pres.gens[g].name + "_" + std::to_string(h), idx});
            Word w = Word::generator(t, h);
            w.push(g, 1);
            w.push(t, -mod_floor(h + phi.v[g], p));
            out.parent_words.push_back(w);
        }
    }

    auto rewrite = [&](const Word& w) -> Word {
        Word res;
        long long c = 0;  // current coset
        for (auto& [g, e] : w.syllables()) {
            if (g == t) {
                long long ei;
                if (abs(e) > 1000000) throw std::overflow_error("rewrite: t-exponent too large");
                ei = (long long)e;
                long long shifted = c + ei;
                long long wraps = shifted >= 0 ? shifted / p
                                               : -(((-shifted) + p - 1) / p);  // floor division
                if (wraps != 0) res.push(0, Integer(wraps));
                c = shifted - wraps * p;
            } else if (phi.v[g] == 0) {
                res.push(table[g][c], e);
            } else {
                if (abs(e) > 4096)
                    throw std::overflow_error("rewrite: exponent too large for phi(g) != 0");
                long long cnt = (long long)abs(e);
                int gamma = phi.v[g];
                for (long long i = 0; i < cnt; ++i) {
                    if (e > 0) {
                        res.push(table[g][c], 1);
                        c = mod_floor(c + gamma, p);
                    } else {
                        c = mod_floor(c - gamma, p);
                        res.push(table[g][c], -1);
                    }
                }
            }
        }
        if (c != 0) throw std::logic_error("rewrite: word does not lie in the subgroup");
        return res;
    };

    for (auto& r : pres.relators) {
        for (int h = 0; h < p; ++h) {
            Word conj = Word::generator(t, h) * r * Word::generator(t, -h);
            out.sub.relators.push_back(rewrite(conj));
        }
    }
    return out;
}

// Substitutes each subgroup generator by its parent word; freely reduced.
inline Word expand_to_parent(const Word& w, const std::vector<Word>& parent_words) {
    Word out;
    for (auto& [g, e] : w.syllables()) {
        Word piece = parent_words.at(g).pow(e);
        out.append(piece);
    }
    return out;
}

struct TowerPresentation {
    SubgroupPresentation first;   // index p in the root
    SubgroupPresentation second;  // index p in first.sub; index p^2 overall
    std::vector<Word> root_words; // second's generators as words in the root alphabet
};

inline TowerPresentation rewrite_tower(const Presentation& pres, const Character& phi1,
                                       const Character& phi2) {
    TowerPresentation tower;
    tower.first = rewrite_index_p(pres, phi1);
    tower.second = rewrite_index_p(tower.first.sub, phi2);
    for (auto& w : tower.second.parent_words)
        tower.root_words.push_back(expand_to_parent(w, tower.first.parent_words));
    return tower;
}

// Abelianization invariants from the Smith normal form of the relator
// exponent-sum matrix: Z_p-free rank plus the torsion divisors (> 1).
struct AbelianInvariants {
    int free_rank = 0;
    std::vector<Integer> torsion;   // divisors > 1, divisibility chain order
    std::vector<Integer> divisors;  // all nonzero Smith divisors
};

inline AbelianInvariants abelianization(const Presentation& pres) {
    IntMatrix m((int)pres.relators.size(), pres.n_gens());
    for (size_t r = 0; r < pres.relators.size(); ++r) {
        auto sums = pres.relators[r].exponent_sums(pres.n_gens());
        for (int g = 0; g < pres.n_gens(); ++g) m.at((int)r, g) = sums[g];
    }
    auto smith = smith_int(std::move(m));
    AbelianInvariants inv;
    inv.free_rank = pres.n_gens() - smith.rank;
    inv.divisors = smith.divisors;
    for (auto& d : smith.divisors)
        if (d > 1) inv.torsion.push_back(d);
    return inv;
}

inline AbelianInvariants abelianization(const SubgroupPresentation& sub) {
    return abelianization(sub.sub);
}

// theta evaluated on each Schreier generator's parent word (exact rationals).
inline Orientation restrict_orientation(const Orientation& theta,
                                        const SubgroupPresentation& sub) {
    Orientation out(theta.p);
    out.values.reserve(sub.parent_words.size());
    for (auto& w : sub.parent_words) {
        Rational v = theta.eval(w);
        Orientation::validate_value(v, theta.p);
        out.values.push_back(v);
    }
    return out;
}

}  // namespace ppg
