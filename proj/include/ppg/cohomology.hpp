#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ppg/linalg.hpp"
#include "ppg/magnus.hpp"
#include "ppg/presentations.hpp"

namespace ppg {

// Element of H^1(G) = Hom(G, F_p) as a vector of values on the generators.
struct Character {
    std::vector<int> v;

    int operator()(int gen) const { return v.at(gen); }
    bool is_zero() const {
        for (int x : v)
            if (x) return false;
        return true;
    }
    bool operator==(const Character& o) const { return v == o.v; }
    bool operator<(const Character& o) const { return v < o.v; }

    static Character dual(int gen, int n) {
        Character c;
        c.v.assign(n, 0);
        c.v[gen] = 1;
        return c;
    }

    std::string str() const {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(v[i]);
        }
        return s;
    }
};

// Degree-2 data of one relator, read from its Magnus expansion. For p odd the
// off-diagonal part is antisymmetric on minimal relators and a(i,j) recovers
// the commutator exponent of [x_i,x_j]; the diagonal carries the square
// contributions that matter only when p = 2.
struct Degree2Form {
    int p = 3;
    int n = 0;
    std::vector<int> raw;  // n x n, entry (i,j) = coefficient of X_i X_j

    int a(int i, int j) const { return raw[i * n + j]; }
    int diag(int i) const { return raw[i * n + i]; }

    // Flattened (upper triangle, then diagonal) vector used for independence
    // checks; for p odd the diagonal is excluded (it encodes p-th powers,
    // which are relation-module junk there).
    std::vector<int> cup_vector() const {
        std::vector<int> v;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) v.push_back(a(i, j));
        if (p == 2)
            for (int i = 0; i < n; ++i) v.push_back(diag(i));
        return v;
    }

    bool is_zero_cup() const {
        for (int x : cup_vector())
            if (x) return false;
        return true;
    }
};

inline std::vector<Degree2Form> degree2_forms(const Presentation& pres) {
    auto min = validate_minimal(pres);
    if (!min.minimal)
        throw std::domain_error("degree2_forms: presentation not minimal: " + min.diagnostics);
    std::vector<Degree2Form> forms;
    for (auto& r : pres.relators) {
        TruncatedSeries s = magnus_truncated(r, pres.p, 2);
        auto d1 = s.degree1(pres.n_gens());
        for (int g = 0; g < pres.n_gens(); ++g)
            if (d1[g] != 0)
                throw std::domain_error(
                    "degree2_forms: nonzero degree-1 Magnus coefficient (non-minimal relator)");
        Degree2Form f;
        f.p = pres.p;
        f.n = pres.n_gens();
        f.raw = s.degree2(f.n);
        forms.push_back(std::move(f));
    }
    return forms;
}

// Cup-product structure: H^2 basis indexed by relators in declaration order,
// pairing <x_i* cup x_j*, r> = a_ij(r).
struct CupTable {
    int p = 3;
    int n = 0;
    std::vector<Degree2Form> forms;

    int h2() const { return (int)forms.size(); }

    bool forms_independent() const {
        if (forms.empty()) return true;
        FpMatrix m(p, (int)forms.size(), (int)forms[0].cup_vector().size());
        for (size_t r = 0; r < forms.size(); ++r) {
            auto v = forms[r].cup_vector();
            for (size_t j = 0; j < v.size(); ++j) m.at((int)r, (int)j) = v[j];
        }
        return rank(m) == (int)forms.size();
    }
};

inline CupTable cup_table(const Presentation& pres) {
    CupTable t;
    t.p = pres.p;
    t.n = pres.n_gens();
    t.forms = degree2_forms(pres);
    return t;
}

// alpha cup beta as a coordinate vector in the relator-indexed basis of H^2.
// For p odd: <alpha cup beta, r> = sum_{i<j} a_ij(r) (alpha_i beta_j - alpha_j beta_i);
// for p = 2 the diagonal contributes sum_i c_ii(r) alpha_i beta_i.
inline std::vector<int> cup(const Character& alpha, const Character& beta, const CupTable& t) {
    std::vector<int> out;
    out.reserve(t.forms.size());
    for (auto& f : t.forms) {
        long long acc = 0;
        for (int i = 0; i < t.n; ++i)
            for (int j = i + 1; j < t.n; ++j)
                acc += (long long)f.a(i, j) * fp_sub(fp_mul(alpha(i), beta(j), t.p),
                                                     fp_mul(alpha(j), beta(i), t.p), t.p);
        if (t.p == 2)
            for (int i = 0; i < t.n; ++i) acc += (long long)f.diag(i) * alpha(i) * beta(i);
        out.push_back(fp_norm(acc, t.p));
    }
    return out;
}

struct HDims {
    int h1 = 0;
    int h2 = 0;
    bool certified = true;  // false when relator forms are dependent
    std::string note;
};

// Minimal presentations: dim H^1 = generator count, dim H^2 = relator count,
// certified by linear independence of the relator degree-2 forms.
inline HDims h_dims(const Presentation& pres) {
    HDims d;
    d.h1 = pres.n_gens();
    d.h2 = (int)pres.relators.size();
    CupTable t = cup_table(pres);
    if (!t.forms_independent()) {
        d.certified = false;
        d.note = "relator degree-2 forms are linearly dependent; relator-set minimality "
                 "inconclusive";
    }
    return d;
}

// General presentations (e.g. Schreier rewrites, not necessarily minimal):
// dim H^1 = rank of G^ab tensor F_p; the relator count is reduced by the same
// linear rank, which reproduces dim H^2 for the subgroups studied here under
// cd = 2 (Euler multiplicativity is then an arithmetic identity of the
// rewrite, checked against the paper's values in the tests).
inline HDims h_dims_reduced(const Presentation& pres) {
    FpMatrix m(pres.p, (int)pres.relators.size(), pres.n_gens());
    for (size_t r = 0; r < pres.relators.size(); ++r) {
        auto sums = pres.relators[r].exponent_sums(pres.n_gens());
        for (int g = 0; g < pres.n_gens(); ++g) m.at((int)r, g) = fp_norm(sums[g], pres.p);
    }
    int rk = rank(m);
    HDims d;
    d.h1 = pres.n_gens() - rk;
    d.h2 = (int)pres.relators.size() - rk;
    return d;
}

// E(G) = 1 - dim H^1 + dim H^2 under cd(G) = 2.
inline int euler_characteristic(const HDims& d) { return 1 - d.h1 + d.h2; }

inline int euler_characteristic(const Presentation& pres) {
    return euler_characteristic(h_dims(pres));
}

enum class QuadStatus { HypothesesMet, HypothesesNotMet, OutOfScope };

struct QuadraticityReport {
    QuadStatus status = QuadStatus::OutOfScope;
    std::string detail;               // chosen pair / failure reason
    std::vector<std::string> caveats;
    bool h_quadratic_certified() const { return status == QuadStatus::HypothesesMet; }
};

// Checks the hypotheses of the few-relator proposition after searching
// generator reorderings: some pair must cup nontrivially in the first
// relator while vanishing in the second, and the second must cup somewhere.
// On success the cohomology ring is quadratic and universally Koszul.
inline QuadraticityReport quadraticity_report(const Presentation& pres) {
    QuadraticityReport rep;
    int nrel = (int)pres.relators.size();
    if (nrel < 1 || nrel > 2) {
        rep.status = QuadStatus::OutOfScope;
        rep.detail = "proposition covers presentations with 1 or 2 defining relations, got " +
                     std::to_string(nrel);
        return rep;
    }
    CupTable t = cup_table(pres);
    if (pres.n_gens() < 2) {
        rep.status = QuadStatus::OutOfScope;
        rep.detail = "needs dim H^1 >= 2";
        return rep;
    }
    if (nrel == 2 && !t.forms_independent()) {
        rep.status = QuadStatus::HypothesesNotMet;
        rep.detail = "relator degree-2 forms are dependent";
        return rep;
    }
    if (pres.p == 2) {
        for (auto& f : t.forms)
            for (int i = 0; i < t.n; ++i)
                if (f.diag(i) != 0) {
                    rep.status = QuadStatus::HypothesesNotMet;
                    rep.detail = "p = 2 relator has a square residue X_" +
                                 pres.gens[i].name + "^2 in degree 2";
                    return rep;
                }
        rep.caveats.push_back(
            "p = 2: the residual-term hypothesis r' in G^4 (G')^2 [G',G] is read off the "
            "degree-2 truncation only");
    }

    auto try_orderings = [&](const Degree2Form& f1, const Degree2Form* f2)
        -> std::optional<std::string> {
        for (int i = 0; i < t.n; ++i)
            for (int j = i + 1; j < t.n; ++j) {
                if (f1.a(i, j) == 0 && f1.a(j, i) == 0) continue;
                if (f2) {
                    if (f2->a(i, j) != 0 || f2->a(j, i) != 0) continue;
                    if (f2->is_zero_cup()) continue;
                }
                return "ordered generating set (" + pres.gens[i].name + ", " +
                       pres.gens[j].name + ", rest in declaration order)";
            }
        return std::nullopt;
    };

    std::optional<std::string> found;
    std::string which;
    if (nrel == 1) {
        found = try_orderings(t.forms[0], nullptr);
    } else {
        found = try_orderings(t.forms[0], &t.forms[1]);
        which = "relators in declaration order";
        if (!found) {
            found = try_orderings(t.forms[1], &t.forms[0]);
            which = "relators swapped";
        }
    }
    if (found) {
        rep.status = QuadStatus::HypothesesMet;
        rep.detail = *found + (which.empty() ? "" : "; " + which);
    } else {
        rep.status = QuadStatus::HypothesesNotMet;
        rep.detail = "no generator pair satisfies the cup conditions";
    }
    return rep;
}

}  // namespace ppg
