#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ppg/numbers.hpp"

namespace ppg {

struct Generator {
    std::string name;
    int index = 0;  // position in the presentation's ordered alphabet
};

// A freely reduced word over a generator alphabet. Syllables are
// (generator index, nonzero exponent) with adjacent syllables on distinct
// generators; the empty word is the identity.
class Word {
  public:
    using Syllable = std::pair<int, Integer>;

    Word() = default;

    static Word generator(int index, Integer exp = 1) {
        Word w;
        if (exp != 0) w.syl_.emplace_back(index, std::move(exp));
        return w;
    }

    static Word from_syllables(std::vector<Syllable> syllables) {
        Word w;
        for (auto& s : syllables) w.push(s.first, s.second);
        return w;
    }

    const std::vector<Syllable>& syllables() const { return syl_; }
    bool is_identity() const { return syl_.empty(); }

    // Number of letters counted with multiplicity |e|.
    Integer length() const {
        Integer n = 0;
        for (auto& s : syl_) n += abs(s.second);
        return n;
    }

    // Appends g^e, merging with the last syllable (free reduction).
    void push(int gen, const Integer& exp) {
        if (exp == 0) return;
        if (!syl_.empty() && syl_.back().first == gen) {
            syl_.back().second += exp;
            if (syl_.back().second == 0) syl_.pop_back();
        } else {
            syl_.emplace_back(gen, exp);
        }
    }

    void append(const Word& other) {
        for (auto& s : other.syl_) push(s.first, s.second);
    }

    Word operator*(const Word& other) const {
        Word w = *this;
        w.append(other);
        return w;
    }

    Word inverse() const {
        Word w;
        w.syl_.reserve(syl_.size());
        for (auto it = syl_.rbegin(); it != syl_.rend(); ++it)
            w.syl_.emplace_back(it->first, -it->second);
        return w;
    }

    Word pow(const Integer& e) const {
        if (e == 0 || syl_.empty()) return Word();
        Word base = e < 0 ? inverse() : *this;
        Integer n = abs(e);
        // w^n for a cyclically non-reduced word collapses; the generic safe
        // route is repeated append, but powers of a single syllable are the
        // common case and handled in O(1).
        if (base.syl_.size() == 1) {
            Word w;
            w.syl_.emplace_back(base.syl_[0].first, base.syl_[0].second * n);
            return w;
        }
        if (n > 4096) throw std::overflow_error("Word::pow: exponent too large for expansion");
        Word w;
        for (Integer i = 0; i < n; ++i) w.append(base);
        return w;
    }

    bool operator==(const Word& o) const { return syl_ == o.syl_; }
    bool operator!=(const Word& o) const { return !(*this == o); }
    bool operator<(const Word& o) const { return syl_ < o.syl_; }

    // Exponent sum per generator, indexed 0..n_gens-1.
    std::vector<Integer> exponent_sums(int n_gens) const {
        std::vector<Integer> v(n_gens, 0);
        for (auto& s : syl_) {
            if (s.first < 0 || s.first >= n_gens)
                throw std::out_of_range("exponent_sums: generator index out of range");
            v[s.first] += s.second;
        }
        return v;
    }

    std::string str(const std::vector<Generator>& alphabet) const {
        if (syl_.empty()) return "1";
        std::ostringstream os;
        bool first = true;
        for (auto& s : syl_) {
            if (!first) os << ' ';
            first = false;
            os << alphabet.at(s.first).name;
            if (s.second != 1) os << '^' << s.second.str();
        }
        return os.str();
    }

  private:
    std::vector<Syllable> syl_;
};

inline Word multiply(const Word& u, const Word& v) { return u * v; }
inline Word invert(const Word& u) { return u.inverse(); }

// g^{-1} u g
inline Word conjugate(const Word& u, const Word& g) { return g.inverse() * u * g; }

// [u,v] = u^{-1} v^{-1} u v, expanded eagerly to a reduced word.
inline Word commutator(const Word& u, const Word& v) {
    return u.inverse() * v.inverse() * u * v;
}

// ---- word grammar ----------------------------------------------------------
//
//   word   := factor+
//   factor := primary ('^' int)*
//   primary:= gen | '[' word ',' word ']' | '(' word ')'
//
// Exponents are nonzero integers; commutators expand to u^-1 v^-1 u v.

class WordParseError : public std::runtime_error {
  public:
    WordParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    size_t position;
};

namespace detail {

class WordParser {
  public:
    WordParser(std::string_view text, const std::vector<Generator>& alphabet)
        : text_(text), alphabet_(alphabet) {}

    Word parse() {
        skip_ws();
        if (pos_ == text_.size()) return Word();  // empty word is the identity
        Word w = parse_word();
        skip_ws();
        if (pos_ != text_.size()) throw WordParseError("unexpected trailing input", pos_);
        return w;
    }

  private:
    std::string_view text_;
    const std::vector<Generator>& alphabet_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace((unsigned char)text_[pos_])) ++pos_;
    }

    bool peek_is(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c)
            throw WordParseError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }

    bool at_primary_start() {
        skip_ws();
        if (pos_ >= text_.size()) return false;
        char c = text_[pos_];
        return c == '[' || c == '(' || c == '1' || std::isalpha((unsigned char)c) || c == '_';
    }

    Word parse_word() {
        Word w = parse_factor();
        while (at_primary_start()) w.append(parse_factor());
        return w;
    }

    Word parse_factor() {
        Word w = parse_primary();
        while (peek_is('^')) {
            ++pos_;
            Integer e = parse_int();
            w = w.pow(e);
        }
        return w;
    }

    Word parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw WordParseError("unexpected end of word", pos_);
        char c = text_[pos_];
        if (c == '1') {  // literal identity
            ++pos_;
            return Word();
        }
        if (c == '(') {
            ++pos_;
            Word w = parse_word();
            expect(')');
            return w;
        }
        if (c == '[') {
            ++pos_;
            Word u = parse_word();
            expect(',');
            Word v = parse_word();
            expect(']');
            return commutator(u, v);
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum((unsigned char)text_[pos_]) || text_[pos_] == '_'))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            for (auto& g : alphabet_)
                if (g.name == name) return Word::generator(g.index);
            throw WordParseError("unknown generator '" + name + "'", start);
        }
        throw WordParseError("unexpected character", pos_);
    }

    Integer parse_int() {
        skip_ws();
        size_t start = pos_;
        bool neg = false;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
            neg = text_[pos_] == '-';
            ++pos_;
        }
        std::string digits;
        while (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_]))
            digits += text_[pos_++];
        if (digits.empty()) throw WordParseError("expected integer exponent", start);
        Integer v(digits);
        if (v == 0) throw WordParseError("zero exponent not allowed", start);
        return neg ? Integer(-v) : v;
    }
};

}  // namespace detail

inline Word parse_word(std::string_view text, const std::vector<Generator>& alphabet) {
    return detail::WordParser(text, alphabet).parse();
}

}  // namespace ppg
