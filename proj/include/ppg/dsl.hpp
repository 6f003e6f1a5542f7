#pragma once

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ppg/presentations.hpp"

namespace ppg {

// Parsed DSL document: a presentation plus an optional orientation block.
struct DslDocument {
    Presentation presentation;
    std::optional<Orientation> orientation;
};

class DslError : public std::runtime_error {
  public:
    DslError(const std::string& msg, int line, int col)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(col) +
                             ": " + msg),
          line(line),
          col(col) {}
    int line, col;
};

namespace detail {

class DslParser {
  public:
    explicit DslParser(std::string text) : text_(std::move(text)) {}

    DslDocument parse() {
        skip_ws();
        DslDocument doc;
        std::string kw = peek_ident();
        if (kw == "family") {
            // bare `family f1(3,1,2);` file
            ident();
            doc.presentation = parse_family();
            expect(';');
        } else if (kw == "group") {
            parse_group(doc);
        } else {
            fail("expected 'group' or 'family'");
        }
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return doc;
    }

  private:
    std::string text_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;

    [[noreturn]] void fail(const std::string& msg) { throw DslError(msg, line_, col_); }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            if (std::isspace((unsigned char)text_[pos_])) {
                advance();
            } else if (text_[pos_] == '#') {  // comment to end of line
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
        advance();
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            advance();
            return true;
        }
        return false;
    }

    std::string peek_ident() {
        skip_ws();
        size_t save_pos = pos_;
        int sl = line_, sc = col_;
        std::string id;
        while (pos_ < text_.size() &&
               (std::isalnum((unsigned char)text_[pos_]) || text_[pos_] == '_'))
            id += text_[pos_], advance();
        pos_ = save_pos;
        line_ = sl;
        col_ = sc;
        return id;
    }

    std::string ident() {
        skip_ws();
        if (pos_ >= text_.size() ||
            !(std::isalpha((unsigned char)text_[pos_]) || text_[pos_] == '_'))
            fail("expected identifier");
        std::string id;
        while (pos_ < text_.size() &&
               (std::isalnum((unsigned char)text_[pos_]) || text_[pos_] == '_'))
            id += text_[pos_], advance();
        return id;
    }

    long long integer() {
        skip_ws();
        bool neg = accept('-');
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit((unsigned char)text_[pos_]))
            fail("expected integer");
        long long v = 0;
        while (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_])) {
            v = v * 10 + (text_[pos_] - '0');
            advance();
        }
        return neg ? -v : v;
    }

    // k parameter: positive integer or 'inf'.
    std::optional<int> k_param() {
        skip_ws();
        if (std::isalpha((unsigned char)peek())) {
            std::string s = ident();
            if (s == "inf" || s == "infinity") return std::nullopt;
            fail("expected integer or 'inf'");
        }
        return (int)integer();
    }

    Rational rational() {
        long long num = integer();
        if (accept('/')) {
            long long den = integer();
            if (den == 0) fail("zero denominator");
            return Rational(num, den);
        }
        return Rational(num);
    }

    // Reads raw text up to (not including) the next ';' at nesting depth 0.
    std::string until_semicolon() {
        skip_ws();
        std::string out;
        int depth = 0;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';' && depth == 0) break;
            if (c == '[' || c == '(') ++depth;
            if (c == ']' || c == ')') --depth;
            out += c;
            advance();
        }
        return out;
    }

    Presentation parse_family() {
        std::string fam = ident();
        expect('(');
        Presentation pres;
        if (fam == "f1") {
            long long p = integer();
            expect(',');
            long long k = integer();
            expect(',');
            long long d = integer();
            pres = make_f1((int)p, (int)k, (int)d);
        } else if (fam == "f2") {
            long long p = integer();
            expect(',');
            auto k = k_param();
            expect(',');
            long long d = integer();
            expect(',');
            std::string z1 = ident();
            expect(',');
            std::string z2 = ident();
            pres = make_f2((int)p, k, (int)d, z1, z2);
        } else if (fam == "demushkin") {
            long long p = integer();
            expect(',');
            auto k = k_param();
            expect(',');
            long long d = integer();
            pres = make_demushkin((int)p, k, (int)d).first;
        } else if (fam == "chain") {
            long long p = integer();
            expect(',');
            long long d = integer();
            pres = make_chain_amalgam((int)p, (int)d);
        } else {
            fail("unknown family '" + fam + "' (expected f1, f2, demushkin, chain)");
        }
        expect(')');
        return pres;
    }

    void parse_group(DslDocument& doc) {
        ident();  // 'group'
        doc.presentation.name = ident();
        expect('{');
        bool have_prime = false, have_gens = false, have_family = false;
        std::vector<std::pair<std::string, std::string>> pending_relators;  // text + position tag
        while (!accept('}')) {
            std::string kw = ident();
            if (kw == "prime") {
                doc.presentation.p = (int)integer();
                check_prime(doc.presentation.p);
                have_prime = true;
                expect(';');
            } else if (kw == "generators") {
                while (peek() != ';') {
                    std::string g = ident();
                    for (auto& e : doc.presentation.gens)
                        if (e.name == g) fail("duplicate generator '" + g + "'");
                    doc.presentation.gens.push_back({g, (int)doc.presentation.gens.size()});
                }
                expect(';');
                have_gens = true;
            } else if (kw == "relator") {
                int l = line_, c = col_;
                std::string txt = until_semicolon();
                expect(';');
                pending_relators.emplace_back(txt, std::to_string(l) + ":" + std::to_string(c));
            } else if (kw == "family") {
                std::string name = doc.presentation.name;
                doc.presentation = parse_family();
                doc.presentation.name = name;
                expect(';');
                have_family = true;
            } else if (kw == "orientation") {
                Orientation o(doc.presentation.p);
                o.values.assign(doc.presentation.gens.size(), Rational(1));
                if (!have_gens && !have_family) fail("orientation block before generators");
                while (true) {
                    std::string g = ident();
                    expect('=');
                    Rational v = rational();
                    int idx;
                    try {
                        idx = doc.presentation.gen_index(g);
                    } catch (const std::exception& e) {
                        fail(e.what());
                    }
                    try {
                        Orientation::validate_value(v, doc.presentation.p);
                    } catch (const std::exception& e) {
                        fail(std::string(e.what()) + " (generator " + g + ")");
                    }
                    o.values[idx] = v;
                    if (!accept(',')) break;
                }
                expect(';');
                doc.orientation = o;
            } else {
                fail("unknown keyword '" + kw + "'");
            }
        }
        if (have_family) {
            if (!pending_relators.empty()) fail("family shorthand excludes explicit relators");
            return;
        }
        if (!have_prime) fail("missing 'prime'");
        if (!have_gens) fail("missing 'generators'");
        for (auto& [txt, tag] : pending_relators) {
            Word w;
            try {
                w = parse_word(txt, doc.presentation.gens);
            } catch (const WordParseError& e) {
                auto colon = tag.find(':');
                throw DslError(std::string("bad relator: ") + e.what(),
                               std::stoi(tag.substr(0, colon)), std::stoi(tag.substr(colon + 1)));
            }
            if (w.is_identity()) {
                auto colon = tag.find(':');
                throw DslError("relator reduces to the identity", std::stoi(tag.substr(0, colon)),
                               std::stoi(tag.substr(colon + 1)));
            }
            doc.presentation.relators.push_back(w);
        }
    }
};

}  // namespace detail

inline DslDocument parse_dsl_text(std::string text) { return detail::DslParser(std::move(text)).parse(); }

inline DslDocument parse_dsl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_dsl_text(ss.str());
}

inline std::string serialize_dsl(const Presentation& pres,
                                 const Orientation* theta = nullptr,
                                 const std::string& provenance = "") {
    std::ostringstream os;
    if (!provenance.empty()) {
        std::istringstream lines(provenance);
        std::string l;
        while (std::getline(lines, l)) os << "# " << l << "\n";
    }
    os << "group " << pres.name << " {\n";
    os << "  prime " << pres.p << ";\n";
    os << "  generators";
    for (auto& g : pres.gens) os << ' ' << g.name;
    os << ";\n";
    for (auto& r : pres.relators) os << "  relator " << r.str(pres.gens) << ";\n";
    if (theta && !theta->values.empty()) {
        os << "  orientation ";
        for (size_t i = 0; i < theta->values.size(); ++i) {
            if (i) os << ", ";
            const Rational& v = theta->values[i];
            os << pres.gens[i].name << " = " << boost::multiprecision::numerator(v).str();
            if (boost::multiprecision::denominator(v) != 1)
                os << "/" << boost::multiprecision::denominator(v).str();
        }
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace ppg
