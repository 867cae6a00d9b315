#pragma once

// Minimal s-expressions: atoms and parenthesized lists. The NatTerm and IMP
// serializers sit on top of this. Atoms are bare tokens; registers with odd
// characters (%, #, ::, <, >) are still single tokens because only '(' ')' and
// whitespace delimit.

#include "rcc/error.hpp"

#include <memory>
#include <string>
#include <vector>

namespace rcc {

struct Sexpr {
    // Leaf iff items is unused; list iff atom is empty and is_list set.
    bool is_list = false;
    std::string atom;
    std::vector<Sexpr> items;

    static Sexpr leaf(std::string a) {
        Sexpr s;
        s.atom = std::move(a);
        return s;
    }
    static Sexpr list(std::vector<Sexpr> xs) {
        Sexpr s;
        s.is_list = true;
        s.items = std::move(xs);
        return s;
    }

    const Sexpr& at(size_t i) const {
        if (!is_list || i >= items.size())
            throw Error("s-expression: missing item " + std::to_string(i));
        return items[i];
    }
    size_t size() const { return is_list ? items.size() : 0; }
    // Head atom of a list form, or "" if not a list / not headed by an atom.
    std::string head() const {
        if (!is_list || items.empty() || items[0].is_list) return "";
        return items[0].atom;
    }
};

namespace detail {

struct SexprParser {
    const std::string& src;
    size_t pos = 0;

    explicit SexprParser(const std::string& s) : src(s) {}

    void skip_ws() {
        while (pos < src.size()) {
            char c = src[pos];
            if (c == ';') { // comment to end of line
                while (pos < src.size() && src[pos] != '\n') ++pos;
            } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                ++pos;
            } else {
                break;
            }
        }
    }

    Sexpr parse() {
        skip_ws();
        if (pos >= src.size()) throw Error("s-expression: unexpected end of input");
        if (src[pos] == '(') {
            ++pos;
            std::vector<Sexpr> items;
            while (true) {
                skip_ws();
                if (pos >= src.size()) throw Error("s-expression: unclosed '('");
                if (src[pos] == ')') {
                    ++pos;
                    return Sexpr::list(std::move(items));
                }
                items.push_back(parse());
            }
        }
        if (src[pos] == ')') throw Error("s-expression: unexpected ')'");
        size_t start = pos;
        while (pos < src.size()) {
            char c = src[pos];
            if (c == '(' || c == ')' || c == ';' || c == ' ' || c == '\t' || c == '\n' || c == '\r')
                break;
            ++pos;
        }
        return Sexpr::leaf(src.substr(start, pos - start));
    }
};

} // namespace detail

inline Sexpr parse_sexpr(const std::string& text) {
    detail::SexprParser p(text);
    Sexpr s = p.parse();
    p.skip_ws();
    if (p.pos != text.size()) throw Error("s-expression: trailing input");
    return s;
}

inline void print_sexpr(const Sexpr& s, std::string& out) {
    if (!s.is_list) {
        out += s.atom;
        return;
    }
    out += '(';
    for (size_t i = 0; i < s.items.size(); ++i) {
        if (i) out += ' ';
        print_sexpr(s.items[i], out);
    }
    out += ')';
}

inline std::string to_string(const Sexpr& s) {
    std::string out;
    print_sexpr(s, out);
    return out;
}

} // namespace rcc
