#pragma once

// Recursive-descent parser for the surface language.
//
//   program := (data | fun)*
//   data    := "data" Name tyvar* "=" ctor ("|" ctor)*
//   ctor    := Name atype*
//   fun     := "fun" name param* ":" type "=" term
//   param   := "(" name ":" type ")"
//   type    := btype ("->" btype)*        (arrows legal on template params only)
//   btype   := atype+                     (application, e.g.  List Nat)
//   atype   := "Nat" | name | Name | "(" type ")"
//   term    := "let" name "=" term "in" term
//            | "case" term "of" arm ("|" arm)*
//            | "if" term "then" term "else" term
//            | atom+                      (application by juxtaposition)
//   arm     := Name name* "->" term | "0" "->" term | "Suc" name "->" term
//   atom    := name | Name | number | "(" term ")"
//
// "--" starts a comment to end of line. Constructor and type names start with
// an uppercase letter, variables and functions with lowercase or '_'. A case
// must list every constructor of the scrutinee's type exactly once, in
// declaration order (the checker enforces this).

#include "rcc/ast.hpp"
#include "rcc/error.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace rcc {

namespace detail {

struct Token {
    enum class K { Ident, UIdent, Number, Sym, End };
    K kind;
    std::string text;
    int line, col;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

inline std::vector<Token> lex(const std::string& src) {
    std::vector<Token> toks;
    int line = 1, col = 1;
    size_t i = 0;
    auto bump = [&](size_t k) {
        for (size_t j = 0; j < k; ++j) {
            if (src[i + j] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += k;
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            bump(1);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            while (i < src.size() && src[i] != '\n') bump(1);
            continue;
        }
        int tl = line, tc = col;
        if (ident_start(c)) {
            size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            std::string w = src.substr(i, j - i);
            bump(j - i);
            bool upper = std::isupper(static_cast<unsigned char>(w[0]));
            toks.push_back({upper ? Token::K::UIdent : Token::K::Ident, w, tl, tc});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            std::string w = src.substr(i, j - i);
            bump(j - i);
            toks.push_back({Token::K::Number, w, tl, tc});
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            bump(2);
            toks.push_back({Token::K::Sym, "->", tl, tc});
            continue;
        }
        if (c == '(' || c == ')' || c == '=' || c == '|' || c == ':') {
            bump(1);
            toks.push_back({Token::K::Sym, std::string(1, c), tl, tc});
            continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    toks.push_back({Token::K::End, "", line, col});
    return toks;
}

struct Parser {
    std::vector<Token> toks;
    size_t pos = 0;

    const Token& peek(size_t k = 0) const { return toks[std::min(pos + k, toks.size() - 1)]; }
    const Token& next() { return toks[pos == toks.size() - 1 ? pos : pos++]; }
    bool at_sym(const std::string& s) const {
        return peek().kind == Token::K::Sym && peek().text == s;
    }
    bool at_word(const std::string& s) const {
        return (peek().kind == Token::K::Ident || peek().kind == Token::K::UIdent) &&
               peek().text == s;
    }
    void expect_sym(const std::string& s) {
        if (!at_sym(s))
            throw ParseError("expected '" + s + "', found '" + peek().text + "'", peek().line,
                             peek().col);
        next();
    }
    std::string expect_ident(const char* what) {
        if (peek().kind != Token::K::Ident || is_keyword(peek().text))
            throw ParseError(std::string("expected ") + what + ", found '" + peek().text + "'",
                             peek().line, peek().col);
        return next().text;
    }
    std::string expect_uident(const char* what) {
        if (peek().kind != Token::K::UIdent || peek().text == "Nat" || peek().text == "Suc")
            throw ParseError(std::string("expected ") + what + ", found '" + peek().text + "'",
                             peek().line, peek().col);
        return next().text;
    }

    static bool is_keyword(const std::string& w) {
        return w == "data" || w == "fun" || w == "let" || w == "in" || w == "case" ||
               w == "of" || w == "if" || w == "then" || w == "else";
    }

    // ---- types ----

    TypeRef parse_atype() {
        const Token& t = peek();
        if (at_sym("(")) {
            next();
            TypeRef ty = parse_type();
            expect_sym(")");
            return ty;
        }
        if (t.kind == Token::K::UIdent || (t.kind == Token::K::Ident && !is_keyword(t.text))) {
            next();
            return {t.text, {}};
        }
        throw ParseError("expected a type, found '" + t.text + "'", t.line, t.col);
    }

    bool starts_atype() const {
        if (at_sym("(")) return true;
        const Token& t = peek();
        return t.kind == Token::K::UIdent ||
               (t.kind == Token::K::Ident && !is_keyword(t.text));
    }

    TypeRef parse_btype() {
        TypeRef head = parse_atype();
        while (starts_atype()) head.args.push_back(parse_atype());
        return head;
    }

    TypeRef parse_type() {
        TypeRef first = parse_btype();
        if (!at_sym("->")) return first;
        std::vector<TypeRef> parts{first};
        while (at_sym("->")) {
            next();
            parts.push_back(parse_btype());
        }
        TypeRef fn{"->", std::move(parts)};
        return fn;
    }

    // ---- terms ----

    bool starts_atom() const {
        const Token& t = peek();
        if (at_sym("(")) return true;
        if (t.kind == Token::K::Number) return true;
        if (t.kind == Token::K::UIdent) return true;
        return t.kind == Token::K::Ident && !is_keyword(t.text);
    }

    TermPtr parse_atom() {
        const Token& t = peek();
        if (at_sym("(")) {
            next();
            TermPtr e = parse_term();
            expect_sym(")");
            return e;
        }
        if (t.kind == Token::K::Number) {
            next();
            return mk_lit(parse_nat(t.text), t.line, t.col);
        }
        if (t.kind == Token::K::UIdent) {
            next();
            // A bare constructor name is already a (nullary) application;
            // parse_app attaches arguments when they follow.
            return mk_app(t.text, {}, t.line, t.col);
        }
        if (t.kind == Token::K::Ident && !is_keyword(t.text)) {
            next();
            return mk_var(t.text, t.line, t.col);
        }
        throw ParseError("expected a term, found '" + t.text + "'", t.line, t.col);
    }

    TermPtr parse_app() {
        const Token& t = peek();
        TermPtr head = parse_atom();
        if (!starts_atom()) return head;
        bool applicable = head->kind == Term::K::Var ||
                          (head->kind == Term::K::App && head->args.empty());
        if (!applicable)
            throw ParseError("only named functions, constructors, and primitives can be applied",
                             t.line, t.col);
        std::vector<TermPtr> args;
        while (starts_atom()) args.push_back(parse_atom());
        return mk_app(head->name, std::move(args), t.line, t.col);
    }

    CaseArm parse_arm() {
        CaseArm arm;
        const Token& t = peek();
        if (t.kind == Token::K::Number && t.text == "0") {
            next();
            arm.ctor = "0";
        } else if (t.kind == Token::K::UIdent && t.text == "Suc") {
            next();
            arm.ctor = "Suc";
            arm.binders.push_back(expect_ident("a binder after Suc"));
        } else if (t.kind == Token::K::UIdent) {
            next();
            arm.ctor = t.text;
            while (peek().kind == Token::K::Ident && !is_keyword(peek().text))
                arm.binders.push_back(next().text);
        } else {
            throw ParseError("expected a constructor pattern, found '" + t.text + "'", t.line,
                             t.col);
        }
        expect_sym("->");
        arm.body = parse_term();
        return arm;
    }

    TermPtr parse_term() {
        const Token& t = peek();
        if (at_word("let")) {
            next();
            std::string x = expect_ident("a variable after let");
            expect_sym("=");
            TermPtr rhs = parse_term();
            if (!at_word("in"))
                throw ParseError("expected 'in'", peek().line, peek().col);
            next();
            TermPtr body = parse_term();
            return mk_let(std::move(x), std::move(rhs), std::move(body), t.line, t.col);
        }
        if (at_word("if")) {
            next();
            TermPtr c = parse_term();
            if (!at_word("then")) throw ParseError("expected 'then'", peek().line, peek().col);
            next();
            TermPtr a = parse_term();
            if (!at_word("else")) throw ParseError("expected 'else'", peek().line, peek().col);
            next();
            TermPtr b = parse_term();
            return mk_if(std::move(c), std::move(a), std::move(b), t.line, t.col);
        }
        if (at_word("case")) {
            next();
            TermPtr scrut = parse_term();
            if (!at_word("of")) throw ParseError("expected 'of'", peek().line, peek().col);
            next();
            std::vector<CaseArm> arms;
            arms.push_back(parse_arm());
            while (at_sym("|")) {
                next();
                arms.push_back(parse_arm());
            }
            return mk_case(std::move(scrut), std::move(arms), t.line, t.col);
        }
        return parse_app();
    }

    // ---- declarations ----

    AdtDecl parse_data() {
        const Token& kw = peek();
        next(); // "data"
        AdtDecl d;
        d.line = kw.line;
        d.col = kw.col;
        d.name = expect_uident("a type name after data");
        while (peek().kind == Token::K::Ident && !is_keyword(peek().text))
            d.type_params.push_back(next().text);
        expect_sym("=");
        auto parse_ctor = [&] {
            CtorDecl c;
            c.name = expect_uident("a constructor name");
            while (starts_atype()) c.arg_types.push_back(parse_atype());
            d.ctors.push_back(std::move(c));
        };
        parse_ctor();
        while (at_sym("|")) {
            next();
            parse_ctor();
        }
        return d;
    }

    FunDef parse_fun() {
        const Token& kw = peek();
        next(); // "fun"
        FunDef f;
        f.line = kw.line;
        f.col = kw.col;
        f.name = expect_ident("a function name after fun");
        while (at_sym("(")) {
            next();
            Param p;
            p.name = expect_ident("a parameter name");
            expect_sym(":");
            p.type = parse_type();
            expect_sym(")");
            f.params.push_back(std::move(p));
        }
        expect_sym(":");
        f.ret_type = parse_type();
        expect_sym("=");
        f.body = parse_term();
        return f;
    }

    Program parse_program() {
        Program p;
        while (peek().kind != Token::K::End) {
            if (at_word("data")) {
                p.adts.push_back(parse_data());
            } else if (at_word("fun")) {
                p.funs.push_back(parse_fun());
            } else {
                throw ParseError("expected 'data' or 'fun', found '" + peek().text + "'",
                                 peek().line, peek().col);
            }
        }
        return p;
    }
};

} // namespace detail

// Parse only; call validate() from check.hpp for scope/type/shape checking.
inline Program parse_program(const std::string& src) {
    detail::Parser p{detail::lex(src)};
    return p.parse_program();
}

inline TermPtr parse_term_string(const std::string& src) {
    detail::Parser p{detail::lex(src)};
    TermPtr t = p.parse_term();
    if (p.peek().kind != detail::Token::K::End)
        throw ParseError("trailing input after term", p.peek().line, p.peek().col);
    return t;
}

// ------------------------------------------------------------- printing ----

namespace detail {

inline void print_term(const Term& t, std::string& out, bool atom_pos);

inline void print_atom(const Term& t, std::string& out) { print_term(t, out, true); }

inline void print_term(const Term& t, std::string& out, bool atom_pos) {
    switch (t.kind) {
    case Term::K::Var:
        out += t.name;
        return;
    case Term::K::NatLit:
        out += t.lit.str();
        return;
    case Term::K::App: {
        bool paren = atom_pos && !t.args.empty();
        if (paren) out += '(';
        out += t.name;
        for (const auto& a : t.args) {
            out += ' ';
            print_atom(*a, out);
        }
        if (paren) out += ')';
        return;
    }
    case Term::K::Let: {
        bool paren = atom_pos;
        if (paren) out += '(';
        out += "let " + t.bind + " = ";
        print_term(*t.rhs, out, false);
        out += " in ";
        print_term(*t.body, out, false);
        if (paren) out += ')';
        return;
    }
    case Term::K::If: {
        bool paren = atom_pos;
        if (paren) out += '(';
        out += "if ";
        print_term(*t.cond, out, false);
        out += " then ";
        print_term(*t.then_t, out, false);
        out += " else ";
        print_term(*t.else_t, out, false);
        if (paren) out += ')';
        return;
    }
    case Term::K::Case: {
        bool paren = atom_pos;
        if (paren) out += '(';
        out += "case ";
        print_term(*t.scrutinee, out, false);
        out += " of ";
        for (size_t i = 0; i < t.arms.size(); ++i) {
            if (i) out += " | ";
            out += t.arms[i].ctor;
            for (const auto& b : t.arms[i].binders) out += ' ' + b;
            out += " -> ";
            // Arm bodies that are themselves cases would swallow later arms;
            // parenthesize them.
            print_term(*t.arms[i].body, out, t.arms[i].body->kind == Term::K::Case);
        }
        if (paren) out += ')';
        return;
    }
    }
}

} // namespace detail

inline std::string show_term(const Term& t) {
    std::string out;
    detail::print_term(t, out, false);
    return out;
}

inline std::string show_program(const Program& p) {
    std::string out;
    for (const auto& d : p.adts) {
        out += "data " + d.name;
        for (const auto& tp : d.type_params) out += ' ' + tp;
        out += " = ";
        for (size_t i = 0; i < d.ctors.size(); ++i) {
            if (i) out += " | ";
            out += d.ctors[i].name;
            for (const auto& at : d.ctors[i].arg_types) {
                out += ' ';
                bool paren = !at.args.empty() || at.is_fun();
                if (paren) out += '(';
                out += show_type(at);
                if (paren) out += ')';
            }
        }
        out += '\n';
    }
    for (const auto& f : p.funs) {
        out += "fun " + f.name;
        for (const auto& pr : f.params)
            out += " (" + pr.name + " : " + show_type(pr.type) + ")";
        out += " : " + show_type(f.ret_type) + " = ";
        out += show_term(*f.body);
        out += '\n';
    }
    return out;
}

} // namespace rcc
