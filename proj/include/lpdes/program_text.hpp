#pragma once

// Text form of ground programs, one rule per line:
//
//   head :- a, b, not c.
//   fact.
//   :- a, not b.
//
// Atoms are `name` or `name(arg1,...,argk)` with decimal arguments; `%`
// starts a comment that runs to the end of the line.

#include <cctype>
#include <iosfwd>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "lpdes/logic_program.hpp"

namespace lpdes {

inline void write_rule(std::ostream& os, const Program& p, const Rule& r) {
    if (r.head) os << p.atom_name(*r.head);
    if (r.pos.empty() && r.neg.empty()) {
        os << (r.head ? "." : ":- .");
        return;
    }
    os << (r.head ? " :- " : ":- ");
    bool first = true;
    for (AtomId a : r.pos) {
        if (!first) os << ", ";
        os << p.atom_name(a);
        first = false;
    }
    for (AtomId a : r.neg) {
        if (!first) os << ", ";
        os << "not " << p.atom_name(a);
        first = false;
    }
    os << '.';
}

inline void write_program(std::ostream& os, const Program& p) {
    for (const auto& r : p.rules()) {
        write_rule(os, p, r);
        os << '\n';
    }
}

inline std::string program_to_text(const Program& p) {
    std::ostringstream os;
    write_program(os, p);
    return os.str();
}

namespace detail {

class ProgramLexer {
public:
    explicit ProgramLexer(std::string_view text) : text_(text) {}

    void skip_space() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }

    bool accept(std::string_view tok) {
        skip_space();
        if (text_.substr(pos_, tok.size()) != tok) return false;
        pos_ += tok.size();
        return true;
    }

    void expect(std::string_view tok) {
        if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
    }

    bool peek_identifier() {
        skip_space();
        return pos_ < text_.size() && is_ident_start(text_[pos_]);
    }

    std::string identifier() {
        skip_space();
        if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail("expected an atom");
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    // Canonical text of an atom: arguments rendered without spaces.
    std::string atom() {
        std::string s = identifier();
        if (!accept("(")) return s;
        s.push_back('(');
        bool first = true;
        do {
            skip_space();
            if (!first) s.push_back(',');
            first = false;
            std::size_t start = pos_;
            if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
            const std::size_t digits = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == digits) fail("expected a decimal argument");
            s += std::string(text_.substr(start, pos_ - start));
        } while (accept(","));
        expect(")");
        s.push_back(')');
        return s;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_); }

    // Lookahead for the `not` keyword followed by a non-identifier character.
    bool accept_not() {
        skip_space();
        if (text_.substr(pos_, 3) != "not") return false;
        if (pos_ + 3 < text_.size() && is_ident_char(text_[pos_ + 3])) return false;
        pos_ += 3;
        return true;
    }

private:
    static bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool is_ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

} // namespace detail

inline Program parse_program(std::string_view text) {
    detail::ProgramLexer lex(text);
    Program p;
    while (!lex.at_end()) {
        Rule r;
        if (!lex.accept(":-")) {
            r.head = p.atom(lex.atom());
            if (lex.accept(".")) {
                p.add_rule(std::move(r));
                continue;
            }
            lex.expect(":-");
        }
        if (!lex.accept(".")) {
            do {
                if (lex.accept_not()) r.neg.push_back(p.atom(lex.atom()));
                else r.pos.push_back(p.atom(lex.atom()));
            } while (lex.accept(","));
            lex.expect(".");
        }
        try {
            p.add_rule(std::move(r));
        } catch (const InvalidArgument& e) {
            lex.fail(e.what());
        }
    }
    return p;
}

inline Program read_program(std::istream& is) {
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return parse_program(text);
}

} // namespace lpdes
