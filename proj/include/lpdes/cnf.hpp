#pragma once

// CNF formulas and the DIMACS format.

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lpdes/errors.hpp"

namespace lpdes {

using Clause = std::vector<int>;

struct CnfFormula {
    int num_vars = 0;
    std::vector<Clause> clauses;
    std::map<int, std::string> names;   // written as `c map <var> <name>`

    int new_var() { return ++num_vars; }

    // Sorts and deduplicates literals; tautologies are dropped.
    void add_clause(Clause c) {
        std::sort(c.begin(), c.end(), [](int a, int b) { return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b; });
        c.erase(std::unique(c.begin(), c.end()), c.end());
        for (std::size_t i = 0; i + 1 < c.size(); ++i)
            if (c[i] == -c[i + 1]) return;
        for (int l : c)
            if (l == 0 || std::abs(l) > num_vars) throw InvalidArgument("clause literal out of range");
        clauses.push_back(std::move(c));
    }
};

inline std::string emit_dimacs(const CnfFormula& f) {
    std::ostringstream os;
    for (const auto& [v, name] : f.names) os << "c map " << v << ' ' << name << '\n';
    os << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
    for (const auto& c : f.clauses) {
        for (int l : c) os << l << ' ';
        os << "0\n";
    }
    return os.str();
}

inline CnfFormula parse_dimacs(std::string_view text) {
    CnfFormula f;
    std::istringstream is{std::string(text)};
    std::string line;
    int lineno = 0;
    bool header = false;
    std::size_t declared = 0;
    Clause cur;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "c") {
            std::string tag;
            int v = 0;
            std::string name;
            if (ls >> tag && tag == "map" && ls >> v >> name) f.names[v] = name;
            continue;
        }
        if (first == "p") {
            std::string fmt;
            if (!(ls >> fmt >> f.num_vars >> declared) || fmt != "cnf") throw ParseError("bad DIMACS header", lineno);
            header = true;
            continue;
        }
        if (!header) throw ParseError("clause before header", lineno);
        std::istringstream cs(line);
        long lit = 0;
        while (cs >> lit) {
            if (lit == 0) {
                f.clauses.push_back(cur);
                cur.clear();
            } else {
                if (std::labs(lit) > f.num_vars) throw ParseError("literal exceeds variable count", lineno);
                cur.push_back(static_cast<int>(lit));
            }
        }
        if (!cs.eof()) throw ParseError("unexpected token", lineno);
    }
    if (!cur.empty()) throw ParseError("unterminated clause", lineno);
    if (header && f.clauses.size() != declared) throw ParseError("clause count differs from header", lineno);
    return f;
}

} // namespace lpdes
