#pragma once

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "lpdes/logic_program.hpp"
#include "lpdes/program_text.hpp"

namespace testutil {

inline std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

inline std::string data_path(const std::string& rel) { return std::string(LPDES_DATA_DIR) + "/" + rel; }

// Random normal program over atoms a0..a{n-1}. When `tight` is set, positive
// body atoms always have a larger index than the head, so no positive cycle
// can form.
inline lpdes::Program random_program(std::mt19937_64& g, int atoms, int rules, bool tight, bool constraints = true) {
    lpdes::Program p;
    for (int i = 0; i < atoms; ++i) p.atom("a" + std::to_string(i));
    std::uniform_int_distribution<int> pick(0, atoms - 1), len(0, 3);
    for (int k = 0; k < rules; ++k) {
        lpdes::Rule r;
        const bool constraint = constraints && g() % 8 == 0;
        int head = pick(g);
        if (!constraint) r.head = static_cast<lpdes::AtomId>(head);
        const int n = len(g);
        for (int j = 0; j < n; ++j) {
            const int a = pick(g);
            const bool positive = g() % 2 == 0;
            if (positive) {
                if (tight && !constraint && a <= head) continue;
                if (std::find(r.neg.begin(), r.neg.end(), a) != r.neg.end()) continue;
                r.pos.push_back(static_cast<lpdes::AtomId>(a));
            } else {
                if (std::find(r.pos.begin(), r.pos.end(), a) != r.pos.end()) continue;
                r.neg.push_back(static_cast<lpdes::AtomId>(a));
            }
        }
        std::sort(r.pos.begin(), r.pos.end());
        r.pos.erase(std::unique(r.pos.begin(), r.pos.end()), r.pos.end());
        std::sort(r.neg.begin(), r.neg.end());
        r.neg.erase(std::unique(r.neg.begin(), r.neg.end()), r.neg.end());
        p.add_rule(std::move(r));
    }
    return p;
}

using NamedModels = std::set<std::set<std::string>>;

inline NamedModels named(const lpdes::Program& p, const std::vector<lpdes::AtomSet>& models) {
    NamedModels out;
    for (const auto& m : models) {
        std::set<std::string> s;
        for (auto a : m) s.insert(p.atom_name(a));
        out.insert(std::move(s));
    }
    return out;
}

inline std::set<std::string> rule_lines(const lpdes::Program& p) {
    std::set<std::string> out;
    std::istringstream is(lpdes::program_to_text(p));
    for (std::string line; std::getline(is, line);) out.insert(line);
    return out;
}

} // namespace testutil
