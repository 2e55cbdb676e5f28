#pragma once

#include <vector>

#include "lpdes/logic_program.hpp"

namespace lpdes {

struct TightnessResult {
    bool tight = true;
    std::vector<AtomId> cycle;   // a positive cycle when not tight, first atom repeated implicitly
};

// Checks that the positive dependency graph (head -> positive body atoms) is acyclic.
inline TightnessResult check_tight(const Program& p) {
    const std::size_t n = p.atom_count();
    std::vector<std::vector<AtomId>> succ(n);
    for (const auto& r : p.rules())
        if (r.head)
            for (AtomId b : r.pos) succ[*r.head].push_back(b);

    enum : std::uint8_t { White, Grey, Black };
    std::vector<std::uint8_t> colour(n, White);
    std::vector<std::pair<AtomId, std::size_t>> stack;
    for (AtomId root = 0; root < n; ++root) {
        if (colour[root] != White) continue;
        stack.push_back({root, 0});
        colour[root] = Grey;
        while (!stack.empty()) {
            auto& [a, next] = stack.back();
            if (next == succ[a].size()) {
                colour[a] = Black;
                stack.pop_back();
                continue;
            }
            const AtomId b = succ[a][next++];
            if (colour[b] == Grey) {
                TightnessResult res{false, {}};
                auto it = std::find_if(stack.begin(), stack.end(), [b](const auto& f) { return f.first == b; });
                for (; it != stack.end(); ++it) res.cycle.push_back(it->first);
                return res;
            }
            if (colour[b] == White) {
                colour[b] = Grey;
                stack.push_back({b, 0});
            }
        }
    }
    return {};
}

} // namespace lpdes
