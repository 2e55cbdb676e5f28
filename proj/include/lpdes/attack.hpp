#pragma once

// Known-plaintext key search: random instances, end-to-end runs through
// either encoding, and repeated trials.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "lpdes/des.hpp"
#include "lpdes/encode_direct.hpp"
#include "lpdes/encode_optimized.hpp"
#include "lpdes/rng.hpp"
#include "lpdes/solver.hpp"

namespace lpdes {

enum class Encoding { Direct, Optimized };

inline std::string to_string(Encoding e) { return e == Encoding::Direct ? "direct" : "optimized"; }

inline Encoding parse_encoding(std::string_view s) {
    if (s == "direct") return Encoding::Direct;
    if (s == "optimized" || s == "opt") return Encoding::Optimized;
    throw InvalidArgument("unknown encoding '" + std::string(s) + "' (direct or optimized)");
}

struct AttackInstance {
    int rounds = 1;
    std::vector<BitBlock> plaintexts;
    std::vector<BitBlock> ciphertexts;
    BitBlock hidden_key{64};   // only for verification, never shown to an encoder
    std::uint64_t seed = 0;

    int blocks() const { return static_cast<int>(plaintexts.size()); }
};

// Draws the key first (one 64-bit word, parity made even), then one word per plaintext.
inline AttackInstance gen_instance(int rounds, int blocks, std::uint64_t seed) {
    check_direct_params(rounds, blocks);
    SplitMix64 g(seed);
    AttackInstance inst;
    inst.rounds = rounds;
    inst.seed = seed;
    inst.hidden_key = with_even_parity(BitBlock(64, g.next()));
    for (int i = 0; i < blocks; ++i) {
        inst.plaintexts.emplace_back(64, g.next());
        inst.ciphertexts.push_back(encrypt(inst.plaintexts.back(), inst.hidden_key, rounds));
    }
    return inst;
}

inline bool key_matches(const AttackInstance& inst, const BitBlock& key) {
    for (std::size_t i = 0; i < inst.plaintexts.size(); ++i)
        if (encrypt(inst.plaintexts[i], key, inst.rounds) != inst.ciphertexts[i]) return false;
    return true;
}

inline DirectInstance direct_attack_instance(const AttackInstance& inst) {
    DirectInstance d;
    d.rounds = inst.rounds;
    d.mode = DirectMode::Attack;
    d.plaintexts = inst.plaintexts;
    d.ciphertexts = inst.ciphertexts;
    return d;
}

inline OptInstance optimized_attack_instance(const AttackInstance& inst) {
    return OptInstance{inst.rounds, inst.plaintexts, inst.ciphertexts, {}};
}

struct AttackOutcome {
    BitBlock key{64};
    SearchStats stats;
    double preprocess_s = 0.0;
    std::size_t rules = 0;
    std::size_t atoms = 0;
};

// Encodes, solves for the first stable model and checks the key it gives.
// No model, or a key that fails to re-encrypt the pairs, is an error.
inline AttackOutcome run_attack(const AttackInstance& inst, Encoding enc, const SolverConfig& cfg = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    AttackOutcome out;
    auto finish = [&](const Program& pr, auto&& decode) {
        out.preprocess_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.rules = pr.size();
        out.atoms = pr.atom_count();
        const auto res = solve(pr, {}, cfg);
        out.stats = res.stats;
        if (!res.satisfiable) throw Error("attack instance has no stable model");
        out.key = decode(res.model);
    };
    if (enc == Encoding::Direct) {
        const Program pr = instantiate(direct_attack_instance(inst));
        finish(pr, [&](const AtomSet& m) { return key_from_model(pr, m); });
    } else {
        const EquivSet es = optimized_equivalences(optimized_attack_instance(inst));
        const Translation t = emit_program(es);
        finish(t.program, [&](const AtomSet& m) { return key_from_optimized_model(es, t, m); });
    }
    if (!key_matches(inst, out.key))
        throw Error("recovered key " + out.key.to_hex() + " does not reproduce the ciphertexts");
    return out;
}

struct TrialRecord {
    Encoding encoding = Encoding::Direct;
    int rounds = 0;
    int blocks = 0;
    std::uint64_t seed = 0;
    double time_s = 0.0;          // search only
    double preprocess_s = 0.0;
    std::uint64_t branches = 0;
    std::uint64_t conflicts = 0;
    bool success = false;
    std::optional<std::string> recovered_key;
    std::string error;
};

struct BenchReport {
    std::vector<TrialRecord> trials;
    double mean_time_s = 0.0;
    double mean_preprocess_s = 0.0;
    double mean_branches = 0.0;
    double mean_conflicts = 0.0;
    double success_rate = 0.0;
    unsigned jobs = 1;
    std::uint64_t master_seed = 0;
};

inline void aggregate(BenchReport& r) {
    const double n = static_cast<double>(r.trials.size());
    r.mean_time_s = r.mean_preprocess_s = r.mean_branches = r.mean_conflicts = r.success_rate = 0.0;
    if (r.trials.empty()) return;
    for (const auto& t : r.trials) {
        r.mean_time_s += t.time_s;
        r.mean_preprocess_s += t.preprocess_s;
        r.mean_branches += static_cast<double>(t.branches);
        r.mean_conflicts += static_cast<double>(t.conflicts);
        r.success_rate += t.success ? 1.0 : 0.0;
    }
    r.mean_time_s /= n;
    r.mean_preprocess_s /= n;
    r.mean_branches /= n;
    r.mean_conflicts /= n;
    r.success_rate /= n;
}

inline TrialRecord run_trial(int rounds, int blocks, std::uint64_t seed, Encoding enc, const SolverConfig& cfg) {
    TrialRecord rec;
    rec.encoding = enc;
    rec.rounds = rounds;
    rec.blocks = blocks;
    rec.seed = seed;
    try {
        const auto inst = gen_instance(rounds, blocks, seed);
        const auto out = run_attack(inst, enc, cfg);
        rec.time_s = out.stats.wall_time_s;
        rec.preprocess_s = out.preprocess_s;
        rec.branches = out.stats.branches;
        rec.conflicts = out.stats.conflicts;
        rec.success = true;
        rec.recovered_key = out.key.to_hex();
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    return rec;
}

// `trials` instances with seeds trial_seed(master, i); failures are
// recorded, not thrown. Up to `jobs` trials run at once.
inline BenchReport benchmark(int rounds, int blocks, int trials, Encoding enc, std::uint64_t master_seed,
                             unsigned jobs = 1, const SolverConfig& cfg = {}) {
    if (trials < 1) throw InvalidArgument("need at least one trial");
    check_direct_params(rounds, blocks);
    BenchReport rep;
    rep.master_seed = master_seed;
    rep.jobs = std::max(1u, jobs);
    rep.trials.resize(static_cast<std::size_t>(trials));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < rep.trials.size();)
            rep.trials[i] = run_trial(rounds, blocks, trial_seed(master_seed, i), enc, cfg);
    };
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < rep.jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    aggregate(rep);
    return rep;
}

} // namespace lpdes
